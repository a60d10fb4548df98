#ifndef BETHE_PERMUTATION_HPP
#define BETHE_PERMUTATION_HPP

#include <utility>
#include <vector>

namespace bethe {

// One permutation sigma of {1..N} together with its inversion set: the
// ordered pairs (beta, alpha) with beta > alpha and beta preceding alpha
// in sigma.  Entries and pair components are 1-based values.
struct PermutationTerm {
  std::vector<int> sigma;
  std::vector<std::pair<int, int>> inversions;

  bool is_identity() const { return inversions.empty(); }
};

// All N! permutations in lexicographic order, each with its inversion set.
// N is capped at 10.
std::vector<PermutationTerm> permutations_with_inversions(int n);

PermutationTerm term_for(const std::vector<int>& sigma);

}  // namespace bethe

#endif  // BETHE_PERMUTATION_HPP
