#include "bethe/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bethe {

PermutationTerm term_for(const std::vector<int>& sigma) {
  PermutationTerm term;
  term.sigma = sigma;
  const int n = static_cast<int>(sigma.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (sigma[i] > sigma[j]) term.inversions.emplace_back(sigma[i], sigma[j]);
    }
  }
  return term;
}

std::vector<PermutationTerm> permutations_with_inversions(int n) {
  if (n < 1 || n > 10) {
    throw std::invalid_argument("permutations_with_inversions: need 1 <= N <= 10");
  }
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 1);
  std::vector<PermutationTerm> terms;
  do {
    terms.push_back(term_for(sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return terms;
}

}  // namespace bethe
