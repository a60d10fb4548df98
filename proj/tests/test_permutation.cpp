#include <doctest.h>

#include <set>
#include <stdexcept>

#include "bethe/permutation.hpp"

using namespace bethe;

TEST_CASE("two-particle permutations") {
  const auto terms = permutations_with_inversions(2);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].sigma == std::vector<int>{1, 2});
  CHECK(terms[0].inversions.empty());
  CHECK(terms[1].sigma == std::vector<int>{2, 1});
  REQUIRE(terms[1].inversions.size() == 1);
  CHECK(terms[1].inversions[0] == std::pair<int, int>{2, 1});
}

TEST_CASE("reversal has the full inversion set") {
  const auto terms = permutations_with_inversions(3);
  REQUIRE(terms.size() == 6);
  const auto& rev = terms.back();
  CHECK(rev.sigma == std::vector<int>{3, 2, 1});
  const std::set<std::pair<int, int>> got(rev.inversions.begin(),
                                          rev.inversions.end());
  CHECK(got == std::set<std::pair<int, int>>{{3, 2}, {3, 1}, {2, 1}});
}

TEST_CASE("counts and inversion invariants") {
  for (int n = 1; n <= 6; ++n) {
    const auto terms = permutations_with_inversions(n);
    size_t expect = 1;
    for (int k = 2; k <= n; ++k) expect *= k;
    CHECK(terms.size() == expect);
    for (const auto& term : terms) {
      // every pair (beta, alpha) really is an inversion of sigma
      for (auto [beta, alpha] : term.inversions) {
        CHECK(beta > alpha);
        int pos_beta = -1, pos_alpha = -1;
        for (int i = 0; i < n; ++i) {
          if (term.sigma[i] == beta) pos_beta = i;
          if (term.sigma[i] == alpha) pos_alpha = i;
        }
        CHECK(pos_beta < pos_alpha);
      }
    }
  }
  CHECK_THROWS_AS(permutations_with_inversions(0), std::invalid_argument);
  CHECK_THROWS_AS(permutations_with_inversions(11), std::invalid_argument);
}
