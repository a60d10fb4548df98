#include <doctest.h>

#include <cmath>

#include "bethe/oracle.hpp"

using namespace bethe;

TEST_CASE("generator rows sum to zero and states stay physical") {
  for (const auto& params :
       {ModelParams::asep(0.7), ModelParams::push_asep(0.6, 0.4),
        ModelParams::asap(0.5, 0.5), ModelParams::azrp(0.6)}) {
    const SparseGenerator gen =
        build_generator(params, TruncationWindow{-4, 5}, 2);
    for (size_t i = 0; i < gen.states.size(); ++i) {
      CHECK(gen.states[i].physical());
      double total = gen.diag[i] + gen.escape[i];
      for (const auto& [j, r] : gen.rows[i]) {
        CHECK(r >= 0.0);
        CHECK(gen.states[j].physical());
        total += r;
      }
      CHECK(std::abs(total) < 1e-12);
    }
  }
}

TEST_CASE("asep single particle is a birth-death chain") {
  const ModelParams params = ModelParams::asep(0.7);
  const SparseGenerator gen =
      build_generator(params, TruncationWindow{-3, 3}, 1);
  const int i = gen.find(Configuration(ModelKind::Asep, {0}));
  REQUIRE(i >= 0);
  REQUIRE(gen.rows[i].size() == 2);
  for (const auto& [j, r] : gen.rows[i]) {
    const int target = gen.states[j].x[0];
    CHECK(r == doctest::Approx(target == 1 ? 0.7 : 0.3));
  }
}

TEST_CASE("pushasep block rates at a two-site block") {
  const ModelParams params = ModelParams::push_asep(0.5, 0.4);  // r2 = mu
  const SparseGenerator gen =
      build_generator(params, TruncationWindow{-4, 5}, 2);
  const Configuration y(ModelKind::PushAsep, {0, 1});
  const int i = gen.find(y);
  REQUIRE(i >= 0);
  auto rate_to = [&](std::vector<int> target) {
    const int j = gen.find(Configuration(ModelKind::PushAsep, std::move(target)));
    REQUIRE(j >= 0);
    for (const auto& [col, r] : gen.rows[i]) {
      if (col == j) return r;
    }
    return 0.0;
  };
  CHECK(rate_to({1, 2}) == doctest::Approx(params.p * params.mu));   // push both
  CHECK(rate_to({0, 2}) == doctest::Approx(params.p));               // top alone
  CHECK(rate_to({-1, 0}) == doctest::Approx(params.q * params.lambda));
  CHECK(rate_to({-1, 1}) == doctest::Approx(params.q));
  // total outflow from an isolated block: p sum r_k + q sum l_k
  double expect = 0;
  for (int k = 1; k <= 2; ++k) {
    expect += params.p * push_rates(k, params).r_n +
              params.q * push_rates(k, params).l_n;
  }
  CHECK(-gen.diag[i] == doctest::Approx(expect));
}

TEST_CASE("azrp departure split at a doubly occupied site") {
  const ModelParams params = ModelParams::azrp(0.6);
  const SparseGenerator gen =
      build_generator(params, TruncationWindow{-3, 3}, 2);
  const int i = gen.find(Configuration(ModelKind::Azrp, {0, 0}));
  REQUIRE(i >= 0);
  REQUIRE(gen.rows[i].size() == 2);
  CHECK(-gen.diag[i] == doctest::Approx(1.0));  // g(2) = 1
  for (const auto& [j, r] : gen.rows[i]) {
    const auto& xs = gen.states[j].x;
    if (xs == std::vector<int>{0, 1}) CHECK(r == doctest::Approx(0.6));
    if (xs == std::vector<int>{-1, 0}) CHECK(r == doctest::Approx(0.4));
  }
}

TEST_CASE("avalanche cascade outcomes and weights") {
  const ModelParams params = ModelParams::asap(0.5, 0.4);
  const auto outcomes = resolve_avalanche({0, 0}, params, 1e-14);
  double mass = 0;
  for (const auto& out : outcomes) {
    CHECK(out.config.physical());
    REQUIRE(out.config.x.size() == 2);
    const int j = out.config.x[0];
    CHECK(out.config.x[1] == j + 1);
    // final (j, j+1) comes from j mu-branches then one lambda-branch
    CHECK(out.weight ==
          doctest::Approx(params.lambda * std::pow(params.mu, j)).epsilon(1e-12));
    mass += out.weight;
  }
  CHECK(mass >= 1.0 - 1e-14);
  // small mu: the one-step branch dominates
  const auto quick = resolve_avalanche({5, 5}, ModelParams::asap(0.5, 0.05), 1e-14);
  CHECK(quick.front().config.x == std::vector<int>{5, 6});
  CHECK(quick.front().weight == doctest::Approx(0.95));
  CHECK_THROWS_AS(resolve_avalanche({0, 1}, params, 1e-14),
                  std::invalid_argument);
}

TEST_CASE("uniformization at t=0 is the delta") {
  const ModelParams params = ModelParams::asep(0.5);
  const SparseGenerator gen =
      build_generator(params, TruncationWindow{-3, 4}, 2);
  const Configuration y(ModelKind::Asep, {0, 1});
  const Distribution dist = uniformization_distribution(gen, y, 0.0, 1e-12);
  CHECK(dist.at(y) == doctest::Approx(1.0));
  CHECK(dist.captured_mass == doctest::Approx(1.0));
}

TEST_CASE("uniformization matches the walk series for one particle") {
  const ModelParams params = ModelParams::asep(0.7);
  const SparseGenerator gen =
      build_generator(params, TruncationWindow{-40, 40}, 1);
  const Configuration y(ModelKind::Asep, {0});
  const double t = 1.3;
  const Distribution dist = uniformization_distribution(gen, y, t, 1e-12);
  for (int x = -6; x <= 8; ++x) {
    CHECK(std::abs(dist.at(Configuration(ModelKind::Asep, {x})) -
                   walk_probability(0.7, 0.3, x, t)) < 1e-10);
  }
  CHECK(std::abs(dist.captured_mass + dist.escaped_mass - 1.0) < 1e-10);
}

TEST_CASE("uniformization is stable under window doubling and tighter tol") {
  const ModelParams params = ModelParams::asap(0.6, 0.5);
  const Configuration y(ModelKind::Asap, {0, 2});
  const double t = 0.8;
  const SparseGenerator g1 =
      build_generator(params, TruncationWindow{-12, 14}, 2);
  const SparseGenerator g2 =
      build_generator(params, TruncationWindow{-24, 28}, 2);
  const Distribution d1 = uniformization_distribution(g1, y, t, 1e-10);
  const Distribution d2 = uniformization_distribution(g2, y, t, 1e-13);
  double worst = 0;
  for (const auto& [cfg, v] : d1.entries) {
    worst = std::max(worst, std::abs(v - d2.at(cfg)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("window sizing certificates") {
  const ModelParams params = ModelParams::asep(0.5);
  const Configuration y(ModelKind::Asep, {0, 1});
  const TruncationWindow w0 = window_for(params, y, 0.0, 1e-10);
  CHECK(w0.lo <= -1);
  CHECK(w0.hi >= 2);
  CHECK(w0.escape_bound <= 1e-10);
  const TruncationWindow w = window_for(params, y, 1.0, 1e-10);
  const long long k = y.x.front() - w.lo;
  CHECK(poisson_upper_tail(2.0 * 1.0, k + 1) <= 1e-10);
  // escape mass reported by uniformization respects the bound
  const SparseGenerator gen = build_generator(params, w, 2);
  const Distribution dist = uniformization_distribution(gen, y, 1.0, 1e-13);
  CHECK(dist.escaped_mass <= w.escape_bound);
}

TEST_CASE("gillespie basics and reproducibility") {
  const ModelParams params = ModelParams::asap(0.7, 0.4);
  const Configuration y(ModelKind::Asap, {0, 1, 3});
  CHECK(gillespie_sample(params, y, 0.0, 42) == y);
  const Configuration a = gillespie_sample(params, y, 1.5, 42);
  const Configuration b = gillespie_sample(params, y, 1.5, 42);
  CHECK(a == b);
  CHECK(a.physical());
  const auto h1 = gillespie_histogram(params, y, 1.0, 4000, 7, 1);
  const auto h2 = gillespie_histogram(params, y, 1.0, 4000, 7, 2);
  CHECK(h1 == h2);  // worker count must not change the histogram
}

TEST_CASE("gillespie frequencies track uniformization") {
  const ModelParams params = ModelParams::azrp(0.6);
  const Configuration y(ModelKind::Azrp, {0, 0});
  const double t = 1.0;
  const long samples = 20000;
  const OracleSolution oracle = uniformization_adaptive(params, y, t, 1e-10);
  const auto hist = gillespie_histogram(params, y, t, samples, 2024);
  for (const auto& [cfg, prob] : oracle.dist.entries) {
    const double expect = prob * samples;
    const double sd = std::sqrt(samples * prob * (1.0 - prob));
    long got = 0;
    if (auto it = hist.find(cfg); it != hist.end()) got = it->second;
    CHECK(std::abs(got - expect) <= 5.0 * sd + 3.0);
  }
}
