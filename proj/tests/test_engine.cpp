#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bethe/engine.hpp"
#include "bethe/oracle.hpp"

using namespace bethe;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Independent statement of the node/weight convention: an M-node circle
// rule with weight xi_k/M extracts the Laurent coefficient of xi^{-1}.
// Powers are evaluated in polar form with exact integer angle reduction.
Complex node_pow(double r, int m, int k, int e) {
  int a = (k * e) % m;
  if (a < 0) a += m;
  return std::polar(std::pow(r, e), 2.0 * kPi * a / m);
}

Complex circle_rule(int m, double r, int power) {
  Complex sum{};
  for (int k = 0; k < m; ++k) {
    sum += node_pow(r, m, k, power + 1) / static_cast<double>(m);
  }
  return sum;
}

}  // namespace

TEST_CASE("circle rule reproduces Laurent coefficients") {
  for (int power = -16; power <= 10; ++power) {
    const Complex got = circle_rule(32, 1.0, power);
    const double expect = power == -1 ? 1.0 : 0.0;
    CHECK(std::abs(got - expect) < 1e-14);
  }
  // separable product form up to three circles
  const int m = 32;
  const int ks[][3] = {{-1, -1, -1}, {-1, 2, -1}, {0, -1, -5},
                       {-10, -1, 3}, {-1, -1, 4}};
  for (const auto& k : ks) {
    Complex total{};
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          total += node_pow(1.0, m, a, k[0] + 1) * node_pow(1.0, m, b, k[1] + 1) *
                   node_pow(1.0, m, c, k[2] + 1) / static_cast<double>(m * m * m);
        }
      }
    }
    const double expect = (k[0] == -1 && k[1] == -1 && k[2] == -1) ? 1.0 : 0.0;
    CHECK(std::abs(total - expect) < 1e-11);
  }
}

TEST_CASE("single-particle values match the series oracle") {
  // frozen values computed from the series / Bessel closed form
  struct Case {
    double p, t;
    int m;
    double expect;
  };
  const Case cases[] = {
      {0.7, 1.0, 2, 0.096607549245243957281},
      {0.5, 0.5, 0, 0.64503527044915006811},
      {0.5, 2.0, -3, 0.028791222639470898409},
      {1.0, 1.5, 4, 0.047066518156309417041},
      {0.3, 3.0, 1, 0.10280299272691051042},
  };
  for (const auto& c : cases) {
    CHECK(walk_probability(c.p, 1.0 - c.p, c.m, c.t) ==
          doctest::Approx(c.expect).epsilon(1e-12));
  }
  for (const auto& kind : {ModelKind::Asep, ModelKind::PushAsep,
                           ModelKind::Asap, ModelKind::Azrp}) {
    for (const auto& c : cases) {
      if (kind == ModelKind::PushAsep || kind == ModelKind::Asap) {
        if (c.p == 1.0) continue;  // keep mu valid; walk is model-free anyway
      }
      const ModelParams params = ModelParams::make(
          kind, c.p, (kind == ModelKind::PushAsep || kind == ModelKind::Asap)
                         ? 0.4
                         : 0.0);
      const Configuration y(kind, {1});
      const Configuration x(kind, {1 + c.m});
      const ProbabilityResult got =
          transition_probability(params, y, x, c.t, make_contour(params, 1));
      CHECK(std::abs(got.value - c.expect) < 1e-10);
    }
  }
}

TEST_CASE("t=0 recovers the delta initial condition") {
  for (const auto& params :
       {ModelParams::asep(0.6), ModelParams::push_asep(0.5, 0.4),
        ModelParams::asap(0.7, 0.3), ModelParams::azrp(0.5)}) {
    const bool weak = params.kind == ModelKind::Azrp;
    const Configuration y(params.kind,
                          weak ? std::vector<int>{0, 0} : std::vector<int>{0, 2});
    const ContourSpec contour = make_contour(params, 2);
    for (int a = -3; a <= 3; ++a) {
      for (int b = a + (weak ? 0 : 1); b <= 4; ++b) {
        const Configuration x(params.kind, {a, b});
        const double got =
            transition_probability(params, y, x, 0.0, contour).value;
        const double expect = (x.x == y.x) ? 1.0 : 0.0;
        CHECK(std::abs(got - expect) < 1e-9);
      }
    }
  }
}

TEST_CASE("identity permutation term integrates to the delta") {
  const ModelParams params = ModelParams::push_asep(0.5, 0.5);
  const auto terms = permutations_with_inversions(3);
  const Configuration y(ModelKind::PushAsep, {0, 1, 3});
  const ContourSpec contour = make_contour(params, 3);
  const Complex diag = i_sigma_at_t0(params, terms[0], y, y, contour);
  CHECK(std::abs(diag - Complex{1.0, 0.0}) < 1e-10);
  const Configuration x(ModelKind::PushAsep, {0, 2, 3});
  CHECK(std::abs(i_sigma_at_t0(params, terms[0], y, x, contour)) < 1e-10);
}

TEST_CASE("a_sigma basics") {
  const ModelParams params = ModelParams::asep(0.7);
  const auto terms = permutations_with_inversions(2);
  const std::vector<Complex> xi = {{0.21, 0.05}, {-0.12, 0.17}};
  CHECK(a_sigma(params, terms[0], xi) == Complex{1.0, 0.0});
  CHECK(a_sigma(params, terms[1], xi) ==
        s_matrix(ModelKind::Asep, xi[0], xi[1], params));
}

TEST_CASE("inversion phase identity") {
  // prod over inversions of xi_beta/xi_alpha = prod_i xi_{sigma(i)}^{sigma(i)-i}
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> mag(0.3, 1.5), ang(0.0, 6.28);
  const auto terms = permutations_with_inversions(4);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Complex> xi(4);
    for (auto& z : xi) z = std::polar(mag(gen), ang(gen));
    for (const auto& term : terms) {
      Complex lhs{1.0, 0.0};
      for (auto [beta, alpha] : term.inversions) lhs *= xi[beta - 1] / xi[alpha - 1];
      Complex rhs{1.0, 0.0};
      for (int i = 0; i < 4; ++i) {
        rhs *= std::pow(xi[term.sigma[i] - 1], term.sigma[i] - (i + 1));
      }
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
  }
}

TEST_CASE("pushasep prefactors reduce to the phase identity") {
  const ModelParams params = ModelParams::push_asep(0.6, 0.4);
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> mag(0.3, 1.2), ang(0.0, 6.28);
  const auto terms = permutations_with_inversions(3);
  std::vector<Complex> xi(3);
  for (auto& z : xi) z = std::polar(mag(gen), ang(gen));
  for (const auto& term : terms) {
    Complex pref{1.0, 0.0};
    for (auto [beta, alpha] : term.inversions) {
      pref *= s_matrix_parts(ModelKind::PushAsep, xi[alpha - 1], xi[beta - 1],
                             params)
                  .prefactor;
    }
    Complex expect{1.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      expect *= std::pow(xi[term.sigma[i] - 1], term.sigma[i] - (i + 1));
    }
    CHECK(std::abs(pref - expect) <= 1e-12 * std::abs(expect));
  }
}

TEST_CASE("bijection maps") {
  const Configuration z(ModelKind::Azrp, {0, 0, 0});
  CHECK(azrp_to_asep(z).x == std::vector<int>{1, 2, 3});
  const Configuration z2(ModelKind::Azrp, {-2, 0, 0, 5});
  CHECK(azrp_to_asep(z2).x == std::vector<int>{-1, 2, 3, 9});
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> base(-5, 5), gap(0, 3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> xs(4);
    xs[0] = base(gen);
    for (int i = 1; i < 4; ++i) xs[i] = xs[i - 1] + gap(gen);
    const Configuration cfg(ModelKind::Azrp, xs);
    CHECK(asep_to_azrp(azrp_to_asep(cfg)).x == xs);
  }
  CHECK_THROWS_AS(azrp_to_asep(Configuration(ModelKind::Azrp, {1, 0})),
                  std::invalid_argument);
}

TEST_CASE("doubling a converged grid stays inside the error estimate") {
  const ModelParams params = ModelParams::asep(0.6);
  const Configuration y(ModelKind::Asep, {0, 2});
  const Configuration x(ModelKind::Asep, {1, 3});
  ContourSpec contour = make_contour(params, 2);
  const ProbabilityResult res =
      transition_probability(params, y, x, 0.9, contour);
  CHECK(res.converged);
  ContourSpec doubled = contour;
  doubled.adaptive = false;
  doubled.nodes = 2 * res.nodes_used;
  const ProbabilityResult redo =
      transition_probability(params, y, x, 0.9, doubled);
  CHECK(std::abs(redo.value - res.value) <=
        res.abs_error_estimate + 1e-15);
  CHECK(res.trusted());
  CHECK(res.value >= -res.abs_error_estimate);
  CHECK(res.value <= 1.0 + res.abs_error_estimate);
}

TEST_CASE("threaded evaluation is bitwise deterministic") {
  const ModelParams params = ModelParams::push_asep(0.5, 0.5);
  const Configuration y(ModelKind::PushAsep, {0, 1, 2});
  const Configuration x(ModelKind::PushAsep, {0, 2, 3});
  const ContourSpec contour = ContourSpec::fixed(
      choose_radius(ScatteringSpec::for_model(params), 3, RadiusMode::Small),
      32);
  EvalOptions one;
  one.threads = 1;
  EvalOptions four;
  four.threads = 4;
  const double a = transition_probability(params, y, x, 0.8, contour, one).value;
  const double b = transition_probability(params, y, x, 0.8, contour, four).value;
  CHECK(a == b);
}

TEST_CASE("input validation") {
  const ModelParams params = ModelParams::asep(0.5);
  const ContourSpec contour = make_contour(params, 2);
  CHECK_THROWS_AS(
      transition_probability(params, Configuration(ModelKind::Asep, {1, 0}),
                             Configuration(ModelKind::Asep, {0, 1}), 1.0,
                             contour),
      std::invalid_argument);
  CHECK_THROWS_AS(
      transition_probability(params, Configuration(ModelKind::Asep, {0, 1}),
                             Configuration(ModelKind::Asep, {0, 1}), -1.0,
                             contour),
      std::invalid_argument);
  ContourSpec bad = contour;
  bad.nodes = 48;  // not a power of two
  CHECK_THROWS_AS(
      transition_probability(params, Configuration(ModelKind::Asep, {0, 1}),
                             Configuration(ModelKind::Asep, {0, 1}), 1.0, bad),
      std::invalid_argument);
}
