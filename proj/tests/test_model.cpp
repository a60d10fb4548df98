#include <doctest.h>

#include <cmath>
#include <random>

#include "bethe/model.hpp"

using namespace bethe;

TEST_CASE("model names round-trip") {
  for (auto kind : {ModelKind::Asep, ModelKind::PushAsep, ModelKind::Asap,
                    ModelKind::Azrp}) {
    CHECK(parse_model_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_model_kind("tasep"), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ModelParams::asep(0.0));   // degenerate limits are allowed
  CHECK_NOTHROW(ModelParams::asep(1.0));
  CHECK_THROWS_AS(ModelParams::asep(1.2), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::push_asep(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::asap(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::asap(0.5, 0.0), std::invalid_argument);
  CHECK_NOTHROW(ModelParams::push_asep(1.0, 0.3));
}

TEST_CASE("parameter serialization round-trip") {
  const ModelParams m = ModelParams::push_asep(0.6, 0.3);
  const ModelParams back = ModelParams::from_kv(m.to_kv());
  CHECK(back.kind == m.kind);
  CHECK(back.p == doctest::Approx(m.p).epsilon(1e-15));
  CHECK(back.mu == doctest::Approx(m.mu).epsilon(1e-15));
  const auto kv = ModelParams::azrp(0.5).to_kv();
  CHECK(kv.at("model") == "azrp");
  CHECK(kv.find("mu") == kv.end());
}

TEST_CASE("energy closed form") {
  const ModelParams m = ModelParams::asep(0.5);
  CHECK(std::abs(energy({1.0, 0.0}, m)) < 1e-15);
  CHECK(energy({-1.0, 0.0}, m).real() == doctest::Approx(-2.0));
  const ModelParams tasep = ModelParams::asep(1.0);
  CHECK(energy({0.5, 0.0}, tasep).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(energy({0.0, 0.0}, m), std::invalid_argument);
}

TEST_CASE("scattering at coincident arguments is -1") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mag(0.2, 1.3), ang(0.0, 6.28);
  const std::vector<ModelParams> models = {
      ModelParams::asep(0.7), ModelParams::push_asep(0.6, 0.4),
      ModelParams::asap(0.5, 0.3), ModelParams::azrp(0.55)};
  for (const auto& m : models) {
    for (int i = 0; i < 50; ++i) {
      const Complex xi = std::polar(mag(gen), ang(gen));
      const Complex s = s_matrix(m.kind, xi, xi, m);
      CHECK(std::abs(s - Complex(-1.0, 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("two-body scattering unitarity") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> mag(0.2, 1.3), ang(0.0, 6.28);
  const std::vector<ModelParams> models = {
      ModelParams::asep(0.7), ModelParams::push_asep(0.6, 0.4),
      ModelParams::asap(0.5, 0.3), ModelParams::azrp(0.55)};
  for (const auto& m : models) {
    int checked = 0;
    while (checked < 100) {
      const Complex a = std::polar(mag(gen), ang(gen));
      const Complex b = std::polar(mag(gen), ang(gen));
      try {
        const Complex fwd = s_matrix(m.kind, a, b, m);
        const Complex bwd = s_matrix(m.kind, b, a, m);
        CHECK(std::abs(fwd * bwd - Complex(1.0, 0.0)) < 1e-12);
        ++checked;
      } catch (const PoleError&) {
        // resample away from the pole set
      }
    }
  }
}

TEST_CASE("asep spot value") {
  const ModelParams m = ModelParams::asep(1.0);
  const Complex s = s_matrix(ModelKind::Asep, {0.2, 0.0}, {0.3, 0.0}, m);
  CHECK(s.real() == doctest::Approx(-0.875).epsilon(1e-14));
  CHECK(s.imag() == doctest::Approx(0.0));
}

TEST_CASE("pushasep prefactor decomposition") {
  const ModelParams m = ModelParams::push_asep(0.5, 0.4);
  const Complex a{0.31, 0.12}, b{-0.25, 0.4};
  const SMatrixValue parts = s_matrix_parts(ModelKind::PushAsep, a, b, m);
  CHECK(std::abs(parts.prefactor - b / a) < 1e-15);
  CHECK(std::abs(parts.value - parts.prefactor * parts.core) < 1e-15);
  const SMatrixValue z = s_matrix_parts(ModelKind::Azrp, a, b,
                                        ModelParams::azrp(0.5));
  CHECK(std::abs(z.prefactor - a / b) < 1e-15);
}

TEST_CASE("scattering pole raises") {
  // ASEP denominator p + q a b - a vanishes at a = p, b = 0-ish direction:
  // pick a = p/(1 - q*b) exactly.
  const ModelParams m = ModelParams::asep(0.6);
  const Complex b{0.3, 0.0};
  const Complex a = m.p / (1.0 - m.q * b);
  CHECK_THROWS_AS(s_matrix(ModelKind::Asep, a, b, m), PoleError);
}

TEST_CASE("push rates closed forms") {
  const ModelParams m = ModelParams::push_asep(0.5, 0.3);  // mu=0.3, lambda=0.7
  CHECK(push_rate(1, Direction::Right, m) == doctest::Approx(1.0));
  CHECK(push_rate(1, Direction::Left, m) == doctest::Approx(1.0));
  CHECK(push_rate(2, Direction::Right, m) == doctest::Approx(m.mu));
  CHECK(push_rate(2, Direction::Left, m) == doctest::Approx(m.lambda));
  // r_n * sum (lambda/mu)^k = 1 and l_n * sum (mu/lambda)^k = 1 for n <= 20
  for (int n = 1; n <= 20; ++n) {
    const PushRates r = push_rates(n, m);
    double sr = 0, sl = 0;
    for (int k = 0; k < n; ++k) {
      sr += std::pow(m.lambda / m.mu, k);
      sl += std::pow(m.mu / m.lambda, k);
    }
    CHECK(std::abs(r.r_n * sr - 1.0) < 1e-12);
    CHECK(std::abs(r.l_n * sl - 1.0) < 1e-12);
  }
  // strictly decreasing in n
  for (int n = 2; n <= 20; ++n) {
    CHECK(push_rates(n, m).r_n < push_rates(n - 1, m).r_n);
    CHECK(push_rates(n, m).l_n < push_rates(n - 1, m).l_n);
  }
  // symmetric point: r_n = l_n = 1/n
  const ModelParams sym = ModelParams::push_asep(0.5, 0.5);
  CHECK(push_rates(5, sym).r_n == doctest::Approx(0.2));
}

TEST_CASE("avalanche branch probabilities") {
  const ModelParams m = ModelParams::asap(0.5, 0.5);
  CHECK(avalanche_probs(2, m).mu_n == doctest::Approx(m.mu));
  CHECK(avalanche_probs(3, m).mu_n == doctest::Approx(m.mu * (1 - m.mu)));
  CHECK(avalanche_probs(4, m).mu_n == doctest::Approx(0.375));
  CHECK_THROWS_AS(avalanche_probs(1, m), std::invalid_argument);
  // 0 < mu_n < 1 and |mu_n - mu/(1+mu)| <= mu^n/(1+mu)
  for (double mu : {0.2, 0.5, 0.8}) {
    const ModelParams pm = ModelParams::asap(0.6, mu);
    for (int n = 2; n <= 30; ++n) {
      const double mun = avalanche_probs(n, pm).mu_n;
      CHECK(mun > 0.0);
      CHECK(mun < 1.0);
      // the identity is an exact equality; allow subtraction round-off
      CHECK(std::abs(mun - mu / (1 + mu)) <=
            std::pow(mu, n) / (1 + mu) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("physical regions") {
  CHECK(is_physical(ModelKind::Azrp, {0, 0, 0}));
  CHECK_FALSE(is_physical(ModelKind::Asap, {0, 0}));
  CHECK(is_physical(ModelKind::Asep, {-3, 5}));
  CHECK_FALSE(is_physical(ModelKind::PushAsep, {2, 1}));
  CHECK(Configuration(ModelKind::Azrp, {-1, -1, 4}).physical());
}

TEST_CASE("asap scattering equals substituted asep scattering") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mag(0.3, 1.2), ang(0.0, 6.28);
  const double mu = 0.4, lambda = 0.6;
  const ModelParams asap = ModelParams::asap(0.5, mu);
  const double ps = -mu / lambda, qs = 1.0 / lambda;
  int checked = 0;
  while (checked < 100) {
    const Complex a = std::polar(mag(gen), ang(gen));
    const Complex b = std::polar(mag(gen), ang(gen));
    const Complex w = ps + qs * a * b;
    if (std::abs(w - a) < 1e-2) continue;
    const Complex substituted = -(w - b) / (w - a);
    const Complex direct = s_matrix(ModelKind::Asap, a, b, asap);
    CHECK(std::abs(direct - substituted) < 1e-12);
    ++checked;
  }
}
