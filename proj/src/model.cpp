#include "bethe/model.hpp"

#include <cmath>

namespace bethe {

namespace {

constexpr double kSumTol = 1e-12;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Asep: return "asep";
    case ModelKind::PushAsep: return "push";
    case ModelKind::Asap: return "asap";
    case ModelKind::Azrp: return "azrp";
  }
  throw std::invalid_argument("unknown ModelKind");
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "asep") return ModelKind::Asep;
  if (name == "push") return ModelKind::PushAsep;
  if (name == "asap") return ModelKind::Asap;
  if (name == "azrp") return ModelKind::Azrp;
  throw std::invalid_argument("unknown model name: " + name);
}

ModelParams ModelParams::asep(double p) {
  ModelParams m{ModelKind::Asep, p, 1.0 - p, 0.0, 0.0};
  m.validate();
  return m;
}

ModelParams ModelParams::push_asep(double p, double mu) {
  ModelParams m{ModelKind::PushAsep, p, 1.0 - p, 1.0 - mu, mu};
  m.validate();
  return m;
}

ModelParams ModelParams::asap(double p, double mu) {
  ModelParams m{ModelKind::Asap, p, 1.0 - p, 1.0 - mu, mu};
  m.validate();
  return m;
}

ModelParams ModelParams::azrp(double p) {
  ModelParams m{ModelKind::Azrp, p, 1.0 - p, 0.0, 0.0};
  m.validate();
  return m;
}

ModelParams ModelParams::make(ModelKind kind, double p, double mu_or_nan) {
  switch (kind) {
    case ModelKind::Asep: return asep(p);
    case ModelKind::PushAsep: return push_asep(p, mu_or_nan);
    case ModelKind::Asap: return asap(p, mu_or_nan);
    case ModelKind::Azrp: return azrp(p);
  }
  throw std::invalid_argument("unknown ModelKind");
}

void ModelParams::validate() const {
  require(p >= 0.0 && q >= 0.0, "jump rates p, q must be nonnegative");
  require(std::abs(p + q - 1.0) <= kSumTol, "p + q must equal 1");
  if (kind == ModelKind::PushAsep || kind == ModelKind::Asap) {
    require(std::abs(lambda + mu - 1.0) <= kSumTol, "lambda + mu must equal 1");
  }
  if (kind == ModelKind::PushAsep) {
    require(lambda != 0.0 && mu != 0.0,
            "PushASEP requires nonzero lambda and mu");
  }
  if (kind == ModelKind::Asap) {
    require(mu > 0.0 && mu < 1.0, "ASAP requires 0 < mu < 1");
  }
}

std::map<std::string, std::string> ModelParams::to_kv() const {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::map<std::string, std::string> kv;
  kv["model"] = to_string(kind);
  kv["p"] = fmt(p);
  kv["q"] = fmt(q);
  if (kind == ModelKind::PushAsep || kind == ModelKind::Asap) {
    kv["lambda"] = fmt(lambda);
    kv["mu"] = fmt(mu);
  }
  return kv;
}

ModelParams ModelParams::from_kv(const std::map<std::string, std::string>& kv) {
  auto get = [&kv](const std::string& key, double fallback,
                   bool* found = nullptr) {
    auto it = kv.find(key);
    if (found) *found = it != kv.end();
    return it == kv.end() ? fallback : std::stod(it->second);
  };
  auto it = kv.find("model");
  require(it != kv.end(), "missing key: model");
  ModelParams m;
  m.kind = parse_model_kind(it->second);
  bool have_p = false, have_q = false;
  m.p = get("p", 0.5, &have_p);
  m.q = get("q", 1.0 - m.p, &have_q);
  if (have_q && !have_p) m.p = 1.0 - m.q;
  bool have_mu = false, have_lambda = false;
  m.mu = get("mu", 0.0, &have_mu);
  m.lambda = get("lambda", 1.0 - m.mu, &have_lambda);
  if (have_lambda && !have_mu) m.mu = 1.0 - m.lambda;
  if (m.kind == ModelKind::Asep || m.kind == ModelKind::Azrp) {
    m.lambda = 0.0;
    m.mu = 0.0;
  }
  m.validate();
  return m;
}

bool is_physical(ModelKind model, const std::vector<int>& x) {
  const bool weak = model == ModelKind::Azrp;
  for (size_t i = 1; i < x.size(); ++i) {
    if (weak ? x[i] < x[i - 1] : x[i] <= x[i - 1]) return false;
  }
  return true;
}

bool Configuration::physical() const { return is_physical(model, x); }

Complex energy(Complex xi, const ModelParams& params) {
  if (xi == Complex(0.0, 0.0)) {
    throw std::invalid_argument("energy: xi must be nonzero");
  }
  return params.p / xi + params.q * xi - 1.0;
}

namespace {

Complex checked_ratio(Complex num, Complex denom) {
  if (std::abs(denom) < 1e-13 * (1.0 + std::abs(num))) {
    throw PoleError("S-matrix denominator vanishes", denom);
  }
  return num / denom;
}

}  // namespace

SMatrixValue s_matrix_parts(ModelKind model, Complex xi_a, Complex xi_b,
                            const ModelParams& params) {
  const Complex a = xi_a, b = xi_b;
  SMatrixValue out;
  switch (model) {
    case ModelKind::Asep: {
      const Complex w = params.p + params.q * a * b;
      out.core = -checked_ratio(w - b, w - a);
      out.prefactor = 1.0;
      break;
    }
    case ModelKind::PushAsep: {
      const Complex w = params.mu + params.lambda * a * b;
      out.core = -checked_ratio(w - a, w - b);
      out.prefactor = checked_ratio(b, a);
      break;
    }
    case ModelKind::Asap: {
      out.core = -checked_ratio(params.mu + params.lambda * b - b * a,
                                params.mu + params.lambda * a - b * a);
      out.prefactor = 1.0;
      break;
    }
    case ModelKind::Azrp: {
      const Complex w = params.p + params.q * a * b;
      out.core = -checked_ratio(w - b, w - a);
      out.prefactor = checked_ratio(a, b);
      break;
    }
  }
  out.value = out.prefactor * out.core;
  return out;
}

Complex s_matrix(ModelKind model, Complex xi_a, Complex xi_b,
                 const ModelParams& params) {
  return s_matrix_parts(model, xi_a, xi_b, params).value;
}

PushRates push_rates(int n, const ModelParams& params) {
  if (n < 1) throw std::invalid_argument("push_rates: n must be >= 1");
  // 1 / sum_{k=0}^{n-1} x^k = (1-x)/(1-x^n) for x != 1.
  auto inv_geometric_sum = [n](double x) {
    if (x == 1.0) return 1.0 / n;
    return (1.0 - x) / (1.0 - std::pow(x, n));
  };
  PushRates r;
  r.n = n;
  r.r_n = inv_geometric_sum(params.lambda / params.mu);
  r.l_n = inv_geometric_sum(params.mu / params.lambda);
  return r;
}

double push_rate(int n, Direction direction, const ModelParams& params) {
  const PushRates r = push_rates(n, params);
  return direction == Direction::Right ? r.r_n : r.l_n;
}

AvalancheRates avalanche_probs(int n, const ModelParams& params) {
  if (n < 2) throw std::invalid_argument("avalanche_probs: n must be >= 2");
  const double mu = params.mu;
  AvalancheRates a;
  a.n = n;
  a.mu_n = mu * (1.0 - std::pow(-mu, n - 1)) / (1.0 + mu);
  a.lambda_n = 1.0 - a.mu_n;
  return a;
}

}  // namespace bethe
