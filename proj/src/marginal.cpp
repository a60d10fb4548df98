#include <algorithm>
#include <cmath>

#include "bethe/engine.hpp"
#include "formulas.hpp"

namespace bethe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double ipow(double base, long long e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  double r = 1.0, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

struct SubsetTables {
  int k = 0, m = 0;
  double radius = 0;
  std::vector<Complex> node;
  std::vector<Complex> pair_tab;           // (xi_b - xi_a)/(p + q xi_a xi_b - xi_a)
  std::vector<std::vector<Complex>> fac;   // per subset slot: full per-node factor
};

// One |S|-fold integral of I_Z(xhat, Y_S, xi) over the large circle.
struct SubsetValue {
  Complex value{};
  double max_term = 0;
  double abs_terms = 0;
};

SubsetValue eval_subset(const std::vector<long long>& shifted_y, int xhat,
                        double p, double q, double t, int m, double radius) {
  const int k = static_cast<int>(shifted_y.size());
  SubsetTables tb;
  tb.k = k;
  tb.m = m;
  tb.radius = radius;
  tb.node.resize(m);
  for (int j = 0; j < m; ++j) {
    tb.node[j] = std::polar(radius, 2.0 * kPi * j / m);
  }
  if (k > 1) {
    tb.pair_tab.resize(static_cast<size_t>(m) * m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const Complex denom = p + q * tb.node[a] * tb.node[b] - tb.node[a];
        tb.pair_tab[static_cast<size_t>(a) * m + b] =
            (tb.node[b] - tb.node[a]) / denom;
      }
    }
  }
  tb.fac.resize(k);
  for (int s = 0; s < k; ++s) {
    auto& f = tb.fac[s];
    f.resize(m);
    const long long e = xhat - shifted_y[s] - 1;
    for (int j = 0; j < m; ++j) {
      long long a = (static_cast<long long>(j) * e) % m;
      if (a < 0) a += m;
      const Complex pw = std::polar(std::pow(radius, static_cast<double>(e)),
                                    2.0 * kPi * static_cast<double>(a) / m);
      const Complex eps = detail::energy_value(p, q, tb.node[j]);
      f[j] = pw * std::exp(eps * t) / (1.0 - tb.node[j]) * tb.node[j] /
             static_cast<double>(m);
    }
  }

  SubsetValue out;
  Complex sum{};
  std::vector<int> kidx(k, 0);
  // prefix carries the partial product, prod the running product of nodes
  // feeding the (1 - xi_1...xi_k) factor applied at the leaf.
  auto rec = [&](auto&& self, int v, Complex prefix, Complex prod) -> void {
    const auto& f = tb.fac[v];
    if (v == k - 1) {
      for (int j = 0; j < m; ++j) {
        Complex term = prefix * f[j];
        for (int a = 0; a < v; ++a) {
          term *= tb.pair_tab[static_cast<size_t>(kidx[a]) * m + j];
        }
        term *= 1.0 - prod * tb.node[j];
        sum += term;
        const double mag = std::abs(term);
        if (mag > out.max_term) out.max_term = mag;
        out.abs_terms += mag;
      }
      return;
    }
    for (int j = 0; j < m; ++j) {
      Complex pref = prefix * f[j];
      for (int a = 0; a < v; ++a) {
        pref *= tb.pair_tab[static_cast<size_t>(kidx[a]) * m + j];
      }
      kidx[v] = j;
      self(self, v + 1, pref, prod * tb.node[j]);
    }
  };
  rec(rec, 0, Complex{1.0, 0.0}, Complex{1.0, 0.0});
  out.value = sum;
  return out;
}

}  // namespace

double q_binomial(int n, int k, double tau) {
  if (k < 0 || k > n) return 0.0;
  if (k == 0 || k == n) return 1.0;
  if (tau == 1.0) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
  }
  double r = 1.0;
  for (int j = 1; j <= k; ++j) {
    r *= (1.0 - std::pow(tau, n - k + j)) / (1.0 - std::pow(tau, j));
  }
  return r;
}

ProbabilityResult azrp_mth_particle_distribution(int m, const Configuration& y,
                                                 int x, double t,
                                                 const ModelParams& params,
                                                 const ContourSpec& contour_large,
                                                 const EvalOptions& opts) {
  (void)opts;
  if (params.kind != ModelKind::Azrp) {
    throw std::invalid_argument("mth particle marginal is defined for the AZRP");
  }
  if (!(params.p > 0.0 && params.q > 0.0)) {
    throw std::invalid_argument("marginal formula requires p, q > 0");
  }
  const int n = y.n();
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= N");
  if (!y.physical()) throw std::invalid_argument("Y must be physical");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");

  const double p = params.p, q = params.q;
  const double tau = p / q;
  // The subset expansion is the mapped exclusion-process marginal of the
  // configuration (y_i + i); position x of the m-th particle maps to x + m.
  const int xhat = x + m;

  ProbabilityResult result;
  result.converged = true;
  double total_err = 0, max_cancel = 0;
  Complex total{};
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int k = __builtin_popcount(mask);
    if (k < m) continue;
    long long sigma_s = 0;
    std::vector<long long> ys;
    ys.reserve(k);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sigma_s += i + 1;
        ys.push_back(static_cast<long long>(y.x[i]) + i + 1);
      }
    }
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    const double coef = sign *
                        ipow(p * q, static_cast<long long>(m) * (m - 1) / 2) *
                        q_binomial(k - 1, k - m, tau) *
                        ipow(p, sigma_s - static_cast<long long>(m) * k) /
                        ipow(q, sigma_s - static_cast<long long>(k) * (k + 1) / 2);

    int nodes = contour_large.nodes;
    SubsetValue cur = eval_subset(ys, xhat, p, q, t, nodes, contour_large.radius);
    double diff = 0;
    bool converged = !contour_large.adaptive;
    while (contour_large.adaptive && 2 * nodes <= contour_large.max_nodes &&
           std::pow(static_cast<double>(2 * nodes), k) < 1.4e8) {
      const SubsetValue next =
          eval_subset(ys, xhat, p, q, t, 2 * nodes, contour_large.radius);
      nodes *= 2;
      diff = std::abs(next.value - cur.value);
      cur = next;
      const double noise = 1e-15 * cur.abs_terms;
      if (diff <= contour_large.rel_tol * std::max(std::abs(cur.value), 1e-300) ||
          diff <= noise) {
        converged = true;
        break;
      }
    }
    result.converged = result.converged && converged;
    total += coef * cur.value;
    total_err += std::abs(coef) * std::max({diff, 1e-15 * cur.abs_terms,
                                            std::abs(cur.value.imag())});
    const double wnorm = std::pow(contour_large.radius / nodes, k);
    max_cancel = std::max(max_cancel, std::abs(coef) * cur.max_term / wnorm);
    result.nodes_used = std::max(result.nodes_used, nodes);
  }
  result.value = total.real();
  result.abs_error_estimate = total_err + std::abs(total.imag());
  result.cancellation = max_cancel / std::max(std::abs(total), 1e-300);
  return result;
}

}  // namespace bethe
