#include "bethe/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "formulas.hpp"

namespace bethe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kGridCap = 1.4e8;  // max tensor cells per permutation term

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int pow2_ceil(int v) {
  int m = 8;
  while (m < v) m <<= 1;
  return m;
}

// Neumaier-compensated complex accumulation plus magnitude diagnostics.
struct Accum {
  double sr = 0, cr = 0, si = 0, ci = 0;
  double max_mag = 0, abs_sum = 0;

  static void add1(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  void add(Complex z) {
    add1(sr, cr, z.real());
    add1(si, ci, z.imag());
    const double a = std::abs(z);
    if (a > max_mag) max_mag = a;
    abs_sum += a;
  }
  Complex total() const { return {sr + cr, si + ci}; }
};

struct Tables {
  int n = 0, m = 0;
  std::vector<double> radii;                     // per variable
  std::vector<std::vector<Complex>> node;        // per variable: m nodes
  std::vector<std::vector<Complex>> wexp;        // node/m (x exp(eps t))
  std::vector<std::vector<Complex>> eps;         // derivative mode only
  // Scattering tables per variable pair alpha < beta (inversions always
  // pair a larger beta with a smaller alpha): value at row = alpha node
  // index, column = beta node index.
  std::vector<std::vector<Complex>> stab;
  std::vector<std::vector<Complex>> pxy;  // (i*n+v) -> node_v^(x_i - y_v - 1)

  size_t pair_index(int alpha, int beta) const {
    return static_cast<size_t>(alpha) * n + beta;
  }
  double weight_norm() const {
    double w = 1.0;
    for (double r : radii) w *= r / m;
    return w;
  }
};

// node_k^e with the angle reduced exactly: arg = 2*pi*((k*e) mod m)/m.
Complex node_power(double r, int m, int k, long long e) {
  long long a = (k * e) % m;
  if (a < 0) a += m;
  return std::polar(std::pow(r, static_cast<double>(e)),
                    2.0 * kPi * static_cast<double>(a) / m);
}

Tables build_tables(const ScatteringSpec& sc, double ep, double eq, double t,
                    bool with_exp, bool need_eps, const std::vector<int>& y,
                    const std::vector<int>& x, int m,
                    const std::vector<double>& radii) {
  Tables tb;
  tb.n = static_cast<int>(y.size());
  tb.m = m;
  tb.radii = radii;
  tb.node.resize(tb.n);
  tb.wexp.resize(tb.n);
  if (need_eps) tb.eps.resize(tb.n);
  for (int v = 0; v < tb.n; ++v) {
    tb.node[v].resize(m);
    tb.wexp[v].resize(m);
    if (need_eps) tb.eps[v].resize(m);
    for (int k = 0; k < m; ++k) {
      tb.node[v][k] = std::polar(radii[v], 2.0 * kPi * k / m);
      Complex w = tb.node[v][k] / static_cast<double>(m);
      const Complex e = detail::energy_value(ep, eq, tb.node[v][k]);
      if (need_eps) tb.eps[v][k] = e;
      if (with_exp) w *= std::exp(e * t);
      tb.wexp[v][k] = w;
    }
  }
  if (tb.n > 1) {
    tb.stab.resize(static_cast<size_t>(tb.n) * tb.n);
    for (int a = 0; a + 1 < tb.n; ++a) {
      for (int b = a + 1; b < tb.n; ++b) {
        auto& table = tb.stab[tb.pair_index(a, b)];
        table.resize(static_cast<size_t>(m) * m);
        for (int ka = 0; ka < m; ++ka) {
          for (int kb = 0; kb < m; ++kb) {
            const Complex v =
                detail::s_value(sc, tb.node[a][ka], tb.node[b][kb]);
            if (!(std::abs(v) < 1e13)) {
              throw PoleError(
                  "scattering factor blows up on the quadrature grid", v);
            }
            table[static_cast<size_t>(ka) * m + kb] = v;
          }
        }
      }
    }
  }
  tb.pxy.resize(static_cast<size_t>(tb.n) * tb.n);
  for (int i = 0; i < tb.n; ++i) {
    for (int v = 0; v < tb.n; ++v) {
      auto& col = tb.pxy[static_cast<size_t>(i) * tb.n + v];
      col.resize(m);
      const long long e = static_cast<long long>(x[i]) - y[v] - 1;
      for (int k = 0; k < m; ++k) col[k] = node_power(radii[v], m, k, e);
    }
  }
  return tb;
}

// Per-permutation evaluation plan: premultiplied per-variable factors and,
// for each variable beta, the earlier variables alpha with (beta, alpha) in
// the inversion set.  Variables are visited in index order 1..N, so the
// alpha node index is always fixed before the pair is resolved.
struct SigmaPlan {
  std::vector<std::vector<Complex>> fac;
  std::vector<std::vector<int>> partners;
};

SigmaPlan build_plan(const Tables& tb, const PermutationTerm& term) {
  const int n = tb.n;
  SigmaPlan plan;
  plan.fac.resize(n);
  plan.partners.resize(n);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[term.sigma[i] - 1] = i;
  for (int v = 0; v < n; ++v) {
    const auto& p = tb.pxy[static_cast<size_t>(pos[v]) * n + v];
    auto& f = plan.fac[v];
    f.resize(tb.m);
    for (int k = 0; k < tb.m; ++k) f[k] = p[k] * tb.wexp[v][k];
  }
  for (const auto& [beta, alpha] : term.inversions) {
    plan.partners[beta - 1].push_back(alpha - 1);
  }
  return plan;
}

template <bool kEnergy>
void rec_eval(const Tables& tb, const SigmaPlan& plan, int v, Complex prefix,
              Complex eps_prefix, int* kidx, Accum& acc) {
  const int m = tb.m;
  const auto& fac = plan.fac[v];
  const auto& part = plan.partners[v];
  if (v == tb.n - 1) {
    for (int k = 0; k < m; ++k) {
      Complex term = prefix * fac[k];
      for (int a : part) {
        term *= tb.stab[tb.pair_index(a, v)][static_cast<size_t>(kidx[a]) * m + k];
      }
      if constexpr (kEnergy) term *= eps_prefix + tb.eps[v][k];
      acc.add(term);
    }
    return;
  }
  for (int k = 0; k < m; ++k) {
    Complex p = prefix * fac[k];
    for (int a : part) {
      p *= tb.stab[tb.pair_index(a, v)][static_cast<size_t>(kidx[a]) * m + k];
    }
    kidx[v] = k;
    if constexpr (kEnergy) {
      rec_eval<true>(tb, plan, v + 1, p, eps_prefix + tb.eps[v][k], kidx, acc);
    } else {
      rec_eval<false>(tb, plan, v + 1, p, Complex{}, kidx, acc);
    }
  }
}

struct GridValue {
  Complex value{};
  double max_term = 0;
  double abs_terms = 0;
  double weight_norm = 1.0;
};

GridValue eval_sigma(const Tables& tb, const PermutationTerm& term,
                     bool energy_weight) {
  const SigmaPlan plan = build_plan(tb, term);
  Accum acc;
  std::vector<int> kidx(tb.n, 0);
  if (energy_weight) {
    rec_eval<true>(tb, plan, 0, Complex{1.0, 0.0}, Complex{}, kidx.data(), acc);
  } else {
    rec_eval<false>(tb, plan, 0, Complex{1.0, 0.0}, Complex{}, kidx.data(),
                    acc);
  }
  return {acc.total(), acc.max_mag, acc.abs_sum};
}

Complex tree_sum(std::vector<Complex> v) {
  size_t n = v.size();
  while (n > 1) {
    size_t h = 0;
    for (size_t i = 0; i + 1 < n; i += 2) v[h++] = v[i] + v[i + 1];
    if (n & 1) v[h++] = v[n - 1];
    n = h;
  }
  return n ? v[0] : Complex{};
}

// Sums the grid contributions of the given permutation terms.  Terms are
// independent and run on worker threads; the reduction is a fixed-order
// pairwise tree, so the result does not depend on the worker count.
GridValue eval_grid(const ScatteringSpec& sc, double ep, double eq, double t,
                    bool with_exp, bool energy_weight,
                    const std::vector<PermutationTerm>& terms,
                    const std::vector<int>& y, const std::vector<int>& x,
                    int m, const std::vector<double>& radii, int threads) {
  const Tables tb =
      build_tables(sc, ep, eq, t, with_exp, energy_weight, y, x, m, radii);
  const int nt = static_cast<int>(terms.size());
  std::vector<GridValue> per(nt);
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, nt));
  if (workers == 1) {
    for (int i = 0; i < nt; ++i) per[i] = eval_sigma(tb, terms[i], energy_weight);
  } else {
    std::atomic<int> next{0};
    auto work = [&] {
      for (int i; (i = next.fetch_add(1)) < nt;) {
        per[i] = eval_sigma(tb, terms[i], energy_weight);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  GridValue out;
  std::vector<Complex> vals(nt);
  for (int i = 0; i < nt; ++i) {
    vals[i] = per[i].value;
    out.max_term = std::max(out.max_term, per[i].max_term);
    out.abs_terms += per[i].abs_terms;
  }
  out.value = tree_sum(std::move(vals));
  out.weight_norm = tb.weight_norm();
  return out;
}

struct AdaptiveOut {
  Complex value{};
  double err = 0;
  double cancellation = 0;
  int nodes = 0;
  bool converged = true;
};

long long max_abs_exponent(const std::vector<int>& y,
                           const std::vector<int>& x) {
  long long e = 1;
  for (int xi : x) {
    for (int yv : y) {
      e = std::max(e, std::llabs(static_cast<long long>(xi) - yv - 1));
    }
  }
  return e;
}

double cells(int m, int n) { return std::pow(static_cast<double>(m), n); }

AdaptiveOut adaptive_eval(const ScatteringSpec& sc, double ep, double eq,
                          double t, bool with_exp, bool energy_weight,
                          const std::vector<PermutationTerm>& terms,
                          const std::vector<int>& y, const std::vector<int>& x,
                          const ContourSpec& contour, int threads) {
  const int n = static_cast<int>(y.size());
  if (!is_pow2(contour.nodes) || contour.nodes < 8) {
    throw std::invalid_argument("ContourSpec.nodes must be a power of two >= 8");
  }
  const std::vector<double> radii(n, contour.radius);
  int m = contour.nodes;
  if (contour.adaptive) {
    m = std::max(m, pow2_ceil(static_cast<int>(
                        std::min<long long>(2 * max_abs_exponent(y, x) + 2,
                                            contour.max_nodes))));
  }
  if (cells(m, n) > kGridCap) {
    throw ResourceError("quadrature grid too large; reduce nodes or N");
  }
  auto run = [&](int nodes) {
    return eval_grid(sc, ep, eq, t, with_exp, energy_weight, terms, y, x,
                     nodes, radii, threads);
  };
  GridValue cur = run(m);
  AdaptiveOut out;
  if (!contour.adaptive) {
    out.value = cur.value;
    out.err = std::max(std::abs(cur.value.imag()), 1e-15 * cur.abs_terms);
    out.cancellation = cur.max_term / cur.weight_norm /
                       std::max(std::abs(cur.value), 1e-300);
    out.nodes = m;
    return out;
  }
  double diff = 0;
  bool converged = false;
  while (true) {
    if (2 * m > contour.max_nodes || cells(2 * m, n) > kGridCap) break;
    const GridValue next = run(2 * m);
    m *= 2;
    diff = std::abs(next.value - cur.value);
    cur = next;
    const double noise = 1e-15 * cur.abs_terms;
    const double scale = std::max(std::abs(cur.value), 1e-300);
    if (diff <= contour.rel_tol * scale || diff <= noise) {
      converged = true;
      break;
    }
  }
  const double noise = 1e-15 * cur.abs_terms;
  if (!converged &&
      diff > std::max(1e-4, 1e-2 * std::abs(cur.value))) {
    throw ConvergenceError("quadrature failed to converge at the node cap",
                           std::abs(cur.value), diff);
  }
  out.value = cur.value;
  out.err = std::max({diff, std::abs(cur.value.imag()), noise});
  out.cancellation =
      cur.max_term / cur.weight_norm / std::max(std::abs(cur.value), 1e-300);
  out.nodes = m;
  out.converged = converged;
  return out;
}

ProbabilityResult to_result(const AdaptiveOut& a) {
  ProbabilityResult r;
  r.value = a.value.real();
  r.abs_error_estimate = a.err;
  r.cancellation = a.cancellation;
  r.nodes_used = a.nodes;
  r.converged = a.converged;
  return r;
}

void check_pair(const Configuration& y, const Configuration& x, double t) {
  if (y.x.empty() || y.x.size() != x.x.size()) {
    throw std::invalid_argument("Y and X must have the same positive size");
  }
  if (!y.physical()) {
    throw std::invalid_argument("initial configuration must be physical");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
}

}  // namespace

ContourSpec make_contour(const ModelParams& params, int n_particles,
                         RadiusMode mode) {
  ContourSpec c;
  c.radius = choose_radius(ScatteringSpec::for_model(params), n_particles, mode);
  if (mode == RadiusMode::Large) c.nodes = 64;
  return c;
}

ProbabilityResult transition_probability(const ModelParams& params,
                                         const Configuration& y,
                                         const Configuration& x, double t,
                                         const ContourSpec& contour,
                                         const EvalOptions& opts) {
  check_pair(y, x, t);
  const auto terms = permutations_with_inversions(y.n());
  return to_result(adaptive_eval(ScatteringSpec::for_model(params), params.p,
                                 params.q, t, true, false, terms, y.x, x.x,
                                 contour, opts.threads));
}

ProbabilityResult transition_time_derivative(const ModelParams& params,
                                             const Configuration& y,
                                             const Configuration& x, double t,
                                             const ContourSpec& contour,
                                             const EvalOptions& opts) {
  check_pair(y, x, t);
  const auto terms = permutations_with_inversions(y.n());
  return to_result(adaptive_eval(ScatteringSpec::for_model(params), params.p,
                                 params.q, t, true, true, terms, y.x, x.x,
                                 contour, opts.threads));
}

ProbabilityResult transition_probability_scattering(
    const ScatteringSpec& scattering, const ModelParams& energy_params,
    const std::vector<int>& y, const std::vector<int>& x, double t,
    const ContourSpec& contour, const EvalOptions& opts) {
  if (y.empty() || y.size() != x.size()) {
    throw std::invalid_argument("Y and X must have the same positive size");
  }
  const auto terms = permutations_with_inversions(static_cast<int>(y.size()));
  return to_result(adaptive_eval(scattering, energy_params.p, energy_params.q,
                                 t, true, false, terms, y, x, contour,
                                 opts.threads));
}

Complex i_sigma_at_t0(const ModelParams& params, const PermutationTerm& term,
                      const Configuration& y, const Configuration& x,
                      const ContourSpec& contour) {
  check_pair(y, x, 0.0);
  const AdaptiveOut out =
      adaptive_eval(ScatteringSpec::for_model(params), params.p, params.q, 0.0,
                    false, false, {term}, y.x, x.x, contour, 1);
  return out.value;
}

std::vector<Complex> i_sigma_all_t0(const ModelParams& params,
                                    const Configuration& y,
                                    const Configuration& x,
                                    const ContourSpec& contour,
                                    const EvalOptions& opts) {
  check_pair(y, x, 0.0);
  const int n = y.n();
  if (!is_pow2(contour.nodes)) {
    throw std::invalid_argument("ContourSpec.nodes must be a power of two >= 8");
  }
  if (cells(contour.nodes, n) > kGridCap) {
    throw ResourceError("quadrature grid too large; reduce nodes or N");
  }
  const ScatteringSpec sc = ScatteringSpec::for_model(params);
  const std::vector<double> radii(n, contour.radius);
  const Tables tb = build_tables(sc, params.p, params.q, 0.0, false, false,
                                 y.x, x.x, contour.nodes, radii);
  const auto terms = permutations_with_inversions(n);
  const int nt = static_cast<int>(terms.size());
  std::vector<Complex> values(nt);
  int workers = opts.threads > 0
                    ? opts.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, nt));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i; (i = next.fetch_add(1)) < nt;) {
      values[i] = eval_sigma(tb, terms[i], false).value;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return values;
}

Complex a_sigma(const ModelParams& params, const PermutationTerm& term,
                const std::vector<Complex>& xi) {
  Complex product{1.0, 0.0};
  for (const auto& [beta, alpha] : term.inversions) {
    product *= s_matrix(params.kind, xi[alpha - 1], xi[beta - 1], params);
  }
  return product;
}

Configuration azrp_to_asep(const Configuration& c) {
  if (c.model != ModelKind::Azrp || !c.physical()) {
    throw std::invalid_argument("azrp_to_asep: input must be physical AZRP");
  }
  Configuration out(ModelKind::Asep, c.x);
  for (size_t i = 0; i < out.x.size(); ++i) out.x[i] += static_cast<int>(i) + 1;
  if (!out.physical()) throw std::logic_error("bijection left physical region");
  return out;
}

Configuration asep_to_azrp(const Configuration& c) {
  if (c.model == ModelKind::Azrp || !is_physical(ModelKind::Asep, c.x)) {
    throw std::invalid_argument("asep_to_azrp: input must be strictly ordered");
  }
  Configuration out(ModelKind::Azrp, c.x);
  for (size_t i = 0; i < out.x.size(); ++i) out.x[i] -= static_cast<int>(i) + 1;
  if (!out.physical()) throw std::logic_error("bijection left physical region");
  return out;
}

}  // namespace bethe
