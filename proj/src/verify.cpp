#include "bethe/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "formulas.hpp"

namespace bethe {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double secs() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

struct Rand {
  std::mt19937_64 gen;
  explicit Rand(std::uint64_t seed) : gen(seed) {}
  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
};

std::string params_str(const ModelParams& p) {
  std::ostringstream os;
  os << "p=" << p.p << " q=" << p.q;
  if (p.kind == ModelKind::PushAsep || p.kind == ModelKind::Asap) {
    os << " mu=" << p.mu;
  }
  return os.str();
}

std::vector<int> random_physical(Rand& rng, ModelKind kind, int n, int base_lo,
                                 int base_hi, int max_gap) {
  std::vector<int> x(n);
  x[0] = rng.pick(base_lo, base_hi);
  const bool weak = kind == ModelKind::Azrp;
  for (int i = 1; i < n; ++i) {
    x[i] = x[i - 1] + rng.pick(weak ? 0 : 1, max_gap);
  }
  return x;
}

// Physical X with per-particle displacement from Y bounded by `spread`.
std::vector<int> random_near(Rand& rng, ModelKind kind,
                             const std::vector<int>& y, int spread) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<int> x(y);
    for (auto& v : x) v += rng.pick(-spread, spread);
    std::sort(x.begin(), x.end());
    if (is_physical(kind, x)) return x;
  }
  return y;
}

CheckReport skeleton(const std::string& check, const ModelParams& params,
                     double tol, std::uint64_t seed) {
  CheckReport r;
  r.check = check;
  r.model = to_string(params.kind);
  r.params = params_str(params);
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

void finish(CheckReport& r, const Timer& timer) {
  r.pass = r.max_residual <= r.tolerance;
  r.wall_seconds = timer.secs();
}

// ---------------------------------------------------------------------------
// Permutation predicates for the t = 0 vanishing/cancellation statements.
// sigma holds 1-based values; index i is position i+1.

// Some value b sits at position b+1 with everything after it larger.
bool vanishing_single_push(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  for (int b = 1; b < n; ++b) {
    if (sigma[b] != b) continue;
    bool ok = true;
    for (int j = b + 1; j < n && ok; ++j) ok = sigma[j] > b;
    if (ok) return true;
  }
  return false;
}

// Some value b sits at position b-1 with everything before it smaller.
bool vanishing_single_azrp(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  for (int b = 2; b <= n; ++b) {
    if (sigma[b - 2] != b) continue;
    bool ok = true;
    for (int j = 0; j < b - 2 && ok; ++j) ok = sigma[j] < b;
    if (ok) return true;
  }
  return false;
}

// Swap at positions (i, i+1) cancels when a smaller entry sits to the right.
bool cancelling_swap_push(const std::vector<int>& sigma, int i) {
  const int n = static_cast<int>(sigma.size());
  const int lo = std::min(sigma[i], sigma[i + 1]);
  for (int j = i + 2; j < n; ++j) {
    if (sigma[j] < lo) return true;
  }
  return false;
}

// ...and for the AZRP when a larger entry sits to the left.
bool cancelling_swap_azrp(const std::vector<int>& sigma, int i) {
  const int hi = std::max(sigma[i], sigma[i + 1]);
  for (int j = 0; j < i; ++j) {
    if (sigma[j] > hi) return true;
  }
  return false;
}

struct PartitionCell {
  int a = -1;
  int b = -1;  // -1 for singletons
};

// Exact cover of the non-identity permutations by vanishing singletons and
// cancelling adjacent-swap pairs (PushASEP).  Backtracking; N <= 4 is tiny.
bool build_partition(const std::vector<PermutationTerm>& terms,
                     std::vector<PartitionCell>& out) {
  const int nt = static_cast<int>(terms.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < nt; ++i) index[terms[i].sigma] = i;
  std::vector<char> singles(nt, 0);
  std::vector<std::vector<int>> partners(nt);
  for (int i = 0; i < nt; ++i) {
    singles[i] = vanishing_single_push(terms[i].sigma);
    const int n = static_cast<int>(terms[i].sigma.size());
    for (int pos = 0; pos + 1 < n; ++pos) {
      if (!cancelling_swap_push(terms[i].sigma, pos)) continue;
      auto swapped = terms[i].sigma;
      std::swap(swapped[pos], swapped[pos + 1]);
      partners[i].push_back(index.at(swapped));
    }
  }
  std::vector<char> used(nt, 0);
  used[0] = 1;  // identity is excluded
  std::vector<PartitionCell> cells;
  auto rec = [&](auto&& self) -> bool {
    int first = -1;
    for (int i = 0; i < nt; ++i) {
      if (!used[i]) {
        first = i;
        break;
      }
    }
    if (first < 0) return true;
    used[first] = 1;
    if (singles[first]) {
      cells.push_back({first, -1});
      if (self(self)) return true;
      cells.pop_back();
    }
    for (int p : partners[first]) {
      if (used[p]) continue;
      used[p] = 1;
      cells.push_back({first, p});
      if (self(self)) return true;
      cells.pop_back();
      used[p] = 0;
    }
    used[first] = 0;
    return false;
  };
  if (!rec(rec)) return false;
  out = cells;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

CheckReport check_oracle_agreement(const ModelParams& params, int n, int trials,
                                   double t_max, double tol,
                                   std::uint64_t seed) {
  Timer timer;
  CheckReport r = skeleton("oracle", params, tol, seed);
  Rand rng(seed);
  const ContourSpec contour = make_contour(params, n);
  for (int trial = 0; trial < trials; ++trial) {
    const double t = rng.real(0.05, t_max);
    Configuration y(params.kind, random_physical(rng, params.kind, n, -2, 2, 3));
    const OracleSolution oracle =
        uniformization_adaptive(params, y, t, 1e-10);
    Configuration x(params.kind, random_near(rng, params.kind, y.x, 4));
    const ProbabilityResult got =
        transition_probability(params, y, x, t, contour);
    r.max_residual =
        std::max(r.max_residual, std::abs(got.value - oracle.dist.at(x)));
  }
  finish(r, timer);
  return r;
}

CheckReport check_boundary_conditions(const ModelParams& params, int n,
                                      double t, int trials, double tol,
                                      std::uint64_t seed) {
  Timer timer;
  CheckReport r = skeleton("boundary", params, tol, seed);
  if (params.kind == ModelKind::Asep) {
    throw std::invalid_argument("no collision condition is checked for ASEP");
  }
  Rand rng(seed);
  const ContourSpec contour = make_contour(params, n);
  for (int trial = 0; trial < trials; ++trial) {
    Configuration y(params.kind, random_physical(rng, params.kind, n, -2, 1, 2));
    const int i = n >= 2 ? rng.pick(0, n - 2) : 0;
    const int x0 = rng.pick(-2, 2);
    std::vector<int> cs(n);
    for (int j = 0; j < n; ++j) cs[j] = x0 + rng.pick(-3, 3);
    cs[i] = cs[i + 1] = x0;
    auto u = [&](const std::vector<int>& coords) {
      return transition_probability(params, y,
                                    Configuration(params.kind, coords), t,
                                    contour)
          .value;
    };
    const double lhs = u(cs);
    double rhs = 0;
    switch (params.kind) {
      case ModelKind::PushAsep: {
        auto a = cs, b = cs;
        a[i] = x0 - 1;
        b[i + 1] = x0 + 1;
        rhs = params.mu * u(a) + params.lambda * u(b);
        break;
      }
      case ModelKind::Asap: {
        auto a = cs, b = cs;
        a[i] = x0 - 1;
        b[i] = x0 - 1;
        b[i + 1] = x0 - 1;
        rhs = params.lambda * u(a) + params.mu * u(b);
        break;
      }
      case ModelKind::Azrp: {
        auto a = cs, b = cs;
        a[i + 1] = x0 - 1;
        b[i] = x0 + 1;
        rhs = params.p * u(a) + params.q * u(b);
        break;
      }
      default: break;
    }
    r.max_residual = std::max(r.max_residual, std::abs(lhs - rhs));
  }
  finish(r, timer);
  return r;
}

CheckReport check_boundary_geometric(const ModelParams& params, double t,
                                     int trials, double tol,
                                     std::uint64_t seed) {
  Timer timer;
  CheckReport r = skeleton("boundary_geometric", params, tol, seed);
  if (params.kind != ModelKind::Asap) {
    throw std::invalid_argument("geometric collision form is ASAP-only");
  }
  Rand rng(seed);
  const int n = 2;
  const ContourSpec contour = make_contour(params, n);
  for (int trial = 0; trial < trials; ++trial) {
    Configuration y(params.kind, random_physical(rng, params.kind, n, -1, 1, 2));
    const int x0 = y.x[0] + rng.pick(0, 2);
    // Truncation depth: both the geometric weight and a walk bound on the
    // deep-left values must leave a remainder well under the tolerance.
    int depth = 1;
    double remainder = 1.0;
    while (depth < 60) {
      remainder = std::pow(params.mu, depth + 1) *
                  std::min(1.0, poisson_upper_tail(
                                    n * t, std::max<long long>(
                                               0, y.x[0] - (x0 - depth - 1))));
      if (remainder < 1e-10) break;
      ++depth;
    }
    const Distribution deep =
        transition_distribution(params, y, t, x0 - depth - 1, y.x[1] + 2);
    const double lhs =
        transition_probability(params, y, Configuration(params.kind, {x0, x0}),
                               t, contour)
            .value;
    double series = 0, w = params.lambda;
    for (int j = 0; j <= depth; ++j) {
      series += w * deep.at(Configuration(params.kind, {x0 - j - 1, x0 - j}));
      w *= params.mu;
    }
    r.max_residual =
        std::max(r.max_residual, std::abs(lhs - series) + remainder);
  }
  finish(r, timer);
  return r;
}

CheckReport check_forward_equation(const ModelParams& params, int n, double t,
                                   int trials, double tol, std::uint64_t seed) {
  Timer timer;
  CheckReport r = skeleton("forward", params, tol, seed);
  Rand rng(seed);
  const ContourSpec contour = make_contour(params, n);
  for (int trial = 0; trial < trials; ++trial) {
    Configuration y(params.kind, random_physical(rng, params.kind, n, -2, 2, 2));
    std::vector<int> xs(y.x);
    for (auto& v : xs) v += rng.pick(-3, 3);  // arbitrary lattice point
    const Configuration x(params.kind, xs);
    const double lhs =
        transition_time_derivative(params, y, x, t, contour).value;
    auto u = [&](const std::vector<int>& coords) {
      return transition_probability(params, y,
                                    Configuration(params.kind, coords), t,
                                    contour)
          .value;
    };
    double rhs = -n * u(xs);
    for (int i = 0; i < n; ++i) {
      auto lo = xs, hi = xs;
      lo[i] -= 1;
      hi[i] += 1;
      rhs += params.p * u(lo) + params.q * u(hi);
    }
    r.max_residual = std::max(r.max_residual, std::abs(lhs - rhs));
  }
  finish(r, timer);
  return r;
}

CheckReport check_lemmas(const ModelParams& params, int n, double tol,
                         std::uint64_t seed) {
  Timer timer;
  CheckReport r = skeleton("lemmas", params, tol, seed);
  Rand rng(seed);
  int singles_checked = 0, pairs_checked = 0;
  bool partition_ok = true;
  for (int s = 2; s <= n; ++s) {
    const auto terms = permutations_with_inversions(s);
    Configuration y(params.kind, random_physical(rng, params.kind, s, -2, 0, 2));
    Configuration x(params.kind, random_physical(rng, params.kind, s, -2, 0, 2));
    ContourSpec contour = make_contour(params, s);
    contour.nodes = 64;
    const auto values = i_sigma_all_t0(params, y, x, contour);

    if (params.kind == ModelKind::PushAsep || params.kind == ModelKind::Azrp) {
      const bool push = params.kind == ModelKind::PushAsep;
      std::map<std::vector<int>, int> index;
      for (size_t i = 0; i < terms.size(); ++i) {
        index[terms[i].sigma] = static_cast<int>(i);
      }
      for (size_t i = 0; i < terms.size(); ++i) {
        const auto& sigma = terms[i].sigma;
        if (push ? vanishing_single_push(sigma) : vanishing_single_azrp(sigma)) {
          r.max_residual = std::max(r.max_residual, std::abs(values[i]));
          ++singles_checked;
        }
        for (int pos = 0; pos + 1 < s; ++pos) {
          const bool hit = push ? cancelling_swap_push(sigma, pos)
                                : cancelling_swap_azrp(sigma, pos);
          if (!hit) continue;
          auto swapped = sigma;
          std::swap(swapped[pos], swapped[pos + 1]);
          const int j = index.at(swapped);
          if (j < static_cast<int>(i)) continue;  // count each pair once
          r.max_residual =
              std::max(r.max_residual, std::abs(values[i] + values[j]));
          ++pairs_checked;
        }
      }
      if (push) {
        std::vector<PartitionCell> cells;
        if (!build_partition(terms, cells)) {
          partition_ok = false;
        } else {
          for (const auto& cell : cells) {
            const Complex total = cell.b < 0 ? values[cell.a]
                                             : values[cell.a] + values[cell.b];
            r.max_residual = std::max(r.max_residual, std::abs(total));
          }
        }
      }
    }
    // Full off-diagonal sum vanishes on the physical region for every model.
    Complex sum{};
    for (size_t i = 1; i < terms.size(); ++i) sum += values[i];
    r.max_residual = std::max(r.max_residual, std::abs(sum));
  }
  std::ostringstream os;
  os << "singles=" << singles_checked << " pairs=" << pairs_checked
     << " partition=" << (partition_ok ? "ok" : "MISSING");
  r.detail = os.str();
  finish(r, timer);
  if (!partition_ok) r.pass = false;
  return r;
}

CheckReport check_bijection(double p, int n, double t, int trials, double tol,
                            std::uint64_t seed) {
  Timer timer;
  const ModelParams azrp = ModelParams::azrp(p);
  const ModelParams asep = ModelParams::asep(p);
  CheckReport r = skeleton("bijection", azrp, tol, seed);
  Rand rng(seed);
  const ContourSpec c_azrp = make_contour(azrp, n);
  const ContourSpec c_asep = make_contour(asep, n);
  for (int trial = 0; trial < trials; ++trial) {
    Configuration yz(ModelKind::Azrp, random_physical(rng, ModelKind::Azrp, n,
                                                      -2, 2, 2));
    Configuration xz(ModelKind::Azrp, random_near(rng, ModelKind::Azrp, yz.x, 3));
    const double pz = transition_probability(azrp, yz, xz, t, c_azrp).value;
    const double pa = transition_probability(asep, azrp_to_asep(yz),
                                             azrp_to_asep(xz), t, c_asep)
                          .value;
    r.max_residual = std::max(r.max_residual, std::abs(pz - pa));
  }
  finish(r, timer);
  return r;
}

CheckReport check_mth_marginal(const ModelParams& params, int n, int m,
                               double t, double tol) {
  Timer timer;
  CheckReport r = skeleton("marginal", params, tol, 0);
  if (params.kind != ModelKind::Azrp) {
    throw std::invalid_argument("the marginal check is AZRP-only");
  }
  std::vector<int> ys;
  switch (n) {
    case 1: ys = {0}; break;
    case 2: ys = {0, 0}; break;
    default: ys = {-1, 0, 0}; break;
  }
  const Configuration y(ModelKind::Azrp, ys);
  long long extent = 1;
  while (poisson_upper_tail(n * t, extent + 1) > 1e-9 && extent < 200) {
    ++extent;
  }
  const int lo = y.x.front() - static_cast<int>(extent) - 1;
  const int hi = y.x.back() + static_cast<int>(extent) + 1;
  const Distribution dist = transition_distribution(params, y, t, lo, hi);
  const ContourSpec large = make_contour(params, n, RadiusMode::Large);
  const int center =
      y.x[m - 1] + static_cast<int>(std::lround((params.p - params.q) * t));
  for (int x = center - 5; x <= center + 5; ++x) {
    const double direct = [&] {
      double s = 0;
      for (const auto& [cfg, v] : dist.entries) {
        if (cfg.x[m - 1] == x) s += v;
      }
      return s;
    }();
    const double viaFormula =
        azrp_mth_particle_distribution(m, y, x, t, params, large).value;
    r.max_residual = std::max(r.max_residual, std::abs(direct - viaFormula));
  }
  finish(r, timer);
  return r;
}

std::vector<CheckReport> check_remark1(double p, double mu, int trials,
                                       double tol_smatrix, double tol_prob,
                                       std::uint64_t seed) {
  Timer timer;
  const ModelParams asap = ModelParams::asap(p, mu);
  const double lambda = asap.lambda;
  const ScatteringSpec subst =
      ScatteringSpec::asep_form(-mu / lambda, 1.0 / lambda);
  CheckReport rs = skeleton("remark1_smatrix", asap, tol_smatrix, seed);
  Rand rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    Complex a, b;
    double clearance = 0;
    do {
      a = std::polar(rng.real(0.3, 1.4), rng.real(0.0, 6.283185307179586));
      b = std::polar(rng.real(0.3, 1.4), rng.real(0.0, 6.283185307179586));
      clearance = std::min(std::abs(asap.mu + asap.lambda * a - b * a),
                           std::abs(subst.c1 + subst.c2 * a * b - a));
    } while (clearance < 1e-2);
    const Complex lhs = s_matrix(ModelKind::Asap, a, b, asap);
    const Complex rhs = detail::s_value(subst, a, b);
    rs.max_residual = std::max(rs.max_residual, std::abs(lhs - rhs));
  }
  finish(rs, timer);

  Timer timer2;
  CheckReport rp = skeleton("remark1_probability", asap, tol_prob, seed);
  const ContourSpec c_asap = make_contour(asap, 2);
  ContourSpec c_subst;
  c_subst.radius = choose_radius(subst, 2, RadiusMode::Small);
  for (int trial = 0; trial < 6; ++trial) {
    const double t = rng.real(0.2, 1.2);
    Configuration y(ModelKind::Asap, random_physical(rng, ModelKind::Asap, 2,
                                                     -2, 2, 3));
    Configuration x(ModelKind::Asap, random_near(rng, ModelKind::Asap, y.x, 3));
    const double direct = transition_probability(asap, y, x, t, c_asap).value;
    const double substituted =
        transition_probability_scattering(subst, asap, y.x, x.x, t, c_subst)
            .value;
    rp.max_residual = std::max(rp.max_residual, std::abs(direct - substituted));
  }
  finish(rp, timer2);
  return {rs, rp};
}

CheckReport check_normalization(const ModelParams& params, int n, double t,
                                double tol) {
  Timer timer;
  CheckReport r = skeleton("normalization", params, tol, 0);
  std::vector<int> ys(n);
  for (int i = 0; i < n; ++i) {
    ys[i] = params.kind == ModelKind::Azrp ? i / 2 : i;
  }
  const Configuration y(params.kind, ys);
  const OracleSolution oracle = uniformization_adaptive(params, y, t, 1e-9);
  const Distribution dist = transition_distribution(
      params, y, t, oracle.window.lo, oracle.window.hi);
  r.max_residual = std::abs(dist.captured_mass - 1.0);
  std::ostringstream os;
  os << "window=[" << oracle.window.lo << "," << oracle.window.hi
     << "] mass=" << dist.captured_mass;
  r.detail = os.str();
  finish(r, timer);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void run_one(std::vector<CheckReport>& out, const std::string& name,
             const std::function<CheckReport()>& fn) {
  try {
    out.push_back(fn());
  } catch (const std::exception& e) {
    CheckReport r;
    r.check = name;
    r.pass = false;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.detail = std::string("exception: ") + e.what();
    out.push_back(r);
  }
}

}  // namespace

std::vector<CheckReport> run_checks(const std::string& selector,
                                    const std::string& model_filter,
                                    int n_filter, std::uint64_t seed) {
  std::vector<CheckReport> out;
  auto want = [&](const std::string& which) {
    return selector == "all" || selector == which;
  };
  auto want_model = [&](ModelKind kind) {
    return model_filter.empty() || model_filter == to_string(kind);
  };
  auto want_n = [&](int n) { return n_filter == 0 || n_filter == n; };

  const std::vector<ModelParams> all_models = {
      ModelParams::asep(0.7), ModelParams::push_asep(0.6, 0.4),
      ModelParams::asap(0.7, 0.4), ModelParams::azrp(0.6)};

  if (want("oracle")) {
    for (const auto& mp : all_models) {
      for (int n : {2, 3}) {
        if (!want_model(mp.kind) || !want_n(n)) continue;
        const double tol = n == 2 ? 1e-8 : 1e-6;
        run_one(out, "oracle", [&] {
          return check_oracle_agreement(mp, n, 4, 1.5, tol, seed + n);
        });
      }
    }
  }
  if (want("boundary")) {
    for (const auto& mp : all_models) {
      if (mp.kind == ModelKind::Asep) continue;
      for (int n : {2, 3}) {
        if (!want_model(mp.kind) || !want_n(n)) continue;
        run_one(out, "boundary", [&] {
          return check_boundary_conditions(mp, n, 0.7, 6, 1e-8, seed + 7 * n);
        });
      }
    }
    if (want_model(ModelKind::Asap) && want_n(2)) {
      run_one(out, "boundary_geometric", [&] {
        return check_boundary_geometric(ModelParams::asap(0.7, 0.4), 0.7, 4,
                                        1e-7, seed + 3);
      });
    }
  }
  if (want("forward")) {
    for (const auto& mp : all_models) {
      for (int n : {2, 3}) {
        if (!want_model(mp.kind) || !want_n(n)) continue;
        run_one(out, "forward", [&] {
          return check_forward_equation(mp, n, 0.8, 5, 1e-7, seed + 11 * n);
        });
      }
    }
  }
  if (want("lemmas")) {
    for (const auto& mp : all_models) {
      if (!want_model(mp.kind)) continue;
      const int n = n_filter ? n_filter : 4;
      run_one(out, "lemmas",
              [&] { return check_lemmas(mp, n, 1e-10, seed + 17); });
    }
  }
  if (want("bijection")) {
    for (int n : {2, 3}) {
      if (!want_n(n)) continue;
      run_one(out, "bijection", [&] {
        return check_bijection(0.6, n, n == 2 ? 1.0 : 0.5,
                               n == 2 ? 6 : 4, n == 2 ? 1e-8 : 1e-7,
                               seed + 23 * n);
      });
    }
  }
  if (want("marginal")) {
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; m <= n; ++m) {
        if (!want_n(n)) continue;
        run_one(out, "marginal", [&] {
          return check_mth_marginal(ModelParams::azrp(n % 2 ? 0.5 : 0.7), n, m,
                                    0.8, n == 1 ? 1e-10 : 1e-6);
        });
      }
    }
  }
  if (want("remark1")) {
    try {
      for (auto& r : check_remark1(0.7, 0.5, 100, 1e-12, 1e-8, seed + 29)) {
        out.push_back(std::move(r));
      }
    } catch (const std::exception& e) {
      CheckReport r;
      r.check = "remark1";
      r.max_residual = std::numeric_limits<double>::infinity();
      r.detail = std::string("exception: ") + e.what();
      out.push_back(r);
    }
  }
  if (want("normalization")) {
    for (const auto& mp : all_models) {
      if (!want_model(mp.kind) || !want_n(2)) continue;
      run_one(out, "normalization",
              [&] { return check_normalization(mp, 2, 1.5, 1e-6); });
    }
  }
  return out;
}

bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.pass; });
}

std::string reports_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["model"] = r.model;
    j["params"] = r.params;
    j["residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    if (!r.detail.empty()) j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string reports_table(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %-6s %-26s %-12s %-10s %-5s %8s\n",
                "check", "model", "params", "residual", "tol", "pass", "sec");
  os << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line,
                  "%-22s %-6s %-26s %-12.3e %-10.1e %-5s %8.2f\n",
                  r.check.c_str(), r.model.c_str(), r.params.c_str(),
                  r.max_residual, r.tolerance, r.pass ? "ok" : "FAIL",
                  r.wall_seconds);
    os << line;
    if (!r.detail.empty()) os << "    " << r.detail << "\n";
  }
  return os.str();
}

std::vector<std::pair<std::string, std::string>> coverage_table() {
  return {
      {"model_rates_block_push", "unit:model"},
      {"model_rates_avalanche_branches", "unit:model"},
      {"model_scattering_forms", "unit:model"},
      {"model_energy", "unit:model"},
      {"model_physical_regions", "unit:model"},
      {"transition_integral_formula", "oracle"},
      {"delta_initial_condition", "unit:engine"},
      {"boundary_condition_push", "boundary"},
      {"boundary_condition_asap", "boundary"},
      {"boundary_condition_asap_geometric", "boundary"},
      {"boundary_condition_azrp", "boundary"},
      {"forward_equation", "forward"},
      {"vanishing_singletons_push", "lemmas"},
      {"vanishing_singletons_azrp", "lemmas"},
      {"cancelling_pairs_push", "lemmas"},
      {"cancelling_pairs_azrp", "lemmas"},
      {"nonidentity_partition_push", "lemmas"},
      {"inversion_phase_identity", "unit:engine"},
      {"configuration_bijection", "bijection"},
      {"mth_particle_marginal", "marginal"},
      {"scattering_substitution_equivalence", "remark1"},
  };
}

}  // namespace bethe
