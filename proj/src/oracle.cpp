#include "bethe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <thread>

namespace bethe {

namespace {

constexpr size_t kStateCap = 5'000'000;

double u01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Transition {
  std::vector<int> target;
  double rate;
};

void append_asep(const ModelParams& params, const std::vector<int>& x,
                 std::vector<Transition>& out) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const bool right_free = (i + 1 >= n) || (x[i + 1] != x[i] + 1);
    const bool left_free = (i == 0) || (x[i - 1] != x[i] - 1);
    if (params.p > 0 && right_free) {
      auto t = x;
      t[i] += 1;
      out.push_back({std::move(t), params.p});
    }
    if (params.q > 0 && left_free) {
      auto t = x;
      t[i] -= 1;
      out.push_back({std::move(t), params.q});
    }
  }
}

void append_push(const ModelParams& params, const std::vector<int>& x,
                 std::vector<Transition>& out) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    // Particle i shifts the maximal contiguous run it pushes.
    int nr = 1;
    while (i + nr < n && x[i + nr] == x[i] + nr) ++nr;
    if (params.p > 0) {
      auto t = x;
      for (int j = 0; j < nr; ++j) t[i + j] += 1;
      out.push_back({std::move(t), params.p * push_rates(nr, params).r_n});
    }
    int nl = 1;
    while (i - nl >= 0 && x[i - nl] == x[i] - nl) ++nl;
    if (params.q > 0) {
      auto t = x;
      for (int j = 0; j < nl; ++j) t[i - j] -= 1;
      out.push_back({std::move(t), params.q * push_rates(nl, params).l_n});
    }
  }
}

void append_azrp(const ModelParams& params, const std::vector<int>& x,
                 std::vector<Transition>& out) {
  const int n = static_cast<int>(x.size());
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n && x[j] == x[i]) ++j;
    // One particle leaves the occupied site x[i] at rate g = 1.
    if (params.p > 0) {
      auto t = x;
      t[j - 1] += 1;  // move the top particle right; stays sorted
      out.push_back({std::move(t), params.p});
    }
    if (params.q > 0) {
      auto t = x;
      t[i] -= 1;  // move the bottom particle left; stays sorted
      out.push_back({std::move(t), params.q});
    }
    i = j;
  }
}

void append_asap(const ModelParams& params, const std::vector<int>& x,
                 double avalanche_tol, std::vector<Transition>& out) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    for (int dir = 0; dir < 2; ++dir) {
      const double rate = dir == 0 ? params.p : params.q;
      if (rate <= 0) continue;
      const int target = dir == 0 ? x[i] + 1 : x[i] - 1;
      const bool occupied = (dir == 0)
                                ? (i + 1 < n && x[i + 1] == target)
                                : (i > 0 && x[i - 1] == target);
      auto moved = x;
      moved[i] = target;
      if (!occupied) {
        std::sort(moved.begin(), moved.end());
        out.push_back({std::move(moved), rate});
        continue;
      }
      std::sort(moved.begin(), moved.end());
      for (const auto& res : resolve_avalanche(moved, params, avalanche_tol)) {
        if (res.config.x == x) continue;  // null event
        out.push_back({res.config.x, rate * res.weight});
      }
    }
  }
}

std::vector<Transition> list_transitions(const ModelParams& params,
                                         const std::vector<int>& x,
                                         double avalanche_tol) {
  std::vector<Transition> out;
  switch (params.kind) {
    case ModelKind::Asep: append_asep(params, x, out); break;
    case ModelKind::PushAsep: append_push(params, x, out); break;
    case ModelKind::Azrp: append_azrp(params, x, out); break;
    case ModelKind::Asap: append_asap(params, x, avalanche_tol, out); break;
  }
  return out;
}

int find_overloaded(const std::vector<int>& x) {
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] == x[i + 1]) return static_cast<int>(i);
  }
  return -1;
}

void enumerate_states(ModelKind kind, int n, int lo, int hi,
                      std::vector<int>& cur, std::vector<Configuration>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.emplace_back(kind, cur);
    return;
  }
  const bool weak = kind == ModelKind::Azrp;
  const int start = cur.empty() ? lo : (weak ? cur.back() : cur.back() + 1);
  for (int v = std::max(start, lo); v <= hi; ++v) {
    cur.push_back(v);
    enumerate_states(kind, n, lo, hi, cur, out);
    cur.pop_back();
    if (out.size() > kStateCap) {
      throw ResourceError("state space exceeds the configured cap");
    }
  }
}

}  // namespace

double poisson_upper_tail(double lambda, long long k) {
  if (k <= 0) return 1.0;
  if (lambda <= 0) return 0.0;
  // P(X >= k) summed upward from the first term in log space.
  double log_term = k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (long long j = k; j < k + 4000; ++j) {
    sum += term;
    term *= lambda / static_cast<double>(j + 1);
    if (term < sum * 1e-18 + 1e-320) break;
  }
  return std::min(sum, 1.0);
}

double walk_probability(double p, double q, long long m, double t) {
  if (!(t >= 0)) throw std::invalid_argument("time must be nonnegative");
  if (t == 0.0) return m == 0 ? 1.0 : 0.0;
  auto log_pois = [](double base, long long e) {
    if (e == 0) return 0.0;
    if (base == 0.0) return -std::numeric_limits<double>::infinity();
    return e * std::log(base) - std::lgamma(static_cast<double>(e) + 1.0);
  };
  const double lp = p * t, lq = q * t;
  const long long k0 = std::max<long long>(0, -m);
  double sum = 0.0;
  for (long long k = k0; k < k0 + 500; ++k) {
    const double lt = log_pois(lp, k + m) + log_pois(lq, k);
    const double term = std::exp(lt);
    sum += term;
    if (k > k0 + 4 && k > static_cast<long long>(t) &&
        term < sum * 1e-22 + 1e-320) {
      break;
    }
  }
  return std::exp(-t) * sum;
}

std::vector<AvalancheOutcome> resolve_avalanche(const std::vector<int>& pile,
                                                const ModelParams& params,
                                                double tol) {
  if (params.kind != ModelKind::Asap) {
    throw std::invalid_argument("avalanches are an ASAP feature");
  }
  if (find_overloaded(pile) < 0) {
    throw std::invalid_argument("resolve_avalanche: no overloaded site");
  }
  std::map<std::vector<int>, double> done;
  std::deque<std::pair<std::vector<int>, double>> queue;
  queue.emplace_back(pile, 1.0);
  double residual = 1.0;
  long iterations = 0;
  while (!queue.empty() && residual > tol) {
    if (++iterations > 200000) {
      throw ConvergenceError("avalanche cascade failed to resolve", residual,
                             tol);
    }
    auto [cfg, w] = std::move(queue.front());
    queue.pop_front();
    const int at = find_overloaded(cfg);
    if (at < 0) {
      done[cfg] += w;
      residual -= w;
      continue;
    }
    const int site = cfg[at];
    int first = at;
    while (first > 0 && cfg[first - 1] == site) --first;
    int last = at;
    while (last + 1 < static_cast<int>(cfg.size()) && cfg[last + 1] == site) {
      ++last;
    }
    const int count = last - first + 1;
    const AvalancheRates rates = avalanche_probs(count, params);
    // All count particles advance...
    auto all_move = cfg;
    for (int j = first; j <= last; ++j) all_move[j] = site + 1;
    std::sort(all_move.begin(), all_move.end());
    queue.emplace_back(std::move(all_move), w * rates.mu_n);
    // ...or count-1 advance and one stays behind.
    auto partial = cfg;
    for (int j = first + 1; j <= last; ++j) partial[j] = site + 1;
    std::sort(partial.begin(), partial.end());
    queue.emplace_back(std::move(partial), w * rates.lambda_n);
  }
  std::vector<AvalancheOutcome> out;
  out.reserve(done.size());
  for (auto& [cfg, w] : done) {
    out.push_back({Configuration(ModelKind::Asap, cfg), w});
  }
  return out;
}

SparseGenerator build_generator(const ModelParams& params,
                                const TruncationWindow& window, int n,
                                double avalanche_tol) {
  if (window.lo > window.hi) throw std::invalid_argument("empty window");
  if (n < 1) throw std::invalid_argument("need at least one particle");
  SparseGenerator gen;
  {
    std::vector<int> cur;
    enumerate_states(params.kind, n, window.lo, window.hi, cur, gen.states);
  }
  for (size_t i = 0; i < gen.states.size(); ++i) {
    gen.index.emplace(gen.states[i], static_cast<int>(i));
  }
  gen.rows.resize(gen.states.size());
  gen.escape.assign(gen.states.size(), 0.0);
  gen.diag.assign(gen.states.size(), 0.0);
  for (size_t i = 0; i < gen.states.size(); ++i) {
    std::map<int, double> row;
    for (auto& tr : list_transitions(params, gen.states[i].x, avalanche_tol)) {
      const bool inside = tr.target.front() >= window.lo &&
                          tr.target.back() <= window.hi;
      if (!inside) {
        gen.escape[i] += tr.rate;
        continue;
      }
      const auto it = gen.index.find(Configuration(params.kind, tr.target));
      if (it == gen.index.end()) {
        throw std::logic_error("transition left the enumerated state space");
      }
      row[it->second] += tr.rate;
    }
    gen.rows[i].assign(row.begin(), row.end());
    // diag is minus the retained outflow (avalanche residue below tol is
    // not charged).
    double kept = gen.escape[i];
    for (auto& [_, r] : gen.rows[i]) kept += r;
    gen.diag[i] = -kept;
  }
  return gen;
}

Distribution uniformization_distribution(const SparseGenerator& gen,
                                         const Configuration& y, double t,
                                         double tol) {
  const int iy = gen.find(y);
  if (iy < 0) throw std::invalid_argument("Y is not inside the window");
  const size_t ns = gen.states.size();
  double lambda = 0.0;
  for (double d : gen.diag) lambda = std::max(lambda, -d);
  std::vector<double> pi(ns, 0.0), acc(ns, 0.0), next(ns, 0.0);
  double esc = 0.0, esc_acc = 0.0;
  pi[iy] = 1.0;
  Distribution dist;
  if (t <= 0.0 || lambda == 0.0) {
    dist.entries.emplace(y, 1.0);
    dist.captured_mass = 1.0;
    return dist;
  }
  const double lt = lambda * t;
  double weight = std::exp(-lt);
  double covered = weight;
  long k = 0;
  const long cap = 200000;
  for (double& a : acc) a = 0.0;
  while (true) {
    for (size_t i = 0; i < ns; ++i) acc[i] += weight * pi[i];
    esc_acc += weight * esc;
    if (1.0 - covered <= tol || k >= cap) break;
    // One uniformized step: pi <- pi (I + Q/Lambda).
    for (size_t i = 0; i < ns; ++i) {
      next[i] = pi[i] * (1.0 + gen.diag[i] / lambda);
    }
    for (size_t i = 0; i < ns; ++i) {
      if (pi[i] == 0.0) continue;
      const double src = pi[i] / lambda;
      for (const auto& [j, r] : gen.rows[i]) next[j] += src * r;
      esc += src * gen.escape[i];
    }
    pi.swap(next);
    ++k;
    weight *= lt / static_cast<double>(k);
    covered += weight;
  }
  if (1.0 - covered > tol) {
    throw ConvergenceError("uniformization series did not reach tolerance",
                           covered, tol);
  }
  for (size_t i = 0; i < ns; ++i) {
    if (acc[i] != 0.0) dist.entries.emplace(gen.states[i], acc[i]);
    dist.captured_mass += acc[i];
  }
  dist.escaped_mass = esc_acc;
  return dist;
}

namespace {

// Chernoff bound on the total rightward displacement of an ASAP within
// time t: per event the displacement is 1 plus the avalanche advance T,
// with E[z^T] <= z^(2N-3) ((1-mu)/(1-mu z))^(N-1).
long long asap_right_extent(int n, double mu, double t, double tol) {
  if (n == 1) return -1;  // walk; caller uses the Poisson bound
  const double lam = static_cast<double>(n);
  long long best = std::numeric_limits<long long>::max();
  for (int iz = 1; iz <= 400; ++iz) {
    const double z = 1.0 + (1.0 / mu - 1.0) * iz / 401.0;
    const double gz = (1.0 - mu) / (1.0 - mu * z);
    if (!(gz > 0)) continue;
    const double ezT = std::pow(z, 2 * n - 3) * std::pow(gz, n - 1);
    const double ezD = z * ezT;
    const double exponent = lam * t * (ezD - 1.0) - std::log(tol);
    const long long k =
        static_cast<long long>(std::ceil(exponent / std::log(z)));
    best = std::min(best, std::max<long long>(k, 1));
  }
  return best;
}

}  // namespace

TruncationWindow window_for(const ModelParams& params, const Configuration& y,
                            double t, double tol) {
  if (!(t >= 0)) throw std::invalid_argument("time must be nonnegative");
  if (!y.physical()) throw std::invalid_argument("Y must be physical");
  const int n = y.n();
  const double event_rate = static_cast<double>(n);
  auto poisson_extent = [&](double budget) {
    long long k = 1;
    while (poisson_upper_tail(event_rate * t, k + 1) > budget && k < 100000) {
      ++k;
    }
    return k;
  };
  TruncationWindow w;
  if (params.kind == ModelKind::Asap && n > 1) {
    const long long kl = poisson_extent(tol / 2);
    const long long kr = asap_right_extent(n, params.mu, t, tol / 2);
    w.lo = y.x.front() - static_cast<int>(kl);
    w.hi = y.x.back() + static_cast<int>(kr);
    w.escape_bound = std::min(1.0, tol);
  } else {
    const long long k = poisson_extent(tol);
    w.lo = y.x.front() - static_cast<int>(k);
    w.hi = y.x.back() + static_cast<int>(k);
    w.escape_bound = std::min(1.0, poisson_upper_tail(event_rate * t, k + 1));
  }
  return w;
}

OracleSolution uniformization_adaptive(const ModelParams& params,
                                       const Configuration& y, double t,
                                       double tol) {
  const int n = y.n();
  int kl, kr;
  if (params.kind == ModelKind::Asap) {
    kl = static_cast<int>(std::ceil(n * t)) + 8;
    kr = static_cast<int>(std::ceil(n * t * (1.0 + 2.0 * params.mu /
                                                       (1.0 - params.mu)))) +
         12;
  } else {
    const TruncationWindow w = window_for(params, y, t, tol);
    kl = y.x.front() - w.lo;
    kr = w.hi - y.x.back();
  }
  for (int attempt = 0; attempt < 12; ++attempt) {
    TruncationWindow w;
    w.lo = y.x.front() - kl;
    w.hi = y.x.back() + kr;
    const SparseGenerator gen = build_generator(params, w, n);
    Distribution dist =
        uniformization_distribution(gen, y, t, std::min(tol * 0.01, 1e-13));
    if (dist.escaped_mass <= tol) {
      w.escape_bound = std::max(dist.escaped_mass, 0.0);
      return {std::move(dist), w};
    }
    kl = static_cast<int>(kl * 1.6) + 4;
    kr = static_cast<int>(kr * 1.6) + 4;
  }
  throw ResourceError("oracle window did not reach the escape tolerance");
}

namespace {

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(splitmix64(seed)) {}
  double uniform() {
    state = splitmix64(state);
    return u01(state);
  }
};

}  // namespace

std::vector<std::pair<double, Configuration>> gillespie_trajectory(
    const ModelParams& params, const Configuration& y, double t,
    std::uint64_t seed) {
  if (!y.physical()) throw std::invalid_argument("Y must be physical");
  if (!(t >= 0)) throw std::invalid_argument("time must be nonnegative");
  Rng rng(seed);
  std::vector<std::pair<double, Configuration>> traj;
  traj.emplace_back(0.0, y);
  std::vector<int> x = y.x;
  double now = 0.0;
  while (true) {
    double total = 0.0;
    std::vector<Transition> events;
    if (params.kind == ModelKind::Asap) {
      total = static_cast<double>(x.size()) * (params.p + params.q);
    } else {
      events = list_transitions(params, x, 1e-14);
      for (const auto& e : events) total += e.rate;
    }
    if (total <= 0.0) break;
    const double dt = -std::log1p(-rng.uniform()) / total;
    if (now + dt > t) break;
    now += dt;
    if (params.kind == ModelKind::Asap) {
      // Pick particle and direction, move, then cascade with Bernoulli draws.
      const double pick = rng.uniform() * total;
      const int i = std::min<int>(static_cast<int>(pick),
                                  static_cast<int>(x.size()) - 1);
      const double frac = pick - i;
      const bool right = frac < params.p;
      x[i] += right ? 1 : -1;
      std::sort(x.begin(), x.end());
      int at;
      while ((at = find_overloaded(x)) >= 0) {
        const int site = x[at];
        int first = at, last = at;
        while (first > 0 && x[first - 1] == site) --first;
        while (last + 1 < static_cast<int>(x.size()) && x[last + 1] == site) {
          ++last;
        }
        const int count = last - first + 1;
        const AvalancheRates r = avalanche_probs(count, params);
        const bool all = rng.uniform() < r.mu_n;
        for (int j = all ? first : first + 1; j <= last; ++j) x[j] = site + 1;
        std::sort(x.begin(), x.end());
      }
    } else {
      double pick = rng.uniform() * total;
      size_t chosen = events.size() - 1;
      for (size_t e = 0; e < events.size(); ++e) {
        pick -= events[e].rate;
        if (pick <= 0) {
          chosen = e;
          break;
        }
      }
      x = events[chosen].target;
    }
    traj.emplace_back(now, Configuration(params.kind, x));
  }
  return traj;
}

Configuration gillespie_sample(const ModelParams& params,
                               const Configuration& y, double t,
                               std::uint64_t seed) {
  auto traj = gillespie_trajectory(params, y, t, seed);
  return traj.back().second;
}

std::map<Configuration, long> gillespie_histogram(const ModelParams& params,
                                                  const Configuration& y,
                                                  double t, long samples,
                                                  std::uint64_t seed,
                                                  int threads) {
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, 8));
  std::vector<std::map<Configuration, long>> partial(workers);
  auto run = [&](int w) {
    auto& local = partial[w];
    for (long i = w; i < samples; i += workers) {
      const std::uint64_t s =
          splitmix64(seed ^ (0x9E3779B97F4A7C15ull * (i + 1)));
      local[gillespie_sample(params, y, t, s)] += 1;
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::map<Configuration, long> hist;
  for (auto& local : partial) {
    for (auto& [cfg, cnt] : local) hist[cfg] += cnt;
  }
  return hist;
}

}  // namespace bethe
