#ifndef BETHE_ORACLE_HPP
#define BETHE_ORACLE_HPP

#include "bethe/engine.hpp"
#include "bethe/model.hpp"

#include <cstdint>
#include <map>

namespace bethe {

// All particles confined to [lo, hi]; escape_bound is a certified upper
// bound on the probability mass reaching the boundary by the target time.
struct TruncationWindow {
  int lo = 0;
  int hi = 0;
  double escape_bound = 0.0;

  int width() const { return hi - lo + 1; }
};

// Exact truncated generator.  Off-diagonal rates live in rows; transitions
// leaving the window are redirected to an absorbing escape state whose rate
// is tracked per row.  diag[i] = -(sum of rows[i] + escape[i]).
struct SparseGenerator {
  std::vector<Configuration> states;
  std::map<Configuration, int> index;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> escape;
  std::vector<double> diag;

  int find(const Configuration& c) const {
    auto it = index.find(c);
    return it == index.end() ? -1 : it->second;
  }
};

struct AvalancheOutcome {
  Configuration config;
  double weight = 0.0;
};

// Upper tail P(X >= k) of a Poisson(lambda) variable.
double poisson_upper_tail(double lambda, long long k);

// Single-particle continuous-time walk probability of displacement m at
// time t (rates p right / q left), by direct series summation.
double walk_probability(double p, double q, long long m, double t);

// Enumerates the cascade started from a configuration with one overloaded
// site, breadth-first, until the unresolved probability drops below tol.
std::vector<AvalancheOutcome> resolve_avalanche(const std::vector<int>& pile,
                                                const ModelParams& params,
                                                double tol);

SparseGenerator build_generator(const ModelParams& params,
                                const TruncationWindow& window, int n,
                                double avalanche_tol = 1e-14);

// Row of exp(Qt) for the initial state Y via uniformization.
Distribution uniformization_distribution(const SparseGenerator& gen,
                                         const Configuration& y, double t,
                                         double tol);

// A-priori window sizing: Poisson tail of the total event count for the
// jump models; a compound Chernoff bound covering avalanche advances for
// the ASAP (rigorous, deliberately conservative).
TruncationWindow window_for(const ModelParams& params, const Configuration& y,
                            double t, double tol);

// Grows the window until the exact escaped mass reported by uniformization
// drops below tol; the practical oracle entry point.
struct OracleSolution {
  Distribution dist;
  TruncationWindow window;
};
OracleSolution uniformization_adaptive(const ModelParams& params,
                                       const Configuration& y, double t,
                                       double tol);

// Exact-in-law sample of the state at time t; deterministic given the seed.
Configuration gillespie_sample(const ModelParams& params,
                               const Configuration& y, double t,
                               std::uint64_t seed);

// Event-time trajectory (time, configuration) including the initial state.
std::vector<std::pair<double, Configuration>> gillespie_trajectory(
    const ModelParams& params, const Configuration& y, double t,
    std::uint64_t seed);

// Empirical distribution of `samples` independent Gillespie runs; sample i
// uses a stream derived from (seed, i), so the histogram does not depend on
// the worker count.
std::map<Configuration, long> gillespie_histogram(const ModelParams& params,
                                                  const Configuration& y,
                                                  double t, long samples,
                                                  std::uint64_t seed,
                                                  int threads = 0);

}  // namespace bethe

#endif  // BETHE_ORACLE_HPP
