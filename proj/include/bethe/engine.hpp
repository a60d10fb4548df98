#ifndef BETHE_ENGINE_HPP
#define BETHE_ENGINE_HPP

#include "bethe/contour.hpp"
#include "bethe/model.hpp"
#include "bethe/permutation.hpp"

#include <map>

namespace bethe {

// Value of one quadrature evaluation together with honest error accounting.
// cancellation is max |integrand| on the grid divided by |value|; results
// with cancellation above 1e12 should not be trusted.
struct ProbabilityResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  double cancellation = 0.0;
  int nodes_used = 0;
  bool converged = true;

  bool trusted() const { return cancellation <= 1e12; }
};

struct Distribution {
  std::map<Configuration, double> entries;
  double captured_mass = 0.0;
  double escaped_mass = 0.0;

  double at(const Configuration& c) const {
    auto it = entries.find(c);
    return it == entries.end() ? 0.0 : it->second;
  }
};

struct EvalOptions {
  int threads = 0;  // 0 = hardware concurrency
};

// Certified default contour for the given model and particle count.
ContourSpec make_contour(const ModelParams& params, int n_particles,
                         RadiusMode mode = RadiusMode::Small);

// P_Y(X; t): the N-fold small-contour integral summed over all N!
// permutation terms.  X may be any lattice point (the formula defines the
// analytic continuation u on Z^N); physical X yield probabilities.
ProbabilityResult transition_probability(const ModelParams& params,
                                         const Configuration& y,
                                         const Configuration& x, double t,
                                         const ContourSpec& contour,
                                         const EvalOptions& opts = {});

// d/dt u(X; t), computed by inserting sum_i eps(xi_i) under the integral.
ProbabilityResult transition_time_derivative(const ModelParams& params,
                                             const Configuration& y,
                                             const Configuration& x, double t,
                                             const ContourSpec& contour,
                                             const EvalOptions& opts = {});

// As transition_probability, but with the scattering factor overridden
// while the energy term keeps energy_params.p/q.  Used for the ASAP's
// coefficient-substituted ASEP form.
ProbabilityResult transition_probability_scattering(
    const ScatteringSpec& scattering, const ModelParams& energy_params,
    const std::vector<int>& y, const std::vector<int>& x, double t,
    const ContourSpec& contour, const EvalOptions& opts = {});

// Raw single-permutation integral I(sigma) at t = 0 (no exponential factor).
Complex i_sigma_at_t0(const ModelParams& params, const PermutationTerm& term,
                      const Configuration& y, const Configuration& x,
                      const ContourSpec& contour);

// I(sigma) for every permutation of S_N in lexicographic order, evaluated on
// one shared grid at exactly contour.nodes nodes.  Batch driver for the
// vanishing/cancellation checks.
std::vector<Complex> i_sigma_all_t0(const ModelParams& params,
                                    const Configuration& y,
                                    const Configuration& x,
                                    const ContourSpec& contour,
                                    const EvalOptions& opts = {});

// Product of S-matrices over the inversion set of sigma; identity -> 1.
Complex a_sigma(const ModelParams& params, const PermutationTerm& term,
                const std::vector<Complex>& xi);

// Gaussian binomial coefficient with base tau (ordinary binomial at tau=1);
// 0 when k < 0 or k > n.
double q_binomial(int n, int k, double tau);

// P(x_m(t) = x) for the AZRP via the subset expansion over a large contour.
ProbabilityResult azrp_mth_particle_distribution(int m, const Configuration& y,
                                                 int x, double t,
                                                 const ModelParams& params,
                                                 const ContourSpec& contour_large,
                                                 const EvalOptions& opts = {});

// The bijection f: AZRP -> ASEP configurations, (x_i) -> (x_i + i), and its
// inverse.  Inputs must be physical in the source model.
Configuration azrp_to_asep(const Configuration& x);
Configuration asep_to_azrp(const Configuration& x);

// P_Y(X; t) for every physical X with coordinates in [lo, hi], evaluated on
// a shared spectral grid in extended precision.  The window width must not
// exceed the node count (0 = choose automatically).
Distribution transition_distribution(const ModelParams& params,
                                     const Configuration& y, double t, int lo,
                                     int hi, int nodes = 0,
                                     const EvalOptions& opts = {});

}  // namespace bethe

#endif  // BETHE_ENGINE_HPP
