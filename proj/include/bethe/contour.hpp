#ifndef BETHE_CONTOUR_HPP
#define BETHE_CONTOUR_HPP

#include "bethe/model.hpp"

namespace bethe {

// Functional form plus raw coefficients of the two-body scattering factor,
// decoupled from ModelParams so that substituted coefficients (the ASAP's
// ASEP-form rewrite) can drive the same quadrature machinery.
struct ScatteringSpec {
  ModelKind form = ModelKind::Asep;
  double c1 = 0.5;   // p (ASEP/AZRP form) or mu (PushASEP/ASAP form)
  double c2 = 0.5;   // q (ASEP/AZRP form) or lambda (PushASEP/ASAP form)
  double scale = 0.5;  // clearance scale used by contour certification

  static ScatteringSpec for_model(const ModelParams& params);
  // ASEP-form factor with arbitrary coefficients p_c, q_c.
  static ScatteringSpec asep_form(double p_c, double q_c);
};

enum class RadiusMode { Small, Large };

// Quadrature contour: an origin-centered circle with `nodes` equispaced
// points (power of two), optionally doubled adaptively up to max_nodes
// until successive values agree to rel_tol.
struct ContourSpec {
  double radius = 0.25;
  int nodes = 32;
  bool adaptive = true;
  int max_nodes = 4096;
  double rel_tol = 1e-10;

  static ContourSpec with_radius(double r) {
    ContourSpec c;
    c.radius = r;
    return c;
  }
  static ContourSpec fixed(double r, int m) {
    ContourSpec c;
    c.radius = r;
    c.nodes = m;
    c.adaptive = false;
    return c;
  }
};

// Certified contour radius for the given mode.  Small is the
// transition-probability contour: the residue cancellations behind the
// delta initial condition need the non-origin scattering poles strictly
// OUTSIDE the circle for the ASEP/AZRP forms and strictly INSIDE it for
// the PushASEP/ASAP forms (and for the coefficient-substituted ASEP form
// with a negative first coefficient).  Large is the marginal contour with
// every finite pole inside.  Certification samples >= 4096 angle pairs of
// the scattering denominator and subtracts a Lipschitz slack, so the grid
// minimum is a valid lower bound on the clearance.
double choose_radius(const ScatteringSpec& spec, int n_particles,
                     RadiusMode mode);
double choose_radius(ModelKind model, const ModelParams& params,
                     int n_particles, RadiusMode mode);

// Per-variable contour radii (currently equal; kept as a vector because the
// evaluators support per-variable circles).
std::vector<double> contour_radii(const ScatteringSpec& spec, int n_particles,
                                  RadiusMode mode);

// Exposed for tests: certification predicates.
bool certify_radius(const ScatteringSpec& spec, double radius, RadiusMode mode);
bool certify_radius_pair(const ScatteringSpec& spec, double r_alpha,
                         double r_beta);

// Worst contour-to-pole distance ratio over all variable pairs (< 1 for a
// certified configuration); the node-count rule is ratio^(M - exponent).
double pole_distance_ratio(const ScatteringSpec& spec,
                           const std::vector<double>& radii);

}  // namespace bethe

#endif  // BETHE_CONTOUR_HPP
