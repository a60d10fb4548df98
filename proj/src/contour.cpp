#include "bethe/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bethe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kGrid = 64;  // 64 x 64 = 4096 angle pairs

// Scattering denominator at (a, b) = (xi_alpha, xi_beta).
Complex denom_at(const ScatteringSpec& s, Complex a, Complex b) {
  switch (s.form) {
    case ModelKind::Asep:
    case ModelKind::Azrp:
      return s.c1 + s.c2 * a * b - a;
    case ModelKind::PushAsep:
      return s.c1 + s.c2 * a * b - b;
    case ModelKind::Asap:
      return s.c1 + s.c2 * a - a * b;
  }
  return {};
}

double angle_lipschitz(const ScatteringSpec& s, double ra, double rb) {
  const double c2 = std::abs(s.c2);
  switch (s.form) {
    case ModelKind::Asep:
    case ModelKind::Azrp:
    case ModelKind::PushAsep:
      // |d/da| <= 1 + c2 rb, |d/db| <= 1 + c2 ra (covers both placements).
      return ra * (1.0 + c2 * rb) + rb * (1.0 + c2 * ra);
    case ModelKind::Asap:
      return ra * (c2 + rb) + rb * ra;
  }
  return 0.0;
}

// Minimum of |denom| over the sampled bitorus minus the Lipschitz slack.
double certified_min(const ScatteringSpec& s, double ra, double rb) {
  double min_abs = std::numeric_limits<double>::infinity();
  const double h = 2.0 * kPi / kGrid;
  for (int i = 0; i < kGrid; ++i) {
    const Complex a = std::polar(ra, h * i);
    for (int j = 0; j < kGrid; ++j) {
      const Complex b = std::polar(rb, h * j);
      min_abs = std::min(min_abs, std::abs(denom_at(s, a, b)));
    }
  }
  return min_abs - angle_lipschitz(s, ra, rb) * (h / 2.0);
}

// The transition-probability contour class of each scattering form.  The
// residue cancellations behind the delta initial condition put the
// non-origin poles OUTSIDE the circle for the ASEP form with c1 >= 0
// (ASEP, AZRP) and INSIDE it for the reciprocal/avalanche forms (PushASEP,
// ASAP, and the coefficient-substituted ASEP form with c1 < 0).
bool poles_enclosed(const ScatteringSpec& s) {
  switch (s.form) {
    case ModelKind::Asep:
    case ModelKind::Azrp:
      return s.c1 < 0.0;
    case ModelKind::PushAsep:
    case ModelKind::Asap:
      return true;
  }
  return false;
}

// Poles strictly outside: largest admissible radius.
double outside_cap(const ScatteringSpec& s) {
  const double c1 = std::abs(s.c1), c2 = std::abs(s.c2);
  switch (s.form) {
    case ModelKind::Asep:
    case ModelKind::Azrp:
    case ModelKind::PushAsep:
      if (c1 == 0.0 && c2 == 0.0) return std::numeric_limits<double>::infinity();
      if (c1 == 0.0) return 1.0 / c2;
      if (c2 == 0.0) return c1;
      return (-1.0 + std::sqrt(1.0 + 4.0 * c1 * c2)) / (2.0 * c2);
    case ModelKind::Asap:
      return (-c2 + std::sqrt(c2 * c2 + 4.0 * c1)) / 2.0;
  }
  return 0.0;
}

// Poles strictly inside: smallest admissible radius.
double inside_floor(const ScatteringSpec& s) {
  const double c1 = std::abs(s.c1), c2 = std::abs(s.c2);
  switch (s.form) {
    case ModelKind::Asep:
    case ModelKind::Azrp:
    case ModelKind::PushAsep:
      if (c2 == 0.0) return c1;
      return (1.0 + std::sqrt(1.0 + 4.0 * c1 * c2)) / (2.0 * c2);
    case ModelKind::Asap:
      return (c2 + std::sqrt(c2 * c2 + 4.0 * c1)) / 2.0;
  }
  return 0.0;
}

bool poles_strictly_outside(const ScatteringSpec& s, double r) {
  return r < outside_cap(s);
}

bool poles_strictly_inside(const ScatteringSpec& s, double r) {
  return r > inside_floor(s);
}

}  // namespace

ScatteringSpec ScatteringSpec::for_model(const ModelParams& params) {
  ScatteringSpec s;
  s.form = params.kind;
  switch (params.kind) {
    case ModelKind::Asep:
    case ModelKind::Azrp:
      s.c1 = params.p;
      s.c2 = params.q;
      s.scale = std::max(params.p, 1e-8);
      break;
    case ModelKind::PushAsep:
    case ModelKind::Asap:
      s.c1 = params.mu;
      s.c2 = params.lambda;
      s.scale = std::max(params.mu, 1e-8);
      break;
  }
  return s;
}

ScatteringSpec ScatteringSpec::asep_form(double p_c, double q_c) {
  ScatteringSpec s;
  s.form = ModelKind::Asep;
  s.c1 = p_c;
  s.c2 = q_c;
  s.scale = std::max(std::abs(p_c), 1e-8);
  return s;
}

bool certify_radius(const ScatteringSpec& spec, double radius, RadiusMode mode) {
  if (!(radius > 0.0)) return false;
  const double clearance = 0.1 * spec.scale;
  if (mode == RadiusMode::Large) {
    // marginal contour: every finite pole (including 1) strictly inside
    if (!poles_strictly_inside(spec, radius) || radius <= 1.05) return false;
    return certified_min(spec, radius, radius) >= clearance &&
           radius - 1.0 >= 0.05;
  }
  const bool enclosed = poles_enclosed(spec)
                            ? poles_strictly_inside(spec, radius)
                            : poles_strictly_outside(spec, radius);
  return enclosed && certified_min(spec, radius, radius) >= clearance;
}

bool certify_radius_pair(const ScatteringSpec& spec, double r_alpha,
                         double r_beta) {
  return r_alpha == r_beta && certify_radius(spec, r_alpha, RadiusMode::Small);
}

double pole_distance_ratio(const ScatteringSpec& spec,
                           const std::vector<double>& radii) {
  if (radii.size() < 2) return 0.05;
  const double r = *std::max_element(radii.begin(), radii.end());
  const double c1 = std::abs(spec.c1), c2 = std::abs(spec.c2);
  double ratio = 0.05;
  if (poles_enclosed(spec)) {
    // nearest pole below the circle, both slices of the zero set
    switch (spec.form) {
      case ModelKind::Asap:
        ratio = std::max((c2 + c1 / r) / r, c1 / ((r - c2) * r));
        break;
      default:
        ratio = std::max(c1 / (r * (c2 * r - 1.0)), (r + c1) / (c2 * r * r));
        break;
    }
  } else {
    switch (spec.form) {
      case ModelKind::Asap:
        ratio = r * (c2 + r) / c1;
        break;
      default:
        ratio = c1 > 0 ? r * (1.0 + c2 * r) / c1 : c2 * r;
        break;
    }
  }
  return std::min(std::max(ratio, 0.05), 0.999);
}

std::vector<double> contour_radii(const ScatteringSpec& spec, int n_particles,
                                  RadiusMode mode) {
  return std::vector<double>(n_particles,
                             choose_radius(spec, n_particles, mode));
}

double choose_radius(const ScatteringSpec& spec, int n_particles,
                     RadiusMode mode) {
  if (n_particles < 1) throw std::invalid_argument("choose_radius: N >= 1");
  if (n_particles == 1) {
    // No scattering factors; only the origin singularity remains.
    return mode == RadiusMode::Small ? 0.9 : 2.0;
  }
  double r;
  bool grow;
  if (mode == RadiusMode::Large) {
    r = 1.4 * std::max(inside_floor(spec), 1.2);
    grow = true;
  } else if (poles_enclosed(spec)) {
    r = 1.5 * inside_floor(spec);
    grow = true;
  } else {
    // Keep a healthy pole-distance ratio: the quadrature error decays like
    // (r/rho)^M, so sitting at the certification edge is far too slow.
    r = std::min(0.6 * outside_cap(spec), 0.95);
    grow = false;
  }
  int tries = 0;
  while (!certify_radius(spec, r, mode)) {
    r *= grow ? 1.2 : 0.75;
    if (++tries > 20) {
      throw std::runtime_error(
          "choose_radius: certification failed after 20 adjustments");
    }
  }
  return r;
}

double choose_radius(ModelKind model, const ModelParams& params,
                     int n_particles, RadiusMode mode) {
  (void)model;
  return choose_radius(ScatteringSpec::for_model(params), n_particles, mode);
}

}  // namespace bethe
