#ifndef BETHE_FORMULAS_HPP
#define BETHE_FORMULAS_HPP

#include "bethe/contour.hpp"

namespace bethe::detail {

// Full scattering value (prefactor included) for a ScatteringSpec at
// (a, b) = (xi_alpha, xi_beta).  Shared by the double and __float128
// table builders; must agree with s_matrix_parts.
template <class C>
C s_value(const ScatteringSpec& s, const C& a, const C& b) {
  switch (s.form) {
    case ModelKind::Asep: {
      const C w = s.c1 + s.c2 * a * b;
      return -((w - b) / (w - a));
    }
    case ModelKind::PushAsep: {
      const C w = s.c1 + s.c2 * a * b;
      return -((w - a) / (w - b)) * (b / a);
    }
    case ModelKind::Asap:
      return -((s.c1 + s.c2 * b - b * a) / (s.c1 + s.c2 * a - b * a));
    case ModelKind::Azrp: {
      const C w = s.c1 + s.c2 * a * b;
      return -((w - b) / (w - a)) * (a / b);
    }
  }
  return C{};
}

template <class C>
C energy_value(double p, double q, const C& xi) {
  return p / xi + q * xi - 1.0;
}

}  // namespace bethe::detail

#endif  // BETHE_FORMULAS_HPP
