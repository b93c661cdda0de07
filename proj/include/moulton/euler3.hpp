#pragma once

// Collinear three-body central configurations in closed form (Euler).

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "moulton/core.hpp"
#include "moulton/error.hpp"

namespace moulton {

/// Euler's quintic for the ordering (1,2,3). For masses (m1, m2, m3):
///   p(s) = -(m1+m2) s^5 - (3m1+2m2) s^4 - (3m1+m2) s^3
///          + (m2+3m3) s^2 + (2m2+3m3) s + (m2+m3),
/// where s = r23 / r12 at the central configuration.
struct EulerQuintic {
  std::array<double, 6> coefficients{};  // degree 5 first

  double operator()(double s) const {
    double acc = 0.0;
    for (double c : coefficients) acc = acc * s + c;
    return acc;
  }

  double derivative(double s) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      acc = acc * s + static_cast<double>(5 - k) * coefficients[k];
    }
    return acc;
  }

  /// sum |c_k| s^k, the magnitude against which p(s) rounding is measured.
  double scale(double s) const {
    double acc = 0.0;
    for (double c : coefficients) acc = acc * std::abs(s) + std::abs(c);
    return acc;
  }

  int sign_changes() const {
    int changes = 0;
    double last = 0.0;
    for (double c : coefficients) {
      if (c == 0.0) continue;
      if (last != 0.0 && (c > 0.0) != (last > 0.0)) ++changes;
      last = c;
    }
    return changes;
  }
};

namespace detail {
inline void require_three(const MassVector& m) {
  if (m.size() != 3) {
    throw Error(ErrorKind::DimensionMismatch, "Euler's quintic needs exactly three masses");
  }
}
}  // namespace detail

inline EulerQuintic euler_quintic(const MassVector& m) {
  detail::require_three(m);
  const double m1 = m[0], m2 = m[1], m3 = m[2];
  return {{-(m1 + m2), -(3 * m1 + 2 * m2), -(3 * m1 + m2), m2 + 3 * m3, 2 * m2 + 3 * m3,
           m2 + m3}};
}

/// Unique positive root of Euler's quintic: bisection on [0, S] with
/// S = 1 + sum|c_k| / (m1 + m2), then Newton polish.
inline double euler_root(const MassVector& m) {
  const EulerQuintic p = euler_quintic(m);
  double sum_abs = 0.0;
  for (double c : p.coefficients) sum_abs += std::abs(c);
  double lo = 0.0;
  double hi = 1.0 + sum_abs / (m[0] + m[1]);
  if (!(p(lo) > 0.0) || !(p(hi) < 0.0)) {
    throw Error(ErrorKind::RootBracketFailure, "quintic does not change sign on [0, S]");
  }
  while (hi - lo > 1e-10 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    (p(mid) > 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int k = 0; k < 2; ++k) {
    const double next = s - p(s) / p.derivative(s);
    if (next > 0.0 && std::abs(p(next)) < std::abs(p(s))) s = next;
  }
  return s;
}

/// Euler's gauge (0, 1, 1 + s) for the ordering (1,2,3); not centered or normalized.
inline Configuration euler_configuration(const MassVector& m) {
  const double s = euler_root(m);
  return Configuration{0.0, 1.0, 1.0 + s};
}

/// Critical value for masses (1, mu, 1) in the ordering (1,2,3): sqrt(2)/2 + 2 sqrt(2) mu.
inline double symmetric_value(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::InvalidMass, "mu must be positive");
  }
  return std::sqrt(2.0) / 2.0 + 2.0 * std::sqrt(2.0) * mu;
}

/// Critical value for the ordering (1,2,3): U at the Euler configuration moved to
/// zero center of mass and unit inertia.
inline double euler_critical_value(const MassVector& m) {
  return potential(normalize_inertia(recentered(euler_configuration(m), m), m), m);
}

/// The two critical values of the mass family (1, mu, 1) at mu = 9: heavy body in
/// the middle, 37/sqrt(2), and heavy body at an end, equal to the (1,2,3) value
/// for masses (1, 1, 9). The second comes from the quintic root s = 2.01726 for
/// (1, 1, 9). (0, 1, 3) is central only for mu = 167/19, where p(2) = 19 mu - 167
/// vanishes, so (51/6) sqrt(118/11) = 27.83964 is not the critical value.
inline std::pair<double, double> three_body_gap() {
  const double middle = symmetric_value(9.0);
  const double end = euler_critical_value({1.0, 1.0, 9.0});
  if (!(end - middle > 1.6)) {
    throw Error(ErrorKind::InvalidArgument, "three-body gap collapsed");
  }
  return {middle, end};
}

}  // namespace moulton
