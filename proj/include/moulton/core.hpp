#pragma once

// Potential, moment of inertia and the derived quantities of the collinear
// N-body problem. Every function here is pure and thread-safe.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moulton/error.hpp"

namespace moulton {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Positive masses m_1..m_N, N >= 2.
class MassVector {
 public:
  explicit MassVector(Vector masses) : m_(std::move(masses)) { validate(); }
  explicit MassVector(const std::vector<double>& masses)
      : m_(Eigen::Map<const Vector>(masses.data(), static_cast<Eigen::Index>(masses.size()))) {
    validate();
  }
  MassVector(std::initializer_list<double> masses) : MassVector(std::vector<double>(masses)) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.size()); }
  double operator[](std::size_t i) const { return m_[static_cast<Eigen::Index>(i)]; }
  const Vector& values() const noexcept { return m_; }
  std::vector<double> to_vector() const { return {m_.data(), m_.data() + m_.size()}; }

  double min() const { return m_.minCoeff(); }
  double total() const { return m_.sum(); }

  MassVector scaled(double c) const { return MassVector(Vector(c * m_)); }

  friend bool operator==(const MassVector& a, const MassVector& b) { return a.m_ == b.m_; }

 private:
  void validate() const {
    if (m_.size() < 2) {
      throw Error(ErrorKind::InvalidArgument, "at least two masses are required");
    }
    for (Eigen::Index i = 0; i < m_.size(); ++i) {
      if (!(m_[i] > 0.0) || !std::isfinite(m_[i])) {
        throw Error(ErrorKind::InvalidMass,
                    "mass " + std::to_string(i + 1) + " must be positive and finite");
      }
    }
  }

  Vector m_;
};

/// Positions r_1..r_N of the bodies on the line.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(Vector positions) : r_(std::move(positions)) {}
  explicit Configuration(const std::vector<double>& positions)
      : r_(Eigen::Map<const Vector>(positions.data(),
                                    static_cast<Eigen::Index>(positions.size()))) {}
  Configuration(std::initializer_list<double> positions)
      : Configuration(std::vector<double>(positions)) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(r_.size()); }
  double operator[](std::size_t i) const { return r_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return r_[static_cast<Eigen::Index>(i)]; }
  const Vector& positions() const noexcept { return r_; }
  std::vector<double> to_vector() const { return {r_.data(), r_.data() + r_.size()}; }

  double diameter() const { return r_.size() == 0 ? 0.0 : r_.maxCoeff() - r_.minCoeff(); }

  Configuration scaled(double c) const { return Configuration(Vector(c * r_)); }
  Configuration shifted(double c) const {
    return Configuration(Vector(r_.array() + c));
  }

 private:
  Vector r_;
};

/// %.17g, enough digits to round-trip a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class NormalizationKind { UnitInertia, UnitLambda };

inline std::string to_string(NormalizationKind kind) {
  return kind == NormalizationKind::UnitInertia ? "unit-inertia" : "unit-lambda";
}

/// Pairs closer than this fraction of the diameter count as a collision.
inline constexpr double kCollisionThreshold = 1e-13;

/// Allowed deviation of I_m from 1 for inputs that must be unit-inertia.
inline constexpr double kNormalizationTolerance = 1e-10;

namespace detail {

inline void require_same_size(const Configuration& x, const MassVector& m) {
  if (x.size() != m.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "configuration has " + std::to_string(x.size()) + " bodies but " +
                    std::to_string(m.size()) + " masses were given");
  }
}

inline void require_collision_free(const Configuration& x) {
  std::vector<double> sorted = x.to_vector();
  std::sort(sorted.begin(), sorted.end());
  const double diameter = sorted.back() - sorted.front();
  const double threshold = kCollisionThreshold * diameter;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = sorted[i] - sorted[i - 1];
    if (!(gap > 0.0) || gap < threshold) {
      throw Error(ErrorKind::Collision, "two bodies coincide (gap " + std::to_string(gap) + ")");
    }
  }
}

inline void require_valid(const Configuration& x, const MassVector& m) {
  require_same_size(x, m);
  require_collision_free(x);
}

}  // namespace detail

/// U(x) = sum_{i<j} m_i m_j / r_ij.
inline double potential(const Configuration& x, const MassVector& m) {
  detail::require_valid(x, m);
  const std::size_t n = x.size();
  double u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      u += m[i] * m[j] / std::abs(x[i] - x[j]);
    }
  }
  return u;
}

/// I(x) = sum_i m_i r_i^2, about the origin.
inline double inertia(const Configuration& x, const MassVector& m) {
  detail::require_same_size(x, m);
  return (m.values().array() * x.positions().array().square()).sum();
}

/// Center of mass (sum m_i r_i) / (sum m_i).
inline double center_of_mass(const Configuration& x, const MassVector& m) {
  detail::require_same_size(x, m);
  return m.values().dot(x.positions()) / m.total();
}

inline Configuration recentered(const Configuration& x, const MassVector& m) {
  return x.shifted(-center_of_mass(x, m));
}

/// Moment of inertia about the center of mass, in the pairwise (Leibniz) form
/// I_G = (1 / sum m) sum_{i<j} m_i m_j r_ij^2.
inline double inertia_about_com(const Configuration& x, const MassVector& m) {
  detail::require_same_size(x, m);
  const std::size_t n = x.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      acc += m[i] * m[j] * d * d;
    }
  }
  return acc / m.total();
}

/// Multiplier of a central configuration, U / 2I. Homogeneous of degree -3.
inline double lambda_of(const Configuration& x, const MassVector& m) {
  const double u = potential(x, m);
  const double i = inertia(x, m);
  if (!(i > 0.0)) {
    throw Error(ErrorKind::ZeroConfiguration, "moment of inertia vanishes");
  }
  return u / (2.0 * i);
}

/// W_m = U_m + I_m, strictly convex on each ordering cone.
inline double W(const Configuration& x, const MassVector& m) {
  return potential(x, m) + inertia(x, m);
}

/// Gradient of W: component i is 2 m_i r_i - sum_{k != i} m_i m_k (r_i - r_k) / r_ik^3.
inline Vector grad_W(const Configuration& x, const MassVector& m) {
  detail::require_valid(x, m);
  const std::size_t n = x.size();
  Vector g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) g[static_cast<Eigen::Index>(i)] = 2.0 * m[i] * x[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      const double f = m[i] * m[j] / (d * d * std::abs(d)) * d;
      g[static_cast<Eigen::Index>(i)] -= f;
      g[static_cast<Eigen::Index>(j)] += f;
    }
  }
  return g;
}

/// Exact Hessian of W. Diagonal 2 m_i + sum_k 2 m_i m_k / r_ik^3, off-diagonal
/// -2 m_i m_j / r_ij^3.
inline Matrix hessian_W(const Configuration& x, const MassVector& m) {
  detail::require_valid(x, m);
  const auto n = static_cast<Eigen::Index>(x.size());
  Matrix h = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = 2.0 * m[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
      const double c =
          2.0 * m[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(j)] / (r * r * r);
      h(i, j) = -c;
      h(j, i) = -c;
      h(i, i) += c;
      h(j, j) += c;
    }
  }
  return h;
}

/// <y, D^2 W(x) y> evaluated through the pairwise identity
/// 2 sum_{i<j} m_i m_j r_ij^-3 (s_i - s_j)^2 + 2 I_m(y), without forming the matrix.
inline double hessian_quadratic_form(const Configuration& x, const MassVector& m,
                                     const Configuration& y) {
  detail::require_valid(x, m);
  detail::require_same_size(y, m);
  const std::size_t n = x.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = std::abs(x[i] - x[j]);
      const double ds = y[i] - y[j];
      acc += m[i] * m[j] * ds * ds / (r * r * r);
    }
  }
  return 2.0 * acc + 2.0 * inertia(y, m);
}

/// x / I_m(x)^{1/2}, a point of the unit-inertia ellipsoid in the same cone.
inline Configuration normalize_inertia(const Configuration& x, const MassVector& m) {
  const double i = inertia(x, m);
  if (!(i > 0.0)) {
    throw Error(ErrorKind::ZeroConfiguration, "cannot normalize a configuration with I = 0");
  }
  return x.scaled(1.0 / std::sqrt(i));
}

/// Rescales x so that lambda_of(result) = 1, using lambda(c x) = c^-3 lambda(x).
inline Configuration normalize_lambda(const Configuration& x, const MassVector& m) {
  return x.scaled(std::cbrt(lambda_of(x, m)));
}

/// phi(x) = (U_m(x) / 2)^{1/3} x, taking unit-inertia configurations to unit-lambda ones.
inline Configuration phi_map(const Configuration& x, const MassVector& m) {
  const double i = inertia(x, m);
  if (std::abs(i - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorKind::NotNormalized,
                "phi_map needs I_m(x) = 1, got " + std::to_string(i));
  }
  return x.scaled(std::cbrt(potential(x, m) / 2.0));
}

/// The constant a in U_m(x) = a W_m(phi(x))^{3/2} on the unit-inertia set.
inline double phi_constant() { return 2.0 / std::pow(3.0, 1.5); }

}  // namespace moulton
