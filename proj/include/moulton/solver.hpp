#pragma once

// Moulton central configurations by damped Newton minimization of
// W_m = U_m + I_m on a fixed ordering cone.
//
// W_m is proper and strictly convex on every cone, with Hessian spectrum
// bounded below by 2 min(m), so the minimizer exists, is unique, and is the
// central configuration of that cone normalized by lambda = 1.

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "moulton/core.hpp"
#include "moulton/error.hpp"
#include "moulton/permutations.hpp"

namespace moulton {

/// Snapshot handed to SolverOptions::on_step after each accepted step.
struct NewtonStep {
  int iteration = 0;
  double w_before = 0.0;
  double w_after = 0.0;
  double step_length = 0.0;
  double gradient_norm = 0.0;  // max-norm after the step
  const Configuration* iterate = nullptr;
};

struct SolverOptions {
  double gradient_tolerance = 1e-12;  // relative to the initial gradient max-norm
  double absolute_floor = 1e-13;
  int max_iterations = 200;
  double boundary_fraction = 0.9;
  std::function<void(const NewtonStep&)> on_step;

  void validate() const {
    if (!(gradient_tolerance > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "gradient tolerance must be positive");
    }
    if (!(absolute_floor > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "absolute gradient floor must be positive");
    }
    if (max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "max_iterations must be >= 1");
    if (!(boundary_fraction > 0.0 && boundary_fraction < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "boundary_fraction must lie in (0, 1)");
    }
  }
};

struct CentralConfigSolution {
  Configuration configuration;
  Ordering ordering;
  NormalizationKind normalization = NormalizationKind::UnitLambda;
  double critical_value = 0.0;  // U at the unit-inertia representative
  double lambda = 0.0;
  double inertia = 0.0;
  double com_residual = 0.0;  // |sum m_i r_i|
  int iterations = 0;
  double final_gradient_norm = 0.0;
};

/// Raised when the iteration budget runs out; carries the last iterate.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, Configuration last, double gradient_norm,
                     int iterations)
      : Error(ErrorKind::NoConvergence, what),
        last_iterate_(std::move(last)),
        gradient_norm_(gradient_norm),
        iterations_(iterations) {}

  const Configuration& last_iterate() const noexcept { return last_iterate_; }
  double gradient_norm() const noexcept { return gradient_norm_; }
  int iterations() const noexcept { return iterations_; }

 private:
  Configuration last_iterate_;
  double gradient_norm_;
  int iterations_;
};

namespace detail {

inline void require_matching(const MassVector& m, const Ordering& s) {
  if (m.size() != s.size()) {
    throw Error(ErrorKind::DimensionMismatch, "ordering has " + std::to_string(s.size()) +
                                                  " bodies but " + std::to_string(m.size()) +
                                                  " masses were given");
  }
}

/// Largest t with x + t d still in the closed cone (infinity if unbounded).
inline double max_step_in_cone(const Configuration& x, const Vector& d, const Ordering& s) {
  double t_max = std::numeric_limits<double>::infinity();
  for (std::size_t p = 1; p < s.size(); ++p) {
    const auto a = static_cast<std::size_t>(s(p) - 1);
    const auto b = static_cast<std::size_t>(s(p + 1) - 1);
    const double gap = x[b] - x[a];
    const double closing = d[static_cast<Eigen::Index>(b)] - d[static_cast<Eigen::Index>(a)];
    if (closing < 0.0) t_max = std::min(t_max, gap / -closing);
  }
  return t_max;
}

/// Size of the gradient that rounding alone can produce at x.
inline double gradient_roundoff(const Configuration& x, const MassVector& m) {
  double scale = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = 2.0 * m[i] * std::abs(x[i]);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double r = x[i] - x[k];
      row += m[i] * m[k] / (r * r);
    }
    scale = std::max(scale, row);
  }
  return 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

inline double max_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace detail

/// Bodies equally spaced on [-1, 1] in the order s, shifted to zero center of mass.
inline Configuration initial_iterate(const MassVector& m, const Ordering& s) {
  detail::require_matching(m, s);
  const std::size_t n = s.size();
  Configuration x(Vector::Zero(static_cast<Eigen::Index>(n)));
  for (std::size_t p = 1; p <= n; ++p) {
    x[static_cast<std::size_t>(s(p) - 1)] =
        -1.0 + 2.0 * static_cast<double>(p - 1) / static_cast<double>(n - 1);
  }
  return recentered(x, m);
}

/// Fills the derived fields of a solution from its configuration.
inline CentralConfigSolution make_solution(Configuration x, const MassVector& m, Ordering s,
                                           NormalizationKind kind, int iterations,
                                           double gradient_norm) {
  CentralConfigSolution sol{std::move(x), std::move(s)};
  sol.normalization = kind;
  sol.lambda = lambda_of(sol.configuration, m);
  sol.inertia = inertia(sol.configuration, m);
  sol.com_residual = std::abs(m.values().dot(sol.configuration.positions()));
  sol.critical_value = potential(normalize_inertia(sol.configuration, m), m);
  sol.iterations = iterations;
  sol.final_gradient_norm = gradient_norm;
  return sol;
}

/// Unique critical point of W_m in the cone of s, starting from `start`.
inline CentralConfigSolution minimize_W(const MassVector& m, const Ordering& s,
                                        const SolverOptions& opts, Configuration start) {
  opts.validate();
  detail::require_matching(m, s);
  detail::require_same_size(start, m);
  if (!in_cone(start, s)) {
    throw Error(ErrorKind::InvalidArgument, "starting point is not inside the cone of " +
                                                to_string(s));
  }

  Configuration x = std::move(start);
  double w = W(x, m);
  Vector g = grad_W(x, m);
  double gnorm = detail::max_norm(g);
  const double threshold = std::max(
      {opts.gradient_tolerance * gnorm, opts.absolute_floor, detail::gradient_roundoff(x, m)});

  // Newton step from x, capped by the fraction-to-boundary rule.
  auto newton = [&](const Configuration& at, const Vector& grad, double& cap) {
    Eigen::LLT<Matrix> llt(hessian_W(at, m));
    Vector d = -llt.solve(grad);
    cap = std::min(1.0, opts.boundary_fraction * detail::max_step_in_cone(at, d, s));
    return d;
  };

  int it = 0;
  bool converged = gnorm <= threshold;
  while (!converged && it < opts.max_iterations) {
    ++it;
    double t = 0.0;
    const Vector d = newton(x, g, t);
    const double slope = g.dot(d);

    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      Configuration trial(Vector(x.positions() + t * d));
      if (!in_cone(trial, s)) continue;
      const double w_trial = W(trial, m);
      // Below rounding of W the decrease is invisible; the gradient must shrink instead.
      const bool resolvable = -t * slope > 16.0 * std::numeric_limits<double>::epsilon() * std::abs(w);
      Vector g_trial;
      bool ok = false;
      if (resolvable) {
        ok = w_trial <= w + 1e-4 * t * slope;
      } else {
        g_trial = grad_W(trial, m);
        ok = detail::max_norm(g_trial) < gnorm;
      }
      if (ok) {
        const double w_before = w;
        x = std::move(trial);
        w = w_trial;
        g = resolvable ? grad_W(x, m) : std::move(g_trial);
        gnorm = detail::max_norm(g);
        accepted = true;
        if (opts.on_step) opts.on_step({it, w_before, w, t, gnorm, &x});
        break;
      }
    }
    if (!accepted) {
      // W is flat to rounding here; accept if the gradient is at its noise level.
      if (gnorm <= std::max(threshold, detail::gradient_roundoff(x, m))) {
        converged = true;
        break;
      }
      throw NoConvergenceError("line search stalled in cone " + to_string(s), x, gnorm, it);
    }
    converged = gnorm <= std::max(threshold, detail::gradient_roundoff(x, m));
  }
  if (!converged) {
    throw NoConvergenceError("no convergence after " + std::to_string(it) +
                                 " iterations in cone " + to_string(s) +
                                 " (gradient " + std::to_string(gnorm) + ")",
                             x, gnorm, it);
  }

  // Quadratic convergence: two more full steps take the gradient to rounding level.
  for (int polish = 0; polish < 2; ++polish) {
    double t = 0.0;
    const Vector d = newton(x, g, t);
    Configuration trial(Vector(x.positions() + t * d));
    if (!in_cone(trial, s)) break;
    Vector g_trial = grad_W(trial, m);
    const double n_trial = detail::max_norm(g_trial);
    if (!(n_trial < gnorm)) break;
    x = std::move(trial);
    g = std::move(g_trial);
    gnorm = n_trial;
  }

  return make_solution(std::move(x), m, s, NormalizationKind::UnitLambda, it, gnorm);
}

inline CentralConfigSolution minimize_W(const MassVector& m, const Ordering& s,
                                        const SolverOptions& opts = {}) {
  detail::require_matching(m, s);
  return minimize_W(m, s, opts, initial_iterate(m, s));
}

/// Unit-inertia representative x = sqrt(2) c U(c)^{-1/2} of a unit-lambda solution c.
inline CentralConfigSolution to_unit_inertia(const CentralConfigSolution& c,
                                             const MassVector& m) {
  const double u = potential(c.configuration, m);
  Configuration x = c.configuration.scaled(std::sqrt(2.0) / std::sqrt(u));
  return make_solution(std::move(x), m, c.ordering, NormalizationKind::UnitInertia,
                       c.iterations, c.final_gradient_norm);
}

/// The unique central configuration in the cone of s with I_m = 1.
inline CentralConfigSolution moulton_configuration(const MassVector& m, const Ordering& s,
                                                   const SolverOptions& opts = {}) {
  return to_unit_inertia(minimize_W(m, s, opts), m);
}

/// Minimum of U_m on the unit-inertia configurations with ordering s.
inline double critical_value(const MassVector& m, const Ordering& s,
                             const SolverOptions& opts = {}) {
  return potential(moulton_configuration(m, s, opts).configuration, m);
}

}  // namespace moulton
