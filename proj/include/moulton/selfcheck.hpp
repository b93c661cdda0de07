#pragma once

// Invariant suite run by `moulton check`. Each check counts the assertions it
// evaluated and stops at its first failure.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "moulton/core.hpp"
#include "moulton/euler3.hpp"
#include "moulton/permutations.hpp"
#include "moulton/solver.hpp"
#include "moulton/spectrum.hpp"

namespace moulton::check {

/// Derivative routines under test. Defaults are the library's.
struct Kernels {
  std::function<Vector(const Configuration&, const MassVector&)> gradient = grad_W;
  std::function<Matrix(const Configuration&, const MassVector&)> hessian = hessian_W;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t assertions = 0;
  std::string detail;
};

struct Summary {
  std::vector<CheckResult> results;
  std::size_t assertions = 0;
  bool passed = true;
  std::optional<std::string> first_failure;
};

/// Uniform [0,1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random collision-free configuration: gaps in [0.2, 1.5], bodies shuffled,
/// shifted by up to +-1.
inline Configuration random_configuration(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> r(n);
  double pos = -1.0 + 2.0 * uniform01(rng);
  for (double& v : r) {
    v = pos;
    pos += 0.2 + 1.3 * uniform01(rng);
  }
  for (std::size_t i = n; i > 1; --i) {
    std::swap(r[i - 1], r[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i))]);
  }
  return Configuration(r);
}

inline MassVector random_masses(std::mt19937_64& rng, std::size_t n, double lo = 0.1,
                                double hi = 10.0) {
  std::vector<double> m(n);
  for (double& v : m) v = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * uniform01(rng));
  return MassVector(m);
}

namespace detail {

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  /// Records one assertion; returns false once the check has failed.
  bool expect(bool ok, const std::string& what) {
    if (!result_.passed) return false;
    ++result_.assertions;
    if (!ok) {
      result_.passed = false;
      result_.detail = what;
    }
    return ok;
  }
  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace detail

inline CheckResult check_gradient(const Kernels& k, std::size_t points, std::uint64_t seed) {
  detail::Recorder rec("gradient-finite-difference");
  std::mt19937_64 rng(seed);
  const double h = 1e-6;
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t n = 2 + p % 5;
    const MassVector m = random_masses(rng, n);
    const Configuration x = random_configuration(rng, n);
    const Vector g = k.gradient(x, m);
    Vector fd(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      Configuration xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[static_cast<Eigen::Index>(i)] = (W(xp, m) - W(xm, m)) / (2 * h);
    }
    const double err = (g - fd).lpNorm<Eigen::Infinity>() / g.lpNorm<Eigen::Infinity>();
    if (!rec.expect(err <= 1e-6, "relative error " + std::to_string(err) + " at point " +
                                     std::to_string(p))) {
      break;
    }
  }
  return rec.take();
}

inline CheckResult check_hessian(const Kernels& k, std::size_t points, std::uint64_t seed) {
  detail::Recorder rec("hessian-quadratic-form-and-spectrum");
  std::mt19937_64 rng(seed);
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t n = 2 + p % 5;
    const MassVector m = random_masses(rng, n);
    const Configuration x = random_configuration(rng, n);
    Configuration y(Vector::Zero(static_cast<Eigen::Index>(n)));
    for (std::size_t i = 0; i < n; ++i) y[i] = 2.0 * uniform01(rng) - 1.0;

    const Matrix hess = k.hessian(x, m);
    const double direct = y.positions().dot(hess * y.positions());
    const double identity = hessian_quadratic_form(x, m, y);
    if (!rec.expect(detail::rel_err(direct, identity) <= 1e-12,
                    "quadratic form mismatch " + std::to_string(direct) + " vs " +
                        std::to_string(identity))) {
      break;
    }
    const double lowest = Eigen::SelfAdjointEigenSolver<Matrix>(hess).eigenvalues().minCoeff();
    if (!rec.expect(lowest >= 2.0 * m.min() - 1e-9,
                    "smallest eigenvalue " + std::to_string(lowest) + " below 2 min(m)")) {
      break;
    }
  }
  return rec.take();
}

inline CheckResult check_trichotomy() {
  detail::Recorder rec("trichotomy-S4");
  const auto all = enumerate_orderings(4);
  for (const auto& s : all) {
    for (const auto& t : all) {
      const TrichotomyResult r = betweenness_witness(s, t);
      const bool equal = s == t;
      const bool mirrored = s == mirror(t);
      bool ok = false;
      switch (r.tag) {
        case TrichotomyResult::Tag::Equal: ok = equal; break;
        case TrichotomyResult::Tag::Reversed: ok = mirrored && !equal; break;
        case TrichotomyResult::Tag::Witness:
          ok = !equal && !mirrored && is_between(s, r.i, r.j, r.k) &&
               !is_between(t, r.i, r.j, r.k);
          break;
      }
      if (!rec.expect(ok, "bad branch " + to_string(r) + " for " + to_string(s) + " vs " +
                              to_string(t))) {
        return rec.take();
      }
    }
  }
  return rec.take();
}

inline CheckResult check_three_body() {
  detail::Recorder rec("three-body-closed-forms");
  const auto [middle, end] = three_body_gap();
  const double v1 = critical_value({1, 9, 1}, {1, 2, 3});
  const double v2 = critical_value({1, 1, 9}, {1, 2, 3});
  rec.expect(detail::rel_err(v1, 37.0 / std::sqrt(2.0)) <= 1e-9,
             "M(id,(1,9,1)) = " + format_double(v1));
  rec.expect(detail::rel_err(v1, middle) <= 1e-9, "symmetric closed form");
  rec.expect(detail::rel_err(v2, end) <= 1e-9, "M(id,(1,1,9)) = " + format_double(v2));
  // Masses (1, 1, mu) with (0, 1, 3) central: 19 mu = 167, value (1 + 5mu/6) sqrt((1+13mu)/(2+mu)).
  const double mu = 167.0 / 19.0;
  const double closed = (1 + 5 * mu / 6) * std::sqrt((1 + 13 * mu) / (2 + mu));
  rec.expect(std::abs(euler_root({1, 1, mu}) - 2.0) <= 1e-10, "Euler root for (1,1,167/19)");
  rec.expect(detail::rel_err(critical_value({1, 1, mu}, {1, 2, 3}), closed) <= 1e-9,
             "M(id,(1,1,167/19))");
  rec.expect(std::abs(euler_root({1, 1, 1}) - 1.0) <= 1e-10, "Euler root for (1,1,1)");
  return rec.take();
}

inline CheckResult check_solver(std::size_t solves, std::uint64_t seed) {
  detail::Recorder rec("solver-invariants");
  std::mt19937_64 rng(seed);
  for (std::size_t p = 0; p < solves; ++p) {
    const std::size_t n = 2 + p % 4;
    const MassVector m = random_masses(rng, n);
    const auto orders = enumerate_orderings(n);
    const Ordering& s = orders[static_cast<std::size_t>(uniform01(rng) *
                                                        static_cast<double>(orders.size()))];
    const auto c = minimize_W(m, s);
    const auto x = to_unit_inertia(c, m);
    const double diam = c.configuration.diameter();
    bool ok = rec.expect(std::abs(c.lambda - 1.0) <= 1e-12, "lambda " + format_double(c.lambda));
    ok = ok && rec.expect(std::abs(x.inertia - 1.0) <= 1e-12, "inertia " + format_double(x.inertia));
    ok = ok && rec.expect(c.com_residual <= 1e-10 * m.total() * diam, "center of mass");
    ok = ok && rec.expect(in_cone(c.configuration, s), "cone membership");
    if (!ok) break;
  }
  return rec.take();
}

inline CheckResult check_equal_mass_spectrum() {
  detail::Recorder rec("equal-mass-spectrum");
  const auto r = compute_spectrum({1, 1, 1, 1});
  rec.expect(r.entries.size() == 12, "12 classes");
  rec.expect(r.distinct_count == 1, "distinct count " + std::to_string(r.distinct_count));
  return rec.take();
}

inline Summary run_all(bool quick, const Kernels& kernels = {}, std::uint64_t seed = 20240601) {
  Summary s;
  const std::size_t points = quick ? 20 : 100;
  s.results.push_back(check_gradient(kernels, points, seed));
  s.results.push_back(check_hessian(kernels, points, seed + 1));
  s.results.push_back(check_trichotomy());
  s.results.push_back(check_three_body());
  s.results.push_back(check_solver(quick ? 10 : 50, seed + 2));
  if (!quick) s.results.push_back(check_equal_mass_spectrum());
  for (const auto& r : s.results) {
    s.assertions += r.assertions;
    if (!r.passed && s.passed) {
      s.passed = false;
      s.first_failure = r.name;
    }
  }
  return s;
}

}  // namespace moulton::check
