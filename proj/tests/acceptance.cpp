// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "moulton/euler3.hpp"
#include "moulton/spectrum.hpp"

using namespace moulton;

namespace {

// 40-digit references.
constexpr double kMiddleHeavy = 26.162950903902258403;     // 37 / sqrt(2)
constexpr double kEndHeavyClosed = 27.839638189916451309;  // (51/6) sqrt(118/11)

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

MassVector log_uniform_masses(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> m(n);
  for (double& v : m) v = std::exp(std::log(0.1) + std::log(100.0) * uniform(rng));
  return MassVector(m);
}

Ordering shuffled(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i + 1);
  std::shuffle(p.begin(), p.end(), rng);
  return Ordering(p);
}

Configuration point_in_cone(std::mt19937_64& rng, const Ordering& s) {
  Configuration x(Vector::Zero(static_cast<Eigen::Index>(s.size())));
  double pos = -2.0 + 2.0 * uniform(rng);
  for (std::size_t p = 1; p <= s.size(); ++p) {
    x[static_cast<std::size_t>(s(p) - 1)] = pos;
    pos += 0.2 + 1.3 * uniform(rng);
  }
  return x;
}

struct Outcome {
  bool passed = true;
  std::string detail;
};

class Criterion {
 public:
  explicit Criterion(Outcome& out) : out_(out) {}
  void require(bool ok, const std::string& what) {
    if (!ok) {
      out_.passed = false;
      if (!out_.detail.empty()) out_.detail += "; ";
      out_.detail += what;
    }
  }

 private:
  Outcome& out_;
};

std::string fmt(double v) { return format_double(v); }

int failures = 0;

void run(int id, const std::string& name, double time_limit, const std::function<void(Criterion&)>& body) {
  Outcome out;
  Criterion c(out);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0.0) {
    c.require(elapsed < time_limit, "runtime " + fmt(elapsed) + " s over " + fmt(time_limit) + " s");
  }
  if (!out.passed) ++failures;
  std::printf("%s [%d] %s (%.3f s)%s%s\n", out.passed ? "PASS" : "FAIL", id, name.c_str(), elapsed,
              out.detail.empty() ? "" : ": ", out.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  run(1, "three-body exact values", 1.0, [](Criterion& c) {
    const double v1 = critical_value({1, 9, 1}, {1, 2, 3});
    const double v2 = critical_value({1, 1, 9}, {1, 2, 3});
    c.require(rel_err(v1, 26.162950903902254) <= 1e-9 && rel_err(v1, kMiddleHeavy) <= 1e-9,
              "M(id,(1,9,1)) = " + fmt(v1));
    c.require(rel_err(v2, kEndHeavyClosed) <= 1e-9,
              "M(id,(1,1,9)) = " + fmt(v2) + " vs (51/6)sqrt(118/11) = " + fmt(kEndHeavyClosed) +
                  ", relative error " + fmt(rel_err(v2, kEndHeavyClosed)));
  });

  run(2, "Euler quintic roots", 0.0, [](Criterion& c) {
    const double r9 = euler_root({1, 1, 9});
    const double r1 = euler_root({1, 1, 1});
    c.require(std::abs(r9 - 2.0) <= 1e-10, "root for (1,1,9) = " + fmt(r9));
    c.require(std::abs(r1 - 1.0) <= 1e-10, "root for (1,1,1) = " + fmt(r1));
    // p(2) is affine in mu: recover slope and intercept, then solve.
    const double at0 = euler_quintic({1, 1, 1e-300})(2.0);
    const double slope = euler_quintic({1, 1, 1})(2.0) - at0;
    const double mu = -at0 / slope;
    c.require(slope == 19.0 && at0 == -171.0,
              "p(2) = " + fmt(slope) + " mu + (" + fmt(at0) + ")");
    c.require(std::abs(mu - 9.0) <= 1e-12, "p(2) vanishes at mu = " + fmt(mu));
  });

  run(3, "Euler configuration equals solver output", 10.0, [](Criterion& c) {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const MassVector m = log_uniform_masses(rng, 3);
      const Configuration e = normalize_inertia(recentered(euler_configuration(m), m), m);
      const Configuration x = moulton_configuration(m, {1, 2, 3}).configuration;
      worst = std::max(worst, (e.positions() - x.positions()).lpNorm<Eigen::Infinity>());
    }
    c.require(worst <= 1e-8, "max coordinate difference " + fmt(worst));
  });

  run(4, "Hessian identity and spectral floor", 0.0, [](Criterion& c) {
    std::mt19937_64 rng(404);
    double worst_identity = 0.0, worst_floor = 0.0;
    for (int k = 0; k < 100; ++k) {
      const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
      const MassVector m = log_uniform_masses(rng, n);
      const Configuration x = point_in_cone(rng, shuffled(rng, n));
      const Matrix h = hessian_W(x, m);
      Vector y(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = 2.0 * uniform(rng) - 1.0;
      // 2 sum_{i<j} m_i m_j r_ij^{-3} (y_i - y_j)^2 + 2 I(y), written out here.
      double identity = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        identity += 2.0 * m[i] * y[static_cast<Eigen::Index>(i)] * y[static_cast<Eigen::Index>(i)];
        for (std::size_t j = i + 1; j < n; ++j) {
          const double d = y[static_cast<Eigen::Index>(i)] - y[static_cast<Eigen::Index>(j)];
          identity += 2.0 * m[i] * m[j] * d * d / std::pow(std::abs(x[i] - x[j]), 3);
        }
      }
      worst_identity = std::max(worst_identity, rel_err(y.dot(h * y), identity));
      const double lowest = Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues().minCoeff();
      worst_floor = std::max(worst_floor, 2.0 * m.min() - lowest);
    }
    c.require(worst_identity <= 1e-12, "quadratic-form relative error " + fmt(worst_identity));
    c.require(worst_floor <= 1e-9, "eigenvalue below 2 min(m) by " + fmt(worst_floor));
  });

  run(5, "gradient against central differences", 0.0, [](Criterion& c) {
    std::mt19937_64 rng(505);
    double worst = 0.0;
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
      const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
      const MassVector m = log_uniform_masses(rng, n);
      Configuration x = point_in_cone(rng, shuffled(rng, n));
      const Vector g = grad_W(x, m);
      Vector fd(g.size());
      for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double up = W(x, m);
        x[i] = xi - h;
        const double down = W(x, m);
        x[i] = xi;
        fd[static_cast<Eigen::Index>(i)] = (up - down) / (2 * h);
      }
      worst = std::max(worst, (g - fd).lpNorm<Eigen::Infinity>() /
                                  std::max(g.lpNorm<Eigen::Infinity>(), 1.0));
    }
    c.require(worst <= 1e-6, "relative error " + fmt(worst));
  });

  run(6, "solver invariants and uniqueness", 0.0, [](Criterion& c) {
    std::mt19937_64 rng(606);
    double lambda_dev = 0.0, inertia_dev = 0.0, com = 0.0, spread = 0.0;
    bool in_cones = true;
    for (int k = 0; k < 25; ++k) {
      const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
      const MassVector m = log_uniform_masses(rng, n);
      const Ordering s = shuffled(rng, n);
      const auto c0 = minimize_W(m, s);
      const auto x0 = to_unit_inertia(c0, m);
      lambda_dev = std::max(lambda_dev, std::abs(lambda_of(c0.configuration, m) - 1.0));
      inertia_dev = std::max(inertia_dev, std::abs(inertia(x0.configuration, m) - 1.0));
      com = std::max({com, std::abs(center_of_mass(c0.configuration, m)),
                      std::abs(center_of_mass(x0.configuration, m))});
      in_cones = in_cones && in_cone(c0.configuration, s) && in_cone(x0.configuration, s);
      for (int start = 0; start < 20; ++start) {
        const auto ck = minimize_W(m, s, {}, point_in_cone(rng, s));
        in_cones = in_cones && in_cone(ck.configuration, s);
        spread = std::max(spread,
                          (ck.configuration.positions() - c0.configuration.positions())
                              .lpNorm<Eigen::Infinity>());
      }
    }
    c.require(lambda_dev <= 1e-12, "|lambda - 1| = " + fmt(lambda_dev));
    c.require(inertia_dev <= 1e-12, "|I - 1| = " + fmt(inertia_dev));
    c.require(com <= 1e-10, "COM residual " + fmt(com));
    c.require(in_cones, "iterate left its cone");
    c.require(spread <= 1e-9, "random starts disagree by " + fmt(spread));
  });

  run(7, "spectrum counts", 0.0, [](Criterion& c) {
    const auto equal = compute_spectrum({1, 1, 1, 1});
    c.require(equal.entries.size() == 12 && equal.distinct_count == 1,
              "equal masses: " + std::to_string(equal.distinct_count) + " values over " +
                  std::to_string(equal.entries.size()) + " classes");
    std::mt19937_64 rng(707);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> m = log_uniform_masses(rng, 4).to_vector();
      m[0] = m[1] = 1.0;
      const auto r = compute_spectrum(MassVector(m));
      c.require(r.distinct_count <= 6, "two equal masses: " + std::to_string(r.distinct_count));
    }
    for (int seed = 0; seed < 20; ++seed) {
      std::mt19937_64 g(static_cast<std::uint64_t>(1000 + seed));
      const auto r = compute_spectrum(log_uniform_masses(g, 4));
      c.require(r.distinct_count == 12 && r.min_is_unique,
                "N = 4 seed " + std::to_string(seed) + ": " + std::to_string(r.distinct_count));
    }
    for (int seed = 0; seed < 5; ++seed) {
      std::mt19937_64 g(static_cast<std::uint64_t>(2000 + seed));
      const MassVector m = log_uniform_masses(g, 5);
      const auto start = std::chrono::steady_clock::now();
      const auto r = compute_spectrum(m);
      const double t =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      c.require(r.distinct_count == 60,
                "N = 5 seed " + std::to_string(seed) + ": " + std::to_string(r.distinct_count));
      c.require(t < 30.0, "N = 5 spectrum took " + fmt(t) + " s");
    }
  });

  run(8, "perturbation limit", 0.0, [](Criterion& c) {
    const auto t = perturb_experiment({1, 9, 1}, {1, 2, 3}, {1, 2, 3, 4}, {1.0},
                                      {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    const double gap = std::abs(t.values.back() - 26.162950903902254);
    c.require(gap <= 1e-3, "|value(1e-6) - limit| = " + fmt(gap));
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      c.require(t.values[k] > t.limit_value, "value " + fmt(t.values[k]) + " not above limit");
    }
    c.require(rel_err(t.limit_value, kMiddleHeavy) <= 1e-9, "limit " + fmt(t.limit_value));
  });

  run(9, "trichotomy and canonical classes", 1.0, [](Criterion& c) {
    const auto all = enumerate_orderings(4);
    int pairs = 0;
    for (const auto& s : all) {
      for (const auto& t : all) {
        ++pairs;
        const auto r = betweenness_witness(s, t);
        bool separable = false;
        for (std::size_t i = 1; i <= 4; ++i)
          for (std::size_t j = 1; j <= 4; ++j)
            for (std::size_t k = 1; k <= 4; ++k) {
              const auto btw = [&](const Ordering& o) {
                return (o(j) < o(i) && o(i) < o(k)) || (o(k) < o(i) && o(i) < o(j));
              };
              separable = separable || (btw(s) && !btw(t));
            }
        bool mirrored = true;
        for (std::size_t p = 1; p <= 4; ++p) mirrored = mirrored && s(p) == 5 - t(p);
        const int branches = (s == t) + mirrored + separable;
        c.require(branches == 1, to_string(s) + " vs " + to_string(t) + " in " +
                                     std::to_string(branches) + " branches");
        bool verified = false;
        switch (r.tag) {
          case TrichotomyResult::Tag::Equal: verified = s == t; break;
          case TrichotomyResult::Tag::Reversed: verified = mirrored; break;
          case TrichotomyResult::Tag::Witness: {
            const auto btw = [&](const Ordering& o) {
              return (o(r.j) < o(r.i) && o(r.i) < o(r.k)) || (o(r.k) < o(r.i) && o(r.i) < o(r.j));
            };
            verified = btw(s) && !btw(t);
            break;
          }
        }
        c.require(verified, "unverified result for " + to_string(s) + " vs " + to_string(t));
      }
    }
    c.require(pairs == 576, "pair count " + std::to_string(pairs));
    std::set<Ordering> classes;
    for (const auto& s : enumerate_orderings(6)) classes.insert(canonical_class(s));
    c.require(classes.size() == 360, "S6 classes " + std::to_string(classes.size()));
  });

  run(10, "scale covariance of the spectrum", 0.0, [](Criterion& c) {
    std::mt19937_64 rng(1010);
    for (int k = 0; k < 3; ++k) {
      const MassVector m = log_uniform_masses(rng, 4);
      const auto base = compute_spectrum(m);
      for (double factor : {0.5, 2.0, 10.0}) {
        const auto r = compute_spectrum(m.scaled(factor));
        c.require(r.distinct_count == base.distinct_count, "distinct count changed");
        c.require(r.min_class == base.min_class, "argmin class changed");
        const double ratio = r.entries[0].critical_value / base.entries[0].critical_value;
        double worst = 0.0;
        for (std::size_t e = 0; e < r.entries.size(); ++e) {
          worst = std::max(worst, rel_err(r.entries[e].critical_value /
                                              base.entries[e].critical_value, ratio));
        }
        c.require(worst <= 1e-11, "ratio spread " + fmt(worst) + " at c = " + fmt(factor));
      }
    }
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
