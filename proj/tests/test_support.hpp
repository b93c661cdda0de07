#pragma once

// Random inputs shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "moulton/core.hpp"
#include "moulton/permutations.hpp"

namespace moulton::testing {

inline double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Log-uniform masses on [0.1, 10].
inline MassVector random_masses(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> m(n);
  for (double& v : m) v = std::exp(std::log(0.1) + std::log(100.0) * uniform(rng));
  return MassVector(m);
}

/// Shuffled positions with consecutive gaps in [0.2, 1.5].
inline Configuration random_point(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> r(n);
  double pos = -2.0 + 2.0 * uniform(rng);
  for (double& v : r) {
    v = pos;
    pos += 0.2 + 1.3 * uniform(rng);
  }
  std::shuffle(r.begin(), r.end(), rng);
  return Configuration(r);
}

/// Random point strictly inside the cone of s.
inline Configuration random_point_in_cone(std::mt19937_64& rng, const Ordering& s) {
  Configuration x(Vector::Zero(static_cast<Eigen::Index>(s.size())));
  double pos = -3.0 + 2.0 * uniform(rng);
  for (std::size_t p = 1; p <= s.size(); ++p) {
    x[static_cast<std::size_t>(s(p) - 1)] = pos;
    pos += 0.05 + 2.0 * uniform(rng);
  }
  return x;
}

inline Ordering random_ordering(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i + 1);
  std::shuffle(p.begin(), p.end(), rng);
  return Ordering(p);
}

}  // namespace moulton::testing
