#pragma once

// Critical-value spectra over reversal classes, mass-space scans, and the
// small-mass perturbation experiments behind the genericity argument.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "moulton/core.hpp"
#include "moulton/error.hpp"
#include "moulton/euler3.hpp"
#include "moulton/permutations.hpp"
#include "moulton/solver.hpp"

namespace moulton {

inline constexpr double kDefaultDistinctTolerance = 1e-9;

struct SpectrumEntry {
  Ordering ordering;  // canonical representative of the class
  double critical_value = 0.0;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  bool converged = false;
  std::string failure;  // solver message when !converged
};

struct SpectrumReport {
  MassVector mass_vector;
  std::vector<SpectrumEntry> entries;
  std::size_t distinct_count = 0;
  double distinctness_tolerance = kDefaultDistinctTolerance;
  double min_value = 0.0;
  Ordering min_class;
  bool min_is_unique = false;
};

/// Raised when some class failed to converge. The partial entries are kept.
class SpectrumIncompleteError : public Error {
 public:
  SpectrumIncompleteError(const std::string& what, std::vector<SpectrumEntry> entries)
      : Error(ErrorKind::SpectrumIncomplete, what), entries_(std::move(entries)) {}
  const std::vector<SpectrumEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<SpectrumEntry> entries_;
};

namespace detail {

inline bool relatively_close(double a, double b, double tol) {
  return std::abs(b - a) <= tol * std::max(std::abs(a), std::abs(b));
}

inline void require_tolerance(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
}

/// Runs body(i) for i in [0, count) on up to `workers` threads.
template <typename Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

}  // namespace detail

/// Number of clusters after sorting and merging neighbours within relative tol.
inline std::size_t distinct_count(std::vector<double> values, double tol) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "no values to count");
  detail::require_tolerance(tol);
  std::sort(values.begin(), values.end());
  std::size_t clusters = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!detail::relatively_close(values[i - 1], values[i], tol)) ++clusters;
  }
  return clusters;
}

/// One solve per reversal class; counts distinct critical values and reports the
/// minimizing class. `workers` > 1 solves classes concurrently; the result does
/// not depend on it.
inline SpectrumReport compute_spectrum(const MassVector& m, const SolverOptions& opts = {},
                                       double tol = kDefaultDistinctTolerance,
                                       std::size_t workers = 1) {
  detail::require_tolerance(tol);
  const std::vector<Ordering> classes = canonical_classes(m.size());

  std::vector<SpectrumEntry> entries;
  entries.reserve(classes.size());
  for (const auto& s : classes) entries.push_back({s, 0.0, 0, 0.0, false, {}});

  detail::parallel_for(classes.size(), workers, [&](std::size_t i) {
    SpectrumEntry& e = entries[i];
    try {
      const auto sol = moulton_configuration(m, e.ordering, opts);
      e.critical_value = sol.critical_value;
      e.iterations = sol.iterations;
      e.final_gradient_norm = sol.final_gradient_norm;
      e.converged = true;
    } catch (const NoConvergenceError& err) {
      e.iterations = err.iterations();
      e.final_gradient_norm = err.gradient_norm();
      e.failure = err.what();
    }
  });

  std::size_t failed = 0;
  for (const auto& e : entries) failed += e.converged ? 0 : 1;
  if (failed > 0) {
    throw SpectrumIncompleteError(std::to_string(failed) + " of " +
                                      std::to_string(entries.size()) +
                                      " classes did not converge",
                                  std::move(entries));
  }

  std::vector<double> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(e.critical_value);

  const auto min_it = std::min_element(values.begin(), values.end());
  const auto min_index = static_cast<std::size_t>(min_it - values.begin());
  std::size_t at_min = 0;
  for (double v : values) at_min += detail::relatively_close(*min_it, v, tol) ? 1 : 0;

  return SpectrumReport{m,
                        std::move(entries),
                        distinct_count(values, tol),
                        tol,
                        *min_it,
                        classes[min_index],
                        at_min == 1};
}

// ---------------------------------------------------------------------------
// Mass-space scans

enum class SamplerKind { LogUniform, Equal, TwoEqual };

inline std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::LogUniform: return "log-uniform";
    case SamplerKind::Equal: return "equal";
    case SamplerKind::TwoEqual: return "two-equal";
  }
  return "";
}

inline SamplerKind parse_sampler(const std::string& name) {
  if (name == "log-uniform") return SamplerKind::LogUniform;
  if (name == "equal") return SamplerKind::Equal;
  if (name == "two-equal") return SamplerKind::TwoEqual;
  throw Error(ErrorKind::InvalidArgument, "unknown sampler '" + name + "'");
}

/// Masses drawn log-uniformly on [lo, hi]. Equal draws one mass for all bodies;
/// TwoEqual gives bodies 1 and 2 the same mass and draws the rest independently.
struct SamplerSpec {
  SamplerKind kind = SamplerKind::LogUniform;
  double lo = 0.1;
  double hi = 10.0;
};

/// Seeded mass generator. Uses its own uniform mapping so draws are identical
/// across standard libraries.
class MassSampler {
 public:
  MassSampler(SamplerSpec spec, std::uint64_t seed) : spec_(spec), rng_(seed) {
    if (!(spec.lo > 0.0) || !(spec.hi >= spec.lo)) {
      throw Error(ErrorKind::InvalidArgument, "sampler range must satisfy 0 < lo <= hi");
    }
  }

  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double log_uniform() {
    const double a = std::log(spec_.lo), b = std::log(spec_.hi);
    return std::exp(a + (b - a) * uniform01());
  }

  MassVector draw(std::size_t n) {
    std::vector<double> m(n);
    switch (spec_.kind) {
      case SamplerKind::LogUniform:
        for (double& v : m) v = log_uniform();
        break;
      case SamplerKind::Equal:
        std::fill(m.begin(), m.end(), log_uniform());
        break;
      case SamplerKind::TwoEqual:
        for (double& v : m) v = log_uniform();
        m[1] = m[0];
        break;
    }
    return MassVector(m);
  }

 private:
  SamplerSpec spec_;
  std::mt19937_64 rng_;
};

struct ScanSample {
  MassVector masses;
  bool complete = false;
  std::size_t distinct_count = 0;
  bool min_is_unique = false;
  std::optional<Ordering> min_class;
};

struct ScanReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  SamplerSpec sampler;
  double distinctness_tolerance = kDefaultDistinctTolerance;
  double full_spectrum_fraction = 0.0;  // over complete samples only
  std::size_t incomplete_samples = 0;
  std::vector<std::pair<MassVector, std::size_t>> degenerate_samples;
  std::vector<ScanSample> rows;
};

inline std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

inline ScanReport scan_masses(std::size_t n, std::size_t samples, std::uint64_t seed,
                              SamplerSpec sampler = {}, const SolverOptions& opts = {},
                              double tol = kDefaultDistinctTolerance, std::size_t workers = 1) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "scans need N >= 3");
  if (n > kMaxEnumerationSize) {
    throw Error(ErrorKind::SizeLimit, "scans limited to N <= " +
                                          std::to_string(kMaxEnumerationSize));
  }
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  detail::require_tolerance(tol);

  ScanReport report;
  report.n = n;
  report.samples = samples;
  report.seed = seed;
  report.sampler = sampler;
  report.distinctness_tolerance = tol;

  const std::size_t full = factorial(n) / 2;
  MassSampler gen(sampler, seed);
  std::size_t full_count = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    ScanSample row{gen.draw(n), false, 0, false, std::nullopt};
    try {
      const SpectrumReport spec = compute_spectrum(row.masses, opts, tol, workers);
      row.complete = true;
      row.distinct_count = spec.distinct_count;
      row.min_is_unique = spec.min_is_unique;
      row.min_class = spec.min_class;
      if (spec.distinct_count == full) {
        ++full_count;
      } else {
        report.degenerate_samples.emplace_back(row.masses, spec.distinct_count);
      }
    } catch (const SpectrumIncompleteError&) {
      ++report.incomplete_samples;
    }
    report.rows.push_back(std::move(row));
  }
  const std::size_t complete = samples - report.incomplete_samples;
  report.full_spectrum_fraction =
      complete == 0 ? 0.0 : static_cast<double>(full_count) / static_cast<double>(complete);
  return report;
}

// ---------------------------------------------------------------------------
// Small-mass perturbation

struct PerturbationTable {
  MassVector base_masses;
  Ordering base_ordering;
  Ordering extended_ordering;
  std::vector<double> extra_masses;
  std::vector<double> epsilons;
  std::vector<double> values;  // critical value of the extended problem per epsilon
  double limit_value = 0.0;    // critical value of the base problem
  bool all_above_limit = false;
  bool monotone_convergence = false;
  std::vector<std::string> diagnostics;
};

/// Masses (base, eps * extra).
inline MassVector extended_masses(const MassVector& base, const std::vector<double>& extra,
                                  double eps) {
  std::vector<double> m = base.to_vector();
  for (double e : extra) m.push_back(eps * e);
  return MassVector(m);
}

/// Critical values of the extended problem along decreasing epsilon, next to
/// the base problem's value they converge to from above.
inline PerturbationTable perturb_experiment(const MassVector& base, const Ordering& base_ordering,
                                            const Ordering& extended_ordering,
                                            const std::vector<double>& extra,
                                            const std::vector<double>& epsilons,
                                            const SolverOptions& opts = {}) {
  if (base_ordering.size() != base.size()) {
    throw Error(ErrorKind::DimensionMismatch, "base ordering does not match base masses");
  }
  if (extra.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one extra body");
  if (extended_ordering.size() != base.size() + extra.size()) {
    throw Error(ErrorKind::SizeMismatch,
                "extended ordering must have " + std::to_string(base.size() + extra.size()) +
                    " bodies");
  }
  for (double e : extra) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw Error(ErrorKind::InvalidMass, "extra masses must be positive");
    }
  }
  if (epsilons.empty()) throw Error(ErrorKind::InvalidEpsilon, "no epsilon values given");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || !std::isfinite(epsilons[k])) {
      throw Error(ErrorKind::InvalidEpsilon, "epsilon values must be positive");
    }
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw Error(ErrorKind::InvalidEpsilon, "epsilon values must be strictly decreasing");
    }
  }
  if (!is_compatible(extended_ordering, base_ordering)) {
    throw Error(ErrorKind::IncompatibleOrderings,
                to_string(extended_ordering) + " is not compatible with " +
                    to_string(base_ordering));
  }

  PerturbationTable table{base, base_ordering, extended_ordering, extra, epsilons, {}, 0.0,
                          false, false, {}};
  table.limit_value = critical_value(base, base_ordering, opts);
  table.all_above_limit = true;
  table.monotone_convergence = true;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    const double v = critical_value(extended_masses(base, extra, epsilons[k]),
                                    extended_ordering, opts);
    table.values.push_back(v);
    if (!(v > table.limit_value)) {
      table.all_above_limit = false;
      table.diagnostics.push_back("value at epsilon " + std::to_string(epsilons[k]) +
                                  " does not exceed the limit");
    }
    if (k > 0 && !(std::abs(v - table.limit_value) <
                   std::abs(table.values[k - 1] - table.limit_value))) {
      table.monotone_convergence = false;
      table.diagnostics.push_back("distance to the limit grew at epsilon " +
                                  std::to_string(epsilons[k]));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Separating two non-symmetric orderings

/// Mass family that separates the critical values of two orderings s and t
/// which are neither equal nor reflections of each other. Bodies are relabeled
/// so the witness triple becomes 1, 2, 3 with body 2 between 1 and 3 in s but
/// not in t. With masses (1, mu, 1, eps, ..., eps) the two critical values
/// tend to different three-body limits as eps -> 0.
struct WitnessPlan {
  Ordering sigma;
  Ordering tau;
  double mu = 9.0;
  TrichotomyResult witness;      // on the inverse orderings, i.e. body labels
  std::vector<int> relabel;      // relabel[new - 1] = original body
  Ordering sigma_relabeled;
  Ordering tau_relabeled;
  Ordering sigma_base;           // bodies 1,2,3 in sigma_relabeled; always (1,2,3)
  Ordering tau_base;             // bodies 1,2,3 in tau_relabeled; 2 is not in the middle
  MassVector base_masses;        // (1, mu, 1)
  std::vector<double> extra_masses;  // N - 3 ones, scaled by eps
  std::vector<double> original_masses(double eps) const {
    std::vector<double> m(sigma.size(), eps);
    for (std::size_t k = 0; k < 3; ++k) {
      m[static_cast<std::size_t>(relabel[k] - 1)] = base_masses[k];
    }
    return m;
  }
};

inline WitnessPlan theorem_witness(const Ordering& sigma, const Ordering& tau, double mu = 9.0) {
  if (sigma.size() != tau.size()) throw Error(ErrorKind::SizeMismatch, "orderings differ in size");
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidMass, "mu must be positive");
  const Ordering sigma_places = sigma.inverse();
  const Ordering tau_places = tau.inverse();
  const TrichotomyResult w = betweenness_witness(sigma_places, tau_places);
  if (w.tag != TrichotomyResult::Tag::Witness) {
    throw Error(ErrorKind::SymmetricPair,
                to_string(sigma) + " and " + to_string(tau) + " are equal or mirror images");
  }

  // Witness bodies: w.i sits between w.j and w.k in sigma.
  const auto place_in_sigma = [&](std::size_t body) { return sigma_places(body); };
  int left = static_cast<int>(w.j), right = static_cast<int>(w.k);
  if (place_in_sigma(w.j) > place_in_sigma(w.k)) std::swap(left, right);

  const std::size_t n = sigma.size();
  std::vector<int> relabel{left, static_cast<int>(w.i), right};
  for (int b = 1; b <= static_cast<int>(n); ++b) {
    if (b != left && b != right && b != static_cast<int>(w.i)) relabel.push_back(b);
  }
  std::vector<int> new_of_old(n);
  for (std::size_t k = 0; k < n; ++k) {
    new_of_old[static_cast<std::size_t>(relabel[k] - 1)] = static_cast<int>(k + 1);
  }
  auto rename = [&](const Ordering& s) {
    std::vector<int> p;
    for (int b : s.places()) p.push_back(new_of_old[static_cast<std::size_t>(b - 1)]);
    return Ordering(std::move(p));
  };

  Ordering sigma_r = rename(sigma);
  Ordering tau_r = rename(tau);
  Ordering sigma_base = restrict_to_first(sigma_r, 3);
  Ordering tau_base = restrict_to_first(tau_r, 3);
  return WitnessPlan{sigma,
                     tau,
                     mu,
                     w,
                     std::move(relabel),
                     std::move(sigma_r),
                     std::move(tau_r),
                     std::move(sigma_base),
                     std::move(tau_base),
                     MassVector{1.0, mu, 1.0},
                     std::vector<double>(n - 3, 1.0)};
}

struct WitnessOutcome {
  double sigma_limit = 0.0;  // critical value of (1, mu, 1) with the heavy body in the middle
  double tau_limit = 0.0;    // ... with the heavy body at an end
  std::optional<PerturbationTable> sigma_table;  // absent when N = 3
  std::optional<PerturbationTable> tau_table;
  bool limits_distinct = false;
};

inline WitnessOutcome run_witness(const WitnessPlan& plan, const std::vector<double>& epsilons,
                                  const SolverOptions& opts = {},
                                  double tol = kDefaultDistinctTolerance) {
  WitnessOutcome out;
  if (plan.extra_masses.empty()) {
    out.sigma_limit = critical_value(plan.base_masses, plan.sigma_base, opts);
    out.tau_limit = critical_value(plan.base_masses, plan.tau_base, opts);
  } else {
    out.sigma_table = perturb_experiment(plan.base_masses, plan.sigma_base, plan.sigma_relabeled,
                                         plan.extra_masses, epsilons, opts);
    out.tau_table = perturb_experiment(plan.base_masses, plan.tau_base, plan.tau_relabeled,
                                       plan.extra_masses, epsilons, opts);
    out.sigma_limit = out.sigma_table->limit_value;
    out.tau_limit = out.tau_table->limit_value;
  }
  out.limits_distinct = !detail::relatively_close(out.sigma_limit, out.tau_limit, tol);
  return out;
}

}  // namespace moulton
