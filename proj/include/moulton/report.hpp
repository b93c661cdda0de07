#pragma once

// JSON and CSV forms of solutions and reports. Field names follow the
// struct members; orderings are written as "2,1,3" strings.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "moulton/solver.hpp"
#include "moulton/spectrum.hpp"

namespace moulton {

using json = nlohmann::ordered_json;

inline json to_json(const MassVector& m) { return m.to_vector(); }
inline json to_json(const Configuration& x) { return x.to_vector(); }

inline json to_json(const CentralConfigSolution& s) {
  return {{"ordering", to_string(s.ordering)},
          {"normalization", to_string(s.normalization)},
          {"configuration", to_json(s.configuration)},
          {"critical_value", s.critical_value},
          {"lambda", s.lambda},
          {"inertia", s.inertia},
          {"com_residual", s.com_residual},
          {"iterations", s.iterations},
          {"final_gradient_norm", s.final_gradient_norm}};
}

inline json to_json(const SpectrumEntry& e) {
  json j = {{"ordering", to_string(e.ordering)},
            {"critical_value", e.critical_value},
            {"iterations", e.iterations},
            {"final_gradient_norm", e.final_gradient_norm},
            {"converged", e.converged}};
  if (!e.converged) j["failure"] = e.failure;
  return j;
}

inline json to_json(const SpectrumReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"mass_vector", to_json(r.mass_vector)},
          {"entries", std::move(entries)},
          {"distinct_count", r.distinct_count},
          {"distinctness_tolerance", r.distinctness_tolerance},
          {"min_value", r.min_value},
          {"min_class", to_string(r.min_class)},
          {"min_is_unique", r.min_is_unique}};
}

inline json to_json(const ScanReport& r) {
  json degenerate = json::array();
  for (const auto& [m, count] : r.degenerate_samples) {
    degenerate.push_back({{"masses", to_json(m)}, {"distinct_count", count}});
  }
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"masses", to_json(row.masses)}, {"complete", row.complete}};
    if (row.complete) {
      j["distinct_count"] = row.distinct_count;
      j["min_is_unique"] = row.min_is_unique;
      j["min_class"] = to_string(*row.min_class);
    }
    rows.push_back(std::move(j));
  }
  return {{"N", r.n},
          {"samples", r.samples},
          {"seed", r.seed},
          {"sampler", {{"kind", to_string(r.sampler.kind)}, {"lo", r.sampler.lo},
                       {"hi", r.sampler.hi}}},
          {"distinctness_tolerance", r.distinctness_tolerance},
          {"full_spectrum_fraction", r.full_spectrum_fraction},
          {"incomplete_samples", r.incomplete_samples},
          {"degenerate_samples", std::move(degenerate)},
          {"rows", std::move(rows)}};
}

inline json to_json(const PerturbationTable& t) {
  return {{"base_masses", to_json(t.base_masses)},
          {"base_ordering", to_string(t.base_ordering)},
          {"extended_ordering", to_string(t.extended_ordering)},
          {"extra_masses", t.extra_masses},
          {"epsilons", t.epsilons},
          {"values", t.values},
          {"limit_value", t.limit_value},
          {"all_above_limit", t.all_above_limit},
          {"monotone_convergence", t.monotone_convergence},
          {"diagnostics", t.diagnostics}};
}

inline json to_json(const WitnessPlan& p) {
  return {{"sigma", to_string(p.sigma)},
          {"tau", to_string(p.tau)},
          {"mu", p.mu},
          {"witness", to_string(p.witness)},
          {"relabel", p.relabel},
          {"sigma_relabeled", to_string(p.sigma_relabeled)},
          {"tau_relabeled", to_string(p.tau_relabeled)},
          {"sigma_base", to_string(p.sigma_base)},
          {"tau_base", to_string(p.tau_base)},
          {"base_masses", to_json(p.base_masses)},
          {"extra_masses", p.extra_masses}};
}

inline json to_json(const WitnessOutcome& o) {
  json j = {{"sigma_limit", o.sigma_limit},
            {"tau_limit", o.tau_limit},
            {"limits_distinct", o.limits_distinct}};
  if (o.sigma_table) j["sigma_table"] = to_json(*o.sigma_table);
  if (o.tau_table) j["tau_table"] = to_json(*o.tau_table);
  return j;
}

namespace detail {
inline std::string quoted_list(const std::vector<double>& v) {
  std::string out = "\"";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out + "\"";
}
}  // namespace detail

inline std::string to_csv(const SpectrumReport& r) {
  std::ostringstream os;
  os << "ordering,critical_value,iterations,final_gradient_norm,converged\n";
  for (const auto& e : r.entries) {
    os << '"' << to_string(e.ordering) << "\"," << format_double(e.critical_value) << ','
       << e.iterations << ',' << format_double(e.final_gradient_norm) << ','
       << (e.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

inline std::string to_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "sample,masses,complete,distinct_count,min_is_unique,min_class\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    os << k << ',' << detail::quoted_list(row.masses.to_vector()) << ','
       << (row.complete ? "true" : "false") << ',';
    if (row.complete) {
      os << row.distinct_count << ',' << (row.min_is_unique ? "true" : "false") << ",\""
         << to_string(*row.min_class) << '"';
    } else {
      os << ",,";
    }
    os << '\n';
  }
  return os.str();
}

inline std::string to_csv(const PerturbationTable& t) {
  std::ostringstream os;
  os << "epsilon,value,gap_to_limit,above_limit\n";
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    os << format_double(t.epsilons[k]) << ',' << format_double(t.values[k]) << ','
       << format_double(t.values[k] - t.limit_value) << ','
       << (t.values[k] > t.limit_value ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace moulton
