// moulton: command-line front end for the collinear central configuration library.
//
// Every command writes one JSON envelope (or a CSV table with --out csv) to
// stdout. Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "moulton/core.hpp"
#include "moulton/euler3.hpp"
#include "moulton/permutations.hpp"
#include "moulton/report.hpp"
#include "moulton/selfcheck.hpp"
#include "moulton/solver.hpp"
#include "moulton/spectrum.hpp"

namespace {

using namespace moulton;

constexpr const char* kVersion = "0.1.0";
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

/// Input error tied to a command-line flag.
struct FlagError {
  std::string flag;
  std::string message;
};

template <typename F>
auto for_flag(const std::string& flag, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const Error& e) {
    throw FlagError{flag, e.what()};
  }
}

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw FlagError{flag, "not a number: '" + item + "'"};
    }
  }
  return out;
}

MassVector parse_masses(const std::string& flag, const std::string& text) {
  const auto values = parse_list(flag, text);
  return for_flag(flag, [&] { return MassVector(values); });
}

Ordering parse_order(const std::string& flag, const std::string& text) {
  return for_flag(flag, [&] { return parse_ordering(text); });
}

/// MOULTON_DEFAULT_TOL, if set, replaces the built-in default of --tol.
double default_tolerance(double builtin) {
  const char* env = std::getenv("MOULTON_DEFAULT_TOL");
  if (env == nullptr || *env == '\0') return builtin;
  try {
    std::size_t used = 0;
    const double v = std::stod(env, &used);
    if (used != std::string(env).size() || !(v > 0.0)) throw std::invalid_argument(env);
    return v;
  } catch (const std::logic_error&) {
    throw FlagError{"MOULTON_DEFAULT_TOL", std::string("invalid tolerance '") + env + "'"};
  }
}

struct Output {
  json inputs = json::object();
  json results = json::object();
  std::string csv;  // non-empty: print instead of the envelope
  int exit_code = 0;
};

json versions() {
  return {{"artifact", kVersion},
          {"default_gradient_tolerance", SolverOptions{}.gradient_tolerance},
          {"default_distinctness_tolerance", kDefaultDistinctTolerance}};
}

int emit(const std::string& command, const std::function<Output()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Output out;
  try {
    out = run();
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.flag << ": " << e.message << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumerical : kExitValidation;
  }
  if (!out.csv.empty()) {
    std::cout << out.csv;
    return out.exit_code;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json envelope = {{"command", command},
                   {"inputs", std::move(out.inputs)},
                   {"results", std::move(out.results)},
                   {"versions", versions()},
                   {"wall_time_seconds", elapsed}};
  std::cout << envelope.dump(2) << '\n';
  return out.exit_code;
}

SolverOptions solver_options(double tol, int max_iter) {
  SolverOptions opts;
  opts.gradient_tolerance = tol;
  opts.max_iterations = max_iter;
  for_flag("--tol/--max-iter", [&] {
    opts.validate();
    return 0;
  });
  return opts;
}

void require_output_format(const std::string& out) {
  if (out != "json" && out != "csv") throw FlagError{"--out", "expected json or csv"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collinear (Moulton) central configurations of the N-body problem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  int exit_code = 0;
  auto run = [&](const std::string& name, std::function<Output()> fn) {
    return [&exit_code, name, fn = std::move(fn)] { exit_code = emit(name, fn); };
  };

  // solve
  std::string masses, order, normalization = "unit-inertia";
  double solve_tol = 0.0;
  int max_iter = SolverOptions{}.max_iterations;
  auto* solve = app.add_subcommand("solve", "Central configuration for one ordering");
  solve->add_option("--masses", masses, "Comma-separated positive masses")->required();
  solve->add_option("--order", order, "Comma-separated 1-based bodies, left to right")->required();
  solve->add_option("--normalization", normalization, "unit-inertia or unit-lambda");
  solve->add_option("--tol", solve_tol, "Relative gradient tolerance");
  solve->add_option("--max-iter", max_iter, "Newton iteration budget");
  solve->callback(run("solve", [&] {
    Output out;
    const MassVector m = parse_masses("--masses", masses);
    const Ordering s = parse_order("--order", order);
    if (normalization != "unit-inertia" && normalization != "unit-lambda") {
      throw FlagError{"--normalization", "expected unit-inertia or unit-lambda"};
    }
    if (s.size() != m.size()) throw FlagError{"--order", "length differs from --masses"};
    const double tol = solve_tol > 0.0 ? solve_tol : default_tolerance(1e-12);
    const SolverOptions opts = solver_options(tol, max_iter);
    out.inputs = {{"masses", m.to_vector()}, {"order", to_string(s)},
                  {"normalization", normalization}, {"tol", tol}, {"max_iter", max_iter}};
    const auto c = minimize_W(m, s, opts);
    const auto sol = normalization == "unit-lambda" ? c : to_unit_inertia(c, m);
    out.results = to_json(sol);
    return out;
  }));

  // spectrum
  std::string spec_masses, spec_out = "json";
  double spec_tol = 0.0;
  bool parallel = false;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  auto* spectrum = app.add_subcommand("spectrum", "Critical values over all reversal classes");
  spectrum->add_option("--masses", spec_masses, "Comma-separated positive masses")->required();
  spectrum->add_option("--tol", spec_tol, "Relative distinctness tolerance");
  spectrum->add_flag("--parallel", parallel, "Solve classes concurrently");
  spectrum->add_option("--workers", workers, "Thread count with --parallel");
  spectrum->add_option("--out", spec_out, "json or csv");
  spectrum->callback(run("spectrum", [&] {
    Output out;
    require_output_format(spec_out);
    const MassVector m = parse_masses("--masses", spec_masses);
    if (m.size() > kMaxEnumerationSize) {
      throw FlagError{"--masses", "at most " + std::to_string(kMaxEnumerationSize) + " bodies"};
    }
    const double tol = spec_tol > 0.0 ? spec_tol : default_tolerance(kDefaultDistinctTolerance);
    out.inputs = {{"masses", m.to_vector()}, {"tol", tol}, {"parallel", parallel}};
    const auto report = compute_spectrum(m, {}, tol, parallel ? workers : 1);
    if (spec_out == "csv") {
      out.csv = to_csv(report);
    } else {
      out.results = to_json(report);
    }
    return out;
  }));

  // scan
  std::size_t scan_n = 0, samples = 100;
  std::uint64_t seed = 1;
  std::string sampler = "log-uniform", scan_out = "json";
  double lo = 0.1, hi = 10.0, scan_tol = 0.0;
  auto* scan = app.add_subcommand("scan", "Spectrum counts over random mass vectors");
  scan->add_option("--n", scan_n, "Number of bodies (>= 3)")->required();
  scan->add_option("--samples", samples, "Number of mass vectors");
  scan->add_option("--seed", seed, "Random seed");
  scan->add_option("--sampler", sampler, "log-uniform, equal or two-equal");
  scan->add_option("--lo", lo, "Lower mass bound");
  scan->add_option("--hi", hi, "Upper mass bound");
  scan->add_option("--tol", scan_tol, "Relative distinctness tolerance");
  scan->add_option("--out", scan_out, "json or csv");
  scan->callback(run("scan", [&] {
    Output out;
    require_output_format(scan_out);
    if (scan_n < 3) throw FlagError{"--n", "N >= 3 is required for a scan"};
    if (samples < 1) throw FlagError{"--samples", "must be at least 1"};
    const SamplerSpec spec{for_flag("--sampler", [&] { return parse_sampler(sampler); }), lo, hi};
    const double tol = scan_tol > 0.0 ? scan_tol : default_tolerance(kDefaultDistinctTolerance);
    out.inputs = {{"n", scan_n},   {"samples", samples}, {"seed", seed}, {"sampler", sampler},
                  {"lo", lo},      {"hi", hi},           {"tol", tol}};
    const auto report = for_flag("--n/--lo/--hi", [&] {
      return scan_masses(scan_n, samples, seed, spec, {}, tol);
    });
    if (report.incomplete_samples > 0) {
      std::cerr << "warning: " << report.incomplete_samples
                << " samples had unconverged classes\n";
      out.exit_code = kExitNumerical;
    }
    if (scan_out == "csv") {
      out.csv = to_csv(report);
    } else {
      out.results = to_json(report);
    }
    return out;
  }));

  // euler3
  std::string euler_masses;
  auto* euler = app.add_subcommand("euler3", "Three-body configuration from Euler's quintic");
  euler->add_option("--masses", euler_masses, "m1,m2,m3")->required();
  euler->callback(run("euler3", [&] {
    Output out;
    const MassVector m = parse_masses("--masses", euler_masses);
    if (m.size() != 3) throw FlagError{"--masses", "exactly three masses are required"};
    const EulerQuintic p = euler_quintic(m);
    const double s = euler_root(m);
    const Configuration gauge = euler_configuration(m);
    const Configuration unit = normalize_inertia(recentered(gauge, m), m);
    const auto solver = moulton_configuration(m, {1, 2, 3});
    const double diff = (unit.positions() - solver.configuration.positions())
                            .lpNorm<Eigen::Infinity>();
    const bool agree = diff <= 1e-8;
    out.inputs = {{"masses", m.to_vector()}};
    out.results = {{"coefficients", p.coefficients},
                   {"sign_changes", p.sign_changes()},
                   {"root", s},
                   {"residual", p(s)},
                   {"configuration", gauge.to_vector()},
                   {"unit_inertia_configuration", unit.to_vector()},
                   {"critical_value", potential(unit, m)},
                   {"solver_max_difference", diff},
                   {"solver_agreement", agree ? "pass" : "fail"}};
    if (!agree) out.exit_code = kExitNumerical;
    return out;
  }));

  // perturb
  std::string base_masses, base_order, ext_order, extra_masses, epsilons, perturb_out = "json";
  auto* perturb = app.add_subcommand("perturb", "Limit of critical values as extra masses vanish");
  perturb->add_option("--base-masses", base_masses, "Masses of the base problem")->required();
  perturb->add_option("--base-order", base_order, "Ordering of the base problem")->required();
  perturb->add_option("--ext-order", ext_order, "Ordering of the extended problem")->required();
  perturb->add_option("--extra-masses", extra_masses, "Extra masses, scaled by epsilon")
      ->required();
  perturb->add_option("--epsilons", epsilons, "Strictly decreasing positive list")->required();
  perturb->add_option("--out", perturb_out, "json or csv");
  perturb->callback(run("perturb", [&] {
    Output out;
    require_output_format(perturb_out);
    const MassVector m = parse_masses("--base-masses", base_masses);
    const Ordering s0 = parse_order("--base-order", base_order);
    const Ordering t = parse_order("--ext-order", ext_order);
    const auto extra = parse_list("--extra-masses", extra_masses);
    const auto eps = parse_list("--epsilons", epsilons);
    out.inputs = {{"base_masses", m.to_vector()}, {"base_order", to_string(s0)},
                  {"ext_order", to_string(t)},    {"extra_masses", extra},
                  {"epsilons", eps}};
    const auto table = perturb_experiment(m, s0, t, extra, eps);
    if (perturb_out == "csv") {
      out.csv = to_csv(table);
    } else {
      out.results = to_json(table);
    }
    return out;
  }));

  // witness
  std::string sigma, tau, witness_eps = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6";
  double mu = 9.0;
  auto* witness = app.add_subcommand("witness", "Mass family separating two orderings");
  witness->add_option("--sigma", sigma, "First ordering")->required();
  witness->add_option("--tau", tau, "Second ordering")->required();
  witness->add_option("--mu", mu, "Mass of the middle witness body");
  witness->add_option("--epsilons", witness_eps, "Strictly decreasing positive list");
  witness->callback(run("witness", [&] {
    Output out;
    const Ordering s = parse_order("--sigma", sigma);
    const Ordering t = parse_order("--tau", tau);
    const auto eps = parse_list("--epsilons", witness_eps);
    out.inputs = {{"sigma", to_string(s)}, {"tau", to_string(t)}, {"mu", mu}, {"epsilons", eps}};
    const WitnessPlan plan = theorem_witness(s, t, mu);
    out.results = {{"plan", to_json(plan)}, {"outcome", to_json(run_witness(plan, eps))}};
    return out;
  }));

  // check
  bool quick = false;
  std::string fault;
  auto* check = app.add_subcommand("check", "Run the built-in invariant suite");
  check->add_flag("--quick", quick, "Reduced sample counts");
  check->add_option("--fault", fault, "Inject a defect (hessian-sign, gradient-scale)")
      ->group("");
  check->callback(run("check", [&] {
    Output out;
    check::Kernels kernels;
    if (fault == "hessian-sign") {
      kernels.hessian = [](const Configuration& x, const MassVector& m) {
        Matrix h = hessian_W(x, m);
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
          for (Eigen::Index j = 0; j < h.cols(); ++j) {
            if (i != j) h(i, j) = -h(i, j);
          }
        }
        return h;
      };
    } else if (fault == "gradient-scale") {
      kernels.gradient = [](const Configuration& x, const MassVector& m) {
        return Vector(1.001 * grad_W(x, m));
      };
    } else if (!fault.empty()) {
      throw FlagError{"--fault", "unknown fault '" + fault + "'"};
    }
    out.inputs = {{"quick", quick}};
    if (!fault.empty()) out.inputs["fault"] = fault;
    const check::Summary summary = check::run_all(quick, kernels);
    json checks = json::array();
    for (const auto& r : summary.results) {
      json j = {{"name", r.name}, {"passed", r.passed}, {"assertions", r.assertions}};
      if (!r.passed) j["detail"] = r.detail;
      checks.push_back(std::move(j));
      std::cerr << (r.passed ? "pass " : "FAIL ") << r.name << '\n';
    }
    out.results = {{"passed", summary.passed},
                   {"assertions", summary.assertions},
                   {"checks", std::move(checks)}};
    if (summary.first_failure) {
      out.results["first_failure"] = *summary.first_failure;
      out.exit_code = kExitNumerical;
    }
    return out;
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  return exit_code;
}
