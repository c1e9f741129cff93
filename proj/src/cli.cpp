#include "cvent/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cvent/bounds.hpp"
#include "cvent/report.hpp"
#include "cvent/scan.hpp"

namespace cvent {

namespace {

struct TolFlags {
  double physicality = defaults::physicality_tol;
  double ppt = defaults::ppt_tol;
  double symmetric = defaults::symmetric_tol;
  EmOptions em;

  void attach(CLI::App& cmd) {
    cmd.add_option("--tol-physicality", physicality, "slack on the physicality inequalities")
        ->capture_default_str();
    cmd.add_option("--tol-ppt", ppt, "PPT threshold slack on ν̃₋ < 1")->capture_default_str();
    cmd.add_option("--tol-symmetric", symmetric, "relative |a - b| treated as symmetric")
        ->capture_default_str();
    cmd.add_option("--tol-near-separable", em.near_separable,
                   "ν̃₋ within this of 1 is reported separable")
        ->capture_default_str();
    cmd.add_option("--tol-theta", em.theta_tol, "golden-section θ tolerance")->capture_default_str();
    cmd.add_option("--tol-snap", em.min_uncertainty_snap,
                   "relative slack snapped onto ν₋ = 1")
        ->capture_default_str();
    cmd.add_option("--tol-branch", em.branch_clamp, "negative radicands clamped to 0")
        ->capture_default_str();
    cmd.add_option("--seed-grid", em.seed_grid, "θ seed grid size")->capture_default_str();
  }

  EmOptions em_options(LogBase base) const {
    EmOptions out = em;
    out.physicality_tol = physicality;
    out.ppt_tol = ppt;
    out.symmetric_tol = symmetric;
    out.log_base = base;
    return out;
  }
};

const std::map<std::string, LogBase> log_bases{{"2", LogBase::two}, {"e", LogBase::e}};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

std::size_t count_regimes(const ScanResult& r, bool physical_only) {
  return std::size_t(std::count_if(r.cells.begin(), r.cells.end(), [&](const ScanCell& c) {
    return !physical_only || c.verdict.regime != Regime::unphysical;
  }));
}

nlohmann::json scan_summary(const ScanResult& r, const std::string& grid, const std::string& boundary) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& c : r.cells) {
    const std::string key(to_string(c.verdict.regime));
    counts[key] = counts.value(key, 0) + 1;
  }
  return {{"cells", r.cells.size()},
          {"regimes", counts},
          {"boundary_points", r.boundary.size()},
          {"rejected_brackets", r.rejected_brackets},
          {"grid_csv", grid},
          {"boundary_csv", boundary}};
}

void write_scan_files(const ScanResult& r, const std::string& prefix, std::ostream& out,
                      std::ostream& err) {
  if (count_regimes(r, true) == 0) err << "warning: no physical cell in the scanned window\n";
  const std::string grid = prefix + "_grid.csv";
  const std::string boundary = prefix + "_boundary.csv";
  auto g = open_output(grid);
  write_scan_csv(g, r);
  auto b = open_output(boundary);
  write_boundary_csv(b, r);
  out << scan_summary(r, grid, boundary).dump(2) << '\n';
}

Range to_range(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Entanglement measures of two-mode Gaussian states", "cvent"};
  app.require_subcommand(1);

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "full report for one state (JSON)");
  std::string input_path;
  std::optional<double> squeezed_r;
  std::vector<double> extremal;
  LogBase base = LogBase::two;
  TolFlags measure_tols;
  auto* input_opt = measure_cmd->add_option(
      "--input", input_path,
      "JSON file ('-' for stdin): {\"cm\": 4x4}, {\"standard_form\": {a, b, c_plus, c_minus}} or "
      "{\"extremal\": {s, d, g, lambda}}");
  auto* squeezed_opt =
      measure_cmd->add_option("--squeezed-r", squeezed_r, "two-mode squeezed vacuum with squeezing r");
  auto* extremal_opt =
      measure_cmd->add_option("--extremal", extremal, "extremal-family parameters s d g lambda")
          ->expected(4);
  input_opt->excludes(squeezed_opt)->excludes(extremal_opt);
  squeezed_opt->excludes(extremal_opt);
  measure_cmd->add_option("--log-base", base, "logarithm base for E_N and EoF (2 or e)")
      ->transform(CLI::CheckedTransformer(log_bases, CLI::ignore_case).description(""));
  measure_tols.attach(*measure_cmd);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "ordering regimes over (b, g) at fixed a (CSV)");
  double fixed_a = 5.0;
  std::vector<double> b_range{1.0, 10.0};
  std::vector<double> g_range{1.0, 15.0};
  int resolution = 200;
  std::string scan_prefix = "scan";
  unsigned threads = 0;
  ScanOptions scan_opts;
  scan_cmd->add_option("--fixed-a", fixed_a, "local mixedness of mode 1")->capture_default_str();
  scan_cmd->add_option("--b-range", b_range, "range of b")->expected(2)->capture_default_str();
  scan_cmd->add_option("--g-range", g_range, "range of g")->expected(2)->capture_default_str();
  scan_cmd->add_option("--resolution", resolution, "grid points per axis")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  scan_cmd->add_option("--output-prefix", scan_prefix, "writes <prefix>_grid.csv and <prefix>_boundary.csv")
      ->capture_default_str();
  scan_cmd->add_option("--tol-bisection", scan_opts.bisection_tol, "boundary bisection tolerance in g")
      ->capture_default_str();
  scan_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  // scan3d
  auto* scan3d_cmd = app.add_subcommand("scan3d", "ordering regimes over (s, d, g) (CSV)");
  std::vector<double> s_range{1.0, 5.0};
  std::vector<double> d_range{0.0, 4.0};
  std::vector<double> g3_range{1.0, 9.0};
  int resolution3 = 40;
  std::string scan3d_prefix = "scan3d";
  scan3d_cmd->add_option("--s-range", s_range, "range of s")->expected(2)->capture_default_str();
  scan3d_cmd->add_option("--d-range", d_range, "range of d")->expected(2)->capture_default_str();
  scan3d_cmd->add_option("--g-range", g3_range, "range of g")->expected(2)->capture_default_str();
  scan3d_cmd->add_option("--resolution", resolution3, "grid points per axis")
      ->check(CLI::Range(2, 2000))
      ->capture_default_str();
  scan3d_cmd->add_option("--output-prefix", scan3d_prefix, "writes <prefix>_grid.csv and <prefix>_boundary.csv")
      ->capture_default_str();
  scan3d_cmd->add_option("--tol-bisection", scan_opts.bisection_tol, "boundary bisection tolerance in g")
      ->capture_default_str();
  scan3d_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "random-state test of the negativity bounds");
  SamplerConfig cfg;
  cfg.count = 50000;
  bool strict = false;
  std::string bounds_prefix = "bounds";
  int curve_resolution = 1000;
  ExperimentOptions exp_opts;
  TolFlags bounds_tols;
  const std::map<std::string, SamplerMode> modes{{"extremal", SamplerMode::extremal_params},
                                                 {"raw", SamplerMode::raw_standard_form}};
  bounds_cmd->add_option("--samples", cfg.count, "number of random states")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bounds_cmd->add_option("--seed", cfg.seed, "random seed")->envname("CVENT_SEED")->capture_default_str();
  bounds_cmd->add_option("--s-max", cfg.s_max, "largest average local mixedness")->capture_default_str();
  bounds_cmd->add_option("--mode", cfg.mode, "sampler: extremal or raw")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case).description(""));
  bounds_cmd->add_flag("--strict", strict, "exit 3 if any sample breaks ν̃_opt <= ν̃₋(σ)");
  bounds_cmd->add_option("--output-prefix", bounds_prefix,
                         "writes <prefix>_samples.csv, <prefix>_curves.csv, <prefix>_geof_curves.csv")
      ->capture_default_str();
  bounds_cmd->add_option("--curve-resolution", curve_resolution, "points on the analytic curves")
      ->check(CLI::Range(2, 10000000))
      ->capture_default_str();
  bounds_cmd->add_option("--tol-bound", exp_opts.bound_slack, "slack on both bounds")->capture_default_str();
  bounds_cmd->add_option("--log-base", base, "logarithm base for E_N and EoF (2 or e)")
      ->transform(CLI::CheckedTransformer(log_bases, CLI::ignore_case).description(""));
  bounds_cmd->add_option("--threads", exp_opts.threads, "worker threads (0: all cores)");
  bounds_tols.attach(*bounds_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (measure_cmd->parsed()) {
      StateInput input;
      if (squeezed_r) {
        input = make_two_mode_squeezed(*squeezed_r);
      } else if (!extremal.empty()) {
        input = ExtremalParams<double>{extremal[0], extremal[1], extremal[2], extremal[3]};
      } else if (!input_path.empty()) {
        if (input_path == "-") {
          input = parse_state_text(read_all(in));
        } else {
          std::ifstream f(input_path);
          if (!f) throw MalformedInput("cannot read " + input_path);
          input = parse_state_text(read_all(f));
        }
      } else {
        err << "measure: one of --input, --squeezed-r or --extremal is required\n";
        return exit_usage;
      }
      MeasureOptions opts;
      opts.physicality_tol = measure_tols.physicality;
      opts.em = measure_tols.em_options(base);
      out << to_json(measure(input, opts)).dump(2) << '\n';
      return exit_ok;
    }

    if (scan_cmd->parsed()) {
      scan_opts.threads = threads;
      const auto r = scan_fixed_a(fixed_a, to_range(b_range), to_range(g_range), resolution,
                                  resolution, scan_opts);
      write_scan_files(r, scan_prefix, out, err);
      return exit_ok;
    }

    if (scan3d_cmd->parsed()) {
      scan_opts.threads = threads;
      const auto r = scan_sdg(to_range(s_range), to_range(d_range), to_range(g3_range), resolution3,
                              resolution3, resolution3, scan_opts);
      write_scan_files(r, scan3d_prefix, out, err);
      return exit_ok;
    }

    if (bounds_cmd->parsed()) {
      exp_opts.em = bounds_tols.em_options(base);
      const auto result = bound_experiment(cfg, exp_opts);
      const std::string samples = bounds_prefix + "_samples.csv";
      const std::string curves = bounds_prefix + "_curves.csv";
      const std::string geof_curves = bounds_prefix + "_geof_curves.csv";
      {
        auto f = open_output(samples);
        write_experiment_csv(f, result);
        auto c = open_output(curves);
        write_bound_curves_csv(c, curve_resolution);
        auto gc = open_output(geof_curves);
        write_geof_curves_csv(gc, curve_resolution, 6.0);
      }
      const auto& s = result.summary;
      nlohmann::json summary = {{"samples", s.samples},
                                {"seed", cfg.seed},
                                {"failures", s.failures},
                                {"violations_upper", s.violations_upper},
                                {"violations_lower", s.violations_lower},
                                {"min_m_max_minus_m_opt", s.min_m_max_gap},
                                {"max_nu_opt_minus_nu_sigma", s.max_upper_excess},
                                {"max_lower_minus_nu_opt", s.max_lower_excess},
                                {"samples_csv", samples},
                                {"curves_csv", curves},
                                {"geof_curves_csv", geof_curves}};
      nlohmann::json failures = nlohmann::json::array();
      for (const auto& pt : result.points) {
        if (pt.failed) failures.push_back({{"index", pt.index}, {"error", pt.error}});
      }
      summary["failed_samples"] = failures;
      out << summary.dump(2) << '\n';
      if (s.violations_upper > 0) {
        err << "warning: " << s.violations_upper << " samples exceed ν̃_opt <= ν̃₋(σ)\n";
      }
      if (s.violations_lower > 0) {
        err << "warning: " << s.violations_lower << " samples fall below the conjectured lower bound\n";
      }
      return strict && s.violations_upper > 0 ? exit_bound_violation : exit_ok;
    }
  } catch (const MalformedInput& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return exit_unphysical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace cvent
