// Command-line front end: run, bounds, sweep, compare.

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpca/bench.hpp"
#include "dpca/bounds.hpp"
#include "dpca/config.hpp"
#include "dpca/dpca.hpp"
#include "dpca/format.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::string h_list;
  bool strict_bounds = false;
  bool dump_config = false;
};

std::vector<double> parse_h_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw dpca::ConfigError("--h entry '" + item + "' is not a number");
    }
    if (used != item.size() || !(v > 0.0)) throw dpca::ConfigError("--h entry '" + item + "' is not a positive number");
    out.push_back(v);
  }
  if (out.empty()) throw dpca::ConfigError("--h list is empty");
  return out;
}

std::filesystem::path output_dir(const dpca::RunConfig& config) {
  std::filesystem::path dir = config.output.directory;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
}

dpca::BoundReport bound_report(const dpca::RunConfig& config, const dpca::ExperimentSpec& spec) {
  const dpca::RegularityConstants constants = dpca::resolve_constants(config, *spec.game);
  const Eigen::VectorXd x0 = dpca::ne_oracle(*spec.game, 0.0, {.tol = spec.oracle_tol, .max_iterations = 1'000'000, .step = std::nullopt});
  const double e0 = dpca::stacked_error(dpca::initial_estimates(spec), x0);
  return dpca::make_bound_report(spec.graph, constants, spec.config, e0);
}

bool reject_if_strict(const dpca::RunConfig& config, const dpca::BoundReport& report) {
  if (!config.algorithm.strict_bounds || report.valid()) return false;
  std::cerr << "parameters rejected by strict bounds:\n";
  for (const std::string& v : report.violations()) std::cerr << "  " << v << '\n';
  return true;
}

int cmd_run(const dpca::RunConfig& config) {
  const dpca::ExperimentSpec spec = dpca::make_experiment(config);
  const dpca::BoundReport report = bound_report(config, spec);
  if (reject_if_strict(config, report)) return kExitInvalid;
  dpca::validate(spec.config);

  const dpca::TrackingTrace trace = dpca::run_experiment(spec);
  const auto dir = output_dir(config);
  write_file(dir / config.output.trace, [&](std::ostream& o) { dpca::write_trace_csv(o, trace); });
  write_file(dir / "bounds.txt", [&](std::ostream& o) { dpca::print_bound_report(o, report); });

  const dpca::TraceRow& last = trace.rows.back();
  std::cout << "instants              " << trace.rows.size() << '\n'
            << "final_tracking_error  " << dpca::format_real(last.tracking_error) << '\n'
            << "final_consensus_error " << dpca::format_real(last.consensus_error) << '\n';
  if (trace.rows.size() >= 10) {
    const dpca::PlateauEstimate p = dpca::plateau(trace, spec.window_fraction);
    std::cout << "plateau_mean          " << dpca::format_real(p.mean_error) << '\n'
              << "plateau_max           " << dpca::format_real(p.max_error) << '\n';
  }
  const int violations = dpca::envelope_violations(trace, report);
  std::cout << "envelope_violations   " << (violations < 0 ? std::string("NA") : std::to_string(violations))
            << '\n'
            << "trace                 " << (dir / config.output.trace).string() << '\n';
  return kExitOk;
}

int cmd_bounds(const dpca::RunConfig& config, bool out_given) {
  const dpca::ExperimentSpec spec = dpca::make_experiment(config);
  const dpca::BoundReport report = bound_report(config, spec);
  dpca::print_bound_report(std::cout, report);
  if (out_given) {
    write_file(output_dir(config) / "bounds.csv", [&](std::ostream& o) { dpca::write_bound_report_csv(o, report); });
  }
  if (reject_if_strict(config, report)) return kExitInvalid;
  return kExitOk;
}

// Shortest round-trip spelling keeps file names like h0.025 readable.
std::string short_real(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string run_id(dpca::Predictor p, double h, int tau) {
  return std::string(dpca::predictor_name(p)) + "_h" + short_real(h) + "_tau" + std::to_string(tau);
}

// Runs every (h, predictor) pair, writing one trace per run and a summary.
std::vector<dpca::SummaryRow> run_grid(const dpca::RunConfig& config, const dpca::ExperimentSpec& spec,
                                       const std::vector<double>& h_values) {
  const dpca::RegularityConstants constants = dpca::resolve_constants(config, *spec.game);
  const Eigen::VectorXd x0 = dpca::ne_oracle(*spec.game, 0.0, {.tol = spec.oracle_tol, .max_iterations = 1'000'000, .step = std::nullopt});
  const double e0 = dpca::stacked_error(dpca::initial_estimates(spec), x0);
  const double t_final = spec.config.h * spec.config.horizon;
  const auto dir = output_dir(config);

  std::vector<dpca::SummaryRow> rows;
  for (const double h : h_values) {
    for (const dpca::Predictor p : {dpca::Predictor::kInterpolation, dpca::Predictor::kHold}) {
      dpca::ExperimentSpec s = spec;
      s.config.h = h;
      s.config.horizon = static_cast<int>(std::lround(t_final / h));
      s.config.predictor = p;
      dpca::validate(s.config);
      const dpca::TrackingTrace trace = dpca::run_experiment(s);
      const dpca::BoundReport report = dpca::make_bound_report(s.graph, constants, s.config, e0);
      dpca::SummaryRow row{run_id(p, h, s.config.tau), p, h, s.config.tau,
                           dpca::plateau(trace, s.window_fraction), dpca::envelope_violations(trace, report)};
      write_file(dir / (row.run_id + ".csv"), [&](std::ostream& o) { dpca::write_trace_csv(o, trace); });
      rows.push_back(row);
    }
  }
  write_file(dir / "summary.csv", [&](std::ostream& o) { dpca::write_summary_csv(o, rows); });
  return rows;
}

int cmd_sweep(const dpca::RunConfig& config, const std::vector<double>& h_values) {
  const dpca::ExperimentSpec spec = dpca::make_experiment(config);
  if (reject_if_strict(config, bound_report(config, spec))) return kExitInvalid;
  const auto rows = run_grid(config, spec, h_values);
  for (const auto& r : rows) {
    std::cout << r.run_id << "  plateau_mean " << dpca::format_real(r.plateau.mean_error) << '\n';
  }
  for (const dpca::Predictor p : {dpca::Predictor::kInterpolation, dpca::Predictor::kHold}) {
    const dpca::SummaryRow* prev = nullptr;
    for (const auto& r : rows) {
      if (r.predictor != p) continue;
      if (prev != nullptr) {
        std::cout << "ratio " << dpca::predictor_name(p) << " plateau(h=" << dpca::format_real(prev->h)
                  << ")/plateau(h=" << dpca::format_real(r.h)
                  << ") = " << dpca::format_real(prev->plateau.mean_error / r.plateau.mean_error) << '\n';
      }
      prev = &r;
    }
  }
  std::cout << "summary " << (output_dir(config) / "summary.csv").string() << '\n';
  return kExitOk;
}

int cmd_compare(const dpca::RunConfig& config) {
  const dpca::ExperimentSpec spec = dpca::make_experiment(config);
  if (reject_if_strict(config, bound_report(config, spec))) return kExitInvalid;
  const auto rows = run_grid(config, spec, {spec.config.h});
  const double interp = rows[0].plateau.mean_error;
  const double hold = rows[1].plateau.mean_error;
  std::cout << "interpolation_plateau  " << dpca::format_real(interp) << '\n'
            << "hold_plateau           " << dpca::format_real(hold) << '\n'
            << "ratio_hold_over_interp " << dpca::format_real(hold / interp) << '\n'
            << "verdict                "
            << (interp < hold ? "interpolation tracks better" : "interpolation does not track better") << '\n';
  return kExitOk;
}

int dispatch(const std::string& command, const Options& opts, bool h_given) {
  dpca::RunConfig config;
  std::vector<double> h_values;
  try {
    config = dpca::load_config(opts.config_path);
    if (opts.seed) config.algorithm.seed = *opts.seed;
    if (opts.out_dir) config.output.directory = *opts.out_dir;
    if (opts.strict_bounds) config.algorithm.strict_bounds = true;
    if (command == "sweep") {
      if (!h_given) throw dpca::ConfigError("sweep needs --h");
      h_values = parse_h_list(opts.h_list);
    }
  } catch (const dpca::ConfigError& e) {
    std::cerr << opts.config_path << ": " << e.what() << '\n';
    return kExitParse;
  }

  if (opts.dump_config) {
    std::cout << dpca::dump_config(config);
    return kExitOk;
  }

  try {
    if (command == "run") return cmd_run(config);
    if (command == "bounds") return cmd_bounds(config, opts.out_dir.has_value());
    if (command == "sweep") return cmd_sweep(config, h_values);
    return cmd_compare(config);
  } catch (const dpca::InvalidConfig& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const dpca::InvalidParameter& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed prediction-correction tracking of time-varying Nash equilibria"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "YAML config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the initial-estimate seed");
    sub->add_flag("--strict-bounds", opts.strict_bounds, "reject parameters outside the theory's region");
    sub->add_flag("--dump-config", opts.dump_config, "print the normalized config and exit");
  };
  CLI::App* run = app.add_subcommand("run", "run the tracker and write a trace CSV");
  CLI::App* bounds = app.add_subcommand("bounds", "print the theoretical bound report");
  CLI::App* sweep = app.add_subcommand("sweep", "plateau versus sampling period for both predictors");
  CLI::App* compare = app.add_subcommand("compare", "interpolation versus hold predictor");
  for (CLI::App* sub : {run, bounds, sweep, compare}) add_common(sub);
  sweep->set_help_flag("--help", "print this help message and exit");
  CLI::Option* h_opt = sweep->add_option("--h", opts.h_list, "comma-separated sampling periods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--out") > 0) opts.out_dir = out_dir;
  if (chosen->count("--seed") > 0) opts.seed = seed;
  return dispatch(chosen->get_name(), opts, h_opt->count() > 0);
}
