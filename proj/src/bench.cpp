#include "dpca/bench.hpp"

#include <cmath>
#include <ostream>

#include "dpca/errors.hpp"
#include "dpca/format.hpp"

namespace dpca {

ExperimentSpec paper_experiment(std::uint64_t seed) {
  auto game = std::make_shared<SurveillanceGame>(0.1, 0.1, 0.875);
  DpcaConfig config{.q = 400,
                    .tau = 1,
                    .alpha = 0.05,
                    .epsilon = 0.01,
                    .h = 0.1,
                    .horizon = 4000,
                    .predictor = Predictor::kInterpolation};
  return ExperimentSpec{.game = std::move(game),
                        .graph = CommGraph::build_ring(SurveillanceGame::kPlayers, 1.0),
                        .config = config,
                        .seed = seed,
                        .init_intervals = surveillance_intervals(SurveillanceGame::kPlayers),
                        .oracle_tol = 1e-10,
                        .window_fraction = 0.2};
}

PlateauEstimate plateau(const TrackingTrace& trace, double window_fraction) {
  const int n = static_cast<int>(trace.rows.size());
  if (n < 10) throw InvalidParameter("plateau needs at least 10 instants, trace has " + std::to_string(n));
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw InvalidParameter("window fraction must lie in (0, 1]");
  }
  const int width = std::max(1, static_cast<int>(std::floor(window_fraction * n)));
  PlateauEstimate p;
  p.first = n - width;
  p.last = n - 1;
  double sum = 0.0;
  for (int k = p.first; k <= p.last; ++k) {
    const double e = trace.rows[static_cast<std::size_t>(k)].tracking_error;
    sum += e;
    p.max_error = std::max(p.max_error, e);
  }
  p.mean_error = sum / width;
  return p;
}

Estimates initial_estimates(const ExperimentSpec& spec) {
  if (static_cast<int>(spec.init_intervals.size()) != spec.game->players()) {
    throw InvalidConfig("need one initial interval per player");
  }
  return initial_estimates(spec.seed, spec.init_intervals, spec.game->dim());
}

TrackingTrace run_experiment(const ExperimentSpec& spec) {
  return run(*spec.game, spec.graph, spec.config, initial_estimates(spec),
             RunOptions{.oracle_tol = spec.oracle_tol});
}

std::vector<SweepEntry> h_sweep(const ExperimentSpec& spec, const std::vector<double>& h_values) {
  if (h_values.empty()) throw InvalidConfig("h list is empty");
  const double t_final = spec.config.h * spec.config.horizon;
  std::vector<SweepEntry> out;
  for (const double h : h_values) {
    if (!(h > 0.0)) throw InvalidConfig("sweep h values must be positive");
    for (const Predictor p : {Predictor::kInterpolation, Predictor::kHold}) {
      ExperimentSpec s = spec;
      s.config.h = h;
      s.config.horizon = static_cast<int>(std::lround(t_final / h));
      s.config.predictor = p;
      out.push_back({h, p, plateau(run_experiment(s), s.window_fraction)});
    }
  }
  return out;
}

PredictorComparison compare_predictors(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.config.predictor = Predictor::kInterpolation;
  const PlateauEstimate interp = plateau(run_experiment(s), s.window_fraction);
  s.config.predictor = Predictor::kHold;
  return {interp, plateau(run_experiment(s), s.window_fraction)};
}

const char* predictor_name(Predictor p) {
  return p == Predictor::kInterpolation ? "interpolation" : "hold";
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "run_id,predictor,h,tau,plateau_mean,plateau_max,envelope_violations\n";
  for (const SummaryRow& r : rows) {
    out << r.run_id << ',' << predictor_name(r.predictor) << ',' << format_real(r.h) << ',' << r.tau << ','
        << format_real(r.plateau.mean_error) << ',' << format_real(r.plateau.max_error) << ',';
    if (r.envelope_violations >= 0) {
      out << r.envelope_violations;
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

}  // namespace dpca
