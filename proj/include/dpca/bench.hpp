#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpca/bounds.hpp"
#include "dpca/dpca.hpp"
#include "dpca/game.hpp"
#include "dpca/graph.hpp"

namespace dpca {

struct ExperimentSpec {
  std::shared_ptr<const GameModel> game;
  CommGraph graph;
  DpcaConfig config;
  std::uint64_t seed = 1;
  std::vector<Interval> init_intervals;
  double oracle_tol = 1e-10;
  double window_fraction = 0.2;
};

// Five-robot surveillance over a unit ring: q=400, tau=1, alpha=0.05,
// epsilon=0.01, h=0.1, 4000 instants, interpolation predictor.
ExperimentSpec paper_experiment(std::uint64_t seed = 1);

struct PlateauEstimate {
  double mean_error = 0.0;
  double max_error = 0.0;
  int first = 0;  // window is rows [first, last]
  int last = 0;
};

// Mean and max tracking error over the trailing window_fraction of rows.
PlateauEstimate plateau(const TrackingTrace& trace, double window_fraction = 0.2);

Estimates initial_estimates(const ExperimentSpec& spec);
TrackingTrace run_experiment(const ExperimentSpec& spec);

struct SweepEntry {
  double h = 0.0;
  Predictor predictor = Predictor::kInterpolation;
  PlateauEstimate plateau;
};

// Reruns the experiment for each h with the final time held fixed, under both
// predictors. Entries come out h-major, interpolation first.
std::vector<SweepEntry> h_sweep(const ExperimentSpec& spec, const std::vector<double>& h_values);

struct PredictorComparison {
  PlateauEstimate interpolation;
  PlateauEstimate hold;
};

PredictorComparison compare_predictors(const ExperimentSpec& spec);

struct SummaryRow {
  std::string run_id;
  Predictor predictor = Predictor::kInterpolation;
  double h = 0.0;
  int tau = 0;
  PlateauEstimate plateau;
  int envelope_violations = -1;  // -1: envelope unavailable
};

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

const char* predictor_name(Predictor p);

}  // namespace dpca
