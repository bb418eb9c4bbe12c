#include "dpca/dpca.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "dpca/errors.hpp"
#include "dpca/format.hpp"

namespace dpca {

void validate(const DpcaConfig& config) {
  if (config.q < 1) throw InvalidConfig("q must be at least 1");
  if (config.tau < 1) throw InvalidConfig("tau must be at least 1");
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) throw InvalidConfig("alpha must be positive");
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
    throw InvalidConfig("epsilon must be positive");
  }
  if (!(config.h > 0.0) || !std::isfinite(config.h)) throw InvalidConfig("h must be positive");
  if (config.horizon < 0) throw InvalidConfig("horizon must be nonnegative");
}

EstimateState::EstimateState(Estimates initial, int q) : capacity_(static_cast<std::size_t>(q) + 1) {
  if (q < 1) throw InvalidConfig("q must be at least 1");
  history_.push_back(std::move(initial));
}

const Estimates& EstimateState::snapshot(int k) const {
  const int oldest = newest_ - static_cast<int>(history_.size()) + 1;
  if (k < oldest || k > newest_) {
    throw InternalState("snapshot " + std::to_string(k) + " not retained (have " +
                        std::to_string(oldest) + ".." + std::to_string(newest_) + ")");
  }
  return history_[static_cast<std::size_t>(k - oldest)];
}

void EstimateState::commit(Estimates next) {
  history_.push_back(std::move(next));
  ++newest_;
  while (history_.size() > capacity_) history_.pop_front();
}

Estimates predict(const EstimateState& state, int k, int q) {
  if (q < 1) throw InvalidConfig("q must be at least 1");
  const Estimates& now = state.snapshot(k);
  if (k < q) return now;
  const double qd = static_cast<double>(q);
  return ((qd + 1.0) / qd) * now - (1.0 / qd) * state.snapshot(k - q);
}

Estimates correct_round(const GameModel& game, const CommGraph& graph, double t,
                        const Estimates& estimates, double alpha, double epsilon) {
  const int n = game.players();
  const int d = game.dim();
  if (graph.size() != n) throw DimensionMismatch("graph size differs from player count");
  if (estimates.rows() != game.joint_size() || estimates.cols() != n) {
    throw DimensionMismatch("estimates must be (N*d) x N");
  }
  const Eigen::MatrixXd& a = graph.weights();
  Estimates next = estimates;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a(i, j) != 0.0) next.col(i) += alpha * a(i, j) * (estimates.col(j) - estimates.col(i));
    }
    next.col(i).segment(i * d, d) -= epsilon * game.gradient(t, i, estimates.col(i));
  }
  return next;
}

double stacked_error(const Estimates& estimates, const Eigen::VectorXd& equilibrium) {
  return (estimates.colwise() - equilibrium).norm();
}

double consensus_error(const Estimates& estimates) {
  const Eigen::VectorXd mean = estimates.rowwise().mean();
  return (estimates.colwise() - mean).colwise().norm().maxCoeff();
}

namespace {

Eigen::VectorXd actual_strategies(const Estimates& estimates, int d) {
  const auto n = estimates.cols();
  Eigen::VectorXd out(n * d);
  for (Eigen::Index i = 0; i < n; ++i) out.segment(i * d, d) = estimates.col(i).segment(i * d, d);
  return out;
}

}  // namespace

TrackingTrace run(const GameModel& game, const CommGraph& graph, const DpcaConfig& config,
                  const Estimates& initial, const RunOptions& options) {
  validate(config);
  if (graph.size() != game.players()) throw DimensionMismatch("graph size differs from player count");
  if (!graph.is_connected()) throw InvalidGraph("communication graph is not connected");
  if (initial.rows() != game.joint_size() || initial.cols() != game.players()) {
    throw DimensionMismatch("initial estimates must be (N*d) x N");
  }

  const int d = game.dim();
  const OracleOptions oracle{.tol = options.oracle_tol, .max_iterations = 1'000'000, .step = std::nullopt};
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  TrackingTrace trace{game.players(), d, {}};
  trace.rows.reserve(static_cast<std::size_t>(config.horizon) + 1);

  Eigen::VectorXd equilibrium = ne_oracle(game, 0.0, oracle);
  trace.rows.push_back({0, 0.0, stacked_error(initial, equilibrium), consensus_error(initial), kNaN,
                        actual_strategies(initial, d)});

  EstimateState state(initial, config.q);
  for (int k = 0; k < config.horizon; ++k) {
    Estimates x = config.predictor == Predictor::kInterpolation ? predict(state, k, config.q)
                                                                : state.current();
    const double t_next = (k + 1) * config.h;
    equilibrium = ne_oracle(game, t_next, oracle);
    if (options.record_prediction) trace.rows.back().predicted_error = stacked_error(x, equilibrium);

    for (int s = 0; s < config.tau; ++s) {
      x = correct_round(game, graph, t_next, x, config.alpha, config.epsilon);
    }
    trace.rows.push_back({k + 1, t_next, stacked_error(x, equilibrium), consensus_error(x), kNaN,
                          actual_strategies(x, d)});
    state.commit(std::move(x));
  }
  return trace;
}

Estimates initial_estimates(std::uint64_t seed, std::span<const Interval> intervals, int dim) {
  if (dim < 1) throw InvalidConfig("dim must be positive");
  const auto n = static_cast<Eigen::Index>(intervals.size());
  for (const Interval& iv : intervals) {
    if (!(iv.low <= iv.high)) throw InvalidConfig("interval low exceeds high");
  }
  std::mt19937_64 engine(seed);
  Estimates x(n * dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Interval& iv = intervals[static_cast<std::size_t>(i)];
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      x(r, i) = iv.low == iv.high ? iv.low : iv.low + (iv.high - iv.low) * u;
    }
  }
  return x;
}

std::vector<Interval> surveillance_intervals(int players) {
  std::vector<Interval> out;
  for (int i = 0; i < players; ++i) out.push_back({5.0 + 5.0 * i, 10.0 + 5.0 * i});
  return out;
}

void write_trace_csv(std::ostream& out, const TrackingTrace& trace) {
  out << "k,t,tracking_error,consensus_error,predicted_error";
  for (int i = 1; i <= trace.players; ++i) {
    for (int c = 1; c <= trace.dim; ++c) out << ",x_" << i << '_' << c;
  }
  out << '\n';
  for (const TraceRow& row : trace.rows) {
    out << row.k << ',' << format_real(row.t) << ',' << format_real(row.tracking_error) << ','
        << format_real(row.consensus_error) << ',' << format_real(row.predicted_error);
    for (Eigen::Index e = 0; e < row.strategies.size(); ++e) out << ',' << format_real(row.strategies(e));
    out << '\n';
  }
}

}  // namespace dpca
