#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include "dpca/game.hpp"
#include "dpca/graph.hpp"

namespace dpca {

// Stacked local estimates, shape (N*d) x N. Column i is player i's estimate of
// the joint profile; block i of column i is player i's actual strategy.
using Estimates = Eigen::MatrixXd;

enum class Predictor {
  kInterpolation,  // ((q+1)/q) x_k - (1/q) x_{k-q} once k >= q
  kHold,           // x_{k+1|k} = x_k
};

struct DpcaConfig {
  int q = 1;
  int tau = 1;
  double alpha = 0.0;
  double epsilon = 0.0;
  double h = 0.0;
  int horizon = 0;
  Predictor predictor = Predictor::kInterpolation;

  bool operator==(const DpcaConfig&) const = default;
};

// Throws InvalidConfig on q < 1, tau < 1, non-positive alpha/epsilon/h or a
// negative horizon.
void validate(const DpcaConfig& config);

// Sliding window over the last q+1 committed snapshots.
class EstimateState {
 public:
  EstimateState(Estimates initial, int q);

  int instant() const { return newest_; }
  const Estimates& current() const { return history_.back(); }
  std::size_t depth() const { return history_.size(); }

  // Snapshot committed at instant k; throws InternalState if evicted or unseen.
  const Estimates& snapshot(int k) const;

  void commit(Estimates next);

 private:
  std::deque<Estimates> history_;
  int newest_ = 0;
  std::size_t capacity_;
};

Estimates predict(const EstimateState& state, int k, int q);

// One synchronous correction round at time t: every player mixes neighbours'
// estimates with stepsize alpha and takes an epsilon gradient step on its own
// block only. All reads use the incoming snapshot.
Estimates correct_round(const GameModel& game, const CommGraph& graph, double t,
                        const Estimates& estimates, double alpha, double epsilon);

struct TraceRow {
  int k = 0;
  double t = 0.0;
  double tracking_error = 0.0;
  double consensus_error = 0.0;
  // |x_{k+1|k} - 1 (x) x*(t_{k+1})|, NaN when not recorded or on the last row.
  double predicted_error = 0.0;
  Eigen::VectorXd strategies;  // actual strategies x^i_i stacked, length N*d
};

struct TrackingTrace {
  int players = 0;
  int dim = 0;
  std::vector<TraceRow> rows;  // k = 0..horizon
};

struct RunOptions {
  double oracle_tol = 1e-10;
  bool record_prediction = true;
};

TrackingTrace run(const GameModel& game, const CommGraph& graph, const DpcaConfig& config,
                  const Estimates& initial, const RunOptions& options = {});

struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool operator==(const Interval&) const = default;
};

// Every entry of player i's estimate vector is drawn uniformly from
// intervals[i]. Uses mt19937_64 with an explicit 53-bit mantissa mapping so
// that output depends only on the seed.
Estimates initial_estimates(std::uint64_t seed, std::span<const Interval> intervals, int dim);

// [5 + 5i, 10 + 5i] for i = 0..players-1.
std::vector<Interval> surveillance_intervals(int players);

// |X - 1 (x) x*| over all N*N*d entries.
double stacked_error(const Estimates& estimates, const Eigen::VectorXd& equilibrium);
// max_i |x^i - mean_j x^j|
double consensus_error(const Estimates& estimates);

// Columns: k,t,tracking_error,consensus_error,predicted_error,x_1_1..x_N_d.
void write_trace_csv(std::ostream& out, const TrackingTrace& trace);

}  // namespace dpca
