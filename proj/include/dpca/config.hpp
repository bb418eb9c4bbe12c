#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dpca/bench.hpp"
#include "dpca/dpca.hpp"
#include "dpca/errors.hpp"
#include "dpca/game.hpp"
#include "dpca/graph.hpp"

namespace dpca {

// Schema or syntax problem in a config file, anchored to a source position
// when one is known (1-based; 0 means unknown).
class ConfigError : public InvalidConfig {
 public:
  ConfigError(const std::string& message, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

template <typename Derived>
bool same_entries(const Eigen::DenseBase<Derived>& a, const Eigen::DenseBase<Derived>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a.derived() == b.derived());
}

struct SurveillanceSettings {
  double gamma1 = 0.1;
  double gamma2 = 0.1;
  double gamma3 = 0.875;
  double amplitude = 5.0;

  bool operator==(const SurveillanceSettings&) const = default;
};

struct QuadraticSettings {
  int players = 0;
  int dim = 1;
  Eigen::MatrixXd q;
  Eigen::VectorXd b0;
  Eigen::VectorXd b1;
  double omega = 0.0;

  bool operator==(const QuadraticSettings& o) const {
    return players == o.players && dim == o.dim && same_entries(q, o.q) && same_entries(b0, o.b0) &&
           same_entries(b1, o.b1) &&
           omega == o.omega;
  }
};

enum class GameKind { kSurveillance, kQuadratic };

struct GameSettings {
  GameKind kind = GameKind::kSurveillance;
  SurveillanceSettings surveillance;
  QuadraticSettings quadratic;
  // Overrides the automatic estimate when present.
  std::optional<RegularityConstants> constants;
  // Finite-difference grid for c1, c2: t in [0, fd_t_end] with spacing fd_step,
  // derivatives taken with the same step.
  double fd_step = 0.01;
  double fd_t_end = 40.0 * 3.14159265358979323846;

  bool operator==(const GameSettings&) const = default;
};

struct GraphSettings {
  // Exactly one of ring / weights is used.
  bool is_ring = true;
  int ring_n = 5;
  double ring_weight = 1.0;
  Eigen::MatrixXd weights;

  bool operator==(const GraphSettings& o) const {
    return is_ring == o.is_ring &&
           (is_ring ? ring_n == o.ring_n && ring_weight == o.ring_weight : same_entries(weights, o.weights));
  }
};

struct AlgorithmSettings {
  DpcaConfig dpca;
  std::uint64_t seed = 1;
  bool strict_bounds = false;
  double oracle_tol = 1e-10;
  // Empty means [5 + 5i, 10 + 5i] per player.
  std::vector<Interval> init_intervals;
  double plateau_window = 0.2;

  bool operator==(const AlgorithmSettings&) const = default;
};

struct OutputSettings {
  std::string directory = "out";
  std::string trace = "trace.csv";

  bool operator==(const OutputSettings&) const = default;
};

struct RunConfig {
  GameSettings game;
  GraphSettings graph;
  AlgorithmSettings algorithm;
  OutputSettings output;

  bool operator==(const RunConfig&) const = default;
};

// Strict YAML parsing: unknown keys, missing sections and ill-typed values
// raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string dump_config(const RunConfig& config);

std::shared_ptr<const GameModel> make_game(const RunConfig& config);
CommGraph make_graph(const RunConfig& config);
ExperimentSpec make_experiment(const RunConfig& config);

// User-supplied constants if present, otherwise estimated on the configured grid.
RegularityConstants resolve_constants(const RunConfig& config, const GameModel& game);

}  // namespace dpca
