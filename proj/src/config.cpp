#include "dpca/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dpca {

ConfigError::ConfigError(const std::string& message, int line, int column)
    : InvalidConfig(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                   ": " + message
                             : message),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ConfigError(message);
  throw ConfigError(message, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) fail(node, what + " must be a mapping");
}

void reject_unknown(const YAML::Node& map, const std::string& section, const std::set<std::string>& allowed) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(kv.first, "unknown key '" + key + "' in " + section);
  }
}

YAML::Node required(const YAML::Node& map, const std::string& section, const std::string& key) {
  const YAML::Node n = map[key];
  if (!n) fail(map, "missing key '" + key + "' in " + section);
  return n;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(node, "'" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

template <typename T>
void optional_scalar(const YAML::Node& map, const std::string& key, T& target) {
  if (const YAML::Node n = map[key]) target = scalar<T>(n, key);
}

Eigen::VectorXd vector_of(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) fail(node, "'" + key + "' must be a list of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar<double>(node[i], key);
  return v;
}

Eigen::MatrixXd matrix_of(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() == 0) fail(node, "'" + key + "' must be a nonempty list of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_of(node[static_cast<std::size_t>(r)], key);
    if (cols < 0) {
      cols = row.size();
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      fail(node[static_cast<std::size_t>(r)], "'" + key + "' rows have different lengths");
    }
    m.row(r) = row.transpose();
  }
  return m;
}

Predictor predictor_of(const YAML::Node& node) {
  const auto s = scalar<std::string>(node, "predictor");
  if (s == "interpolation") return Predictor::kInterpolation;
  if (s == "hold") return Predictor::kHold;
  fail(node, "predictor must be 'interpolation' or 'hold', got '" + s + "'");
}

GameSettings parse_game(const YAML::Node& node) {
  require_map(node, "game");
  GameSettings g;
  const YAML::Node type = required(node, "game", "type");
  const auto kind = scalar<std::string>(type, "type");
  std::set<std::string> allowed = {"type", "constants", "fd_step", "fd_t_end"};
  if (kind == "surveillance") {
    g.kind = GameKind::kSurveillance;
    allowed.insert({"gamma1", "gamma2", "gamma3", "amplitude"});
    reject_unknown(node, "game", allowed);
    optional_scalar(node, "gamma1", g.surveillance.gamma1);
    optional_scalar(node, "gamma2", g.surveillance.gamma2);
    optional_scalar(node, "gamma3", g.surveillance.gamma3);
    optional_scalar(node, "amplitude", g.surveillance.amplitude);
  } else if (kind == "quadratic") {
    g.kind = GameKind::kQuadratic;
    allowed.insert({"players", "dim", "Q", "b0", "b1", "omega"});
    reject_unknown(node, "game", allowed);
    auto& q = g.quadratic;
    q.players = scalar<int>(required(node, "game", "players"), "players");
    optional_scalar(node, "dim", q.dim);
    if (q.players < 1 || q.dim < 1) fail(node, "players and dim must be positive");
    const Eigen::Index n = static_cast<Eigen::Index>(q.players) * q.dim;
    const YAML::Node qn = required(node, "game", "Q");
    q.q = matrix_of(qn, "Q");
    if (q.q.rows() != n || q.q.cols() != n) fail(qn, "Q must be " + std::to_string(n) + "x" + std::to_string(n));
    const YAML::Node b0 = required(node, "game", "b0");
    q.b0 = vector_of(b0, "b0");
    if (q.b0.size() != n) fail(b0, "b0 must have " + std::to_string(n) + " entries");
    if (const YAML::Node b1 = node["b1"]) {
      q.b1 = vector_of(b1, "b1");
      if (q.b1.size() != n) fail(b1, "b1 must have " + std::to_string(n) + " entries");
    } else {
      q.b1 = Eigen::VectorXd::Zero(n);
    }
    optional_scalar(node, "omega", q.omega);
  } else {
    fail(type, "game type must be 'surveillance' or 'quadratic', got '" + kind + "'");
  }

  if (const YAML::Node c = node["constants"]) {
    require_map(c, "game.constants");
    reject_unknown(c, "game.constants", {"mu", "theta", "c1", "c2"});
    RegularityConstants k;
    k.mu = scalar<double>(required(c, "game.constants", "mu"), "mu");
    k.theta = scalar<double>(required(c, "game.constants", "theta"), "theta");
    k.c1 = scalar<double>(required(c, "game.constants", "c1"), "c1");
    k.c2 = scalar<double>(required(c, "game.constants", "c2"), "c2");
    if (!(k.mu > 0.0) || !(k.theta > 0.0) || k.c1 < 0.0 || k.c2 < 0.0) {
      fail(c, "constants need mu > 0, theta > 0, c1 >= 0, c2 >= 0");
    }
    g.constants = k;
  }
  optional_scalar(node, "fd_step", g.fd_step);
  optional_scalar(node, "fd_t_end", g.fd_t_end);
  if (!(g.fd_step > 0.0) || !(g.fd_t_end >= 0.0)) fail(node, "fd_step must be positive and fd_t_end nonnegative");
  return g;
}

GraphSettings parse_graph(const YAML::Node& node) {
  require_map(node, "graph");
  reject_unknown(node, "graph", {"ring", "weights"});
  GraphSettings g;
  const YAML::Node ring = node["ring"];
  const YAML::Node weights = node["weights"];
  if (static_cast<bool>(ring) == static_cast<bool>(weights)) {
    fail(node, "graph needs exactly one of 'ring' or 'weights'");
  }
  if (ring) {
    require_map(ring, "graph.ring");
    reject_unknown(ring, "graph.ring", {"n", "weight"});
    g.is_ring = true;
    g.ring_n = scalar<int>(required(ring, "graph.ring", "n"), "n");
    optional_scalar(ring, "weight", g.ring_weight);
  } else {
    g.is_ring = false;
    g.weights = matrix_of(weights, "weights");
  }
  return g;
}

AlgorithmSettings parse_algorithm(const YAML::Node& node) {
  require_map(node, "algorithm");
  reject_unknown(node, "algorithm",
                 {"q", "tau", "alpha", "epsilon", "h", "horizon", "predictor", "seed", "strict_bounds",
                  "oracle_tol", "init_intervals", "plateau_window"});
  AlgorithmSettings a;
  DpcaConfig& c = a.dpca;
  c.q = scalar<int>(required(node, "algorithm", "q"), "q");
  c.tau = scalar<int>(required(node, "algorithm", "tau"), "tau");
  c.alpha = scalar<double>(required(node, "algorithm", "alpha"), "alpha");
  c.epsilon = scalar<double>(required(node, "algorithm", "epsilon"), "epsilon");
  c.h = scalar<double>(required(node, "algorithm", "h"), "h");
  c.horizon = scalar<int>(required(node, "algorithm", "horizon"), "horizon");
  if (const YAML::Node p = node["predictor"]) c.predictor = predictor_of(p);
  optional_scalar(node, "seed", a.seed);
  optional_scalar(node, "strict_bounds", a.strict_bounds);
  optional_scalar(node, "oracle_tol", a.oracle_tol);
  optional_scalar(node, "plateau_window", a.plateau_window);

  if (c.q < 1) fail(node["q"], "q must be at least 1");
  if (c.tau < 1) fail(node["tau"], "tau must be at least 1");
  if (!(c.alpha > 0.0)) fail(node["alpha"], "alpha must be positive");
  // epsilon = 0 is accepted so that degenerate bound reports can be inspected.
  if (!(c.epsilon >= 0.0)) fail(node["epsilon"], "epsilon must be nonnegative");
  if (!(c.h > 0.0)) fail(node["h"], "h must be positive");
  if (c.horizon < 0) fail(node["horizon"], "horizon must be nonnegative");
  if (!(a.oracle_tol > 0.0)) fail(node["oracle_tol"], "oracle_tol must be positive");
  if (!(a.plateau_window > 0.0 && a.plateau_window <= 1.0)) {
    fail(node["plateau_window"], "plateau_window must lie in (0, 1]");
  }

  if (const YAML::Node iv = node["init_intervals"]) {
    if (!iv.IsSequence()) fail(iv, "init_intervals must be a list of [low, high] pairs");
    for (const auto& pair : iv) {
      const Eigen::VectorXd v = vector_of(pair, "init_intervals");
      if (v.size() != 2) fail(pair, "each interval needs exactly [low, high]");
      if (!(v(0) <= v(1))) fail(pair, "interval low exceeds high");
      a.init_intervals.push_back({v(0), v(1)});
    }
  }
  return a;
}

OutputSettings parse_output(const YAML::Node& node) {
  require_map(node, "output");
  reject_unknown(node, "output", {"directory", "trace"});
  OutputSettings o;
  optional_scalar(node, "directory", o.directory);
  optional_scalar(node, "trace", o.trace);
  return o;
}

void check_consistency(const RunConfig& c, const YAML::Node& root) {
  const int players = c.game.kind == GameKind::kSurveillance ? SurveillanceGame::kPlayers
                                                             : c.game.quadratic.players;
  const int graph_n = c.graph.is_ring ? c.graph.ring_n : static_cast<int>(c.graph.weights.rows());
  if (graph_n != players) {
    fail(root["graph"], "graph has " + std::to_string(graph_n) + " nodes but the game has " +
                            std::to_string(players) + " players");
  }
  if (!c.algorithm.init_intervals.empty() && static_cast<int>(c.algorithm.init_intervals.size()) != players) {
    fail(root["algorithm"]["init_intervals"], "need one initial interval per player");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections");
  reject_unknown(root, "config", {"game", "graph", "algorithm", "output"});

  RunConfig c;
  c.game = parse_game(required(root, "config", "game"));
  c.graph = parse_graph(required(root, "config", "graph"));
  c.algorithm = parse_algorithm(required(root, "config", "algorithm"));
  if (const YAML::Node out = root["output"]) c.output = parse_output(out);
  check_consistency(c, root);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

void emit_vector(YAML::Emitter& out, const Eigen::VectorXd& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v(i);
  out << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& out, const Eigen::MatrixXd& m) {
  out << YAML::BeginSeq;
  for (Eigen::Index r = 0; r < m.rows(); ++r) emit_vector(out, m.row(r).transpose());
  out << YAML::EndSeq;
}

}  // namespace

std::string dump_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "game" << YAML::Value << YAML::BeginMap;
  if (c.game.kind == GameKind::kSurveillance) {
    const auto& s = c.game.surveillance;
    out << YAML::Key << "type" << YAML::Value << "surveillance";
    out << YAML::Key << "gamma1" << YAML::Value << s.gamma1;
    out << YAML::Key << "gamma2" << YAML::Value << s.gamma2;
    out << YAML::Key << "gamma3" << YAML::Value << s.gamma3;
    out << YAML::Key << "amplitude" << YAML::Value << s.amplitude;
  } else {
    const auto& q = c.game.quadratic;
    out << YAML::Key << "type" << YAML::Value << "quadratic";
    out << YAML::Key << "players" << YAML::Value << q.players;
    out << YAML::Key << "dim" << YAML::Value << q.dim;
    out << YAML::Key << "Q" << YAML::Value;
    emit_matrix(out, q.q);
    out << YAML::Key << "b0" << YAML::Value;
    emit_vector(out, q.b0);
    out << YAML::Key << "b1" << YAML::Value;
    emit_vector(out, q.b1);
    out << YAML::Key << "omega" << YAML::Value << q.omega;
  }
  if (c.game.constants) {
    const auto& k = *c.game.constants;
    out << YAML::Key << "constants" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "mu" << YAML::Value << k.mu;
    out << YAML::Key << "theta" << YAML::Value << k.theta;
    out << YAML::Key << "c1" << YAML::Value << k.c1;
    out << YAML::Key << "c2" << YAML::Value << k.c2;
    out << YAML::EndMap;
  }
  out << YAML::Key << "fd_step" << YAML::Value << c.game.fd_step;
  out << YAML::Key << "fd_t_end" << YAML::Value << c.game.fd_t_end;
  out << YAML::EndMap;

  out << YAML::Key << "graph" << YAML::Value << YAML::BeginMap;
  if (c.graph.is_ring) {
    out << YAML::Key << "ring" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << c.graph.ring_n;
    out << YAML::Key << "weight" << YAML::Value << c.graph.ring_weight;
    out << YAML::EndMap;
  } else {
    out << YAML::Key << "weights" << YAML::Value;
    emit_matrix(out, c.graph.weights);
  }
  out << YAML::EndMap;

  const auto& a = c.algorithm;
  out << YAML::Key << "algorithm" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "q" << YAML::Value << a.dpca.q;
  out << YAML::Key << "tau" << YAML::Value << a.dpca.tau;
  out << YAML::Key << "alpha" << YAML::Value << a.dpca.alpha;
  out << YAML::Key << "epsilon" << YAML::Value << a.dpca.epsilon;
  out << YAML::Key << "h" << YAML::Value << a.dpca.h;
  out << YAML::Key << "horizon" << YAML::Value << a.dpca.horizon;
  out << YAML::Key << "predictor" << YAML::Value << predictor_name(a.dpca.predictor);
  out << YAML::Key << "seed" << YAML::Value << a.seed;
  out << YAML::Key << "strict_bounds" << YAML::Value << a.strict_bounds;
  out << YAML::Key << "oracle_tol" << YAML::Value << a.oracle_tol;
  out << YAML::Key << "plateau_window" << YAML::Value << a.plateau_window;
  if (!a.init_intervals.empty()) {
    out << YAML::Key << "init_intervals" << YAML::Value << YAML::BeginSeq;
    for (const Interval& iv : a.init_intervals) {
      out << YAML::Flow << YAML::BeginSeq << iv.low << iv.high << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << c.output.directory;
  out << YAML::Key << "trace" << YAML::Value << c.output.trace;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::shared_ptr<const GameModel> make_game(const RunConfig& config) {
  if (config.game.kind == GameKind::kSurveillance) {
    const auto& s = config.game.surveillance;
    return std::make_shared<SurveillanceGame>(s.gamma1, s.gamma2, s.gamma3, s.amplitude);
  }
  const auto& q = config.game.quadratic;
  return std::make_shared<QuadraticGame>(q.players, q.dim, q.q, q.b0, q.b1, q.omega);
}

CommGraph make_graph(const RunConfig& config) {
  const auto& g = config.graph;
  return g.is_ring ? CommGraph::build_ring(g.ring_n, g.ring_weight) : CommGraph::from_weights(g.weights);
}

ExperimentSpec make_experiment(const RunConfig& config) {
  auto game = make_game(config);
  const int players = game->players();
  std::vector<Interval> intervals = config.algorithm.init_intervals.empty()
                                        ? surveillance_intervals(players)
                                        : config.algorithm.init_intervals;
  return ExperimentSpec{.game = std::move(game),
                        .graph = make_graph(config),
                        .config = config.algorithm.dpca,
                        .seed = config.algorithm.seed,
                        .init_intervals = std::move(intervals),
                        .oracle_tol = config.algorithm.oracle_tol,
                        .window_fraction = config.algorithm.plateau_window};
}

RegularityConstants resolve_constants(const RunConfig& config, const GameModel& game) {
  if (config.game.constants) return *config.game.constants;
  std::vector<double> grid;
  const double step = config.game.fd_step;
  const auto count = static_cast<long>(std::floor(config.game.fd_t_end / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(count) + 1);
  for (long j = 0; j <= count; ++j) grid.push_back(static_cast<double>(j) * step);
  return estimate_constants(game, grid, step, config.algorithm.oracle_tol);
}

}  // namespace dpca
