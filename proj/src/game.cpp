#include "dpca/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

SurveillanceGame::SurveillanceGame(double gamma1, double gamma2, double gamma3, double amplitude)
    : gamma1_(gamma1), gamma2_(gamma2), gamma3_(gamma3), amplitude_(amplitude) {
  if (gamma1 < 0.0 || gamma2 < 0.0 || gamma3 < 0.0) {
    throw InvalidGame("surveillance weights must be nonnegative");
  }
  if (gamma1 + gamma2 <= 0.0) {
    throw InvalidGame("gamma1 + gamma2 must be positive for strong monotonicity");
  }
}

void SurveillanceGame::check_player(int i) const {
  if (i < 0 || i >= kPlayers) {
    throw InvalidGame("player index " + std::to_string(i) + " out of range");
  }
}

Eigen::Vector2d SurveillanceGame::center(int i) const {
  check_player(i);
  const double c = 8.0 + 6.0 * i;
  return {c, c};
}

Eigen::Vector2d SurveillanceGame::intruder_position(int i, double t) const {
  return center(i) + amplitude_ * Eigen::Vector2d(std::cos(t / 20.0), std::sin(t / 10.0));
}

Eigen::Vector2d SurveillanceGame::target_position(double t) const {
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < kPlayers; ++i) sum += intruder_position(i, t);
  return sum / 10.0;
}

Eigen::Vector2d SurveillanceGame::aggregate(const Eigen::VectorXd& x) const {
  if (x.size() != kPlayers * kDim) throw DimensionMismatch("surveillance profile must have 10 entries");
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int j = 0; j < kPlayers; ++j) sum += x.segment<kDim>(j * kDim);
  return sum / kPlayers;
}

double SurveillanceGame::cost(double t, int i, const Eigen::VectorXd& x) const {
  check_player(i);
  const Eigen::Vector2d xi = x.segment<kDim>(i * kDim);
  const Eigen::Vector2d b = target_position(t);
  return 0.5 * gamma1_ * (xi - intruder_position(i, t)).squaredNorm() +
         0.5 * gamma2_ * (xi - b).squaredNorm() + gamma3_ / 10.0 * (aggregate(x) - b).squaredNorm();
}

Eigen::VectorXd SurveillanceGame::gradient(double t, int i, const Eigen::VectorXd& x) const {
  check_player(i);
  const Eigen::Vector2d xi = x.segment<kDim>(i * kDim);
  const Eigen::Vector2d b = target_position(t);
  // d/dx_i of g3/10 |sigma - b|^2 is (2 g3 / (10 N)) (sigma - b).
  const double coupling = 2.0 * gamma3_ / (10.0 * kPlayers);
  Eigen::VectorXd g = gamma1_ * (xi - intruder_position(i, t)) + gamma2_ * (xi - b) +
                      coupling * (aggregate(x) - b);
  return g;
}

std::optional<AffineForm> SurveillanceGame::affine_form(double t) const {
  constexpr int n = kPlayers * kDim;
  const double coupling = 2.0 * gamma3_ / (10.0 * kPlayers);
  const Eigen::Vector2d b = target_position(t);
  AffineForm form{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (int i = 0; i < kPlayers; ++i) {
    for (int j = 0; j < kPlayers; ++j) {
      const double w = coupling / kPlayers + (i == j ? gamma1_ + gamma2_ : 0.0);
      for (int c = 0; c < kDim; ++c) form.jacobian(i * kDim + c, j * kDim + c) = w;
    }
    form.offset.segment<kDim>(i * kDim) =
        -gamma1_ * intruder_position(i, t) - (gamma2_ + coupling) * b;
  }
  return form;
}

QuadraticGame::QuadraticGame(int players, int dim, Eigen::MatrixXd q, Eigen::VectorXd b0,
                             Eigen::VectorXd b1, double omega)
    : players_(players), dim_(dim), q_(std::move(q)), b0_(std::move(b0)), b1_(std::move(b1)),
      omega_(omega) {
  if (players < 1 || dim < 1) throw InvalidGame("players and dim must be positive");
  const int n = players * dim;
  if (q_.rows() != n || q_.cols() != n) {
    throw DimensionMismatch("Q must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (b0_.size() != n || b1_.size() != n) {
    throw DimensionMismatch("b0 and b1 must have " + std::to_string(n) + " entries");
  }
}

Eigen::VectorXd QuadraticGame::offset(double t) const { return b0_ + b1_ * std::sin(omega_ * t); }

Eigen::VectorXd QuadraticGame::gradient(double t, int i, const Eigen::VectorXd& x) const {
  if (i < 0 || i >= players_) throw InvalidGame("player index " + std::to_string(i) + " out of range");
  if (x.size() != joint_size()) throw DimensionMismatch("profile has wrong length");
  return q_.middleRows(i * dim_, dim_) * x + offset(t).segment(i * dim_, dim_);
}

std::optional<AffineForm> QuadraticGame::affine_form(double t) const {
  return AffineForm{q_, offset(t)};
}

Eigen::VectorXd pseudogradient(const GameModel& game, double t, const Eigen::VectorXd& x) {
  const int d = game.dim();
  if (x.size() != game.joint_size()) {
    throw DimensionMismatch("profile has " + std::to_string(x.size()) + " entries, expected " +
                            std::to_string(game.joint_size()));
  }
  Eigen::VectorXd out(game.joint_size());
  for (int i = 0; i < game.players(); ++i) out.segment(i * d, d) = game.gradient(t, i, x);
  return out;
}

Eigen::VectorXd augmented_pseudogradient(const GameModel& game, double t,
                                         const Eigen::MatrixXd& estimates) {
  const int d = game.dim();
  if (estimates.rows() != game.joint_size() || estimates.cols() != game.players()) {
    throw DimensionMismatch("estimates must be (N*d) x N");
  }
  Eigen::VectorXd out(game.joint_size());
  for (int i = 0; i < game.players(); ++i) {
    out.segment(i * d, d) = game.gradient(t, i, estimates.col(i));
  }
  return out;
}

Eigen::VectorXd ne_oracle(const GameModel& game, double t, const OracleOptions& options) {
  if (auto form = game.affine_form(t)) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(form->jacobian);
    Eigen::VectorXd x = lu.solve(-form->offset);
    double residual = (form->jacobian * x + form->offset).norm();
    // A couple of refinement sweeps absorb rounding for larger offsets.
    for (int sweep = 0; sweep < 3 && residual > options.tol; ++sweep) {
      x -= lu.solve(form->jacobian * x + form->offset);
      residual = (form->jacobian * x + form->offset).norm();
    }
    if (!(residual <= options.tol)) {
      throw NoConvergence("linear NE solve left residual " + std::to_string(residual), residual);
    }
    return x;
  }

  if (!options.step || !(*options.step > 0.0)) {
    throw InvalidGame("gradient-play oracle needs a positive step (mu/theta^2)");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(game.joint_size());
  double residual = 0.0;
  for (long it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd f = pseudogradient(game, t, x);
    residual = f.norm();
    if (residual <= options.tol) return x;
    x -= *options.step * f;
  }
  throw NoConvergence("gradient play hit the iteration cap with residual " + std::to_string(residual),
                      residual);
}

RegularityConstants affine_constants(const Eigen::MatrixXd& q, int players, int dim) {
  const int n = players * dim;
  if (q.rows() != n || q.cols() != n) throw DimensionMismatch("Jacobian has wrong shape");
  RegularityConstants k;
  const Eigen::MatrixXd sym = 0.5 * (q + q.transpose());
  k.mu = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);

  auto spectral_norm = [](const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
  };
  double theta = 0.0;
  for (int i = 0; i < players; ++i) {
    const Eigen::MatrixXd row = q.middleRows(i * dim, dim);
    const Eigen::MatrixXd own = row.middleCols(i * dim, dim);
    Eigen::MatrixXd others(dim, n - dim);
    others << row.leftCols(i * dim), row.rightCols(n - (i + 1) * dim);
    const double ti = spectral_norm(own);
    const double tmi = spectral_norm(others);
    theta = std::max(theta, std::sqrt(ti * ti + tmi * tmi));
  }
  k.theta = theta;
  return k;
}

RegularityConstants estimate_constants(const GameModel& game, std::span<const double> t_grid,
                                       double h, double oracle_tol) {
  if (!(h > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  if (t_grid.empty()) throw InvalidParameter("time grid is empty");
  const auto form = game.affine_form(t_grid.front());
  if (!form) {
    throw InvalidGame("automatic constants need an affine pseudogradient; supply mu and theta");
  }
  RegularityConstants k = affine_constants(form->jacobian, game.players(), game.dim());
  if (!(k.mu > 0.0)) {
    throw InvalidGame("pseudogradient is not strongly monotone (mu = " + std::to_string(k.mu) + ")");
  }

  const OracleOptions opts{.tol = oracle_tol, .max_iterations = 1'000'000, .step = std::nullopt};
  double c1 = 0.0;
  double c2 = 0.0;
  for (const double t : t_grid) {
    const Eigen::VectorXd before = ne_oracle(game, t - h, opts);
    const Eigen::VectorXd mid = ne_oracle(game, t, opts);
    const Eigen::VectorXd after = ne_oracle(game, t + h, opts);
    c1 = std::max(c1, (after - before).norm() / (2.0 * h));
    c2 = std::max(c2, (after - 2.0 * mid + before).norm() / (h * h));
  }
  k.c1 = kConstantsSafetyFactor * c1;
  k.c2 = kConstantsSafetyFactor * c2;
  return k;
}

}  // namespace dpca
