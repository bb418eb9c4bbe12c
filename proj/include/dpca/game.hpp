#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

namespace dpca {

// Regularity constants of a time-varying game.
//   mu    strong-monotonicity modulus of the pseudogradient
//   theta Lipschitz constant of the augmented pseudogradient
//   c1    bound on |dx*/dt|
//   c2    bound on |d^2x*/dt^2|
struct RegularityConstants {
  double mu = 0.0;
  double theta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  bool operator==(const RegularityConstants&) const = default;
};

// F^t(x) = jacobian * x + offset for games with affine pseudogradients.
struct AffineForm {
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd offset;
};

// A time-varying game of N players, each choosing a strategy in R^d. Joint
// profiles are stacked player-major: entries [i*d, (i+1)*d) belong to player i.
// Player indices are zero-based.
class GameModel {
 public:
  virtual ~GameModel() = default;

  virtual int players() const = 0;
  virtual int dim() const = 0;
  int joint_size() const { return players() * dim(); }

  // Partial gradient of player i's cost with respect to its own strategy,
  // evaluated at the joint profile x.
  virtual Eigen::VectorXd gradient(double t, int i, const Eigen::VectorXd& x) const = 0;

  // Affine description of the pseudogradient, when one exists.
  virtual std::optional<AffineForm> affine_form(double /*t*/) const { return std::nullopt; }
};

// Five robots guarding a moving target against five moving intruders.
//   f_i = g1/2 |x_i - p_i|^2 + g2/2 |x_i - b|^2 + g3/10 |sigma(x) - b|^2
// with sigma(x) the robots' mean position and b the target.
class SurveillanceGame final : public GameModel {
 public:
  static constexpr int kPlayers = 5;
  static constexpr int kDim = 2;

  SurveillanceGame(double gamma1, double gamma2, double gamma3, double amplitude = 5.0);

  int players() const override { return kPlayers; }
  int dim() const override { return kDim; }

  Eigen::Vector2d center(int i) const;
  Eigen::Vector2d intruder_position(int i, double t) const;
  Eigen::Vector2d target_position(double t) const;
  Eigen::Vector2d aggregate(const Eigen::VectorXd& x) const;

  double cost(double t, int i, const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(double t, int i, const Eigen::VectorXd& x) const override;
  std::optional<AffineForm> affine_form(double t) const override;

  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }
  double gamma3() const { return gamma3_; }
  double amplitude() const { return amplitude_; }

 private:
  void check_player(int i) const;

  double gamma1_;
  double gamma2_;
  double gamma3_;
  double amplitude_;
};

// Linear-quadratic game with F^t(x) = Q x + b0 + b1 sin(omega t).
class QuadraticGame final : public GameModel {
 public:
  QuadraticGame(int players, int dim, Eigen::MatrixXd q, Eigen::VectorXd b0,
                Eigen::VectorXd b1, double omega);

  int players() const override { return players_; }
  int dim() const override { return dim_; }

  Eigen::VectorXd offset(double t) const;
  Eigen::VectorXd gradient(double t, int i, const Eigen::VectorXd& x) const override;
  std::optional<AffineForm> affine_form(double t) const override;

  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::VectorXd& b0() const { return b0_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  double omega() const { return omega_; }

 private:
  int players_;
  int dim_;
  Eigen::MatrixXd q_;
  Eigen::VectorXd b0_;
  Eigen::VectorXd b1_;
  double omega_;
};

// [grad_i J_i(x)]_i
Eigen::VectorXd pseudogradient(const GameModel& game, double t, const Eigen::VectorXd& x);

// estimates is (N*d) x N; column i is player i's estimate of the joint profile.
// Block i of the result is grad_i J_i evaluated at player i's own estimate.
Eigen::VectorXd augmented_pseudogradient(const GameModel& game, double t,
                                         const Eigen::MatrixXd& estimates);

struct OracleOptions {
  double tol = 1e-10;
  long max_iterations = 1'000'000;
  // Gradient-play step for games without an affine form, normally mu/theta^2.
  std::optional<double> step;
};

// Nash equilibrium of the frozen game at time t. Affine games are solved
// directly; others by fixed-step gradient play from the origin.
Eigen::VectorXd ne_oracle(const GameModel& game, double t, const OracleOptions& options = {});

// mu and theta of an affine pseudogradient with Jacobian q, N players of dim d.
// c1 and c2 are left at zero.
RegularityConstants affine_constants(const Eigen::MatrixXd& q, int players, int dim);

// Constants of an affine game. mu and theta come from the Jacobian; c1 and c2
// from centred differences (step h) of the oracle trajectory over t_grid,
// inflated by kConstantsSafetyFactor.
inline constexpr double kConstantsSafetyFactor = 1.1;
RegularityConstants estimate_constants(const GameModel& game, std::span<const double> t_grid,
                                       double h, double oracle_tol = 1e-10);

}  // namespace dpca
