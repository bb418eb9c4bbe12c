#pragma once

#include <Eigen/Dense>

namespace dpca {

inline constexpr double kConnectivityTol = 1e-9;

// Undirected weighted communication graph together with its Laplacian and
// ascending Laplacian spectrum. Immutable after construction.
class CommGraph {
 public:
  // Ring on n >= 3 nodes; node i is linked to i-1 and i+1 (mod n).
  static CommGraph build_ring(int n, double weight);

  // Weights must be square, symmetric (1e-12), nonnegative, zero diagonal.
  static CommGraph from_weights(const Eigen::MatrixXd& weights);

  int size() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }
  const Eigen::VectorXd& spectrum() const { return spectrum_; }

  // Algebraic connectivity (second smallest eigenvalue).
  double lambda2() const { return spectrum_(1); }
  double lambda_max() const { return spectrum_(spectrum_.size() - 1); }

  bool is_connected(double tol = kConnectivityTol) const;

 private:
  explicit CommGraph(Eigen::MatrixXd weights);

  Eigen::MatrixXd weights_;
  Eigen::MatrixXd laplacian_;
  Eigen::VectorXd spectrum_;
};

}  // namespace dpca
