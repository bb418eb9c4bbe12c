#include "dpca/graph.hpp"

#include <cmath>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

constexpr double kSymmetryTol = 1e-12;

}  // namespace

CommGraph::CommGraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  const Eigen::Index n = weights_.rows();
  laplacian_ = -weights_;
  for (Eigen::Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) degree += weights_(i, j);
    }
    laplacian_(i, i) = degree;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_, Eigen::EigenvaluesOnly);
  spectrum_ = solver.eigenvalues();  // ascending
}

CommGraph CommGraph::build_ring(int n, double weight) {
  if (n < 3) throw InvalidGraph("ring needs at least 3 nodes, got " + std::to_string(n));
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidGraph("ring weight must be positive and finite");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, (i + 1) % n) = weight;
    w(i, (i + n - 1) % n) = weight;
  }
  return CommGraph(std::move(w));
}

CommGraph CommGraph::from_weights(const Eigen::MatrixXd& weights) {
  const Eigen::Index n = weights.rows();
  if (n == 0 || weights.cols() != n) {
    throw InvalidGraph("weight matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) {
      throw InvalidGraph("self-loop at node " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = weights(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw InvalidGraph("negative or non-finite weight at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      }
      if (std::abs(a - weights(j, i)) > kSymmetryTol) {
        throw InvalidGraph("weight matrix is not symmetric at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      }
    }
  }
  return CommGraph(weights);
}

bool CommGraph::is_connected(double tol) const {
  return spectrum_.size() >= 2 && spectrum_(1) > tol;
}

}  // namespace dpca
