#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpca/dpca.hpp"
#include "dpca/game.hpp"
#include "dpca/graph.hpp"

namespace dpca {

// lambda2 / (2 lambdaN^2): open upper limit for the consensus stepsize.
double alpha_max(double lambda2, double lambda_n);

struct StepsizeBounds {
  double alpha_max = 0.0;
  // alpha lambda2 mu N / (4 theta^2 + 2 theta mu N + mu^2), mu / (2 N theta^2),
  // N / (4 alpha lambda2 mu)
  std::array<double, 3> epsilon_ceilings{};
  double epsilon_max = 0.0;
};

StepsizeBounds stepsize_bounds(double lambda2, double lambda_n, double mu, double theta, int players,
                               double alpha);

struct Contraction {
  Eigen::Matrix2d a_matrix;
  double lambda_min = 0.0;
  double nu = 0.0;
  // sqrt(1 - nu); NaN when nu > 1.
  double rho = 0.0;
  bool valid = false;  // nu in (0, 1)
};

Contraction contraction_factor(double alpha, double epsilon, double lambda2, double lambda_n,
                               double mu, double theta, int players);

// ceil(2 rho^tau / (1 - rho^tau)); admissible q must be strictly larger.
int min_q(double rho, int tau);

// g(gamma) = rho^tau (q+1) / (q gamma) + rho^tau / (q gamma^(q+1))
double envelope_rate_function(double rho_tau, int q, double gamma);

// Smallest gamma in (rho^tau, 1) with g(gamma) <= 1, bisected to 1e-10.
double find_gamma(double rho, int tau, int q);

struct EnvelopeConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

EnvelopeConstants envelope_constants(double initial_error, double rho, int tau, int q, double gamma,
                                     double h, double c1, double c2, int players);

// C1 gamma^k + C2 h^2
double envelope(int k, double c1, double gamma, double c2, double h);

struct PredictionBounds {
  double hold = 0.0;           // c1 h
  double interpolation = 0.0;  // c2 (q+1) h^2 / 2
};

PredictionBounds prediction_bounds(double c1, double c2, int q, double h);

struct BoundReport {
  int players = 0;
  double lambda2 = 0.0;
  double lambda_n = 0.0;
  RegularityConstants constants;
  double alpha = 0.0;
  double epsilon = 0.0;
  int q = 0;
  int tau = 0;
  double h = 0.0;
  double initial_error = 0.0;

  double alpha_max = 0.0;
  std::array<double, 3> epsilon_ceilings{};
  double epsilon_max = 0.0;
  Eigen::Matrix2d a_matrix = Eigen::Matrix2d::Zero();
  double nu = 0.0;
  double rho = 0.0;
  double rho_tau = 0.0;
  // -1 when rho^tau is not in (0, 1).
  int q_min = -1;
  // Envelope quantities; NaN unless the q condition holds.
  double gamma = 0.0;
  double c1_envelope = 0.0;
  double c2_envelope = 0.0;
  double plateau_bound = 0.0;  // C2 h^2
  PredictionBounds prediction;

  bool alpha_ok = false;
  bool epsilon_ok = false;
  bool contraction_ok = false;
  bool q_ok = false;

  bool valid() const { return alpha_ok && epsilon_ok && contraction_ok && q_ok; }
  bool envelope_available() const { return contraction_ok && q_ok; }
  // One human-readable line per violated condition.
  std::vector<std::string> violations() const;
};

BoundReport make_bound_report(const CommGraph& graph, const RegularityConstants& constants,
                              const DpcaConfig& config, double initial_error);

// Instants where tracking_error exceeds the envelope; -1 if no envelope.
int envelope_violations(const TrackingTrace& trace, const BoundReport& report);

void print_bound_report(std::ostream& out, const BoundReport& report);
void write_bound_report_csv(std::ostream& out, const BoundReport& report);

}  // namespace dpca
