#include "dpca/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "dpca/errors.hpp"
#include "dpca/format.hpp"

namespace dpca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGammaTol = 1e-10;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double alpha_max(double lambda2, double lambda_n) {
  require_positive(lambda2, "lambda2");
  require_positive(lambda_n, "lambdaN");
  return lambda2 / (2.0 * lambda_n * lambda_n);
}

StepsizeBounds stepsize_bounds(double lambda2, double lambda_n, double mu, double theta, int players,
                               double alpha) {
  require_positive(mu, "mu");
  require_positive(theta, "theta");
  require_positive(alpha, "alpha");
  if (players < 1) throw InvalidParameter("player count must be positive");
  StepsizeBounds b;
  b.alpha_max = alpha_max(lambda2, lambda_n);
  const double n = players;
  b.epsilon_ceilings = {
      alpha * lambda2 * mu * n / (4.0 * theta * theta + 2.0 * theta * mu * n + mu * mu),
      mu / (2.0 * n * theta * theta),
      n / (4.0 * alpha * lambda2 * mu),
  };
  b.epsilon_max = std::min({b.epsilon_ceilings[0], b.epsilon_ceilings[1], b.epsilon_ceilings[2]});
  return b;
}

Contraction contraction_factor(double alpha, double epsilon, double lambda2, double lambda_n,
                               double mu, double theta, int players) {
  if (players < 1) throw InvalidParameter("player count must be positive");
  const double n = players;
  const double et = epsilon * theta;
  Contraction c;
  c.a_matrix << epsilon * mu / n - et * et, -et / std::sqrt(n),  //
      -et / std::sqrt(n), alpha * lambda2 - alpha * alpha * lambda_n * lambda_n - et * et - et;

  const double a = c.a_matrix(0, 0);
  const double d = c.a_matrix(1, 1);
  const double b = c.a_matrix(0, 1);
  const double half_gap = 0.5 * (a - d);
  c.lambda_min = 0.5 * (a + d) - std::sqrt(half_gap * half_gap + b * b);
  c.nu = 2.0 * c.lambda_min;
  c.rho = c.nu <= 1.0 ? std::sqrt(1.0 - c.nu) : kNaN;
  c.valid = c.nu > 0.0 && c.nu < 1.0;
  return c;
}

int min_q(double rho, int tau) {
  if (tau < 1) throw InvalidParameter("tau must be at least 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidParameter("rho must lie in [0, 1)");
  const double rt = std::pow(rho, tau);
  const double ratio = 2.0 * rt / (1.0 - rt);
  // Ratios that are integers in exact arithmetic land a few ulps either side.
  return static_cast<int>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
}

double envelope_rate_function(double rho_tau, int q, double gamma) {
  const double qd = q;
  return rho_tau * (qd + 1.0) / (qd * gamma) + rho_tau / (qd * std::pow(gamma, qd + 1.0));
}

double find_gamma(double rho, int tau, int q) {
  if (q <= min_q(rho, tau)) {
    throw InvalidParameter("q = " + std::to_string(q) + " must exceed " + std::to_string(min_q(rho, tau)));
  }
  const double rt = std::pow(rho, tau);
  if (!(envelope_rate_function(rt, q, 1.0) < 1.0)) {
    throw InvalidParameter("g(1) >= 1; no admissible gamma");
  }
  double lo = rt;
  double hi = 1.0;
  while (hi - lo > kGammaTol) {
    const double mid = 0.5 * (lo + hi);
    if (envelope_rate_function(rt, q, mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

EnvelopeConstants envelope_constants(double initial_error, double rho, int tau, int q, double gamma,
                                     double h, double c1, double c2, int players) {
  (void)gamma;  // C1 and C2 do not depend on the chosen rate.
  if (tau < 1 || q < 1 || players < 1) throw InvalidParameter("tau, q and N must be positive");
  const double rt = std::pow(rho, tau);
  if (!(rt < 1.0)) throw InvalidParameter("rho^tau must be below 1");
  const double qd = q;
  const double denom = 2.0 * qd - 2.0 * rt * (qd + 2.0);
  if (!(denom > 0.0)) {
    throw InvalidParameter("2q - 2 rho^tau (q+2) = " + std::to_string(denom) + " is not positive");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(players));
  return {initial_error + sqrt_n * rt * h * c1 / (1.0 - rt),
          c2 * sqrt_n * qd * (qd + 1.0) * rt / denom};
}

double envelope(int k, double c1, double gamma, double c2, double h) {
  return c1 * std::pow(gamma, k) + c2 * h * h;
}

PredictionBounds prediction_bounds(double c1, double c2, int q, double h) {
  return {c1 * h, c2 * (q + 1.0) * h * h / 2.0};
}

BoundReport make_bound_report(const CommGraph& graph, const RegularityConstants& constants,
                              const DpcaConfig& config, double initial_error) {
  BoundReport r;
  r.players = graph.size();
  r.lambda2 = graph.lambda2();
  r.lambda_n = graph.lambda_max();
  r.constants = constants;
  r.alpha = config.alpha;
  r.epsilon = config.epsilon;
  r.q = config.q;
  r.tau = config.tau;
  r.h = config.h;
  r.initial_error = initial_error;

  const StepsizeBounds sb =
      stepsize_bounds(r.lambda2, r.lambda_n, constants.mu, constants.theta, r.players, config.alpha);
  r.alpha_max = sb.alpha_max;
  r.epsilon_ceilings = sb.epsilon_ceilings;
  r.epsilon_max = sb.epsilon_max;
  r.alpha_ok = config.alpha > 0.0 && config.alpha < sb.alpha_max;
  r.epsilon_ok = config.epsilon > 0.0 && config.epsilon < sb.epsilon_max;

  const Contraction c = contraction_factor(config.alpha, config.epsilon, r.lambda2, r.lambda_n,
                                           constants.mu, constants.theta, r.players);
  r.a_matrix = c.a_matrix;
  r.nu = c.nu;
  r.rho = c.rho;
  r.contraction_ok = c.valid;
  r.rho_tau = std::pow(c.rho, config.tau);

  r.gamma = r.c1_envelope = r.c2_envelope = r.plateau_bound = kNaN;
  if (c.valid) {
    r.q_min = min_q(c.rho, config.tau);
    r.q_ok = config.q > r.q_min;
  }
  if (r.envelope_available()) {
    r.gamma = find_gamma(c.rho, config.tau, config.q);
    const EnvelopeConstants ec = envelope_constants(initial_error, c.rho, config.tau, config.q, r.gamma,
                                                    config.h, constants.c1, constants.c2, r.players);
    r.c1_envelope = ec.c1;
    r.c2_envelope = ec.c2;
    r.plateau_bound = ec.c2 * config.h * config.h;
  }
  r.prediction = prediction_bounds(constants.c1, constants.c2, config.q, config.h);
  return r;
}

std::vector<std::string> BoundReport::violations() const {
  std::vector<std::string> out;
  auto num = [](double v) { return format_real(v); };
  if (!alpha_ok) {
    out.push_back("alpha = " + num(alpha) + " violates 0 < alpha < lambda2/(2 lambdaN^2) = " +
                  num(alpha_max));
  }
  if (!epsilon_ok) {
    out.push_back("epsilon = " + num(epsilon) + " violates 0 < epsilon < min{epsilon ceilings} = " +
                  num(epsilon_max));
  }
  if (!contraction_ok) {
    out.push_back("nu = 2 lambda_min(A) = " + num(nu) + " violates 0 < nu < 1");
  } else if (!q_ok) {
    out.push_back("q = " + std::to_string(q) + " violates q > ceil(2 rho^tau/(1 - rho^tau)) = " +
                  std::to_string(q_min));
  }
  return out;
}

int envelope_violations(const TrackingTrace& trace, const BoundReport& report) {
  if (!report.envelope_available()) return -1;
  int count = 0;
  for (const TraceRow& row : trace.rows) {
    if (row.tracking_error > envelope(row.k, report.c1_envelope, report.gamma, report.c2_envelope, report.h)) {
      ++count;
    }
  }
  return count;
}

namespace {

struct Field {
  std::string key;
  std::string value;
};

std::vector<Field> report_fields(const BoundReport& r) {
  auto num = [](double v) { return std::isnan(v) ? std::string("NA") : format_real(v); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  return {
      {"players", std::to_string(r.players)},
      {"lambda2", num(r.lambda2)},
      {"lambdaN", num(r.lambda_n)},
      {"mu", num(r.constants.mu)},
      {"theta", num(r.constants.theta)},
      {"c1", num(r.constants.c1)},
      {"c2", num(r.constants.c2)},
      {"alpha", num(r.alpha)},
      {"epsilon", num(r.epsilon)},
      {"q", std::to_string(r.q)},
      {"tau", std::to_string(r.tau)},
      {"h", num(r.h)},
      {"initial_error", num(r.initial_error)},
      {"alpha_max", num(r.alpha_max)},
      {"epsilon_ceiling_1", num(r.epsilon_ceilings[0])},
      {"epsilon_ceiling_2", num(r.epsilon_ceilings[1])},
      {"epsilon_ceiling_3", num(r.epsilon_ceilings[2])},
      {"epsilon_max", num(r.epsilon_max)},
      {"A_11", num(r.a_matrix(0, 0))},
      {"A_12", num(r.a_matrix(0, 1))},
      {"A_22", num(r.a_matrix(1, 1))},
      {"nu", num(r.nu)},
      {"rho", num(r.rho)},
      {"rho_tau", num(r.rho_tau)},
      {"q_min", r.q_min < 0 ? std::string("NA") : std::to_string(r.q_min)},
      {"gamma", num(r.gamma)},
      {"C1", num(r.c1_envelope)},
      {"C2", num(r.c2_envelope)},
      {"plateau_bound", num(r.plateau_bound)},
      {"hold_prediction_bound", num(r.prediction.hold)},
      {"interpolation_prediction_bound", num(r.prediction.interpolation)},
      {"alpha_ok", flag(r.alpha_ok)},
      {"epsilon_ok", flag(r.epsilon_ok)},
      {"contraction_ok", flag(r.contraction_ok)},
      {"q_ok", flag(r.q_ok)},
      {"valid", flag(r.valid())},
  };
}

}  // namespace

void print_bound_report(std::ostream& out, const BoundReport& report) {
  const auto fields = report_fields(report);
  std::size_t width = 0;
  for (const Field& f : fields) width = std::max(width, f.key.size());
  for (const Field& f : fields) {
    out << std::left << std::setw(static_cast<int>(width)) << f.key << "  " << f.value << '\n';
  }
}

void write_bound_report_csv(std::ostream& out, const BoundReport& report) {
  const auto fields = report_fields(report);
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].key;
  out << '\n';
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].value;
  out << '\n';
}

}  // namespace dpca
