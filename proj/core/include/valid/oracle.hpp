#pragma once

#include <vector>

#include "valid/loss.hpp"
#include "valid/model_vec.hpp"
#include "valid/types.hpp"

namespace valid {

/// Minimizer of the mean expected loss over all agents, in doubles.
/// Quadratic: the mean of agent means. Logistic: damped Newton iterations
/// until the gradient norm is below 1e-10.
std::vector<double> global_minimizer_real(const LossModel& loss);
ModelVec global_minimizer(const LossModel& loss);

/// (1/|V|) sum_v |E grad f_v(xstar)|^2.
double heterogeneity(const LossModel& loss, std::span<const double> xstar);
double heterogeneity(const LossModel& loss);

struct AdmissibilityResult {
  bool admissible = false;
  /// Gradient witness per agent in V \ U (indexed like the complement, ascending id).
  std::vector<std::vector<double>> witness;
  /// Left-hand side of the heterogeneity condition for the witness.
  double statistic = 0.0;
};

/// Decides whether xhat is an admissible consensus model for honest set U.
/// The complement receives the minimum-norm witness
///   g_v = -(1/|V \ U|) sum_{u in U} E grad f_u(xhat),
/// which is optimal for the sum-to-zero constraint, so the test is exact.
AdmissibilityResult check_admissible(std::span<const double> xhat, const AgentSet& honest,
                                     const LossModel& loss, double delta, double tol);
AdmissibilityResult check_admissible(const ModelVec& xhat, const AgentSet& honest,
                                     const LossModel& loss, double delta, double tol);

}  // namespace valid
