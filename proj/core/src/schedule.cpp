#include "valid/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "valid/errors.hpp"

namespace valid {

double StepSchedule::alpha(int t) const { return alpha0 / static_cast<double>(t + 1); }

double StepSchedule::eta(int t) const { return eta0 / std::sqrt(static_cast<double>(t + 1)); }

Fixed StepSchedule::alpha_fixed(int t) const { return Fixed::from_double(alpha(t)); }

Fixed StepSchedule::eta_fixed(int t) const { return Fixed::from_double(eta(t)); }

void StepSchedule::validate(double beta, double mu, size_t max_degree) const {
  if (rounds < 1) throw InvalidParameter("schedule needs at least one round");
  if (!(alpha0 > 0.0) || !(eta0 > 0.0)) throw InvalidParameter("alpha0 and eta0 must be positive");
  const double alpha_cap = std::min(1.0, mu / (beta * beta));
  if (!(alpha(1) < alpha_cap)) {
    throw InvalidParameter("alpha(1) = " + std::to_string(alpha(1)) +
                           " must be below min(1, mu/beta^2) = " + std::to_string(alpha_cap));
  }
  if (!(eta(1) * static_cast<double>(max_degree) < 1.0)) {
    throw InvalidParameter("eta(1) * max_degree = " +
                           std::to_string(eta(1) * static_cast<double>(max_degree)) +
                           " must be below 1");
  }
}

double StepSchedule::contraction_factor(double beta, double mu) const {
  double worst = 0.0;
  for (int t = 1; t <= rounds; ++t) {
    const double a = alpha(t);
    worst = std::max(worst, std::sqrt(1.0 + a * a * beta * beta - a * mu));
  }
  return worst;
}

double default_alpha0(double beta, double mu, double fraction) {
  // alpha(1) = alpha0 / 2
  return 2.0 * fraction * std::min(1.0, mu / (beta * beta));
}

double default_eta0(size_t max_degree, double fraction) {
  return fraction * std::sqrt(2.0) / static_cast<double>(std::max<size_t>(max_degree, 1));
}

}  // namespace valid
