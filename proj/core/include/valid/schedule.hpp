#pragma once

#include <cstddef>

#include "valid/fixed.hpp"

namespace valid {

/// alpha(t) = alpha0 / (t + 1), eta(t) = eta0 / sqrt(t + 1), rounds t = 1..T.
///
/// The learner and every verifier use the Fixed-rounded coefficients, so the
/// transcript identities are computed from the same bits on both sides.
struct StepSchedule {
  double alpha0 = 0.5;
  double eta0 = 0.1;
  int rounds = 1000;

  double alpha(int t) const;
  double eta(int t) const;
  Fixed alpha_fixed(int t) const;
  Fixed eta_fixed(int t) const;

  /// Throws InvalidParameter unless alpha(t) < min(1, mu / beta^2) and
  /// eta(1) * max_degree < 1. Both sequences decrease, so t = 1 suffices.
  void validate(double beta, double mu, size_t max_degree) const;

  /// max_t sqrt(1 + alpha(t)^2 beta^2 - alpha(t) mu) over t = 1..T.
  double contraction_factor(double beta, double mu) const;
};

/// Largest alpha0 / eta0 that still satisfy the invariants, scaled by `fraction`.
double default_alpha0(double beta, double mu, double fraction = 0.5);
double default_eta0(size_t max_degree, double fraction = 0.9);

}  // namespace valid
