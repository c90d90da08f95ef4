#pragma once

#include <optional>
#include <vector>

#include "valid/loss.hpp"
#include "valid/model_vec.hpp"
#include "valid/validation_state.hpp"

namespace valid {

enum class Outcome { kA, kB, kC, kFail };

const char* to_string(Outcome outcome);

struct OutcomeReport {
  Outcome outcome = Outcome::kFail;
  /// Honest agents' mean squared distance to the reference minimizer.
  double honest_mse = 0.0;
  size_t honest_top = 0;
  size_t honest_bot = 0;
  /// Mean of TOP honest models and their mean squared distance to it.
  std::optional<std::vector<double>> top_mean;
  double top_dispersion = 0.0;
  std::optional<bool> admissible;
};

/// A: no Byzantine agents, everyone TOP, mean squared error to x* below epsilon.
/// B: Byzantine agents present, some honest TOP, the mean of TOP honest models
///    is (H_top, P, delta)-admissible within epsilon and TOP models lie within
///    epsilon of that mean.
/// C: Byzantine agents present and every honest agent BOT.
/// `honest_loss` supplies the honest agents' distributions; `xstar` is the
/// reference minimizer used for A and for the reported error.
OutcomeReport classify_outcome(const std::vector<bool>& byzantine, const ValidationStates& states,
                               const std::vector<ModelVec>& models, const LossModel& honest_loss,
                               std::span<const double> xstar, double delta, double epsilon);

}  // namespace valid
