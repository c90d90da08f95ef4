#include "valid/errors.hpp"
#include "valid/validation.hpp"

namespace valid {

ValidationReport validate_model(const Graph& graph, const EdgeTranscript& transcript,
                                const StepSchedule& schedule,
                                const std::vector<ModelVec>& final_models,
                                const ValidationParams& params,
                                const ValidationBehavior& behavior) {
  if (transcript.empty()) throw InvalidParameter("validation needs a recorded transcript");
  if (final_models.size() != graph.size()) throw InvalidParameter("need one final model per agent");
  ValidationReport report;
  report.after_local = local_validate(graph, transcript, schedule, params.bounds,
                                      LocalValidationConfig{params.seed, params.prime}, behavior);

  const auto estimates = estimate_final_gradients(transcript, params.gamma);
  const auto global = global_validate(graph, estimates, params.delta, params.epsilon, behavior);
  report.optimality_statistic = global.optimality_statistic;
  report.heterogeneity_statistic = global.heterogeneity_statistic;

  report.after_global = report.after_local;
  for (AgentId v = 0; v < graph.size(); ++v) {
    for (unsigned c = 1; c <= static_cast<unsigned>(Cause::kAgreementPropagation); ++c) {
      if (global.states[v].has_fired(static_cast<Cause>(c))) {
        report.after_global[v].raise(static_cast<Cause>(c));
      }
    }
  }
  report.final_states = state_agreement(graph, report.after_global, behavior);
  report.models = final_models;
  return report;
}

}  // namespace valid
