#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "valid/broadcast.hpp"
#include "valid/field.hpp"
#include "valid/graph.hpp"
#include "valid/model_vec.hpp"
#include "valid/schedule.hpp"
#include "valid/transcript.hpp"
#include "valid/validation_state.hpp"

namespace valid {

/// Per-round norm envelopes; index t = 0..T.
struct BoundSchedule {
  std::vector<double> model;     // B_t
  std::vector<double> gradient;  // C_t

  int rounds() const { return static_cast<int>(model.size()) - 1; }
};

/// Whether Byzantine agent `from` reports BOT to `to` in agreement round r (1-based).
using ReportFn = std::function<bool(size_t round, AgentId from, AgentId to, bool own_bot)>;

/// Byzantine hooks for the validation phase. Agents not marked Byzantine,
/// and Byzantine agents whose hook is empty, follow the protocol.
struct ValidationBehavior {
  std::vector<bool> byzantine;
  RelayFn relay;
  bool forward_conflict = true;
  ReportFn report;

  bool is_byzantine(AgentId v) const { return v < byzantine.size() && byzantine[v]; }
  BroadcastBehavior broadcast() const { return {byzantine, relay, forward_conflict}; }
};

struct LocalValidationConfig {
  uint64_t seed = 0;
  uint64_t prime = kMersenne61;
};

/// Hash key of agent v: uniform in F_p from the (seed, v, phase) stream.
FieldElement draw_hash_key(const PrimeField& field, uint64_t seed, AgentId v, uint64_t phase = 0);

/// Bound check on every incoming edge, then the three hash broadcasts and
/// the per-node consistency checks under each agent's own key.
ValidationStates local_validate(const Graph& graph, const EdgeTranscript& transcript,
                                const StepSchedule& schedule, const BoundSchedule& bounds,
                                const LocalValidationConfig& config,
                                const ValidationBehavior& behavior = {});

struct GradientEstimate {
  ModelVec g_hat;
  Fixed ell_hat;

  bool operator==(const GradientEstimate&) const = default;
};

/// Normalized weights w_i = gamma^(T-i-1) (1-gamma) / (1-gamma^(T-1)), i = 1..T-1
/// (returned 0-based). gamma = 0 puts all mass on i = T-1.
std::vector<double> estimation_weights(double gamma, int T);

/// Per directed edge: g_hat = sum_i w_i g^(i), ell_hat = sum_i w_i |g^(i)|.
std::vector<GradientEstimate> estimate_final_gradients(const EdgeTranscript& transcript,
                                                       double gamma);

struct GlobalValidationResult {
  ValidationStates states;
  /// Agreed (g*, ell*) per agent, as seen by the lowest-id honest agent.
  std::vector<GradientEstimate> agreed;
  double optimality_statistic = 0.0;
  double heterogeneity_statistic = 0.0;
};

/// Each agent broadcasts its incoming-edge estimates; every agent then runs
/// the consistency, optimality and heterogeneity checks.
GlobalValidationResult global_validate(const Graph& graph,
                                       const std::vector<GradientEstimate>& estimates,
                                       double delta, double epsilon,
                                       const ValidationBehavior& behavior = {});

/// Optimality and heterogeneity statistics of agreed estimates.
double optimality_statistic(const std::vector<GradientEstimate>& agreed);
double heterogeneity_statistic(const std::vector<GradientEstimate>& agreed);

/// |E| rounds of BOT flooding. Honest agents adopt BOT when any neighbor
/// reported BOT in the previous round.
ValidationStates state_agreement(const Graph& graph, ValidationStates initial,
                                 const ValidationBehavior& behavior = {});

struct ValidationParams {
  double gamma = 0.5;
  double epsilon = 0.1;
  double delta = 1.0;
  BoundSchedule bounds;
  uint64_t seed = 0;
  uint64_t prime = kMersenne61;
};

struct ValidationReport {
  ValidationStates after_local;
  ValidationStates after_global;
  ValidationStates final_states;
  /// x_hat_v for every agent (own round-T model); meaningful where TOP.
  std::vector<ModelVec> models;
  double optimality_statistic = 0.0;
  double heterogeneity_statistic = 0.0;
};

ValidationReport validate_model(const Graph& graph, const EdgeTranscript& transcript,
                                const StepSchedule& schedule,
                                const std::vector<ModelVec>& final_models,
                                const ValidationParams& params,
                                const ValidationBehavior& behavior = {});

}  // namespace valid
