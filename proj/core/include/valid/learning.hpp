#pragma once

#include <functional>
#include <span>
#include <vector>

#include "valid/graph.hpp"
#include "valid/loss.hpp"
#include "valid/model_vec.hpp"
#include "valid/schedule.hpp"
#include "valid/transcript.hpp"

namespace valid {

/// y = x_v + sum_u [round(eta * x_u) - round(eta * x_v)].
ModelVec mix_step(const ModelVec& x_v, std::span<const ModelVec> neighbors, Fixed eta);

/// x = y - round(alpha * g).
ModelVec sgd_step(const ModelVec& y, const ModelVec& g, Fixed alpha);

/// Entrywise median of `values`; an even count averages the two middle
/// entries with ties to even.
ModelVec coordinate_median(std::span<const ModelVec> values);

struct Message {
  ModelVec x;
  ModelVec g;
};

/// What a Byzantine agent sees when it acts in round t. The transcript
/// holds rounds < t (and is null when transcripts are not recorded).
struct ByzantineRoundView {
  int round;
  AgentId agent;
  const Graph& graph;
  const StepSchedule& schedule;
  const ModelVec& previous;
  const ModelVec& mixed;
  const ModelVec& honest_gradient;
  const ModelVec& honest_next;
  const EdgeTranscript* transcript;
};

struct ByzantineAction {
  /// Model the agent keeps and mixes from next round.
  ModelVec state;
  /// One message per neighbor, in graph.neighbors(agent) order.
  std::vector<Message> out;
};

/// Per-round, per-edge strategy hook for the learning phase. Implementations
/// must be pure functions of their arguments so runs stay reproducible.
class LearningAdversary {
 public:
  virtual ~LearningAdversary() = default;
  virtual bool controls(AgentId agent) const = 0;
  virtual ByzantineAction act(const ByzantineRoundView& view) const = 0;
};

enum class MixingRule { kGossip, kCoordinateMedian };

struct LearningOptions {
  MixingRule mixing = MixingRule::kGossip;
  bool record_transcript = true;
  const LearningAdversary* adversary = nullptr;
  /// Called with the freshly computed states of round t before they are sent.
  std::function<void(int round, std::vector<ModelVec>& states)> perturb;
};

struct LearningResult {
  EdgeTranscript transcript;
  /// states[t][v] for t = 0..T. Byzantine rows hold the adversary's state.
  std::vector<std::vector<ModelVec>> states;
  /// gradient_norms[t][v] = |g_v^(t)| of the locally computed gradient; row 0 is zero.
  std::vector<std::vector<double>> gradient_norms;
};

/// Runs rounds 1..T of gossip-mixed SGD from the all-zero state.
/// `sources[v]` supplies agent v's mini-batches (a benign attacker is just
/// a source with a substituted distribution).
LearningResult run_learning(const Graph& graph, std::span<const AgentDataSource> sources,
                            const StepSchedule& schedule, const LearningOptions& options = {});

}  // namespace valid
