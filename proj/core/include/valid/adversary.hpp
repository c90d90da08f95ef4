#pragma once

#include <memory>
#include <string>
#include <vector>

#include "valid/graph.hpp"
#include "valid/learning.hpp"
#include "valid/loss.hpp"
#include "valid/validation.hpp"

namespace valid {

struct AttackSpec {
  enum class Strategy { kNone, kGaussian, kBenign, kEquivocate, kBroadcastTamper, kLateAlarm };
  enum class Target { kModel, kGradient };

  Strategy strategy = Strategy::kNone;
  AgentSet byzantine;

  // gaussian
  double sigma = 0.0;
  // benign: replacement mean for each Byzantine agent (quadratic loss)
  std::vector<std::vector<double>> q_means;
  // equivocate
  std::vector<int> rounds;
  double magnitude = 0.0;
  Target target = Target::kModel;
  // late_alarm: agreement round to inject in (0 = the last round) and the
  // neighbors that receive the alarm (empty = all neighbors)
  size_t alarm_round = 0;
  AgentSet alarm_targets;

  bool active() const { return strategy != Strategy::kNone && !byzantine.empty(); }
};

const char* to_string(AttackSpec::Strategy strategy);
AttackSpec::Strategy parse_strategy(const std::string& name);

/// Reports N(0, sigma^2) noise added to the honest next model; the noise
/// stays in the agent's state. The reported gradient g' is the value with
/// round(alpha g') = y - x', so the transcript identities still hold and only
/// the global checks can see the attack. Every neighbor gets the same pair.
class GaussianAttack final : public LearningAdversary {
 public:
  GaussianAttack(AgentSet byzantine, double sigma, uint64_t seed);
  bool controls(AgentId agent) const override;
  ByzantineAction act(const ByzantineRoundView& view) const override;

 private:
  std::vector<bool> mask_;
  AgentSet byzantine_;
  double sigma_;
  uint64_t seed_;
};

/// In the listed rounds sends x + magnitude e_1 (or g + magnitude e_1) to the
/// lowest-id neighbor and the honest pair to the rest.
class EquivocationAttack final : public LearningAdversary {
 public:
  EquivocationAttack(AgentSet byzantine, std::vector<int> rounds, double magnitude,
                     AttackSpec::Target target);
  bool controls(AgentId agent) const override;
  ByzantineAction act(const ByzantineRoundView& view) const override;

 private:
  AgentSet byzantine_;
  std::vector<int> rounds_;
  Fixed magnitude_;
  AttackSpec::Target target_;
};

/// A raw g with round(alpha * g) == gamma in raw units. Requires 0 < alpha <= 1.
int64_t invert_scaled(int64_t alpha_raw, int64_t gamma_raw);

struct Adversary {
  std::vector<bool> mask;
  std::shared_ptr<const LearningAdversary> learning;
  ValidationBehavior validation;
};

/// Builds the hooks for `spec` on `graph`. Benign attacks have no hooks: the
/// substitution happens in the data sources (see apply_benign).
Adversary make_adversary(const AttackSpec& spec, const Graph& graph, uint64_t seed);

/// Loss with each Byzantine agent's distribution replaced by Q_v.
LossModel apply_benign(const LossModel& loss, const AttackSpec& spec);

/// Smallest sigma whose expected injected squared-gradient mass,
/// (1/|V|) (sum_i w_i sigma sqrt(d) / alpha(i))^2, reaches delta + epsilon.
double strong_sigma(const StepSchedule& schedule, double gamma, size_t agents, size_t dim,
                    double delta, double epsilon);

}  // namespace valid
