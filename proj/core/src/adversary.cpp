#include "valid/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "valid/errors.hpp"
#include "valid/rng.hpp"

namespace valid {

const char* to_string(AttackSpec::Strategy strategy) {
  switch (strategy) {
    case AttackSpec::Strategy::kNone: return "none";
    case AttackSpec::Strategy::kGaussian: return "gaussian";
    case AttackSpec::Strategy::kBenign: return "benign";
    case AttackSpec::Strategy::kEquivocate: return "equivocate";
    case AttackSpec::Strategy::kBroadcastTamper: return "broadcast_tamper";
    case AttackSpec::Strategy::kLateAlarm: return "late_alarm";
  }
  return "none";
}

AttackSpec::Strategy parse_strategy(const std::string& name) {
  for (auto s : {AttackSpec::Strategy::kNone, AttackSpec::Strategy::kGaussian,
                 AttackSpec::Strategy::kBenign, AttackSpec::Strategy::kEquivocate,
                 AttackSpec::Strategy::kBroadcastTamper, AttackSpec::Strategy::kLateAlarm}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidParameter("unknown attack strategy '" + name + "'");
}

int64_t invert_scaled(int64_t alpha_raw, int64_t gamma_raw) {
  if (alpha_raw <= 0 || alpha_raw > Fixed::kOneRaw) throw InvalidParameter("need 0 < alpha <= 1");
  // g -> round(alpha g) is nondecreasing with steps of at most one, so some
  // g near gamma / alpha hits gamma exactly.
  const __int128 num = static_cast<__int128>(gamma_raw) << Fixed::kFracBits;
  __int128 g = num / alpha_raw;
  for (__int128 c = g - 2; c <= g + 2; ++c) {
    check_fixed_range(c);
    if (fixed_mul_raw(alpha_raw, static_cast<int64_t>(c)) == gamma_raw) return static_cast<int64_t>(c);
  }
  throw OverflowError("no fixed-point gradient reproduces the requested step");
}

namespace {

bool contains(const AgentSet& set, AgentId v) { return std::find(set.begin(), set.end(), v) != set.end(); }

std::vector<Message> honest_messages(const ByzantineRoundView& view) {
  return std::vector<Message>(view.graph.degree(view.agent), Message{view.honest_next, view.honest_gradient});
}

}  // namespace

GaussianAttack::GaussianAttack(AgentSet byzantine, double sigma, uint64_t seed)
    : byzantine_(std::move(byzantine)), sigma_(sigma), seed_(seed) {
  if (!(sigma >= 0.0)) throw InvalidParameter("gaussian attack needs sigma >= 0");
}

bool GaussianAttack::controls(AgentId agent) const { return contains(byzantine_, agent); }

ByzantineAction GaussianAttack::act(const ByzantineRoundView& view) const {
  if (sigma_ == 0.0) return {view.honest_next, honest_messages(view)};
  CounterRng rng(seed_, view.agent, static_cast<uint64_t>(view.round), StreamPurpose::kAttackNoise);
  const size_t d = view.honest_next.dim();
  std::vector<double> noise(d);
  for (double& z : noise) z = sigma_ * rng.normal();
  ModelVec noisy = view.honest_next + ModelVec::from_doubles(noise);
  const int64_t alpha = view.schedule.alpha_fixed(view.round).raw();
  std::vector<int64_t> g(d);
  for (size_t i = 0; i < d; ++i) {
    const int64_t step = view.mixed[i].raw() - noisy[i].raw();
    g[i] = invert_scaled(alpha, step);
  }
  const Message m{noisy, ModelVec::from_raw(g)};
  return {noisy, std::vector<Message>(view.graph.degree(view.agent), m)};
}

EquivocationAttack::EquivocationAttack(AgentSet byzantine, std::vector<int> rounds,
                                       double magnitude, AttackSpec::Target target)
    : byzantine_(std::move(byzantine)),
      rounds_(std::move(rounds)),
      magnitude_(Fixed::from_double(magnitude)),
      target_(target) {
  if (!(magnitude >= 0.0)) throw InvalidParameter("equivocation magnitude must be nonnegative");
}

bool EquivocationAttack::controls(AgentId agent) const { return contains(byzantine_, agent); }

ByzantineAction EquivocationAttack::act(const ByzantineRoundView& view) const {
  ByzantineAction action{view.honest_next, honest_messages(view)};
  const bool now = std::find(rounds_.begin(), rounds_.end(), view.round) != rounds_.end();
  if (!now || action.out.empty() || view.honest_next.dim() == 0) return action;
  Message& first = action.out.front();  // neighbors are sorted, so this is the lowest id
  if (target_ == AttackSpec::Target::kModel) {
    first.x[0] += magnitude_;
  } else {
    first.g[0] += magnitude_;
  }
  return action;
}

Adversary make_adversary(const AttackSpec& spec, const Graph& graph, uint64_t seed) {
  Adversary adv;
  adv.mask.assign(graph.size(), false);
  for (AgentId b : spec.byzantine) {
    if (b >= graph.size()) throw InvalidParameter("byzantine id out of range");
    adv.mask[b] = true;
  }
  adv.validation.byzantine = adv.mask;
  if (!spec.active()) return adv;

  switch (spec.strategy) {
    case AttackSpec::Strategy::kNone:
    case AttackSpec::Strategy::kBenign:
      break;
    case AttackSpec::Strategy::kGaussian:
      adv.learning = std::make_shared<GaussianAttack>(spec.byzantine, spec.sigma, seed);
      break;
    case AttackSpec::Strategy::kEquivocate:
      adv.learning = std::make_shared<EquivocationAttack>(spec.byzantine, spec.rounds,
                                                          spec.magnitude, spec.target);
      break;
    case AttackSpec::Strategy::kBroadcastTamper:
      adv.validation.relay = [](size_t, AgentId, AgentId, const Slot& held) {
        if (!held.is_value() || held.value->empty()) return held;
        auto copy = std::make_shared<Payload>(*held.value);
        (*copy)[0] += 1;
        return Slot::of(std::move(copy));
      };
      break;
    case AttackSpec::Strategy::kLateAlarm: {
      const size_t round = spec.alarm_round == 0 ? graph.edge_count() : spec.alarm_round;
      const AgentSet targets = spec.alarm_targets;
      adv.validation.report = [round, targets](size_t r, AgentId, AgentId to, bool) {
        return r == round && (targets.empty() || contains(targets, to));
      };
      break;
    }
  }
  return adv;
}

LossModel apply_benign(const LossModel& loss, const AttackSpec& spec) {
  if (spec.strategy != AttackSpec::Strategy::kBenign) return loss;
  if (loss.kind() != LossKind::kQuadratic) throw InvalidParameter("benign attack needs a quadratic loss");
  if (spec.q_means.size() != spec.byzantine.size()) {
    throw InvalidParameter("benign attack needs one replacement mean per Byzantine agent");
  }
  LossModel out = loss;
  for (size_t k = 0; k < spec.byzantine.size(); ++k) {
    out = out.with_distribution(spec.byzantine[k], AgentDistribution{spec.q_means[k], {}});
  }
  return out;
}

double strong_sigma(const StepSchedule& schedule, double gamma, size_t agents, size_t dim,
                    double delta, double epsilon) {
  const auto w = estimation_weights(gamma, schedule.rounds);
  double scale = 0.0;
  for (int i = 1; i < schedule.rounds; ++i) scale += w[static_cast<size_t>(i - 1)] / schedule.alpha(i);
  return std::sqrt(static_cast<double>(agents) * (delta + epsilon) / static_cast<double>(dim)) / scale;
}

}  // namespace valid
