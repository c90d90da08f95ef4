#include "valid/outcome.hpp"

#include "valid/errors.hpp"
#include "valid/oracle.hpp"

namespace valid {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kA: return "A";
    case Outcome::kB: return "B";
    case Outcome::kC: return "C";
    case Outcome::kFail: return "FAIL";
  }
  return "FAIL";
}

OutcomeReport classify_outcome(const std::vector<bool>& byzantine, const ValidationStates& states,
                               const std::vector<ModelVec>& models, const LossModel& honest_loss,
                               std::span<const double> xstar, double delta, double epsilon) {
  const size_t n = states.size();
  if (models.size() != n || byzantine.size() != n) throw InvalidParameter("outcome inputs differ in size");
  OutcomeReport rep;
  AgentSet top;
  size_t honest = 0;
  bool any_byz = false;
  for (AgentId v = 0; v < n; ++v) {
    if (byzantine[v]) {
      any_byz = true;
      continue;
    }
    ++honest;
    rep.honest_mse += squared_distance(models[v], xstar);
    if (states[v].top()) {
      top.push_back(v);
    } else {
      ++rep.honest_bot;
    }
  }
  rep.honest_top = top.size();
  if (honest > 0) rep.honest_mse /= static_cast<double>(honest);

  if (!top.empty()) {
    const size_t d = models[top.front()].dim();
    std::vector<double> mean(d, 0.0);
    for (AgentId v : top) {
      for (size_t i = 0; i < d; ++i) mean[i] += models[v][i].to_double();
    }
    for (double& m : mean) m /= static_cast<double>(top.size());
    for (AgentId v : top) rep.top_dispersion += squared_distance(models[v], mean);
    rep.top_dispersion /= static_cast<double>(top.size());
    rep.top_mean = std::move(mean);
  }

  if (!any_byz) {
    rep.outcome = top.size() == n && rep.honest_mse < epsilon ? Outcome::kA : Outcome::kFail;
    return rep;
  }
  if (top.empty()) {
    rep.outcome = honest > 0 ? Outcome::kC : Outcome::kFail;
    return rep;
  }
  const auto adm = check_admissible(std::span<const double>(*rep.top_mean), top, honest_loss, delta, epsilon);
  rep.admissible = adm.admissible;
  rep.outcome = adm.admissible && rep.top_dispersion < epsilon ? Outcome::kB : Outcome::kFail;
  return rep;
}

}  // namespace valid
