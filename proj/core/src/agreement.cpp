#include "valid/validation.hpp"

namespace valid {

ValidationStates state_agreement(const Graph& graph, ValidationStates states,
                                 const ValidationBehavior& behavior) {
  const size_t n = graph.size();
  const size_t rounds = graph.edge_count();
  std::vector<bool> sent(graph.directed_edge_count());
  for (size_t r = 1; r <= rounds; ++r) {
    for (AgentId v = 0; v < n; ++v) {
      const auto& nbrs = graph.neighbors(v);
      const size_t base = graph.out_offset(v);
      const bool bot = !states[v].top();
      for (size_t k = 0; k < nbrs.size(); ++k) {
        sent[base + k] = behavior.is_byzantine(v) && behavior.report
                             ? behavior.report(r, v, nbrs[k], bot)
                             : bot;
      }
    }
    for (AgentId v = 0; v < n; ++v) {
      if (!states[v].top()) continue;
      for (AgentId u : graph.neighbors(v)) {
        if (sent[graph.directed_index(u, v)]) {
          states[v].raise(Cause::kAgreementPropagation);
          break;
        }
      }
    }
  }
  return states;
}

}  // namespace valid
