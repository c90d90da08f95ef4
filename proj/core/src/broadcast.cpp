#include "valid/broadcast.hpp"

#include <algorithm>

#include "valid/errors.hpp"

namespace valid {

bool same_payload(const PayloadPtr& a, const PayloadPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool same_slot(const Slot& a, const Slot& b) {
  if (a.kind != b.kind) return false;
  return !a.is_value() || same_payload(a.value, b.value);
}

size_t broadcast_rounds(const Graph& graph) { return std::min(graph.size(), graph.edge_count()); }

BroadcastRun::BroadcastRun(const Graph& graph, AgentId source, PayloadPtr message,
                           const BroadcastBehavior& behavior)
    : graph_(&graph),
      byzantine_(graph.size(), false),
      forward_conflict_(behavior.forward_conflict),
      held_(graph.size(), Slot::empty()),
      flagged_(graph.size(), false),
      sent_(graph.directed_edge_count()) {
  if (source >= graph.size()) throw InvalidParameter("broadcast source out of range");
  for (AgentId v = 0; v < graph.size(); ++v) byzantine_[v] = behavior.is_byzantine(v);
  held_[source] = Slot::of(std::move(message));
}

void BroadcastRun::step(size_t round, const RelayFn& relay) {
  const Graph& graph = *graph_;
  const size_t n = graph.size();
  for (AgentId v = 0; v < n; ++v) {
    const auto& nbrs = graph.neighbors(v);
    const size_t base = graph.out_offset(v);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      if (byzantine_[v] && relay) {
        sent_[base + k] = relay(round, v, nbrs[k], held_[v]);
      } else if (forward_conflict_ && flagged_[v]) {
        sent_[base + k] = Slot::conflict();
      } else {
        sent_[base + k] = held_[v];
      }
    }
  }
  for (AgentId v = 0; v < n; ++v) {
    for (AgentId u : graph.neighbors(v)) {
      const Slot& m = sent_[graph.directed_index(u, v)];
      if (m.is_empty()) continue;
      if (m.is_conflict()) {
        // Only meaningful when the rule is on; honest agents never send it otherwise.
        flagged_[v] = true;
        continue;
      }
      if (held_[v].is_empty()) {
        held_[v] = m;
      } else if (!same_slot(held_[v], m)) {
        flagged_[v] = true;
      }
    }
  }
}

BroadcastResult BroadcastRun::finish() const {
  BroadcastResult res{held_, flagged_};
  for (AgentId v = 0; v < res.held.size(); ++v) {
    if (res.held[v].is_empty()) res.flagged[v] = true;
  }
  return res;
}

BroadcastResult validated_broadcast(const Graph& graph, AgentId source, PayloadPtr message,
                                    const BroadcastBehavior& behavior) {
  BroadcastRun run(graph, source, std::move(message), behavior);
  const size_t rounds = broadcast_rounds(graph);
  for (size_t r = 1; r <= rounds; ++r) run.step(r, behavior.relay);
  return run.finish();
}

}  // namespace valid
