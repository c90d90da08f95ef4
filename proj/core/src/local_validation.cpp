#include <algorithm>

#include "valid/errors.hpp"
#include "valid/poly_hash.hpp"
#include "valid/rng.hpp"
#include "valid/validation.hpp"

namespace valid {

namespace {

PayloadPtr make_payload(Payload p) { return std::make_shared<const Payload>(std::move(p)); }

// Slot -> payload, or null when nothing usable was delivered.
const Payload* payload_of(const Slot& s) { return s.is_value() ? s.value.get() : nullptr; }

void check_bounds(const Graph& graph, const EdgeTranscript& tr, const BoundSchedule& bounds,
                  const ValidationBehavior& behavior, ValidationStates& states) {
  const int T = tr.rounds();
  if (bounds.rounds() < T || static_cast<int>(bounds.gradient.size()) < T + 1) {
    throw InvalidParameter("bound schedule shorter than transcript");
  }
  for (size_t e = 0; e < tr.edges(); ++e) {
    const AgentId receiver = graph.directed_edge(e).second;
    if (behavior.is_byzantine(receiver)) continue;
    for (int t = 1; t <= T; ++t) {
      const size_t ti = static_cast<size_t>(t);
      if (tr.x_vec(e, t).norm() > bounds.model[ti] || tr.g_vec(e, t).norm() > bounds.gradient[ti]) {
        states[receiver].raise(Cause::kBoundViolation);
        break;
      }
    }
  }
}

}  // namespace

FieldElement draw_hash_key(const PrimeField& field, uint64_t seed, AgentId v, uint64_t phase) {
  CounterRng rng(seed, v, phase, StreamPurpose::kHashKey);
  return rng.uniform_below(field.modulus());
}

ValidationStates local_validate(const Graph& graph, const EdgeTranscript& tr,
                                const StepSchedule& schedule, const BoundSchedule& bounds,
                                const LocalValidationConfig& config,
                                const ValidationBehavior& behavior) {
  const size_t n = graph.size();
  const PrimeField field(config.prime);
  ValidationStates states(n);
  check_bounds(graph, tr, bounds, behavior, states);

  const BroadcastBehavior bb = behavior.broadcast();
  auto broadcast_all = [&](const std::vector<PayloadPtr>& payloads) {
    std::vector<BroadcastResult> results;
    results.reserve(n);
    for (AgentId v = 0; v < n; ++v) {
      results.push_back(validated_broadcast(graph, v, payloads[v], bb));
      for (AgentId w = 0; w < n; ++w) {
        if (results.back().flagged[w] && !behavior.is_byzantine(w)) {
          states[w].raise(Cause::kBroadcastConflict);
        }
      }
    }
    return results;
  };

  // Views of every directed edge, as held by its receiver.
  std::vector<EdgeViews> views;
  views.reserve(tr.edges());
  for (size_t e = 0; e < tr.edges(); ++e) views.push_back(edge_views(tr, schedule, e));
  auto in_edge = [&](AgentId v, AgentId u) { return graph.directed_index(u, v); };

  std::vector<FieldElement> keys(n);
  for (AgentId v = 0; v < n; ++v) keys[v] = draw_hash_key(field, config.seed, v);

  // Phase 1: hashes of incoming views under the receiver's own key.
  std::vector<PayloadPtr> own(n);
  std::vector<std::vector<ViewHashes>> own_hashes(n);
  for (AgentId v = 0; v < n; ++v) {
    Payload p;
    for (AgentId u : graph.neighbors(v)) {
      const ViewHashes h = hash_views(field, keys[v], views[in_edge(v, u)]);
      own_hashes[v].push_back(h);
      p.insert(p.end(), h.begin(), h.end());
    }
    own[v] = make_payload(std::move(p));
  }
  broadcast_all(own);

  // Phase 2: keys.
  std::vector<PayloadPtr> key_payloads(n);
  for (AgentId v = 0; v < n; ++v) key_payloads[v] = make_payload({keys[v]});
  const auto key_results = broadcast_all(key_payloads);

  // Phase 3: hashes of incoming views under every other agent's key, as
  // each agent received that key. Layout: for w != v ascending, for u in N(v), 4 words.
  std::vector<PayloadPtr> cross(n);
  for (AgentId v = 0; v < n; ++v) {
    Payload p;
    for (AgentId w = 0; w < n; ++w) {
      if (w == v) continue;
      const Payload* kp = payload_of(key_results[w].held[v]);
      const FieldElement key = kp != nullptr && !kp->empty() ? (*kp)[0] % field.modulus() : 0;
      for (AgentId u : graph.neighbors(v)) {
        const ViewHashes h = hash_views(field, key, views[in_edge(v, u)]);
        p.insert(p.end(), h.begin(), h.end());
      }
    }
    cross[v] = make_payload(std::move(p));
  }
  const auto cross_results = broadcast_all(cross);

  // Checks by each honest w under s_w.
  for (AgentId w = 0; w < n; ++w) {
    if (behavior.is_byzantine(w)) continue;
    // hash of directed edge v->u under s_w, as reported by receiver u.
    auto reported = [&](AgentId v, AgentId u, ViewHashes& out) {
      const auto& nu = graph.neighbors(u);
      const size_t pos = static_cast<size_t>(std::lower_bound(nu.begin(), nu.end(), v) - nu.begin());
      if (u == w) {
        out = own_hashes[w][pos];
        return true;
      }
      const Payload* p = payload_of(cross_results[u].held[w]);
      const size_t key_slot = w < u ? w : w - 1;
      const size_t at = (key_slot * nu.size() + pos) * 4;
      if (p == nullptr || p->size() < at + 4) return false;
      for (size_t k = 0; k < 4; ++k) out[k] = (*p)[at + k];
      return true;
    };

    std::vector<ViewHashes> node_hash(n);
    bool ok = true;
    for (AgentId v = 0; v < n && ok; ++v) {
      bool first = true;
      for (AgentId u : graph.neighbors(v)) {
        ViewHashes h{};
        if (!reported(v, u, h)) {
          ok = false;
          break;
        }
        if (first) {
          node_hash[v] = h;
          first = false;
        } else if (h != node_hash[v]) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      states[w].raise(Cause::kHashInconsistency);
      continue;
    }
    for (AgentId v = 0; v < n; ++v) {
      const ViewHashes& hv = node_hash[v];
      FieldElement rhs = hv[1];
      for (AgentId u : graph.neighbors(v)) {
        rhs = field.add(rhs, field.sub(node_hash[u][2], hv[2]));
      }
      rhs = field.sub(rhs, hv[3]);
      if (rhs != hv[0]) {
        states[w].raise(Cause::kHashInconsistency);
        break;
      }
    }
  }
  return states;
}

}  // namespace valid
