#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "valid/graph.hpp"

namespace valid {

using Payload = std::vector<uint64_t>;
using PayloadPtr = std::shared_ptr<const Payload>;

/// One relay slot: nothing, a payload, or the conflict token that a flagged
/// agent forwards in place of a payload.
struct Slot {
  enum class Kind : uint8_t { kEmpty, kValue, kConflict };
  Kind kind = Kind::kEmpty;
  PayloadPtr value;

  static Slot empty() { return {}; }
  static Slot conflict() { return {Kind::kConflict, nullptr}; }
  static Slot of(PayloadPtr p) { return {Kind::kValue, std::move(p)}; }

  bool is_empty() const { return kind == Kind::kEmpty; }
  bool is_value() const { return kind == Kind::kValue; }
  bool is_conflict() const { return kind == Kind::kConflict; }
};

bool same_payload(const PayloadPtr& a, const PayloadPtr& b);
bool same_slot(const Slot& a, const Slot& b);

/// What Byzantine agent `from` sends to neighbor `to` in flood round r
/// (1-based), given the slot it currently holds.
using RelayFn = std::function<Slot(size_t round, AgentId from, AgentId to, const Slot& held)>;

struct BroadcastBehavior {
  /// byzantine[v] marks agents whose sends come from `relay`.
  std::vector<bool> byzantine;
  /// Null means Byzantine agents relay like honest ones.
  RelayFn relay;
  /// Flagged honest agents forward the conflict token. With this off the
  /// flood is the plain first-value rule, which a relay can fool.
  bool forward_conflict = true;

  bool is_byzantine(AgentId v) const { return v < byzantine.size() && byzantine[v]; }
};

struct BroadcastResult {
  std::vector<Slot> held;
  /// flagged[v]: honest v saw a conflicting value, a conflict token, or
  /// nothing at all by the last round.
  std::vector<bool> flagged;
};

/// A flood in progress, advanced one synchronous round at a time. Copyable,
/// so a search over relay choices can branch from any intermediate state.
class BroadcastRun {
 public:
  BroadcastRun(const Graph& graph, AgentId source, PayloadPtr message,
               const BroadcastBehavior& behavior);
  /// Round r (1-based): every agent sends, then every agent receives.
  /// Byzantine sends come from `relay` when it is set.
  void step(size_t round, const RelayFn& relay);
  const std::vector<Slot>& held() const { return held_; }
  const std::vector<bool>& flagged() const { return flagged_; }
  /// Final result; agents still empty count as flagged.
  BroadcastResult finish() const;

 private:
  const Graph* graph_;
  std::vector<bool> byzantine_;
  bool forward_conflict_;
  std::vector<Slot> held_;
  std::vector<bool> flagged_;
  std::vector<Slot> sent_;
};

/// Synchronous flood from `source` for R = min(|V|, |E|) rounds. Each agent
/// adopts the first payload it receives (lowest neighbor id first within a
/// round) and flags on any later differing payload.
BroadcastResult validated_broadcast(const Graph& graph, AgentId source, PayloadPtr message,
                                    const BroadcastBehavior& behavior);

size_t broadcast_rounds(const Graph& graph);

}  // namespace valid
