#include <gtest/gtest.h>

#include <memory>

#include "valid/broadcast.hpp"
#include "valid/graph.hpp"

namespace valid {
namespace {

PayloadPtr payload(uint64_t v) { return std::make_shared<const Payload>(Payload{v, v + 1}); }

bool holds(const BroadcastResult& r, AgentId v, const PayloadPtr& m) {
  return r.held[v].is_value() && same_payload(r.held[v].value, m);
}

TEST(Broadcast, HonestFloodReachesEveryone) {
  for (const Graph& g : {ring_graph(7), complete_graph(5), two_clique_bridge(2), Graph(4, {{0, 1}, {1, 2}, {2, 3}})}) {
    const auto m = payload(42);
    const auto r = validated_broadcast(g, 3 % g.size(), m, {});
    for (AgentId v = 0; v < g.size(); ++v) {
      EXPECT_TRUE(holds(r, v, m));
      EXPECT_FALSE(r.flagged[v]);
    }
  }
}

TEST(Broadcast, RoundsAreMinOfNodesAndEdges) {
  EXPECT_EQ(broadcast_rounds(ring_graph(6)), 6u);
  EXPECT_EQ(broadcast_rounds(Graph(4, {{0, 1}, {1, 2}, {2, 3}})), 3u);
  EXPECT_EQ(broadcast_rounds(complete_graph(5)), 5u);
}

TEST(Broadcast, TamperingRelayOnFourCycleIsCaught) {
  // 0 - 1 - 2 - 3 - 0, source 0, relay 1 alters the payload.
  const Graph g = ring_graph(4);
  const auto m = payload(1);
  const auto fake = payload(9);
  BroadcastBehavior b;
  b.byzantine = {false, true, false, false};
  b.relay = [&](size_t, AgentId, AgentId, const Slot& held) {
    return held.is_value() ? Slot::of(fake) : held;
  };
  const auto r = validated_broadcast(g, 0, m, b);
  bool any_flag = false;
  for (AgentId v : {0u, 2u, 3u}) {
    EXPECT_TRUE(holds(r, v, m) || r.flagged[v]);
    any_flag |= r.flagged[v];
  }
  EXPECT_TRUE(any_flag);
}

TEST(Broadcast, ConsistentByzantineSourceIsAdopted) {
  const Graph g = complete_graph(4);
  const auto lie = payload(7);
  BroadcastBehavior b;
  b.byzantine = {true, false, false, false};
  const auto r = validated_broadcast(g, 0, lie, b);
  for (AgentId v = 1; v < 4; ++v) {
    EXPECT_TRUE(holds(r, v, lie));
    EXPECT_FALSE(r.flagged[v]);
  }
}

TEST(Broadcast, SameValueTamperIsNoOp) {
  const Graph g = ring_graph(5);
  const auto m = payload(3);
  BroadcastBehavior b;
  b.byzantine = {false, false, true, false, false};
  b.relay = [&](size_t, AgentId, AgentId, const Slot& held) {
    return held.is_value() ? Slot::of(std::make_shared<const Payload>(*held.value)) : held;
  };
  const auto r = validated_broadcast(g, 0, m, b);
  for (AgentId v : {0u, 1u, 3u, 4u}) {
    EXPECT_TRUE(holds(r, v, m));
    EXPECT_FALSE(r.flagged[v]);
  }
}

// Relay 0 injects a fake into p1 = 2 in round 1, ahead of the source 1
// because neighbors are read in id order. p2 = 3 only hears from p1.
struct FirstValueCounterexample {
  Graph g{4, {{0, 2}, {1, 2}, {2, 3}}};
  PayloadPtr m = payload(100);
  PayloadPtr fake = payload(200);
  BroadcastBehavior behavior(bool forward_conflict) const {
    BroadcastBehavior b;
    b.byzantine = {true, false, false, false};
    b.forward_conflict = forward_conflict;
    b.relay = [f = fake](size_t round, AgentId, AgentId, const Slot&) {
      return round == 1 ? Slot::of(f) : Slot::empty();
    };
    return b;
  }
};

TEST(Broadcast, PlainFirstValueRuleCanBeFooled) {
  const FirstValueCounterexample cx;
  const auto r = validated_broadcast(cx.g, 1, cx.m, cx.behavior(false));
  EXPECT_TRUE(r.flagged[2]);
  EXPECT_FALSE(r.flagged[3]);
  EXPECT_TRUE(holds(r, 3, cx.fake));
}

TEST(Broadcast, ConflictTokenClosesTheGap) {
  const FirstValueCounterexample cx;
  const auto r = validated_broadcast(cx.g, 1, cx.m, cx.behavior(true));
  EXPECT_TRUE(r.flagged[2]);
  EXPECT_TRUE(r.flagged[3]);
}

TEST(Broadcast, SilentRelayLeavesCutOffAgentFlagged) {
  // Path 0 - 1 - 2 with a silent middle: agent 2 never hears anything.
  const Graph g(3, {{0, 1}, {1, 2}});
  BroadcastBehavior b;
  b.byzantine = {false, true, false};
  b.relay = [](size_t, AgentId, AgentId, const Slot&) { return Slot::empty(); };
  const auto r = validated_broadcast(g, 0, payload(5), b);
  EXPECT_TRUE(r.held[2].is_empty());
  EXPECT_TRUE(r.flagged[2]);
}

}  // namespace
}  // namespace valid
