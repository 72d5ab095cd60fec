#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "heraldmis/engine.hpp"
#include "heraldmis/graph.hpp"
#include "heraldmis/params.hpp"
#include "heraldmis/protocol.hpp"

using namespace heraldmis;

namespace {

ProtocolParams small_params(const ParamOverrides& o = {}) { return derive_params(1024, 8, 2, o); }

NodeCtx ctx_in(State s, std::uint64_t seed = 7) {
  NodeCtx c = NodeCtx::make(0, seed);
  c.state = s;
  return c;
}

Message msg(NodeId sender, State tag, MsgKind kind, NodeId leader = kNoNode, int meet = 0,
            bool ok = false) {
  return Message{sender, tag, kind, leader, meet, ok};
}

}  // namespace

TEST_CASE("per-round tick") {
  const ProtocolParams p = [] {
    ParamOverrides o;
    o.sigma_plus = 2.0;
    return small_params(o);
  }();

  SUBCASE("activity growth is capped at one half") {
    NodeCtx c = ctx_in(State::A);
    c.gamma = 0.4;
    begin_round(c, p);
    CHECK(c.gamma == doctest::Approx(0.5));
    CHECK(c.count == 1);
    CHECK(c.lonely == 1);
  }
  SUBCASE("waiting nodes have zero activity") {
    NodeCtx c = ctx_in(State::W);
    begin_round(c, p);
    CHECK(c.gamma == 0.0);
    CHECK(c.lonely == 0);  // counter scoped to the herald filter
  }
  SUBCASE("the all-states counter scope is switchable") {
    ParamOverrides o;
    o.lonely_in_all_states = true;
    const ProtocolParams q = small_params(o);
    NodeCtx c = ctx_in(State::W);
    begin_round(c, q);
    CHECK(c.lonely == 1);
  }
}

TEST_CASE("decay filter") {
  const ProtocolParams p = small_params();

  SUBCASE("wait expiry enters decay") {
    NodeCtx c = ctx_in(State::W);
    c.count = p.tau_wait - 1;
    const Intent i = begin_round(c, p);
    CHECK(i.action == ActionKind::Listen);
    CHECK(i.channel.cls == ChannelClass::Report);
    end_round(c, p, nullptr, 10);
    CHECK(c.state == State::D);
    CHECK(c.count == 0);
    CHECK(c.phase == 0);
  }
  SUBCASE("phase advances per window and saturates at the cap") {
    NodeCtx c = ctx_in(State::D);
    c.phase = 3;
    c.count = p.tau_decay - 1;
    c.slot = Slot::DecayListenReport;
    c.count = p.tau_decay;
    end_round(c, p, nullptr, 10);
    CHECK(c.phase == 4);
    CHECK(c.count == 0);
    c.phase = p.phase_cap;
    c.count = p.tau_decay;
    c.slot = Slot::DecayListenDecay;
    end_round(c, p, nullptr, 11);
    CHECK(c.phase == p.phase_cap);
  }
  SUBCASE("a decay broadcast enters the herald filter") {
    // Find a seed whose first draw lands in the broadcast branch.
    for (std::uint64_t seed = 1;; ++seed) {
      NodeCtx c = ctx_in(State::D, seed);
      c.phase = p.phase_cap;
      const Intent i = begin_round(c, p);
      if (c.slot != Slot::DecayBroadcast) continue;
      CHECK(i.action == ActionKind::Broadcast);
      CHECK(i.channel.cls == ChannelClass::Decay);
      REQUIRE(i.message.has_value());
      CHECK(i.message->kind == MsgKind::Decay);
      end_round(c, p, nullptr, 10);
      CHECK(c.state == State::A);
      CHECK(c.gamma == doctest::Approx(p.gamma_min));
      CHECK(c.count == 0);
      CHECK(c.lonely == 0);
      break;
    }
  }
  SUBCASE("a received decay message restarts the filter") {
    NodeCtx c = ctx_in(State::D);
    c.count = 4;
    c.phase = 2;
    c.slot = Slot::DecayListenDecay;
    const Message m = msg(3, State::D, MsgKind::Decay);
    end_round(c, p, &m, 10);
    CHECK(c.state == State::W);
    CHECK(c.count == 0);
  }
  SUBCASE("a dominator broadcast eliminates") {
    NodeCtx c = ctx_in(State::W);
    c.slot = Slot::WaitListen;
    c.count = 1;
    const Message m = msg(3, State::M, MsgKind::Mis);
    end_round(c, p, &m, 10);
    CHECK(c.state == State::E);
    CHECK(c.gamma == 0.0);
  }
  SUBCASE("other message kinds are ignored in the decay filter") {
    NodeCtx c = ctx_in(State::D);
    c.count = 1;
    c.slot = Slot::DecayListenReport;
    const Message m = msg(3, State::L, MsgKind::Block, 3);
    end_round(c, p, &m, 10);
    CHECK(c.state == State::D);
  }
}

TEST_CASE("herald channel distribution") {
  Rng rng(42);
  const int n_herald = 4;
  const int samples = 1 << 20;
  std::map<int, int> hist;
  for (int i = 0; i < samples; ++i) hist[draw_herald_channel(rng, n_herald)]++;
  const double expected[] = {1.0 / 16.0, 0.5, 0.25, 0.125, 1.0 / 16.0};  // [bottom, 1..4]
  for (int ch = 0; ch <= n_herald; ++ch) {
    const double freq = static_cast<double>(hist[ch]) / samples;
    CHECK(freq == doctest::Approx(expected[ch]).epsilon(0.02));
  }
}

TEST_CASE("active-state delivery handling") {
  ParamOverrides o;
  o.sigma_minus = std::pow(2.0, 0.12);
  const ProtocolParams p = small_params(o);

  SUBCASE("hearing an advertisement makes a herald candidate") {
    NodeCtx c = ctx_in(State::A);
    c.slot = Slot::ActiveListenHerald;
    c.count = 9;
    c.lonely = 3;
    const Message m = msg(7, State::A, MsgKind::Adv);
    end_round(c, p, &m, 20);
    CHECK(c.state == State::Hc);
    CHECK(c.leader_id == 7);
    CHECK(c.count == 0);
    CHECK(c.lonely == 0);
    CHECK(c.handshake_ok);
    CHECK(c.hs_start_round == 21);
  }
  SUBCASE("hearing a paired node on a report channel knocks activity down") {
    NodeCtx c = ctx_in(State::A);
    c.slot = Slot::ActiveListenReport;
    c.gamma = 0.5;
    c.lonely = 5;
    const Message m = msg(7, State::L, MsgKind::Block, 7);
    end_round(c, p, &m, 20);
    CHECK(c.state == State::A);
    CHECK(c.gamma == doctest::Approx(0.5 / std::pow(2.0, 0.12)));  // ~0.46012
    CHECK(c.lonely == 0);
  }
  SUBCASE("the knockdown never undershoots the floor") {
    NodeCtx c = ctx_in(State::A);
    c.slot = Slot::ActiveListenReport;
    c.gamma = p.gamma_min;
    const Message m = msg(7, State::H, MsgKind::RbgNotify, 7);
    end_round(c, p, &m, 20);
    CHECK(c.gamma == doctest::Approx(p.gamma_min));
  }
  SUBCASE("a dominator broadcast eliminates") {
    NodeCtx c = ctx_in(State::A);
    c.slot = Slot::ActiveListenReport;
    c.gamma = 0.25;
    const Message m = msg(7, State::M, MsgKind::Mis);
    end_round(c, p, &m, 20);
    CHECK(c.state == State::E);
    CHECK(c.gamma == 0.0);
  }
}

TEST_CASE("handshake") {
  const ProtocolParams p = small_params();

  SUBCASE("silence in a herald listen round aborts to active") {
    NodeCtx c = ctx_in(State::Hc);
    c.leader_id = 9;
    c.count = 2;  // becomes 3, a listen round
    const Intent i = begin_round(c, p);
    CHECK(i.action == ActionKind::Listen);
    CHECK(i.channel.cls == ChannelClass::Handshake);
    end_round(c, p, nullptr, 30);
    CHECK(c.state == State::A);
    CHECK(c.count == 0);
  }
  SUBCASE("a complete exchange promotes; the last rendezvous report wins") {
    NodeCtx c = ctx_in(State::Hc);
    c.leader_id = 9;
    for (long r = 1; r <= 6; ++r) {
      const Intent i = begin_round(c, p);
      REQUIRE(c.count == r);
      const Message* m = nullptr;
      Message stored;
      if (r == 3 || r == 4) {
        CHECK(i.action == ActionKind::Listen);
        stored = msg(9, State::Lc, MsgKind::HsLeader, 9, r == 3 ? 5 : 2);
        m = &stored;
      } else {
        CHECK(i.action == ActionKind::Broadcast);
        REQUIRE(i.message.has_value());
        CHECK(i.message->kind == MsgKind::HsHerald);
        CHECK(i.message->leader_id == 9);
      }
      end_round(c, p, m, 30 + r);
    }
    CHECK(c.state == State::H);
    CHECK(c.count == 0);
    CHECK(c.game_ok);
    CHECK(c.lonely == 0);
    CHECK(c.meet == 2);
  }
  SUBCASE("a herald message naming someone else fails the leader side") {
    NodeCtx c = ctx_in(State::Lc);
    c.id = 4;
    c.leader_id = 4;
    begin_round(c, p);  // count 1, listen
    const Message m = msg(8, State::Hc, MsgKind::HsHerald, 7);
    end_round(c, p, &m, 30);
    CHECK(c.state == State::A);
    CHECK(c.count == 0);
  }
  SUBCASE("a stray dominator broadcast on the handshake channel eliminates") {
    NodeCtx c = ctx_in(State::Lc);
    c.id = 4;
    c.leader_id = 4;
    begin_round(c, p);
    const Message m = msg(8, State::M, MsgKind::Mis);
    end_round(c, p, &m, 30);
    CHECK(c.state == State::E);
  }
}

TEST_CASE("red-blue rounds") {
  const ProtocolParams p = small_params();

  SUBCASE("a blue leader hearing silence in the first game round fails the game") {
    NodeCtx c = ctx_in(State::L);
    c.id = 4;
    c.leader_id = 4;
    c.color = PairColor::Blue;
    c.gamma = 0.25;
    c.count = 1;  // becomes 2: the first game round
    const Intent i = begin_round(c, p);
    CHECK(c.slot == Slot::RbgGameListen);
    CHECK(i.channel.cls == ChannelClass::Game);
    end_round(c, p, nullptr, 40);
    CHECK_FALSE(c.game_ok);
  }
  SUBCASE("a failed game sends the leader back to active at its report slot") {
    NodeCtx c = ctx_in(State::L);
    c.id = 4;
    c.count = 6;
    c.game_ok = false;
    c.lonely = 3;
    c.slot = Slot::RbgMeetSend;
    end_round(c, p, nullptr, 40);
    CHECK(c.state == State::A);
    CHECK(c.count == 0);
    CHECK(c.lonely == 0);
  }
  SUBCASE("a surviving leader joins the dominators after the full window") {
    NodeCtx c = ctx_in(State::L);
    c.id = 4;
    c.count = p.tau_red_blue + 6;
    c.game_ok = true;
    c.draw_report_ch = 3;
    c.slot = Slot::RbgMeetSend;
    end_round(c, p, nullptr, 40);
    CHECK(c.state == State::M);
    CHECK(c.gamma == 0.0);
    CHECK(c.meet == 3);
  }
  SUBCASE("the herald follows the leader's rendezvous updates") {
    NodeCtx c = ctx_in(State::H);
    c.leader_id = 2;
    c.count = 6;
    c.meet = 1;
    c.slot = Slot::RbgMeetListen;
    const Message ok = msg(2, State::L, MsgKind::RbgResult, 2, 4, true);
    end_round(c, p, &ok, 40);
    CHECK(c.state == State::H);
    CHECK(c.meet == 4);
  }
  SUBCASE("an invalid or failed report knocks the herald back to active") {
    for (const Message* m :
         {static_cast<const Message*>(nullptr), [] {
            static const Message fail = msg(2, State::L, MsgKind::RbgResult, 2, 4, false);
            return &fail;
          }()}) {
      NodeCtx c = ctx_in(State::H);
      c.leader_id = 2;
      c.count = 6;
      c.lonely = 9;
      c.slot = Slot::RbgMeetListen;
      end_round(c, p, m, 40);
      CHECK(c.state == State::A);
      CHECK(c.count == 0);
      CHECK(c.lonely == 0);
    }
  }
  SUBCASE("a surviving herald is eliminated after the full window") {
    NodeCtx c = ctx_in(State::H);
    c.leader_id = 2;
    c.count = p.tau_red_blue + 6;
    c.slot = Slot::RbgMeetListen;
    const Message ok = msg(2, State::L, MsgKind::RbgResult, 2, 4, true);
    end_round(c, p, &ok, 40);
    CHECK(c.state == State::E);
  }
  SUBCASE("odd rounds block on the handshake channel") {
    NodeCtx c = ctx_in(State::H);
    c.leader_id = 2;
    c.gamma = 0.25;
    c.count = 2;  // becomes 3
    const Intent i = begin_round(c, p);
    CHECK(c.slot == Slot::RbgBlock);
    CHECK(i.channel.cls == ChannelClass::Handshake);
    REQUIRE(i.message.has_value());
    CHECK(i.message->kind == MsgKind::Block);
  }
  SUBCASE("paired activity decays toward the floor") {
    NodeCtx c = ctx_in(State::L);
    c.id = 4;
    c.gamma = 0.4;  // below the cap, so the growth tick applies in full
    c.count = 2;    // becomes 3, no fresh color draw
    c.color = PairColor::Red;
    begin_round(c, p);
    // Net factor: one growth tick times the in-pair decay.
    const double expected =
        0.4 * p.sigma_plus * std::pow(p.sigma_plus, -p.rbg_decay_exp);
    CHECK(c.gamma == doctest::Approx(std::max(expected, p.gamma_min)));
  }
}

TEST_CASE("dominator broadcast discipline") {
  const ProtocolParams p = small_params();

  SUBCASE("the enforce flag forces the handshake channel") {
    NodeCtx c = ctx_in(State::M);
    c.enforce = true;
    const Intent i = begin_round(c, p);
    CHECK(i.action == ActionKind::Broadcast);
    CHECK(i.channel.cls == ChannelClass::Handshake);
    REQUIRE(i.message.has_value());
    CHECK(i.message->kind == MsgKind::Mis);
    end_round(c, p, nullptr, 50);
    CHECK_FALSE(c.enforce);
  }
  SUBCASE("channel choice follows the draw, and no two consecutive rounds skip the handshake channel") {
    NodeCtx c = ctx_in(State::M, 99);
    bool prev_on_handshake = true;
    for (int r = 0; r < 300; ++r) {
      const bool enforce_before = c.enforce;
      const Intent i = begin_round(c, p);
      const bool on_handshake = i.channel.cls == ChannelClass::Handshake;
      if (enforce_before) {
        CHECK(on_handshake);
      } else if (c.draw_q < 0.5) {
        CHECK(on_handshake);
      } else if (c.draw_q < 0.75) {
        CHECK(i.channel.cls == ChannelClass::Game);
      } else {
        CHECK(i.channel.cls == ChannelClass::Report);
      }
      CHECK((on_handshake || prev_on_handshake));
      prev_on_handshake = on_handshake;
      end_round(c, p, nullptr, r);
      CHECK(c.state == State::M);
    }
  }
}

TEST_CASE("loneliness promotion") {
  SUBCASE("threshold crossing promotes to dominator") {
    const ProtocolParams p = small_params();
    NodeCtx c = ctx_in(State::A);
    c.gamma = p.gamma_min;
    c.lonely = p.tau_lonely - 1;
    begin_round(c, p);
    CHECK(c.lonely == p.tau_lonely);
    end_round(c, p, nullptr, 60);
    CHECK(c.state == State::M);
    CHECK(c.gamma == 0.0);
  }
  SUBCASE("an isolated node promotes exactly at the threshold") {
    ParamOverrides o;
    o.tau_lonely = 50;
    const ProtocolParams p = derive_params(1, 4, 1, o);
    Engine e(Graph(1), p, {0}, 17);
    for (int i = 0; i < 400 && !e.all_decided(); ++i) e.advance();
    REQUIRE(e.all_decided());
    const NodeCtx& c = e.node(0);
    CHECK(c.state == State::M);
    CHECK(c.decision_round == c.hf_entry_round + p.tau_lonely);
  }
}

TEST_CASE("trajectory invariants on a live network") {
  const Graph g = gen_unit_disk(20, 0.35, 1.0, 5);
  const ProtocolParams p = derive_params(20, 8, 2);
  Engine e(g, p, std::vector<long>(20, 0), 23, EngineOptions{true, true});
  for (int i = 0; i < 2000 && !e.all_decided(); ++i) e.advance();

  SUBCASE("stage order is forward-only and decisions are terminal") {
    const auto decayish = [](State s) { return s == State::W || s == State::D; };
    for (const Transition& t : e.transitions()) {
      CHECK_FALSE(is_decided(t.from));
      if (decayish(t.to)) {
        // Only wake-up or a decay-filter restart may target these states.
        CHECK((t.from == State::Asleep || decayish(t.from)));
      }
    }
  }
  SUBCASE("activity stays in the legal band") {
    for (int v = 0; v < g.node_count(); ++v) {
      const double gamma = e.node(v).gamma;
      if (gamma != 0.0) {
        CHECK(gamma >= p.gamma_min - 1e-12);
        CHECK(gamma <= 0.5 + 1e-12);
      }
    }
  }
  SUBCASE("replaying each node from its delivery log reproduces its trajectory") {
    for (int v = 0; v < g.node_count(); ++v) {
      std::map<long, Message> deliveries;
      if (auto it = e.delivery_log().find(v); it != e.delivery_log().end()) {
        deliveries = it->second;
      }
      const auto replayed = replay_node(p, 23, v, 0, deliveries, e.round() - 1);
      std::vector<Transition> expected;
      for (const Transition& t : e.transitions()) {
        if (t.node == v) expected.push_back(t);
      }
      REQUIRE(replayed.size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(replayed[i].round == expected[i].round);
        CHECK(replayed[i].from == expected[i].from);
        CHECK(replayed[i].to == expected[i].to);
      }
    }
  }
}

TEST_CASE("state and message names round trip") {
  for (State s : {State::Asleep, State::W, State::D, State::A, State::Hc, State::Lc, State::H,
                  State::L, State::M, State::E}) {
    const auto back = state_from_name(state_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK_FALSE(state_from_name("bogus").has_value());
}
