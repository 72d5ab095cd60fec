#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "heraldmis/graph.hpp"

namespace heraldmis {

inline constexpr NodeId kNoNode = -1;

enum class State : std::uint8_t {
  Asleep,
  W,   // waiting
  D,   // decay
  A,   // active
  Hc,  // herald candidate (H')
  Lc,  // leader candidate (L')
  H,   // herald
  L,   // leader
  M,   // MIS node
  E,   // eliminated
};

const char* state_name(State s);
std::optional<State> state_from_name(const std::string& name);

inline bool in_herald_filter(State s) {
  return s == State::A || s == State::Hc || s == State::Lc || s == State::H || s == State::L;
}
inline bool is_decided(State s) { return s == State::M || s == State::E; }

enum class ChannelClass : std::uint8_t { Report, Decay, Herald, Handshake, Game };

/// One of the globally shared channels. Index is 1-based within its class;
/// Handshake and Game are singletons with index 1.
struct ChannelId {
  ChannelClass cls = ChannelClass::Report;
  int index = 1;

  friend bool operator==(const ChannelId&, const ChannelId&) = default;
  /// Dense integer key for grouping.
  int key() const { return (static_cast<int>(cls) << 20) | index; }
};

enum class MsgKind : std::uint8_t {
  Decay,      // decay-filter broadcast (ID, state)
  Adv,        // herald-protocol advertisement
  HsHerald,   // handshake, herald side: leader's ID
  HsLeader,   // handshake, leader side: (ID, meet)
  Block,      // red-blue odd-round blocking signal
  Game,       // red-blue game move
  RbgResult,  // leader's round-6 report: (leader, game flag, next meet)
  RbgNotify,  // herald's round-8 notification
  Mis,        // dominator broadcast
};

const char* msg_kind_name(MsgKind k);

struct Message {
  NodeId sender = kNoNode;
  State state_tag = State::Asleep;  // sender's state at send time
  MsgKind kind = MsgKind::Decay;
  NodeId leader_id = kNoNode;  // HsHerald/Block/Game/RbgResult/RbgNotify
  int meet_index = 0;          // HsLeader/RbgResult
  bool game_ok = false;        // RbgResult

  friend bool operator==(const Message&, const Message&) = default;
};

enum class ActionKind : std::uint8_t { Inactive, Listen, Broadcast };

/// A node's channel action for one round.
struct Intent {
  NodeId node = kNoNode;
  ActionKind action = ActionKind::Inactive;
  ChannelId channel;
  std::optional<Message> message;  // present iff broadcasting

  static Intent inactive(NodeId v) { return Intent{v, ActionKind::Inactive, {}, std::nullopt}; }
  static Intent listen(NodeId v, ChannelId ch) {
    return Intent{v, ActionKind::Listen, ch, std::nullopt};
  }
  static Intent broadcast(NodeId v, ChannelId ch, Message m) {
    return Intent{v, ActionKind::Broadcast, ch, std::move(m)};
  }
};

struct Delivery {
  NodeId receiver = kNoNode;
  Message message;
};

}  // namespace heraldmis
