#pragma once

#include <cstdint>

#include "heraldmis/message.hpp"
#include "heraldmis/params.hpp"
#include "heraldmis/rng.hpp"

namespace heraldmis {

/// Which case of the per-state pseudo-code a node took this round. Recorded
/// between intent collection and delivery handling.
enum class Slot : std::uint8_t {
  None,
  WaitListen,
  DecayBroadcast,
  DecayListenDecay,
  DecayListenReport,
  ActiveListenHerald,
  ActiveBroadcastAdv,
  ActiveListenReport,
  HsSend,
  HsListen,
  RbgBlock,
  RbgGameSend,
  RbgGameListen,
  RbgMeetListen,
  RbgMeetSend,
  DominatorSend,
};

enum class PairColor : std::uint8_t { None, Red, Blue };

/// One node's complete local state. Operations on it are pure functions of
/// (ctx, params, delivery); the engine owns exactly one ctx per node.
struct NodeCtx {
  NodeId id = kNoNode;
  State state = State::Asleep;
  long count = 0;
  int phase = 0;
  double gamma = 0.0;
  long lonely = 0;
  NodeId leader_id = kNoNode;
  int meet = 0;  // 1-based report channel index
  bool handshake_ok = true;
  bool game_ok = true;
  PairColor color = PairColor::None;
  bool enforce = false;
  Rng rng{0};

  // Draws and slot of the current round.
  double draw_q = 0.0;
  int draw_decay_ch = 1;   // j in 1..n_decay
  int draw_report_ch = 1;  // k in 1..n_report
  int draw_herald_ch = 0;  // i in 1..n_herald, 0 = bottom
  Slot slot = Slot::None;
  bool sent_on_handshake = false;  // dominator bookkeeping

  // Engine-side bookkeeping (not consulted by the step functions).
  long wake_round = -1;
  long hf_entry_round = -1;
  long hs_start_round = -1;
  long decision_round = -1;

  static NodeCtx make(NodeId id, std::uint64_t master_seed) {
    NodeCtx c;
    c.id = id;
    c.rng = Rng(mix_seed(master_seed, static_cast<std::uint64_t>(id) + 1));
    return c;
  }
};

/// Advances counters and activity, consumes the round's draws, picks the
/// channel action. Mutates only scratch fields and counters; state
/// transitions happen in end_round.
Intent begin_round(NodeCtx& ctx, const ProtocolParams& p);

/// Applies the received message (if any) and all end-of-round transitions,
/// including the loneliness promotion. `round` is only recorded into
/// bookkeeping fields.
void end_round(NodeCtx& ctx, const ProtocolParams& p, const Message* received, long round);

/// Draws the herald channel index with Pr(i = j) = 2^-j, Pr(bottom) = 2^-n.
/// Returns 0 for bottom.
int draw_herald_channel(Rng& rng, int n_herald);

}  // namespace heraldmis
