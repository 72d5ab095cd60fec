#include "heraldmis/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace heraldmis {

const char* state_name(State s) {
  switch (s) {
    case State::Asleep: return "Z";
    case State::W: return "W";
    case State::D: return "D";
    case State::A: return "A";
    case State::Hc: return "Hc";
    case State::Lc: return "Lc";
    case State::H: return "H";
    case State::L: return "L";
    case State::M: return "M";
    case State::E: return "E";
  }
  return "?";
}

std::optional<State> state_from_name(const std::string& name) {
  for (State s : {State::Asleep, State::W, State::D, State::A, State::Hc, State::Lc,
                  State::H, State::L, State::M, State::E}) {
    if (name == state_name(s)) return s;
  }
  return std::nullopt;
}

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::Decay: return "Decay";
    case MsgKind::Adv: return "Adv";
    case MsgKind::HsHerald: return "HsHerald";
    case MsgKind::HsLeader: return "HsLeader";
    case MsgKind::Block: return "Block";
    case MsgKind::Game: return "Game";
    case MsgKind::RbgResult: return "RbgResult";
    case MsgKind::RbgNotify: return "RbgNotify";
    case MsgKind::Mis: return "Mis";
  }
  return "?";
}

int draw_herald_channel(Rng& rng, int n_herald) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (int j = 1; j <= n_herald; ++j) {
    cumulative += std::ldexp(1.0, -j);  // 2^-j
    if (u < cumulative) return j;
  }
  return 0;  // bottom, probability 2^-n_herald
}

namespace {

constexpr ChannelId report_ch(int k) { return ChannelId{ChannelClass::Report, k}; }
constexpr ChannelId decay_ch(int j) { return ChannelId{ChannelClass::Decay, j}; }
constexpr ChannelId herald_ch(int i) { return ChannelId{ChannelClass::Herald, i}; }
constexpr ChannelId handshake_ch() { return ChannelId{ChannelClass::Handshake, 1}; }
constexpr ChannelId game_ch() { return ChannelId{ChannelClass::Game, 1}; }

int rbg_phase(long count) { return static_cast<int>((count - 1) % 8) + 1; }

bool handshake_listen_round(State s, long count) {
  // Herald candidates listen in rounds 3,4; leader candidates in 1,2,5,6.
  const bool herald_side = s == State::Hc;
  const bool mid = count == 3 || count == 4;
  return herald_side ? mid : !mid;
}

void become_dominator(NodeCtx& c) {
  c.state = State::M;
  c.gamma = 0.0;
  c.enforce = false;
}

void become_eliminated(NodeCtx& c) {
  c.state = State::E;
  c.gamma = 0.0;
}

void knock_back_to_active(NodeCtx& c, bool reset_lonely) {
  c.state = State::A;
  c.count = 0;
  if (reset_lonely) c.lonely = 0;
}

}  // namespace

Intent begin_round(NodeCtx& c, const ProtocolParams& p) {
  c.slot = Slot::None;
  c.count += 1;
  if (in_herald_filter(c.state) || (p.lonely_in_all_states && !is_decided(c.state))) {
    c.lonely += 1;
  }
  if (c.gamma > 0.0) c.gamma = std::min(c.gamma * p.sigma_plus, 0.5);
  c.draw_q = c.rng.uniform();
  c.draw_decay_ch = 1 + c.rng.below(p.n_decay);
  c.draw_report_ch = 1 + c.rng.below(p.n_report);

  switch (c.state) {
    case State::W:
      c.slot = Slot::WaitListen;
      return Intent::listen(c.id, report_ch(c.draw_report_ch));

    case State::D: {
      const double p_bcast = std::ldexp(1.0, c.phase) / static_cast<double>(p.n_known);
      if (c.draw_q < p_bcast) {
        c.slot = Slot::DecayBroadcast;
        return Intent::broadcast(c.id, decay_ch(c.draw_decay_ch),
                                 Message{c.id, State::D, MsgKind::Decay});
      }
      if (c.draw_q < 0.5) {
        c.slot = Slot::DecayListenDecay;
        return Intent::listen(c.id, decay_ch(c.draw_decay_ch));
      }
      c.slot = Slot::DecayListenReport;
      return Intent::listen(c.id, report_ch(c.draw_report_ch));
    }

    case State::A: {
      c.draw_herald_ch = draw_herald_channel(c.rng, p.n_herald);
      // Drawing bottom forces the report-listening branch.
      const double q = c.draw_herald_ch == 0 ? 1.0 : c.draw_q;
      if (q < p.pi_listen * c.gamma) {
        c.slot = Slot::ActiveListenHerald;
        return Intent::listen(c.id, herald_ch(c.draw_herald_ch));
      }
      if (q < c.gamma) {
        c.slot = Slot::ActiveBroadcastAdv;
        return Intent::broadcast(c.id, herald_ch(c.draw_herald_ch),
                                 Message{c.id, State::A, MsgKind::Adv});
      }
      c.slot = Slot::ActiveListenReport;
      return Intent::listen(c.id, report_ch(c.draw_report_ch));
    }

    case State::Hc:
      if (handshake_listen_round(c.state, c.count)) {
        c.slot = Slot::HsListen;
        return Intent::listen(c.id, handshake_ch());
      }
      c.slot = Slot::HsSend;
      return Intent::broadcast(
          c.id, handshake_ch(),
          Message{c.id, State::Hc, MsgKind::HsHerald, c.leader_id});

    case State::Lc:
      if (handshake_listen_round(c.state, c.count)) {
        c.slot = Slot::HsListen;
        return Intent::listen(c.id, handshake_ch());
      }
      // Rounds 3,4: fix the rendezvous channel and announce it.
      c.meet = c.draw_report_ch;
      c.slot = Slot::HsSend;
      return Intent::broadcast(
          c.id, handshake_ch(),
          Message{c.id, State::Lc, MsgKind::HsLeader, c.id, c.meet});

    case State::H: {
      c.gamma = std::max(c.gamma * std::pow(p.sigma_plus, -p.rbg_decay_exp), p.gamma_min);
      switch (rbg_phase(c.count)) {
        case 1: case 3: case 5: case 7:
          c.slot = Slot::RbgBlock;
          return Intent::broadcast(c.id, handshake_ch(),
                                   Message{c.id, State::H, MsgKind::Block, c.leader_id});
        case 2: case 4:
          c.slot = Slot::RbgGameSend;
          return Intent::broadcast(c.id, game_ch(),
                                   Message{c.id, State::H, MsgKind::Game, c.leader_id});
        case 6:
          c.slot = Slot::RbgMeetListen;
          return Intent::listen(c.id, report_ch(c.meet));
        default:  // 8
          c.slot = Slot::RbgMeetSend;
          return Intent::broadcast(c.id, report_ch(c.meet),
                                   Message{c.id, State::H, MsgKind::RbgNotify, c.leader_id});
      }
    }

    case State::L: {
      c.gamma = std::max(c.gamma * std::pow(p.sigma_plus, -p.rbg_decay_exp), p.gamma_min);
      const int phase = rbg_phase(c.count);
      if (phase == 1) c.color = c.rng.coin() ? PairColor::Red : PairColor::Blue;
      switch (phase) {
        case 1: case 3: case 5: case 7:
          c.slot = Slot::RbgBlock;
          return Intent::broadcast(c.id, handshake_ch(),
                                   Message{c.id, State::L, MsgKind::Block, c.id});
        case 2: case 4: {
          const bool listening = (phase == 2) == (c.color == PairColor::Blue);
          if (listening) {
            c.slot = Slot::RbgGameListen;
            return Intent::listen(c.id, game_ch());
          }
          c.slot = Slot::RbgGameSend;
          return Intent::broadcast(c.id, game_ch(),
                                   Message{c.id, State::L, MsgKind::Game, c.id});
        }
        case 6:
          // Report the game outcome and the next rendezvous channel on the
          // current one; the meet update itself happens at round end.
          c.slot = Slot::RbgMeetSend;
          return Intent::broadcast(
              c.id, report_ch(c.meet),
              Message{c.id, State::L, MsgKind::RbgResult, c.id, c.draw_report_ch, c.game_ok});
        default:  // 8
          c.slot = Slot::RbgMeetListen;
          return Intent::listen(c.id, report_ch(c.meet));
      }
    }

    case State::M: {
      const Message mis{c.id, State::M, MsgKind::Mis};
      if (c.enforce || c.draw_q < 0.5) {
        c.sent_on_handshake = true;
        c.slot = Slot::DominatorSend;
        return Intent::broadcast(c.id, handshake_ch(), mis);
      }
      c.sent_on_handshake = false;
      c.slot = Slot::DominatorSend;
      if (c.draw_q < 0.75) return Intent::broadcast(c.id, game_ch(), mis);
      return Intent::broadcast(c.id, report_ch(c.draw_report_ch), mis);
    }

    case State::Asleep:
    case State::E:
      return Intent::inactive(c.id);
  }
  return Intent::inactive(c.id);
}

void end_round(NodeCtx& c, const ProtocolParams& p, const Message* m, long round) {
  switch (c.slot) {
    case Slot::WaitListen:
    case Slot::DecayListenDecay:
    case Slot::DecayListenReport:
      // Decay-filter nodes react to Decay and Mis messages only.
      if (m != nullptr) {
        if (m->kind == MsgKind::Mis) {
          become_eliminated(c);
          break;
        }
        if (m->kind == MsgKind::Decay) {  // restart the decay filter
          c.count = 0;
          c.state = State::W;
        }
      }
      if (c.state == State::W && c.count == p.tau_wait) {
        c.count = 0;
        c.state = State::D;
        c.phase = 0;
      } else if (c.state == State::D && c.count == p.tau_decay) {
        c.count = 0;
        c.phase = std::min(c.phase + 1, p.phase_cap);
      }
      break;

    case Slot::DecayBroadcast:
      // Exit the decay filter, enter the herald filter.
      c.state = State::A;
      c.count = 0;
      c.gamma = p.gamma_min;
      c.lonely = 0;
      c.hf_entry_round = round;
      break;

    case Slot::ActiveListenHerald:
      if (m != nullptr) {
        if (m->kind == MsgKind::Mis) {
          become_eliminated(c);
        } else if (m->kind == MsgKind::Adv) {
          c.state = State::Hc;
          c.leader_id = m->sender;
          c.count = 0;
          c.handshake_ok = true;
          c.lonely = 0;
          c.hs_start_round = round + 1;
        }
      }
      break;

    case Slot::ActiveBroadcastAdv:
      c.state = State::Lc;
      c.leader_id = c.id;
      c.count = 0;
      c.handshake_ok = true;
      c.hs_start_round = round + 1;
      break;

    case Slot::ActiveListenReport:
      if (m != nullptr) {
        if (m->kind == MsgKind::Mis) {
          become_eliminated(c);
        } else if (m->state_tag == State::L || m->state_tag == State::H) {
          c.gamma = std::max(c.gamma / p.sigma_minus, p.gamma_min);
          c.lonely = 0;
        }
      }
      break;

    case Slot::HsListen:
      if (m != nullptr && m->kind == MsgKind::Mis) {
        become_eliminated(c);
        break;
      }
      if (c.state == State::Hc) {
        // Expect the paired leader's rendezvous message.
        if (m != nullptr && m->kind == MsgKind::HsLeader && m->sender == c.leader_id) {
          c.meet = m->meet_index;
        } else {
          c.handshake_ok = false;
        }
      } else {
        // Leader candidate: expect a herald echoing this node's ID.
        if (!(m != nullptr && m->kind == MsgKind::HsHerald && m->leader_id == c.id)) {
          c.handshake_ok = false;
        }
      }
      [[fallthrough]];
    case Slot::HsSend:
      if (c.state == State::Hc || c.state == State::Lc) {
        if (!c.handshake_ok) {
          c.state = State::A;
          c.count = 0;
        } else if (c.count == 6) {
          c.state = c.state == State::Hc ? State::H : State::L;
          c.count = 0;
          c.game_ok = true;
          c.lonely = 0;
          c.color = PairColor::None;
        }
      }
      break;

    case Slot::RbgGameListen:
      if (!(m != nullptr && m->kind == MsgKind::Game && m->leader_id == c.id)) {
        c.game_ok = false;
      }
      break;

    case Slot::RbgMeetListen:
      if (c.state == State::H) {
        if (m != nullptr && m->kind == MsgKind::RbgResult && m->leader_id == c.leader_id &&
            m->game_ok) {
          c.meet = m->meet_index;
          if (c.count > p.tau_red_blue) become_eliminated(c);
        } else {
          knock_back_to_active(c, /*reset_lonely=*/true);
        }
      }
      // Leaders' round-8 listen has no protocol effect.
      break;

    case Slot::RbgMeetSend:
      if (c.state == State::L) {
        c.meet = c.draw_report_ch;
        if (!c.game_ok) {
          knock_back_to_active(c, /*reset_lonely=*/true);
        } else if (c.count > p.tau_red_blue) {
          become_dominator(c);
        }
      }
      break;

    case Slot::DominatorSend:
      c.enforce = !c.sent_on_handshake;
      break;

    case Slot::RbgBlock:
    case Slot::RbgGameSend:
    case Slot::None:
      break;
  }

  // Loneliness promotion (checked after the per-state handlers, as in the
  // core loop).
  if (in_herald_filter(c.state) && c.lonely >= p.tau_lonely) {
    become_dominator(c);
  }
  if (is_decided(c.state) && c.decision_round < 0) c.decision_round = round;
}

}  // namespace heraldmis
