#include "heraldmis/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace heraldmis {

std::vector<Delivery> resolve_round(const Graph& g, const std::vector<Intent>& intents) {
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  // Per-node broadcast channel key (-1 when not broadcasting) and message.
  std::vector<int> bcast_key(n, -1);
  std::vector<const Message*> bcast_msg(n, nullptr);
  std::vector<char> seen(n, 0);
  std::vector<std::pair<NodeId, int>> listeners;  // (node, channel key)

  for (const Intent& it : intents) {
    g.check_node(it.node);
    const auto idx = static_cast<std::size_t>(it.node);
    if (seen[idx]) throw std::invalid_argument("duplicate intent for node " + std::to_string(it.node));
    seen[idx] = 1;
    switch (it.action) {
      case ActionKind::Inactive:
        break;
      case ActionKind::Listen:
        listeners.emplace_back(it.node, it.channel.key());
        break;
      case ActionKind::Broadcast:
        if (!it.message) throw std::invalid_argument("broadcast intent without message");
        bcast_key[idx] = it.channel.key();
        bcast_msg[idx] = &*it.message;
        break;
    }
  }

  std::sort(listeners.begin(), listeners.end());
  std::vector<Delivery> out;
  for (const auto& [v, key] : listeners) {
    const Message* unique = nullptr;
    int broadcasters = 0;
    for (NodeId u : g.neighbors(v)) {
      if (bcast_key[static_cast<std::size_t>(u)] == key) {
        if (++broadcasters > 1) break;
        unique = bcast_msg[static_cast<std::size_t>(u)];
      }
    }
    if (broadcasters == 1) out.push_back(Delivery{v, *unique});
  }
  return out;
}

Engine::Engine(Graph g, ProtocolParams params, std::vector<long> wake_schedule,
               std::uint64_t master_seed, EngineOptions opt)
    : graph_(std::move(g)),
      params_(std::move(params)),
      wake_(std::move(wake_schedule)),
      master_seed_(master_seed),
      opt_(opt) {
  const int n = graph_.node_count();
  if (static_cast<int>(wake_.size()) != n) {
    throw std::invalid_argument("wake schedule size must equal node count");
  }
  nodes_.reserve(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) nodes_.push_back(NodeCtx::make(v, master_seed_));
}

void Engine::record_transition(long round, NodeId v, State from, State to) {
  hash_.update_value(round);
  hash_.update_value(static_cast<long>(v));
  hash_.update_value(from);
  hash_.update_value(to);
  if (opt_.keep_transition_log) transition_log_.push_back(Transition{round, v, from, to});
  if (is_decided(to)) ++decided_;
}

RoundReport Engine::advance() {
  const long r = round_;
  RoundReport report;
  report.round = r;

  // Adversarial wake-up.
  for (NodeId v = 0; v < graph_.node_count(); ++v) {
    NodeCtx& c = nodes_[static_cast<std::size_t>(v)];
    if (c.state == State::Asleep && wake_[static_cast<std::size_t>(v)] <= r) {
      c.state = State::W;
      c.count = 0;
      c.wake_round = r;
      record_transition(r, v, State::Asleep, State::W);
      ++report.transitions;
    }
  }

  std::vector<Intent> intents;
  intents.reserve(nodes_.size());
  for (NodeCtx& c : nodes_) {
    if (c.state == State::Asleep || c.state == State::E) continue;
    ++report.awake;
    intents.push_back(begin_round(c, params_));
  }

  const std::vector<Delivery> deliveries = resolve_round(graph_, intents);
  report.delivered = static_cast<int>(deliveries.size());

  // Deliveries are sorted by receiver; walk them alongside the node sweep.
  std::size_t di = 0;
  for (NodeId v = 0; v < graph_.node_count(); ++v) {
    NodeCtx& c = nodes_[static_cast<std::size_t>(v)];
    if (c.state == State::Asleep || c.state == State::E || c.slot == Slot::None) continue;
    const Message* m = nullptr;
    while (di < deliveries.size() && deliveries[di].receiver < v) ++di;
    if (di < deliveries.size() && deliveries[di].receiver == v) m = &deliveries[di].message;
    if (m != nullptr && opt_.keep_delivery_log) delivery_log_[v][r] = *m;

    const State before = c.state;
    end_round(c, params_, m, r);
    c.slot = Slot::None;
    if (c.state != before) {
      record_transition(r, v, before, c.state);
      ++report.transitions;
      if (c.state == State::M) ++report.new_dominators;
      if (c.state == State::E) ++report.new_eliminated;
    }
  }

  round_ = r + 1;
  return report;
}

Snapshot Engine::snapshot() const {
  Snapshot s;
  s.round = round_;
  s.nodes.reserve(nodes_.size());
  for (const NodeCtx& c : nodes_) {
    s.nodes.push_back(NodeView{c.state, c.gamma, c.leader_id, c.count, c.hs_start_round, c.lonely});
  }
  for (const NodeCtx& c : nodes_) {
    if (c.state != State::H) continue;
    const NodeId l = c.leader_id;
    if (l >= 0 && l < graph_.node_count() &&
        nodes_[static_cast<std::size_t>(l)].state == State::L) {
      s.pairs.push_back(PairView{l, c.id, c.hs_start_round});
    }
  }
  std::sort(s.pairs.begin(), s.pairs.end(),
            [](const PairView& a, const PairView& b) { return a.leader < b.leader; });
  return s;
}

std::vector<Transition> replay_node(const ProtocolParams& params, std::uint64_t master_seed,
                                    NodeId node, long wake_round,
                                    const std::map<long, Message>& deliveries, long last_round) {
  NodeCtx c = NodeCtx::make(node, master_seed);
  std::vector<Transition> out;
  for (long r = wake_round; r <= last_round; ++r) {
    if (c.state == State::Asleep && wake_round <= r) {
      c.state = State::W;
      c.count = 0;
      out.push_back(Transition{r, node, State::Asleep, State::W});
    }
    if (c.state == State::E) break;
    (void)begin_round(c, params);
    const Message* m = nullptr;
    if (auto it = deliveries.find(r); it != deliveries.end()) m = &it->second;
    const State before = c.state;
    end_round(c, params, m, r);
    c.slot = Slot::None;
    if (c.state != before) out.push_back(Transition{r, node, before, c.state});
  }
  return out;
}

}  // namespace heraldmis
