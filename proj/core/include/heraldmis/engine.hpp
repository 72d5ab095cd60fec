#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "heraldmis/graph.hpp"
#include "heraldmis/message.hpp"
#include "heraldmis/params.hpp"
#include "heraldmis/protocol.hpp"

namespace heraldmis {

/// Resolves one synchronous round: a listener receives a message iff exactly
/// one of its graph neighbors broadcast on its channel. Collision and silence
/// are indistinguishable; broadcasters receive nothing. Pure in
/// (graph, intents); deliveries are ordered by receiver id.
std::vector<Delivery> resolve_round(const Graph& g, const std::vector<Intent>& intents);

struct RoundReport {
  long round = 0;
  int delivered = 0;
  int transitions = 0;
  int new_dominators = 0;
  int new_eliminated = 0;
  int awake = 0;
};

struct Transition {
  long round;
  NodeId node;
  State from;
  State to;
};

/// Read-only view of the network at the end of a round, consumed by the
/// verifier.
struct NodeView {
  State state = State::Asleep;
  double gamma = 0.0;
  NodeId leader_id = kNoNode;
  long count = 0;
  long hs_start = -1;
  long lonely = 0;
};

struct PairView {
  NodeId leader = kNoNode;
  NodeId herald = kNoNode;
  long hs_start = -1;
};

struct Snapshot {
  long round = 0;
  std::vector<NodeView> nodes;
  std::vector<PairView> pairs;  // sorted by leader id
};

struct EngineOptions {
  bool keep_transition_log = false;
  bool keep_delivery_log = false;
};

/// Executes the protocol round by round over a fixed graph. Strictly
/// sequential; distinct engine instances share no state.
class Engine {
 public:
  Engine(Graph g, ProtocolParams params, std::vector<long> wake_schedule,
         std::uint64_t master_seed, EngineOptions opt = {});

  RoundReport advance();

  long round() const { return round_; }
  const Graph& graph() const { return graph_; }
  const ProtocolParams& params() const { return params_; }
  const NodeCtx& node(NodeId v) const { return nodes_.at(static_cast<std::size_t>(v)); }
  const std::vector<long>& wake_schedule() const { return wake_; }
  std::uint64_t master_seed() const { return master_seed_; }

  bool all_decided() const { return decided_ == static_cast<long>(nodes_.size()); }
  long decided_count() const { return decided_; }

  /// FNV-1a digest over the canonical (round, node, from, to) transition
  /// stream. The empty log yields the FNV offset basis.
  std::uint64_t trace_hash() const { return hash_.digest(); }

  Snapshot snapshot() const;

  const std::vector<Transition>& transitions() const { return transition_log_; }
  /// Per-node delivery log (only populated with keep_delivery_log).
  const std::map<NodeId, std::map<long, Message>>& delivery_log() const { return delivery_log_; }

 private:
  Graph graph_;
  ProtocolParams params_;
  std::vector<NodeCtx> nodes_;
  std::vector<long> wake_;
  std::uint64_t master_seed_;
  EngineOptions opt_;
  long round_ = 0;  // rounds already executed; round indices start at 0
  long decided_ = 0;
  Fnv1a hash_;
  std::vector<Transition> transition_log_;
  std::map<NodeId, std::map<long, Message>> delivery_log_;

  void record_transition(long round, NodeId v, State from, State to);
};

/// Re-runs one node's state machine against a recorded delivery log,
/// without any graph. Returns the node's transition trajectory; identical
/// inputs reproduce the engine's trajectory exactly.
std::vector<Transition> replay_node(const ProtocolParams& params, std::uint64_t master_seed,
                                    NodeId node, long wake_round,
                                    const std::map<long, Message>& deliveries, long last_round);

}  // namespace heraldmis
