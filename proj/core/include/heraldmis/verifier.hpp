#pragma once

#include <string>
#include <vector>

#include "heraldmis/engine.hpp"
#include "heraldmis/graph.hpp"

namespace heraldmis {

enum class ViolationKind {
  MisAdjacency,
  DominationMissing,
  Undecided,
  CrossingEdge,
  DegreeBound,
  PairMonotonicity,
};

const char* violation_kind_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  long round = 0;
  std::vector<NodeId> nodes;
  std::string detail;
};

/// Property (P): the dominator set is independent at all times. One
/// violation per edge with both endpoints in M.
std::vector<Violation> check_property_p(const Graph& g, const Snapshot& s);

/// P2: every eliminated node has a neighbor currently in M.
std::vector<Violation> check_domination(const Graph& g, const Snapshot& s);

/// P1 at end of run: every node whose wake round + budget has elapsed is
/// decided, M is independent, and M dominates all decided nodes.
std::vector<Violation> check_final(const Graph& g, const Snapshot& s, long budget,
                                   const std::vector<long>& wake);

enum class PairClass { Good, Bad };

/// A pair is good iff no neighbor of the leader (other than the herald) is a
/// leader, a herald, or a herald candidate in round 5 or 6 of its handshake.
/// The herald's other neighbors are irrelevant.
PairClass classify_pair(const Graph& g, const Snapshot& s, NodeId leader, NodeId herald);

/// Structural audit of concurrently alive pairs: crossing edges are legal
/// only for equal handshake starts ({l1,l2} and/or {h1,h2}) or a 2-round
/// offset (exactly {l1,h2}).
std::vector<Violation> crossing_edge_audit(const Graph& g, const Snapshot& s);

/// Activity mass over the closed neighborhood, and its open variant.
double activity_mass(const Graph& g, const Snapshot& s, NodeId u);
double activity_mass_open(const Graph& g, const Snapshot& s, NodeId u);

/// Gamma(u) >= eta_hat * max over neighbors; vacuously true for isolated u.
bool is_fat(const Graph& g, const Snapshot& s, NodeId u, double eta_hat);

/// Flags nodes whose degree within the subgraph induced by herald-filter and
/// M states exceeds the cap.
std::vector<Violation> herald_filter_degree_probe(const Graph& g, const Snapshot& s, long cap);

/// Violations serialize to JSONL with stable field names.
std::string violation_to_json(const Violation& v);

}  // namespace heraldmis
