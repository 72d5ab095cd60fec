#include "heraldmis/verifier.hpp"

#include <algorithm>
#include <cstddef>

#include "json.hpp"

namespace heraldmis {

namespace {

State node_state(const Snapshot& s, NodeId v) {
  return s.nodes[static_cast<std::size_t>(v)].state;
}

/// Activity of a single node: gamma while in the herald filter, else zero.
double node_activity(const Snapshot& s, NodeId v) {
  const NodeView& nv = s.nodes[static_cast<std::size_t>(v)];
  return in_herald_filter(nv.state) ? nv.gamma : 0.0;
}

}  // namespace

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::MisAdjacency: return "mis_adjacency";
    case ViolationKind::DominationMissing: return "domination_missing";
    case ViolationKind::Undecided: return "undecided";
    case ViolationKind::CrossingEdge: return "crossing_edge";
    case ViolationKind::DegreeBound: return "degree_bound";
    case ViolationKind::PairMonotonicity: return "pair_monotonicity";
  }
  return "unknown";
}

std::vector<Violation> check_property_p(const Graph& g, const Snapshot& s) {
  std::vector<Violation> out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (node_state(s, u) != State::M) continue;
    for (NodeId v : g.neighbors(u)) {
      if (v > u && node_state(s, v) == State::M) {
        out.push_back(Violation{ViolationKind::MisAdjacency, s.round, {u, v},
                                "adjacent dominators"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_domination(const Graph& g, const Snapshot& s) {
  std::vector<Violation> out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (node_state(s, u) != State::E) continue;
    bool dominated = false;
    for (NodeId v : g.neighbors(u)) {
      if (node_state(s, v) == State::M) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      out.push_back(Violation{ViolationKind::DominationMissing, s.round, {u},
                              "eliminated node has no dominator neighbor"});
    }
  }
  return out;
}

std::vector<Violation> check_final(const Graph& g, const Snapshot& s, long budget,
                                   const std::vector<long>& wake) {
  std::vector<Violation> out = check_property_p(g, s);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const State st = node_state(s, u);
    if (!is_decided(st) && wake[static_cast<std::size_t>(u)] + budget <= s.round) {
      out.push_back(Violation{ViolationKind::Undecided, s.round, {u},
                              std::string("still in ") + state_name(st) +
                                  " past the decision budget"});
    }
  }
  std::vector<Violation> dom = check_domination(g, s);
  out.insert(out.end(), dom.begin(), dom.end());
  return out;
}

PairClass classify_pair(const Graph& g, const Snapshot& s, NodeId leader, NodeId herald) {
  g.check_node(leader);
  g.check_node(herald);
  for (NodeId w : g.neighbors(leader)) {
    if (w == herald) continue;
    const NodeView& nv = s.nodes[static_cast<std::size_t>(w)];
    if (nv.state == State::L || nv.state == State::H) return PairClass::Bad;
    if (nv.state == State::Hc && (nv.count == 5 || nv.count == 6)) return PairClass::Bad;
  }
  return PairClass::Good;
}

std::vector<Violation> crossing_edge_audit(const Graph& g, const Snapshot& s) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < s.pairs.size(); ++j) {
      // Order the two pairs by handshake start round.
      const PairView* p1 = &s.pairs[i];
      const PairView* p2 = &s.pairs[j];
      if (p2->hs_start < p1->hs_start) std::swap(p1, p2);
      const long offset = p2->hs_start - p1->hs_start;

      const auto crossing = [&](NodeId a, NodeId b) {
        const auto& adj = g.neighbors(a);
        return std::binary_search(adj.begin(), adj.end(), b);
      };
      const bool ll = crossing(p1->leader, p2->leader);
      const bool hh = crossing(p1->herald, p2->herald);
      const bool lh = crossing(p1->leader, p2->herald);
      const bool hl = crossing(p1->herald, p2->leader);

      bool legal;
      if (offset == 0) {
        // Only leader-leader and/or herald-herald edges may cross.
        legal = !lh && !hl;
      } else if (offset == 2) {
        // Only the earlier leader may touch the later herald.
        legal = !ll && !hh && !hl;
      } else {
        legal = !ll && !hh && !lh && !hl;
      }
      if (!legal) {
        out.push_back(Violation{
            ViolationKind::CrossingEdge, s.round,
            {p1->leader, p1->herald, p2->leader, p2->herald},
            "illegal crossing edge between pairs with handshake offset " +
                std::to_string(offset)});
      }
    }
  }
  return out;
}

double activity_mass(const Graph& g, const Snapshot& s, NodeId u) {
  g.check_node(u);
  double sum = node_activity(s, u);
  for (NodeId v : g.neighbors(u)) sum += node_activity(s, v);
  return sum;
}

double activity_mass_open(const Graph& g, const Snapshot& s, NodeId u) {
  g.check_node(u);
  double sum = 0.0;
  for (NodeId v : g.neighbors(u)) sum += node_activity(s, v);
  return sum;
}

bool is_fat(const Graph& g, const Snapshot& s, NodeId u, double eta_hat) {
  g.check_node(u);
  double max_nb = 0.0;
  for (NodeId v : g.neighbors(u)) max_nb = std::max(max_nb, activity_mass(g, s, v));
  if (max_nb == 0.0) return true;
  return activity_mass(g, s, u) >= eta_hat * max_nb;
}

std::vector<Violation> herald_filter_degree_probe(const Graph& g, const Snapshot& s, long cap) {
  std::vector<Violation> out;
  const auto in_probe = [&](NodeId v) {
    const State st = node_state(s, v);
    return in_herald_filter(st) || st == State::M;
  };
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!in_probe(u)) continue;
    long deg = 0;
    for (NodeId v : g.neighbors(u)) {
      if (in_probe(v)) ++deg;
    }
    if (deg > cap) {
      out.push_back(Violation{ViolationKind::DegreeBound, s.round, {u},
                              "induced degree " + std::to_string(deg) + " exceeds cap " +
                                  std::to_string(cap)});
    }
  }
  return out;
}

std::string violation_to_json(const Violation& v) {
  nlohmann::json j;
  j["kind"] = violation_kind_name(v.kind);
  j["round"] = v.round;
  j["nodes"] = v.nodes;
  j["detail"] = v.detail;
  return j.dump();
}

}  // namespace heraldmis
