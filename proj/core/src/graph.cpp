#include "heraldmis/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <queue>
#include <sstream>

#include "heraldmis/rng.hpp"

namespace heraldmis {

std::size_t Graph::edge_count() const {
  std::size_t deg_sum = 0;
  for (const auto& nb : adj_) deg_sum += nb.size();
  return deg_sum / 2;
}

void Graph::check_node(NodeId v) const {
  if (v < 0 || v >= node_count()) {
    throw std::out_of_range("unknown node " + std::to_string(v));
  }
}

void Graph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw std::invalid_argument("self-loop");
  if (has_edge(u, v)) return;
  auto& au = adj_[static_cast<std::size_t>(u)];
  auto& av = adj_[static_cast<std::size_t>(v)];
  au.insert(std::lower_bound(au.begin(), au.end(), v), v);
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const auto& au = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(au.begin(), au.end(), v);
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
  check_node(v);
  return adj_[static_cast<std::size_t>(v)];
}

Graph gen_unit_disk(int n, double radius, double world, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  if (radius <= 0) throw std::invalid_argument("radius > 0 required");
  if (world < 0) throw std::invalid_argument("world >= 0 required");
  Graph g(n);
  Rng rng(mix_seed(seed, 0x756467u));  // "udg"
  std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    p[0] = rng.uniform() * world;
    p[1] = rng.uniform() * world;
  }
  const double r2 = radius * radius;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double dx = pts[u][0] - pts[v][0];
      const double dy = pts[u][1] - pts[v][1];
      if (dx * dx + dy * dy <= r2) g.add_edge(u, v);
    }
  }
  g.positions() = std::move(pts);
  g.set_radius(radius);
  g.set_label("udg(n=" + std::to_string(n) + ")");
  return g;
}

Graph gen_structured(StructuredKind kind, int n, int grid_width) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  Graph g(n);
  switch (kind) {
    case StructuredKind::Path:
      for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
      g.set_label("path");
      break;
    case StructuredKind::Cycle:
      for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
      if (n > 2) g.add_edge(n - 1, 0);
      g.set_label("cycle");
      break;
    case StructuredKind::Grid: {
      if (grid_width <= 0 || n % grid_width != 0) {
        throw std::invalid_argument("grid requires a width dividing n");
      }
      const int h = n / grid_width;
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < grid_width; ++c) {
          const int v = r * grid_width + c;
          if (c + 1 < grid_width) g.add_edge(v, v + 1);
          if (r + 1 < h) g.add_edge(v, v + grid_width);
        }
      }
      g.set_label("grid");
      break;
    }
    case StructuredKind::Star:
      for (int i = 1; i < n; ++i) g.add_edge(0, i);
      g.set_label("star");
      break;
    case StructuredKind::Clique:
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
      g.set_label("clique");
      break;
  }
  return g;
}

std::vector<NodeId> neighborhood(const Graph& g, NodeId v, int d) {
  g.check_node(v);
  if (d < 0) throw std::invalid_argument("d >= 0 required");
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(v)] = 0;
  q.push(v);
  std::vector<NodeId> ball{v};
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    const int du = dist[static_cast<std::size_t>(u)];
    if (du == d) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = du + 1;
        ball.push_back(w);
        q.push(w);
      }
    }
  }
  std::sort(ball.begin(), ball.end());
  return ball;
}

namespace {

// Branch and bound on a bitmask-encoded induced subgraph (<= 64 nodes, the
// cap keeps it at <= 24 in practice).
int mis_recurse(const std::vector<std::uint64_t>& nbr, std::uint64_t alive) {
  int best = 0;
  while (alive != 0) {
    // Peel degree-0/1 vertices greedily; they are always safe to take.
    bool peeled = false;
    std::uint64_t rest = alive;
    while (rest != 0) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      const std::uint64_t nv = nbr[static_cast<std::size_t>(v)] & alive;
      const int deg = std::popcount(nv);
      if (deg <= 1) {
        alive &= ~((1ull << v) | nv);
        best += 1;
        peeled = true;
        break;
      }
    }
    if (peeled) continue;
    // Branch on a maximum-degree vertex.
    int pick = -1, pick_deg = -1;
    std::uint64_t scan = alive;
    while (scan != 0) {
      const int v = std::countr_zero(scan);
      scan &= scan - 1;
      const int deg = std::popcount(nbr[static_cast<std::size_t>(v)] & alive);
      if (deg > pick_deg) {
        pick_deg = deg;
        pick = v;
      }
    }
    const std::uint64_t nv = nbr[static_cast<std::size_t>(pick)] & alive;
    const int with_v = 1 + mis_recurse(nbr, alive & ~((1ull << pick) | nv));
    const int without_v = mis_recurse(nbr, alive & ~(1ull << pick));
    return best + std::max(with_v, without_v);
  }
  return best;
}

}  // namespace

int max_independent_set_size(const Graph& g, const std::vector<NodeId>& subset, int cap) {
  const int k = static_cast<int>(subset.size());
  if (k > 64) throw CapExceeded("exact search limited to 64 nodes");
  if (k > cap) {
    throw CapExceeded("subset of " + std::to_string(k) +
                      " nodes exceeds exact-search cap " + std::to_string(cap));
  }
  if (k == 0) return 0;
  std::vector<std::uint64_t> nbr(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (g.has_edge(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(j)])) {
        nbr[static_cast<std::size_t>(i)] |= 1ull << j;
        nbr[static_cast<std::size_t>(j)] |= 1ull << i;
      }
    }
  }
  const std::uint64_t all = (k == 64) ? ~0ull : ((1ull << k) - 1);
  return mis_recurse(nbr, all);
}

int independence_function(const Graph& g, NodeId v, int d, int cap) {
  return max_independent_set_size(g, neighborhood(g, v, d), cap);
}

int alpha_two(const Graph& g, int cap) {
  int best = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    best = std::max(best, independence_function(g, v, 2, cap));
  }
  return best;
}

IndependenceProfile independence_profile(const Graph& g, int max_d, int cap) {
  IndependenceProfile p;
  for (int d = 0; d <= max_d; ++d) {
    int best = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      best = std::max(best, independence_function(g, v, d, cap));
    }
    p.alpha_of_d[d] = best;
  }
  if (max_d >= 2) p.alpha = p.alpha_of_d[2];
  return p;
}

WeightedTuranResult weighted_turan_check(const Graph& g, const std::vector<double>& weights,
                                         std::optional<int> alpha) {
  if (static_cast<int>(weights.size()) != g.node_count()) {
    throw std::invalid_argument("one weight per node required");
  }
  for (double w : weights) {
    if (!(w > 0)) throw std::invalid_argument("weights must be positive");
  }
  WeightedTuranResult r;
  if (alpha.has_value()) {
    r.alpha_bound = *alpha;
  } else {
    std::vector<NodeId> all(static_cast<std::size_t>(g.node_count()));
    for (int i = 0; i < g.node_count(); ++i) all[static_cast<std::size_t>(i)] = i;
    r.alpha_bound = max_independent_set_size(g, all);
  }
  double total = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double wv_closed = weights[static_cast<std::size_t>(v)];
    for (NodeId u : g.neighbors(v)) wv_closed += weights[static_cast<std::size_t>(u)];
    r.sum_ratio += weights[static_cast<std::size_t>(v)] / wv_closed;
    r.sum_product += weights[static_cast<std::size_t>(v)] * wv_closed;
    total += weights[static_cast<std::size_t>(v)];
  }
  r.lower_bound = total * total / static_cast<double>(r.alpha_bound);
  const double eps = 1e-9 * std::max(1.0, std::max(r.sum_product, r.lower_bound));
  r.both_hold = r.sum_ratio <= static_cast<double>(r.alpha_bound) + 1e-9 &&
                r.sum_product >= r.lower_bound - eps;
  return r;
}

void save_edge_list(const Graph& g, std::ostream& out) {
  out << "n=" << g.node_count() << "\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << u << " " << v << "\n";
    }
  }
}

Graph load_edge_list(std::istream& in) {
  std::string line;
  std::vector<std::pair<NodeId, NodeId>> edges;
  int declared_n = -1;
  NodeId max_id = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("n=", 0) == 0) {
      declared_n = std::stoi(line.substr(2));
      continue;
    }
    std::istringstream ls(line);
    NodeId u = 0, v = 0;
    if (!(ls >> u >> v)) throw std::invalid_argument("malformed edge line: " + line);
    edges.emplace_back(u, v);
    max_id = std::max(max_id, std::max(u, v));
  }
  const int n = declared_n >= 0 ? declared_n : max_id + 1;
  Graph g(std::max(n, 0));
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read graph file: " + path);
  return load_edge_list(in);
}

void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  save_edge_list(g, out);
}

}  // namespace heraldmis
