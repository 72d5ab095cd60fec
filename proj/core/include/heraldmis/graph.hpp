#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heraldmis {

using NodeId = int;

/// Exact independent-set search refuses instances above this size unless the
/// caller raises the cap explicitly.
inline constexpr int kDefaultBruteForceCap = 24;

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Undirected graph with optional unit-disk provenance. Adjacency lists are
/// kept sorted; edges are symmetric and irreflexive.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {}

  int node_count() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const;

  void add_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const;
  const std::vector<NodeId>& neighbors(NodeId v) const;
  int degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }

  std::optional<std::vector<std::array<double, 2>>>& positions() { return positions_; }
  const std::optional<std::vector<std::array<double, 2>>>& positions() const { return positions_; }
  double radius() const { return radius_; }
  void set_radius(double r) { radius_ = r; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  void check_node(NodeId v) const;

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::optional<std::vector<std::array<double, 2>>> positions_;
  double radius_ = 0.0;
  std::string label_;
};

enum class StructuredKind { Path, Cycle, Grid, Star, Clique };

/// n points uniform in [0, world]^2, edge iff Euclidean distance <= radius.
/// Deterministic in seed; world = 0 collapses all points onto the origin.
Graph gen_unit_disk(int n, double radius, double world, std::uint64_t seed);

/// Canonical fixed topologies. Grid requires a width dividing n.
Graph gen_structured(StructuredKind kind, int n, int grid_width = 0);

/// BFS ball of radius d around v, including v itself.
std::vector<NodeId> neighborhood(const Graph& g, NodeId v, int d);

/// Exact maximum independent set size of the subgraph induced by `subset`,
/// by branch and bound. Throws CapExceeded above `cap` nodes.
int max_independent_set_size(const Graph& g, const std::vector<NodeId>& subset,
                             int cap = kDefaultBruteForceCap);

/// alpha(d) evaluated at one vertex: exact MIS size over N^d(v).
int independence_function(const Graph& g, NodeId v, int d, int cap = kDefaultBruteForceCap);

/// alpha := alpha(2) = max over v of independence_function(g, v, 2).
int alpha_two(const Graph& g, int cap = kDefaultBruteForceCap);

/// Per-radius exact independence profile up to max_d.
struct IndependenceProfile {
  std::map<int, int> alpha_of_d;
  int alpha = 0;  // alpha_of_d[2]
};
IndependenceProfile independence_profile(const Graph& g, int max_d, int cap = kDefaultBruteForceCap);

/// Both inequalities of the weighted independence bound, with W_v summed over
/// the closed neighborhood N^1(v). `alpha` may be supplied when the exact
/// independence number is out of brute-force reach.
struct WeightedTuranResult {
  double sum_ratio = 0.0;
  double sum_product = 0.0;
  int alpha_bound = 0;
  double lower_bound = 0.0;
  bool both_hold = false;
};
WeightedTuranResult weighted_turan_check(const Graph& g, const std::vector<double>& weights,
                                         std::optional<int> alpha = std::nullopt);

/// Plain-text edge list: optional "n=<count>" header, then one "u v" per line.
void save_edge_list(const Graph& g, std::ostream& out);
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void save_edge_list_file(const Graph& g, const std::string& path);

}  // namespace heraldmis
