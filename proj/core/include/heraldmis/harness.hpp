#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heraldmis/engine.hpp"
#include "heraldmis/graph.hpp"
#include "heraldmis/params.hpp"
#include "heraldmis/verifier.hpp"

namespace heraldmis {

/// Version stamp embedded in every CSV/JSONL artifact.
inline constexpr int kSchemaVersion = 1;

enum class GraphSpecKind { Udg, Structured, Empty, File };

struct GraphSpec {
  GraphSpecKind kind = GraphSpecKind::Udg;
  int n = 0;
  double radius = 0.25;     // udg: ignored when avg_degree > 0
  double world = 1.0;       // udg world size
  double avg_degree = 0.0;  // udg: > 0 derives the radius for this mean degree
  StructuredKind structured = StructuredKind::Path;
  int grid_width = 0;
  std::string path;  // file kind
};

/// Builds the graph. UDG generation derives its seed from the run's master
/// seed so distinct seeds yield distinct topologies.
Graph build_graph(const GraphSpec& spec, std::uint64_t master_seed);

enum class ScheduleKind { AllAtZero, UniformRandom, Blocks, ExplicitFile };

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::AllAtZero;
  long window = 0;      // uniform_random: wake rounds iid uniform over [0, window]
  long block_size = 1;  // blocks: node i wakes at floor(i / size) * gap
  long block_gap = 0;
  std::string path;  // explicit schedule file, one round per line
};

std::vector<long> make_schedule(const ScheduleSpec& spec, int n, std::uint64_t seed);

struct TraceOptions {
  bool enabled = false;
  std::string path;
};

struct RunConfig {
  GraphSpec graph;
  int freq = 4;
  std::optional<int> alpha;  // unset: exact alpha(2) by brute force
  ParamOverrides overrides;
  ScheduleSpec schedule;
  std::uint64_t seed = 0;
  long max_rounds = 0;        // 0: derived from the budget and wake schedule
  long aggregate_stride = 0;  // 0: no per-round aggregates kept
  TraceOptions trace;
};

/// Reads a JSON document mirroring RunConfig field-for-field.
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

struct NodeOutcome {
  State verdict = State::Asleep;  // M, E, or the last undecided state
  long wake_round = -1;
  long decision_round = -1;  // -1 while undecided
};

struct RoundAggregate {
  long round = 0;
  int active = 0;   // |A|
  int paired = 0;   // |L| + |H|
  int mis = 0;      // |M|
  int eliminated = 0;
  int good_pairs = 0;
  int bad_pairs = 0;
  double max_gamma_near_good = 0.0;  // max gamma among neighbors of good pairs
};

struct PairStats {
  long pairs_observed = 0;
  long bad_pairs_observed = 0;
  std::vector<long> bad_lifetimes;  // rounds each bad episode lasted
  long good_to_bad_reversions = 0;
};

inline constexpr int kViolationKinds = 6;

struct RunResult {
  ProtocolParams params;
  long rounds_executed = 0;
  bool all_decided = false;
  long makespan = -1;         // max decision latency; rounds_executed if stragglers
  long median_latency = -1;   // median decision latency over decided nodes
  long undecided_nodes = 0;
  int mis_size = 0;
  std::vector<NodeOutcome> outcomes;
  std::array<long, kViolationKinds> violation_counts{};  // indexed by ViolationKind
  std::vector<Violation> violations;                     // capped sample
  std::vector<RoundAggregate> aggregates;
  PairStats pair_stats;
  std::uint64_t trace_hash = 0;

  long total_violations() const;
  /// MisAdjacency, DominationMissing, CrossingEdge, or PairMonotonicity.
  long safety_violations() const;
};

/// Executes one configured run end to end: graph, params, schedule, engine,
/// per-round verification, final maximality check. Deterministic in config.
RunResult run(const RunConfig& config);

struct SweepRow {
  long n = 0;
  int freq = 0;
  std::uint64_t seed = 0;
  bool failed = false;   // cell raised an error
  std::string error;
  RunResult result;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (n, freq, seed)
  bool any_safety_violation = false;
};

/// One independent run per (n, freq, seed) grid cell. Cells may execute on a
/// thread pool; rows are sorted by key, so output is order-independent.
SweepResult sweep(const RunConfig& base, const std::vector<long>& n_list,
                  const std::vector<int>& f_list, const std::vector<std::uint64_t>& seeds,
                  int threads = 0);

std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row);

/// JSONL trace: header record (params, seed, wake schedule), one record per
/// transition and per delivery, then a summary record with the trace hash.
void emit_trace(const Engine& engine, const RunConfig& cfg, const std::string& path);

struct TraceHeader {
  int schema_version = 0;
  std::uint64_t master_seed = 0;
  int n = 0;
  std::vector<long> wake;
  ProtocolParams params;
};

/// Parses the first line of an emitted trace.
TraceHeader parse_trace_header(const std::string& line);

}  // namespace heraldmis
