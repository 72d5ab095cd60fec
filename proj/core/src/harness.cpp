#include "heraldmis/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "heraldmis/log.hpp"
#include "heraldmis/rng.hpp"

namespace heraldmis {

namespace {

using nlohmann::json;

constexpr std::size_t kViolationSampleCap = 200;

// Seed-domain tags keeping the graph and schedule streams disjoint from the
// per-node protocol streams.
constexpr std::uint64_t kGraphSeedTag = 0x67726170686765ULL;
constexpr std::uint64_t kScheduleSeedTag = 0x7363686564ULL;

double udg_radius_for_degree(int n, double world, double avg_degree) {
  if (n <= 1) return world;
  return world * std::sqrt(avg_degree / (static_cast<double>(n - 1) * M_PI));
}

}  // namespace

Graph build_graph(const GraphSpec& spec, std::uint64_t master_seed) {
  switch (spec.kind) {
    case GraphSpecKind::Udg: {
      double r = spec.radius;
      if (spec.avg_degree > 0.0) r = udg_radius_for_degree(spec.n, spec.world, spec.avg_degree);
      return gen_unit_disk(spec.n, r, spec.world, mix_seed(master_seed, kGraphSeedTag));
    }
    case GraphSpecKind::Structured:
      return gen_structured(spec.structured, spec.n, spec.grid_width);
    case GraphSpecKind::Empty: {
      Graph g(spec.n);
      g.set_label("empty-" + std::to_string(spec.n));
      return g;
    }
    case GraphSpecKind::File:
      return load_edge_list_file(spec.path);
  }
  throw std::invalid_argument("unknown graph spec kind");
}

std::vector<long> make_schedule(const ScheduleSpec& spec, int n, std::uint64_t seed) {
  std::vector<long> wake(static_cast<std::size_t>(n), 0);
  switch (spec.kind) {
    case ScheduleKind::AllAtZero:
      break;
    case ScheduleKind::UniformRandom: {
      Rng rng(mix_seed(seed, kScheduleSeedTag));
      for (long& w : wake) w = rng.below(static_cast<int>(spec.window) + 1);
      break;
    }
    case ScheduleKind::Blocks: {
      if (spec.block_size <= 0) throw std::invalid_argument("block size must be positive");
      for (int i = 0; i < n; ++i) {
        wake[static_cast<std::size_t>(i)] = (i / spec.block_size) * spec.block_gap;
      }
      break;
    }
    case ScheduleKind::ExplicitFile: {
      std::ifstream in(spec.path);
      if (!in) throw std::runtime_error("cannot open schedule file: " + spec.path);
      for (int i = 0; i < n; ++i) {
        if (!(in >> wake[static_cast<std::size_t>(i)])) {
          throw std::runtime_error("schedule file too short: " + spec.path);
        }
      }
      break;
    }
  }
  return wake;
}

long RunResult::total_violations() const {
  long t = 0;
  for (long c : violation_counts) t += c;
  return t;
}

long RunResult::safety_violations() const {
  return violation_counts[static_cast<int>(ViolationKind::MisAdjacency)] +
         violation_counts[static_cast<int>(ViolationKind::DominationMissing)] +
         violation_counts[static_cast<int>(ViolationKind::CrossingEdge)] +
         violation_counts[static_cast<int>(ViolationKind::PairMonotonicity)];
}

namespace {

struct PairTrack {
  bool ever_good = false;
  bool bad_now = false;
  long bad_since = -1;
  long last_seen = -1;
};

void record_violations(RunResult& res, const std::vector<Violation>& vs) {
  for (const Violation& v : vs) {
    ++res.violation_counts[static_cast<int>(v.kind)];
    if (res.violations.size() < kViolationSampleCap) res.violations.push_back(v);
  }
}

}  // namespace

RunResult run(const RunConfig& config) {
  const Graph g = build_graph(config.graph, config.seed);
  const int n = g.node_count();
  int alpha;
  if (config.alpha) {
    alpha = *config.alpha;
  } else {
    alpha = alpha_two(g);
  }
  const ProtocolParams params = derive_params(n, config.freq, alpha, config.overrides);
  const std::vector<long> wake = make_schedule(config.schedule, n, config.seed);
  const long max_wake = wake.empty() ? 0 : *std::max_element(wake.begin(), wake.end());
  long max_rounds = config.max_rounds;
  if (max_rounds <= 0) max_rounds = max_wake + 2 * params.runtime_budget;
  if (max_rounds < params.runtime_budget) {
    throw std::invalid_argument("max rounds below the decision budget");
  }

  EngineOptions opt;
  opt.keep_transition_log = config.trace.enabled;
  opt.keep_delivery_log = config.trace.enabled;
  Engine engine(g, params, wake, config.seed, opt);

  RunResult res;
  res.params = params;
  std::map<std::tuple<NodeId, NodeId, long>, PairTrack> tracks;

  const auto close_bad_episode = [&](PairTrack& t, long round) {
    if (t.bad_now) {
      res.pair_stats.bad_lifetimes.push_back(round - t.bad_since);
      t.bad_now = false;
    }
  };

  while (engine.round() < max_rounds && !engine.all_decided()) {
    engine.advance();
    const Snapshot snap = engine.snapshot();

    record_violations(res, check_property_p(g, snap));
    record_violations(res, check_domination(g, snap));
    record_violations(res, crossing_edge_audit(g, snap));

    // Pair bookkeeping: classify every live pair, track bad episodes and the
    // good-stays-good invariant.
    int good_pairs = 0;
    int bad_pairs = 0;
    double max_gamma_near_good = 0.0;
    for (const PairView& p : snap.pairs) {
      // Classify from the pair's first red-blue round onward. At the
      // formation snapshot a herald candidate two rounds behind is still one
      // round short of the late-handshake condition, so classifying there
      // would report a spurious good-to-bad flip one round later.
      if (snap.nodes[static_cast<std::size_t>(p.herald)].count < 1) continue;
      const auto key = std::make_tuple(p.leader, p.herald, p.hs_start);
      auto [it, inserted] = tracks.try_emplace(key);
      PairTrack& t = it->second;
      if (inserted) ++res.pair_stats.pairs_observed;
      t.last_seen = snap.round;
      const PairClass cls = classify_pair(g, snap, p.leader, p.herald);
      if (cls == PairClass::Bad) {
        ++bad_pairs;
        if (!t.bad_now) {
          t.bad_now = true;
          t.bad_since = snap.round;
          ++res.pair_stats.bad_pairs_observed;
          if (t.ever_good) {
            ++res.pair_stats.good_to_bad_reversions;
            record_violations(
                res, {Violation{ViolationKind::PairMonotonicity, snap.round,
                                {p.leader, p.herald}, "good pair became bad"}});
          }
        }
      } else {
        ++good_pairs;
        close_bad_episode(t, snap.round);
        t.ever_good = true;
        for (NodeId member : {p.leader, p.herald}) {
          for (NodeId nb : g.neighbors(member)) {
            if (nb == p.leader || nb == p.herald) continue;
            const NodeView& nv = snap.nodes[static_cast<std::size_t>(nb)];
            if (in_herald_filter(nv.state)) {
              max_gamma_near_good = std::max(max_gamma_near_good, nv.gamma);
            }
          }
        }
      }
    }

    // Retire pairs that dissolved this round, closing any open bad episode.
    for (auto it = tracks.begin(); it != tracks.end();) {
      if (it->second.last_seen != snap.round) {
        close_bad_episode(it->second, snap.round);
        it = tracks.erase(it);
      } else {
        ++it;
      }
    }

    if (config.aggregate_stride > 0 && snap.round % config.aggregate_stride == 0) {
      RoundAggregate agg;
      agg.round = snap.round;
      for (const NodeView& nv : snap.nodes) {
        switch (nv.state) {
          case State::A: ++agg.active; break;
          case State::L:
          case State::H: ++agg.paired; break;
          case State::M: ++agg.mis; break;
          case State::E: ++agg.eliminated; break;
          default: break;
        }
      }
      agg.good_pairs = good_pairs;
      agg.bad_pairs = bad_pairs;
      agg.max_gamma_near_good = max_gamma_near_good;
      res.aggregates.push_back(agg);
    }
  }

  res.rounds_executed = engine.round();
  res.all_decided = engine.all_decided();
  for (auto& [key, t] : tracks) close_bad_episode(t, res.rounds_executed);

  const Snapshot final_snap = engine.snapshot();
  for (const Violation& v : check_final(g, final_snap, params.runtime_budget, wake)) {
    // Property P and domination were already recorded for this round in the
    // per-round pass; only the budget check is new here.
    if (v.kind == ViolationKind::Undecided) record_violations(res, {v});
  }

  res.outcomes.resize(static_cast<std::size_t>(n));
  std::vector<long> latencies;
  for (NodeId v = 0; v < n; ++v) {
    const NodeCtx& c = engine.node(v);
    NodeOutcome& o = res.outcomes[static_cast<std::size_t>(v)];
    o.verdict = c.state;
    o.wake_round = wake[static_cast<std::size_t>(v)];
    o.decision_round = c.decision_round;
    if (is_decided(c.state)) {
      latencies.push_back(c.decision_round - o.wake_round);
      if (c.state == State::M) ++res.mis_size;
    } else {
      ++res.undecided_nodes;
    }
  }
  if (!latencies.empty()) {
    std::sort(latencies.begin(), latencies.end());
    res.makespan = res.undecided_nodes > 0 ? res.rounds_executed : latencies.back();
    res.median_latency = latencies[latencies.size() / 2];
  } else if (n > 0) {
    res.makespan = res.rounds_executed;
  }
  res.trace_hash = engine.trace_hash();

  if (config.trace.enabled && !config.trace.path.empty()) {
    emit_trace(engine, config, config.trace.path);
  }
  return res;
}

SweepResult sweep(const RunConfig& base, const std::vector<long>& n_list,
                  const std::vector<int>& f_list, const std::vector<std::uint64_t>& seeds,
                  int threads) {
  if (n_list.empty() || f_list.empty() || seeds.empty()) {
    throw std::invalid_argument("sweep grids must be non-empty");
  }
  struct Cell {
    long n;
    int freq;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (long n : n_list) {
    for (int f : f_list) {
      for (std::uint64_t s : seeds) cells.push_back(Cell{n, f, s});
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      SweepRow& row = rows[i];
      row.n = c.n;
      row.freq = c.freq;
      row.seed = c.seed;
      RunConfig cfg = base;
      cfg.graph.n = static_cast<int>(c.n);
      cfg.freq = c.freq;
      cfg.seed = c.seed;
      cfg.trace.enabled = false;  // traces are per-run artifacts, not sweep ones
      try {
        row.result = run(cfg);
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  };

  unsigned want = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  want = std::min<unsigned>(want, static_cast<unsigned>(cells.size()));
  if (want <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned t = 0; t < want; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepResult out;
  out.rows = std::move(rows);
  std::sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.n, a.freq, a.seed) < std::tie(b.n, b.freq, b.seed);
  });
  for (const SweepRow& r : out.rows) {
    if (r.failed || r.result.safety_violations() > 0) out.any_safety_violation = true;
  }
  return out;
}

std::string sweep_csv_header() {
  return "schema_version,n,freq,seed,status,rounds,makespan,median_latency,undecided,"
         "mis_size,violations_total,violations_safety,mis_adjacency,domination_missing,"
         "undecided_violations,crossing_edge,degree_bound,pair_monotonicity,"
         "pairs_observed,bad_pairs,good_to_bad,error";
}

std::string sweep_row_csv(const SweepRow& row) {
  std::ostringstream os;
  const RunResult& r = row.result;
  const auto vc = [&](ViolationKind k) { return r.violation_counts[static_cast<int>(k)]; };
  std::string error = row.error;
  std::replace(error.begin(), error.end(), ',', ';');
  std::replace(error.begin(), error.end(), '\n', ' ');
  os << kSchemaVersion << ',' << row.n << ',' << row.freq << ',' << row.seed << ','
     << (row.failed ? "failed" : "ok") << ',' << r.rounds_executed << ',' << r.makespan << ','
     << r.median_latency << ',' << r.undecided_nodes << ',' << r.mis_size << ','
     << r.total_violations() << ',' << r.safety_violations() << ','
     << vc(ViolationKind::MisAdjacency) << ',' << vc(ViolationKind::DominationMissing) << ','
     << vc(ViolationKind::Undecided) << ',' << vc(ViolationKind::CrossingEdge) << ','
     << vc(ViolationKind::DegreeBound) << ',' << vc(ViolationKind::PairMonotonicity) << ','
     << r.pair_stats.pairs_observed << ',' << r.pair_stats.bad_pairs_observed << ','
     << r.pair_stats.good_to_bad_reversions << ',' << error;
  return os.str();
}

namespace {

json params_to_json(const ProtocolParams& p) {
  return json{{"n_known", p.n_known},
              {"alpha", p.alpha},
              {"freq", p.freq},
              {"n_report", p.n_report},
              {"n_decay", p.n_decay},
              {"n_herald", p.n_herald},
              {"pi_listen", p.pi_listen},
              {"sigma_plus", p.sigma_plus},
              {"sigma_minus", p.sigma_minus},
              {"gamma_min", p.gamma_min},
              {"rbg_decay_exp", p.rbg_decay_exp},
              {"m_bar", p.m_bar},
              {"tau_wait", p.tau_wait},
              {"tau_decay", p.tau_decay},
              {"tau_lonely", p.tau_lonely},
              {"tau_red_blue", p.tau_red_blue},
              {"runtime_budget", p.runtime_budget},
              {"lonely_in_all_states", p.lonely_in_all_states},
              {"phase_cap", p.phase_cap},
              {"delta_probe", p.delta_probe},
              {"eta_probe", p.eta_probe},
              {"gamma_low", p.gamma_low},
              {"degree_cap", p.degree_cap},
              {"divergences", p.divergences}};
}

ProtocolParams params_from_json(const json& j) {
  ProtocolParams p;
  p.n_known = j.at("n_known").get<long>();
  p.alpha = j.at("alpha").get<int>();
  p.freq = j.at("freq").get<int>();
  p.n_report = j.at("n_report").get<int>();
  p.n_decay = j.at("n_decay").get<int>();
  p.n_herald = j.at("n_herald").get<int>();
  p.pi_listen = j.at("pi_listen").get<double>();
  p.sigma_plus = j.at("sigma_plus").get<double>();
  p.sigma_minus = j.at("sigma_minus").get<double>();
  p.gamma_min = j.at("gamma_min").get<double>();
  p.rbg_decay_exp = j.at("rbg_decay_exp").get<int>();
  p.m_bar = j.at("m_bar").get<long>();
  p.tau_wait = j.at("tau_wait").get<long>();
  p.tau_decay = j.at("tau_decay").get<long>();
  p.tau_lonely = j.at("tau_lonely").get<long>();
  p.tau_red_blue = j.at("tau_red_blue").get<long>();
  p.runtime_budget = j.at("runtime_budget").get<long>();
  p.lonely_in_all_states = j.at("lonely_in_all_states").get<bool>();
  p.phase_cap = j.at("phase_cap").get<int>();
  p.delta_probe = j.value("delta_probe", 0.0);
  p.eta_probe = j.value("eta_probe", 0.0);
  p.gamma_low = j.value("gamma_low", 0.0);
  p.degree_cap = j.value("degree_cap", 1L);
  if (j.contains("divergences")) p.divergences = j.at("divergences").get<std::vector<std::string>>();
  return p;
}

}  // namespace

TraceHeader parse_trace_header(const std::string& line) {
  const json j = json::parse(line);
  if (j.value("type", "") != "header") throw std::runtime_error("trace does not start with a header record");
  TraceHeader h;
  h.schema_version = j.at("schema_version").get<int>();
  h.master_seed = j.at("master_seed").get<std::uint64_t>();
  h.n = j.at("n").get<int>();
  h.wake = j.at("wake").get<std::vector<long>>();
  h.params = params_from_json(j.at("params"));
  return h;
}

void emit_trace(const Engine& engine, const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);

  json header{{"type", "header"},
              {"schema_version", kSchemaVersion},
              {"master_seed", engine.master_seed()},
              {"n", engine.graph().node_count()},
              {"wake", engine.wake_schedule()},
              {"params", params_to_json(engine.params())}};
  out << header.dump() << '\n';

  // Deliveries are emitted with the full message payload so a node can be
  // replayed from the trace alone; merge the two streams in round order.
  std::vector<std::tuple<long, int, json>> events;  // (round, kind order, record)
  for (const Transition& t : engine.transitions()) {
    events.emplace_back(t.round, 0,
                        json{{"type", "transition"},
                             {"round", t.round},
                             {"node", t.node},
                             {"from", state_name(t.from)},
                             {"to", state_name(t.to)}});
  }
  for (const auto& [node, per_round] : engine.delivery_log()) {
    for (const auto& [round, m] : per_round) {
      events.emplace_back(round, 1,
                          json{{"type", "delivery"},
                               {"round", round},
                               {"receiver", node},
                               {"sender", m.sender},
                               {"kind", msg_kind_name(m.kind)},
                               {"state_tag", state_name(m.state_tag)},
                               {"leader_id", m.leader_id},
                               {"meet", m.meet_index},
                               {"game_ok", m.game_ok}});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) {
                     return std::tie(std::get<0>(a), std::get<1>(a)) <
                            std::tie(std::get<0>(b), std::get<1>(b));
                   });
  for (const auto& [round, order, rec] : events) out << rec.dump() << '\n';

  char hash_hex[19];
  std::snprintf(hash_hex, sizeof hash_hex, "0x%016llx",
                static_cast<unsigned long long>(engine.trace_hash()));
  json summary{{"type", "summary"},
               {"schema_version", kSchemaVersion},
               {"rounds", engine.round()},
               {"trace_hash", hash_hex}};
  out << summary.dump() << '\n';
  if (!out) throw std::runtime_error("trace write failed: " + path);
}

namespace {

GraphSpecKind graph_kind_from_name(const std::string& s) {
  if (s == "udg") return GraphSpecKind::Udg;
  if (s == "structured") return GraphSpecKind::Structured;
  if (s == "empty") return GraphSpecKind::Empty;
  if (s == "file") return GraphSpecKind::File;
  throw std::invalid_argument("unknown graph kind: " + s);
}

const char* graph_kind_name(GraphSpecKind k) {
  switch (k) {
    case GraphSpecKind::Udg: return "udg";
    case GraphSpecKind::Structured: return "structured";
    case GraphSpecKind::Empty: return "empty";
    case GraphSpecKind::File: return "file";
  }
  return "udg";
}

StructuredKind structured_from_name(const std::string& s) {
  if (s == "path") return StructuredKind::Path;
  if (s == "cycle") return StructuredKind::Cycle;
  if (s == "grid") return StructuredKind::Grid;
  if (s == "star") return StructuredKind::Star;
  if (s == "clique") return StructuredKind::Clique;
  throw std::invalid_argument("unknown structured kind: " + s);
}

const char* structured_name(StructuredKind k) {
  switch (k) {
    case StructuredKind::Path: return "path";
    case StructuredKind::Cycle: return "cycle";
    case StructuredKind::Grid: return "grid";
    case StructuredKind::Star: return "star";
    case StructuredKind::Clique: return "clique";
  }
  return "path";
}

ScheduleKind schedule_kind_from_name(const std::string& s) {
  if (s == "all_at_zero") return ScheduleKind::AllAtZero;
  if (s == "uniform_random") return ScheduleKind::UniformRandom;
  if (s == "blocks") return ScheduleKind::Blocks;
  if (s == "explicit") return ScheduleKind::ExplicitFile;
  throw std::invalid_argument("unknown schedule kind: " + s);
}

const char* schedule_kind_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::AllAtZero: return "all_at_zero";
    case ScheduleKind::UniformRandom: return "uniform_random";
    case ScheduleKind::Blocks: return "blocks";
    case ScheduleKind::ExplicitFile: return "explicit";
  }
  return "all_at_zero";
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ParamOverrides overrides_from_json(const json& j) {
  ParamOverrides o;
  read_opt(j, "n_known", o.n_known);
  read_opt(j, "n_report", o.n_report);
  read_opt(j, "n_decay", o.n_decay);
  read_opt(j, "n_herald", o.n_herald);
  read_opt(j, "pi_listen", o.pi_listen);
  read_opt(j, "sigma_plus", o.sigma_plus);
  read_opt(j, "sigma_minus", o.sigma_minus);
  read_opt(j, "gamma_min", o.gamma_min);
  read_opt(j, "rbg_decay_exp", o.rbg_decay_exp);
  read_opt(j, "m_bar", o.m_bar);
  read_opt(j, "tau_wait", o.tau_wait);
  read_opt(j, "tau_decay", o.tau_decay);
  read_opt(j, "tau_lonely", o.tau_lonely);
  read_opt(j, "tau_red_blue", o.tau_red_blue);
  read_opt(j, "c_wait", o.c_wait);
  read_opt(j, "c_decay", o.c_decay);
  read_opt(j, "c_lonely", o.c_lonely);
  read_opt(j, "c_red_blue", o.c_red_blue);
  read_opt(j, "tau_lonely_min", o.tau_lonely_min);
  read_opt(j, "min_red_blue_games", o.min_red_blue_games);
  read_opt(j, "budget_multiplier", o.budget_multiplier);
  read_opt(j, "lonely_in_all_states", o.lonely_in_all_states);
  return o;
}

json overrides_to_json(const ParamOverrides& o) {
  json j = json::object();
  const auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("n_known", o.n_known);
  put("n_report", o.n_report);
  put("n_decay", o.n_decay);
  put("n_herald", o.n_herald);
  put("pi_listen", o.pi_listen);
  put("sigma_plus", o.sigma_plus);
  put("sigma_minus", o.sigma_minus);
  put("gamma_min", o.gamma_min);
  put("rbg_decay_exp", o.rbg_decay_exp);
  put("m_bar", o.m_bar);
  put("tau_wait", o.tau_wait);
  put("tau_decay", o.tau_decay);
  put("tau_lonely", o.tau_lonely);
  put("tau_red_blue", o.tau_red_blue);
  put("c_wait", o.c_wait);
  put("c_decay", o.c_decay);
  put("c_lonely", o.c_lonely);
  put("c_red_blue", o.c_red_blue);
  put("tau_lonely_min", o.tau_lonely_min);
  put("min_red_blue_games", o.min_red_blue_games);
  put("budget_multiplier", o.budget_multiplier);
  put("lonely_in_all_states", o.lonely_in_all_states);
  return j;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }

  RunConfig cfg;
  if (j.contains("graph")) {
    const json& gj = j.at("graph");
    cfg.graph.kind = graph_kind_from_name(gj.value("kind", "udg"));
    cfg.graph.n = gj.value("n", cfg.graph.n);
    cfg.graph.radius = gj.value("radius", cfg.graph.radius);
    cfg.graph.world = gj.value("world", cfg.graph.world);
    cfg.graph.avg_degree = gj.value("avg_degree", cfg.graph.avg_degree);
    if (gj.contains("structured")) {
      cfg.graph.structured = structured_from_name(gj.at("structured").get<std::string>());
    }
    cfg.graph.grid_width = gj.value("grid_width", cfg.graph.grid_width);
    cfg.graph.path = gj.value("path", cfg.graph.path);
  }
  cfg.freq = j.value("freq", cfg.freq);
  if (j.contains("alpha") && !j.at("alpha").is_null()) cfg.alpha = j.at("alpha").get<int>();
  if (j.contains("overrides")) cfg.overrides = overrides_from_json(j.at("overrides"));
  if (j.contains("schedule")) {
    const json& sj = j.at("schedule");
    cfg.schedule.kind = schedule_kind_from_name(sj.value("kind", "all_at_zero"));
    cfg.schedule.window = sj.value("window", cfg.schedule.window);
    cfg.schedule.block_size = sj.value("block_size", cfg.schedule.block_size);
    cfg.schedule.block_gap = sj.value("block_gap", cfg.schedule.block_gap);
    cfg.schedule.path = sj.value("path", cfg.schedule.path);
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.max_rounds = j.value("max_rounds", cfg.max_rounds);
  cfg.aggregate_stride = j.value("aggregate_stride", cfg.aggregate_stride);
  if (j.contains("trace")) {
    const json& tj = j.at("trace");
    cfg.trace.enabled = tj.value("enabled", cfg.trace.enabled);
    cfg.trace.path = tj.value("path", cfg.trace.path);
  }
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json gj;
  gj["kind"] = graph_kind_name(cfg.graph.kind);
  gj["n"] = cfg.graph.n;
  if (cfg.graph.kind == GraphSpecKind::Udg) {
    gj["radius"] = cfg.graph.radius;
    gj["world"] = cfg.graph.world;
    gj["avg_degree"] = cfg.graph.avg_degree;
  }
  if (cfg.graph.kind == GraphSpecKind::Structured) {
    gj["structured"] = structured_name(cfg.graph.structured);
    if (cfg.graph.grid_width > 0) gj["grid_width"] = cfg.graph.grid_width;
  }
  if (cfg.graph.kind == GraphSpecKind::File) gj["path"] = cfg.graph.path;
  j["graph"] = gj;
  j["freq"] = cfg.freq;
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  j["overrides"] = overrides_to_json(cfg.overrides);
  json sj;
  sj["kind"] = schedule_kind_name(cfg.schedule.kind);
  if (cfg.schedule.kind == ScheduleKind::UniformRandom) sj["window"] = cfg.schedule.window;
  if (cfg.schedule.kind == ScheduleKind::Blocks) {
    sj["block_size"] = cfg.schedule.block_size;
    sj["block_gap"] = cfg.schedule.block_gap;
  }
  if (cfg.schedule.kind == ScheduleKind::ExplicitFile) sj["path"] = cfg.schedule.path;
  j["schedule"] = sj;
  j["seed"] = cfg.seed;
  j["max_rounds"] = cfg.max_rounds;
  j["aggregate_stride"] = cfg.aggregate_stride;
  j["trace"] = json{{"enabled", cfg.trace.enabled}, {"path", cfg.trace.path}};
  return j.dump(2);
}

}  // namespace heraldmis
