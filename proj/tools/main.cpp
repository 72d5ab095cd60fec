// Command-line front end: run single experiments, sweep grids, generate
// graphs, and verify or replay emitted traces.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heraldmis/engine.hpp"
#include "heraldmis/graph.hpp"
#include "heraldmis/harness.hpp"
#include "heraldmis/rng.hpp"
#include "heraldmis/verifier.hpp"

namespace hm = heraldmis;
using nlohmann::json;

namespace {

struct GraphFlags {
  std::string kind;
  int n = 0;
  double radius = 0.0;
  double world = 0.0;
  double avg_degree = 0.0;
  std::string structured;
  int grid_width = 0;
  std::string file;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& gf) {
  cmd->add_option("--graph-kind", gf.kind, "udg|structured|empty|file");
  cmd->add_option("--n", gf.n, "node count for generated graphs");
  cmd->add_option("--radius", gf.radius, "unit-disk radius");
  cmd->add_option("--world", gf.world, "unit-disk world side length");
  cmd->add_option("--avg-degree", gf.avg_degree, "derive the radius for this mean degree");
  cmd->add_option("--structured", gf.structured, "path|cycle|grid|star|clique");
  cmd->add_option("--grid-width", gf.grid_width, "grid width (structured grid)");
  cmd->add_option("--graph-file", gf.file, "edge-list file");
}

void apply_graph_flags(const GraphFlags& gf, hm::GraphSpec& spec) {
  if (!gf.kind.empty()) {
    if (gf.kind == "udg") spec.kind = hm::GraphSpecKind::Udg;
    else if (gf.kind == "structured") spec.kind = hm::GraphSpecKind::Structured;
    else if (gf.kind == "empty") spec.kind = hm::GraphSpecKind::Empty;
    else if (gf.kind == "file") spec.kind = hm::GraphSpecKind::File;
    else throw CLI::ValidationError("--graph-kind", "unknown kind " + gf.kind);
  }
  if (gf.n > 0) spec.n = gf.n;
  if (gf.radius > 0) spec.radius = gf.radius;
  if (gf.world > 0) spec.world = gf.world;
  if (gf.avg_degree > 0) spec.avg_degree = gf.avg_degree;
  if (!gf.structured.empty()) {
    if (gf.structured == "path") spec.structured = hm::StructuredKind::Path;
    else if (gf.structured == "cycle") spec.structured = hm::StructuredKind::Cycle;
    else if (gf.structured == "grid") spec.structured = hm::StructuredKind::Grid;
    else if (gf.structured == "star") spec.structured = hm::StructuredKind::Star;
    else if (gf.structured == "clique") spec.structured = hm::StructuredKind::Clique;
    else throw CLI::ValidationError("--structured", "unknown kind " + gf.structured);
  }
  if (gf.grid_width > 0) spec.grid_width = gf.grid_width;
  if (!gf.file.empty()) {
    spec.kind = hm::GraphSpecKind::File;
    spec.path = gf.file;
  }
}

hm::MsgKind msg_kind_from_name(const std::string& s) {
  for (hm::MsgKind k :
       {hm::MsgKind::Decay, hm::MsgKind::Adv, hm::MsgKind::HsHerald, hm::MsgKind::HsLeader,
        hm::MsgKind::Block, hm::MsgKind::Game, hm::MsgKind::RbgResult, hm::MsgKind::RbgNotify,
        hm::MsgKind::Mis}) {
    if (s == hm::msg_kind_name(k)) return k;
  }
  throw std::runtime_error("unknown message kind in trace: " + s);
}

hm::State state_or_throw(const std::string& s) {
  if (auto st = hm::state_from_name(s)) return *st;
  throw std::runtime_error("unknown state in trace: " + s);
}

void print_run_summary(const hm::RunResult& r) {
  std::cout << "rounds=" << r.rounds_executed << " all_decided=" << (r.all_decided ? "yes" : "no")
            << " mis=" << r.mis_size << " undecided=" << r.undecided_nodes
            << " makespan=" << r.makespan << " median_latency=" << r.median_latency
            << " violations=" << r.total_violations() << " (safety " << r.safety_violations()
            << ")" << " pairs=" << r.pair_stats.pairs_observed << " bad_pairs="
            << r.pair_stats.bad_pairs_observed << " trace_hash=0x" << std::hex
            << r.trace_hash << std::dec << '\n';
  for (const hm::Violation& v : r.violations) {
    std::cout << "violation: " << hm::violation_to_json(v) << '\n';
  }
}

int cmd_run(const std::string& config_path, const GraphFlags& gf, std::uint64_t seed,
            std::optional<int> freq, std::optional<int> alpha, const std::string& schedule,
            long window, long block_size, long block_gap, const std::string& schedule_file,
            long max_rounds, long stride, const std::string& trace_out,
            const std::string& json_out) {
  hm::RunConfig cfg;
  if (!config_path.empty()) cfg = hm::load_run_config(config_path);
  apply_graph_flags(gf, cfg.graph);
  cfg.seed = seed;
  if (freq) cfg.freq = *freq;
  if (alpha) cfg.alpha = *alpha;
  if (!schedule.empty()) {
    if (schedule == "all_at_zero") cfg.schedule.kind = hm::ScheduleKind::AllAtZero;
    else if (schedule == "uniform_random") cfg.schedule.kind = hm::ScheduleKind::UniformRandom;
    else if (schedule == "blocks") cfg.schedule.kind = hm::ScheduleKind::Blocks;
    else if (schedule == "explicit") cfg.schedule.kind = hm::ScheduleKind::ExplicitFile;
    else throw CLI::ValidationError("--schedule", "unknown kind " + schedule);
  }
  if (window > 0) cfg.schedule.window = window;
  if (block_size > 0) cfg.schedule.block_size = block_size;
  if (block_gap > 0) cfg.schedule.block_gap = block_gap;
  if (!schedule_file.empty()) cfg.schedule.path = schedule_file;
  if (max_rounds > 0) cfg.max_rounds = max_rounds;
  if (stride > 0) cfg.aggregate_stride = stride;
  if (!trace_out.empty()) {
    cfg.trace.enabled = true;
    cfg.trace.path = trace_out;
  }

  const hm::RunResult r = hm::run(cfg);
  print_run_summary(r);

  if (!json_out.empty()) {
    json j;
    j["schema_version"] = hm::kSchemaVersion;
    j["rounds"] = r.rounds_executed;
    j["all_decided"] = r.all_decided;
    j["mis_size"] = r.mis_size;
    j["undecided"] = r.undecided_nodes;
    j["makespan"] = r.makespan;
    j["median_latency"] = r.median_latency;
    j["violations_total"] = r.total_violations();
    j["violations_safety"] = r.safety_violations();
    char hex[19];
    std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(r.trace_hash));
    j["trace_hash"] = hex;
    json outcomes = json::array();
    for (std::size_t v = 0; v < r.outcomes.size(); ++v) {
      const hm::NodeOutcome& o = r.outcomes[v];
      outcomes.push_back(json{{"node", v},
                              {"verdict", hm::state_name(o.verdict)},
                              {"wake", o.wake_round},
                              {"decision", o.decision_round}});
    }
    j["outcomes"] = outcomes;
    std::ofstream out(json_out);
    if (!out) throw std::runtime_error("cannot open " + json_out);
    out << j.dump(2) << '\n';
  }
  return r.safety_violations() > 0 ? 1 : 0;
}

int cmd_sweep(const std::string& config_path, const GraphFlags& gf, std::uint64_t seed,
              int num_seeds, std::vector<long> n_list, std::vector<int> f_list,
              std::optional<int> alpha, int threads, const std::string& out_path) {
  hm::RunConfig base;
  if (!config_path.empty()) base = hm::load_run_config(config_path);
  apply_graph_flags(gf, base.graph);
  if (alpha) base.alpha = *alpha;
  if (n_list.empty()) n_list = {base.graph.n};
  if (f_list.empty()) f_list = {base.freq};
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < num_seeds; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));

  const hm::SweepResult res = hm::sweep(base, n_list, f_list, seeds, threads);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    os = &file;
  }
  *os << hm::sweep_csv_header() << '\n';
  for (const hm::SweepRow& row : res.rows) *os << hm::sweep_row_csv(row) << '\n';
  return res.any_safety_violation ? 1 : 0;
}

int cmd_gen_graph(const GraphFlags& gf, std::uint64_t seed, const std::string& out_path) {
  hm::GraphSpec spec;
  apply_graph_flags(gf, spec);
  const hm::Graph g = hm::build_graph(spec, seed);
  hm::save_edge_list_file(g, out_path);
  std::cout << "wrote " << out_path << ": n=" << g.node_count() << " edges=" << g.edge_count()
            << '\n';
  return 0;
}

int cmd_verify_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace");
  const hm::TraceHeader header = hm::parse_trace_header(line);
  if (header.schema_version != hm::kSchemaVersion) {
    std::cout << "verify-trace: FAIL (schema version " << header.schema_version << ")\n";
    return 1;
  }

  hm::Fnv1a hash;
  std::string summary_hash;
  bool saw_summary = false;
  long transitions = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.value("type", "");
    if (type == "transition") {
      hash.update_value(j.at("round").get<long>());
      hash.update_value(static_cast<long>(j.at("node").get<hm::NodeId>()));
      hash.update_value(state_or_throw(j.at("from").get<std::string>()));
      hash.update_value(state_or_throw(j.at("to").get<std::string>()));
      ++transitions;
    } else if (type == "summary") {
      summary_hash = j.at("trace_hash").get<std::string>();
      saw_summary = true;
    }
  }
  if (!saw_summary) {
    std::cout << "verify-trace: FAIL (missing summary record)\n";
    return 1;
  }
  char hex[19];
  std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(hash.digest()));
  if (summary_hash != hex) {
    std::cout << "verify-trace: FAIL (recomputed " << hex << ", recorded " << summary_hash
              << ")\n";
    return 1;
  }
  std::cout << "verify-trace: OK (" << transitions << " transitions, hash " << hex << ")\n";
  return 0;
}

int cmd_replay_node(const std::string& path, hm::NodeId node) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace");
  const hm::TraceHeader header = hm::parse_trace_header(line);
  if (node < 0 || node >= header.n) throw std::runtime_error("node out of range");

  std::map<long, hm::Message> deliveries;
  std::vector<hm::Transition> recorded;
  long last_round = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.value("type", "");
    if (type == "delivery" && j.at("receiver").get<hm::NodeId>() == node) {
      hm::Message m;
      m.sender = j.at("sender").get<hm::NodeId>();
      m.kind = msg_kind_from_name(j.at("kind").get<std::string>());
      m.state_tag = state_or_throw(j.at("state_tag").get<std::string>());
      m.leader_id = j.at("leader_id").get<hm::NodeId>();
      m.meet_index = j.at("meet").get<int>();
      m.game_ok = j.at("game_ok").get<bool>();
      deliveries[j.at("round").get<long>()] = m;
    } else if (type == "transition" && j.at("node").get<hm::NodeId>() == node) {
      recorded.push_back(hm::Transition{j.at("round").get<long>(), node,
                                        state_or_throw(j.at("from").get<std::string>()),
                                        state_or_throw(j.at("to").get<std::string>())});
    } else if (type == "summary") {
      last_round = j.at("rounds").get<long>() - 1;
    }
  }

  const std::vector<hm::Transition> replayed =
      hm::replay_node(header.params, header.master_seed, node,
                      header.wake[static_cast<std::size_t>(node)], deliveries, last_round);

  bool match = replayed.size() == recorded.size();
  for (std::size_t i = 0; match && i < replayed.size(); ++i) {
    match = replayed[i].round == recorded[i].round && replayed[i].from == recorded[i].from &&
            replayed[i].to == recorded[i].to;
  }
  if (!match) {
    std::cout << "replay-node: MISMATCH for node " << node << " (recorded " << recorded.size()
              << " transitions, replayed " << replayed.size() << ")\n";
    for (const hm::Transition& t : replayed) {
      std::cout << "  replayed r" << t.round << " " << hm::state_name(t.from) << "->"
                << hm::state_name(t.to) << '\n';
    }
    for (const hm::Transition& t : recorded) {
      std::cout << "  recorded r" << t.round << " " << hm::state_name(t.from) << "->"
                << hm::state_name(t.to) << '\n';
    }
    return 1;
  }
  std::cout << "replay-node: OK (node " << node << ", " << replayed.size() << " transitions)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heraldmis: multichannel radio-network MIS simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute one configured run");
  std::string run_config, run_schedule, run_schedule_file, run_trace_out, run_json_out;
  GraphFlags run_gf;
  std::uint64_t run_seed = 0;
  std::optional<int> run_freq, run_alpha;
  long run_window = 0, run_block_size = 0, run_block_gap = 0, run_max_rounds = 0, run_stride = 0;
  run_cmd->add_option("--config", run_config, "JSON run config");
  add_graph_flags(run_cmd, run_gf);
  run_cmd->add_option("--seed", run_seed, "master seed")->required();
  run_cmd->add_option("--freq", run_freq, "channel budget F");
  run_cmd->add_option("--alpha", run_alpha, "independence bound alpha(2)");
  run_cmd->add_option("--schedule", run_schedule, "all_at_zero|uniform_random|blocks|explicit");
  run_cmd->add_option("--wake-window", run_window, "uniform_random window");
  run_cmd->add_option("--block-size", run_block_size, "blocks schedule size");
  run_cmd->add_option("--block-gap", run_block_gap, "blocks schedule gap");
  run_cmd->add_option("--schedule-file", run_schedule_file, "explicit schedule file");
  run_cmd->add_option("--max-rounds", run_max_rounds, "hard round cap");
  run_cmd->add_option("--aggregate-stride", run_stride, "per-round aggregate stride");
  run_cmd->add_option("--trace-out", run_trace_out, "JSONL trace output path");
  run_cmd->add_option("--json-out", run_json_out, "JSON summary output path");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a (n, F, seed) grid");
  std::string sweep_config, sweep_out;
  GraphFlags sweep_gf;
  std::uint64_t sweep_seed = 0;
  int sweep_num_seeds = 1, sweep_threads = 0;
  std::vector<long> sweep_n_list;
  std::vector<int> sweep_f_list;
  std::optional<int> sweep_alpha;
  sweep_cmd->add_option("--config", sweep_config, "JSON base config");
  add_graph_flags(sweep_cmd, sweep_gf);
  sweep_cmd->add_option("--seed", sweep_seed, "first master seed")->required();
  sweep_cmd->add_option("--num-seeds", sweep_num_seeds, "seeds per cell (seed, seed+1, ...)");
  sweep_cmd->add_option("--n-list", sweep_n_list, "node counts")->delimiter(',');
  sweep_cmd->add_option("--f-list", sweep_f_list, "channel budgets")->delimiter(',');
  sweep_cmd->add_option("--alpha", sweep_alpha, "independence bound alpha(2)");
  sweep_cmd->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");

  // gen-graph
  auto* gen_cmd = app.add_subcommand("gen-graph", "generate a graph edge list");
  GraphFlags gen_gf;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  add_graph_flags(gen_cmd, gen_gf);
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output edge-list path")->required();

  // verify-trace
  auto* verify_cmd = app.add_subcommand("verify-trace", "recompute and check a trace hash");
  std::string verify_path;
  verify_cmd->add_option("--trace", verify_path, "JSONL trace path")->required();

  // replay-node
  auto* replay_cmd = app.add_subcommand("replay-node", "replay one node from a trace");
  std::string replay_path;
  hm::NodeId replay_node_id = 0;
  replay_cmd->add_option("--trace", replay_path, "JSONL trace path")->required();
  replay_cmd->add_option("--node", replay_node_id, "node id")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_config, run_gf, run_seed, run_freq, run_alpha, run_schedule, run_window,
                     run_block_size, run_block_gap, run_schedule_file, run_max_rounds, run_stride,
                     run_trace_out, run_json_out);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_config, sweep_gf, sweep_seed, sweep_num_seeds, sweep_n_list,
                       sweep_f_list, sweep_alpha, sweep_threads, sweep_out);
    }
    if (gen_cmd->parsed()) return cmd_gen_graph(gen_gf, gen_seed, gen_out);
    if (verify_cmd->parsed()) return cmd_verify_trace(verify_path);
    if (replay_cmd->parsed()) return cmd_replay_node(replay_path, replay_node_id);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
