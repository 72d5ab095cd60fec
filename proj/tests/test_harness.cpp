#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heraldmis/harness.hpp"

using namespace heraldmis;

namespace {

RunConfig clique_config(int n, std::uint64_t seed) {
  RunConfig cfg;
  cfg.graph.kind = GraphSpecKind::Structured;
  cfg.graph.structured = StructuredKind::Clique;
  cfg.graph.n = n;
  cfg.freq = 4;
  cfg.seed = seed;
  return cfg;
}

RunConfig udg_config(int n, int freq, std::uint64_t seed) {
  RunConfig cfg;
  cfg.graph.kind = GraphSpecKind::Udg;
  cfg.graph.n = n;
  cfg.graph.avg_degree = 8.0;
  cfg.freq = freq;
  cfg.alpha = 2;
  cfg.seed = seed;
  return cfg;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::string last_line(const std::string& path) {
  std::ifstream in(path);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  return last;
}

}  // namespace

TEST_CASE("wake schedules") {
  SUBCASE("everyone at zero") {
    ScheduleSpec s;
    CHECK(make_schedule(s, 5, 1) == std::vector<long>{0, 0, 0, 0, 0});
  }
  SUBCASE("staggered blocks") {
    ScheduleSpec s;
    s.kind = ScheduleKind::Blocks;
    s.block_size = 2;
    s.block_gap = 10;
    CHECK(make_schedule(s, 5, 1) == std::vector<long>{0, 0, 10, 10, 20});
  }
  SUBCASE("invalid block size") {
    ScheduleSpec s;
    s.kind = ScheduleKind::Blocks;
    s.block_size = 0;
    CHECK_THROWS(make_schedule(s, 5, 1));
  }
  SUBCASE("uniform window is deterministic in the seed and in range") {
    ScheduleSpec s;
    s.kind = ScheduleKind::UniformRandom;
    s.window = 100;
    const auto a = make_schedule(s, 50, 42);
    const auto b = make_schedule(s, 50, 42);
    CHECK(a == b);
    for (long w : a) {
      CHECK(w >= 0);
      CHECK(w <= 100);
    }
    CHECK(make_schedule(s, 50, 43) != a);
  }
  SUBCASE("explicit file") {
    TempFile f("schedule_test.txt");
    {
      std::ofstream out(f.path);
      out << "3\n1\n4\n";
    }
    ScheduleSpec s;
    s.kind = ScheduleKind::ExplicitFile;
    s.path = f.path;
    CHECK(make_schedule(s, 3, 1) == std::vector<long>{3, 1, 4});
    CHECK_THROWS(make_schedule(s, 4, 1));  // too short
    s.path = "does_not_exist.txt";
    CHECK_THROWS(make_schedule(s, 3, 1));
  }
}

TEST_CASE("single runs") {
  SUBCASE("a clique elects exactly one dominator") {
    const RunResult r = run(clique_config(8, 5));
    CHECK(r.all_decided);
    CHECK(r.mis_size == 1);
    CHECK(r.undecided_nodes == 0);
    CHECK(r.safety_violations() == 0);
    CHECK(r.total_violations() == 0);
    int eliminated = 0;
    for (const NodeOutcome& o : r.outcomes) {
      CHECK(o.decision_round <= r.rounds_executed);
      if (o.verdict == State::E) ++eliminated;
    }
    CHECK(eliminated == 7);
  }
  SUBCASE("an edgeless graph promotes everyone") {
    RunConfig cfg;
    cfg.graph.kind = GraphSpecKind::Empty;
    cfg.graph.n = 5;
    cfg.freq = 4;
    cfg.seed = 3;
    const RunResult r = run(cfg);
    CHECK(r.all_decided);
    CHECK(r.mis_size == 5);
    CHECK(r.safety_violations() == 0);
  }
  SUBCASE("repeating a configuration reproduces the result bit for bit") {
    const RunConfig cfg = udg_config(32, 8, 11);
    const RunResult a = run(cfg);
    const RunResult b = run(cfg);
    CHECK(a.trace_hash == b.trace_hash);
    CHECK(a.rounds_executed == b.rounds_executed);
    CHECK(a.makespan == b.makespan);
    CHECK(a.median_latency == b.median_latency);
    CHECK(a.mis_size == b.mis_size);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
      CHECK(a.outcomes[i].verdict == b.outcomes[i].verdict);
      CHECK(a.outcomes[i].decision_round == b.outcomes[i].decision_round);
    }
  }
  SUBCASE("metrics are internally consistent") {
    const RunResult r = run(udg_config(48, 8, 21));
    CHECK(r.all_decided);
    CHECK(r.safety_violations() == 0);
    CHECK(r.median_latency <= r.makespan);
    CHECK(r.makespan <= r.rounds_executed);
  }
  SUBCASE("aggregates appear at the requested stride") {
    RunConfig cfg = udg_config(32, 8, 11);
    cfg.aggregate_stride = 10;
    const RunResult r = run(cfg);
    REQUIRE_FALSE(r.aggregates.empty());
    for (const RoundAggregate& a : r.aggregates) {
      CHECK(a.round % 10 == 0);
      CHECK(a.active + a.paired + a.mis + a.eliminated <= 32);
    }
  }
}

TEST_CASE("sweeps") {
  SUBCASE("a one-cell grid matches the single run") {
    const RunConfig base = udg_config(32, 8, 0);
    const SweepResult s = sweep(base, {32}, {8}, {7});
    REQUIRE(s.rows.size() == 1);
    const RunResult direct = run(udg_config(32, 8, 7));
    CHECK(s.rows[0].result.trace_hash == direct.trace_hash);
    CHECK(s.rows[0].result.makespan == direct.makespan);
    CHECK(s.rows[0].result.mis_size == direct.mis_size);
    CHECK_FALSE(s.any_safety_violation);
  }
  SUBCASE("rows are sorted and independent of thread count") {
    const RunConfig base = udg_config(0, 0, 0);
    const auto seeds = std::vector<std::uint64_t>{2, 1};
    const SweepResult serial = sweep(base, {24, 16}, {8}, seeds, 1);
    const SweepResult parallel = sweep(base, {24, 16}, {8}, seeds, 4);
    REQUIRE(serial.rows.size() == 4);
    REQUIRE(parallel.rows.size() == 4);
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
      if (i > 0) {
        CHECK(std::make_pair(serial.rows[i - 1].n, serial.rows[i - 1].seed) <=
              std::make_pair(serial.rows[i].n, serial.rows[i].seed));
      }
      CHECK(serial.rows[i].n == parallel.rows[i].n);
      CHECK(serial.rows[i].seed == parallel.rows[i].seed);
      CHECK(serial.rows[i].result.trace_hash == parallel.rows[i].result.trace_hash);
    }
  }
  SUBCASE("cell errors become failed rows without aborting the sweep") {
    RunConfig base = udg_config(16, 8, 0);
    base.graph.kind = GraphSpecKind::File;
    base.graph.path = "no_such_graph.txt";
    const SweepResult s = sweep(base, {16}, {8}, {1});
    REQUIRE(s.rows.size() == 1);
    CHECK(s.rows[0].failed);
    CHECK_FALSE(s.rows[0].error.empty());
    CHECK(s.any_safety_violation);  // failed rows poison the exit status
  }
  SUBCASE("empty grids are rejected") {
    CHECK_THROWS(sweep(udg_config(16, 8, 0), {}, {8}, {1}));
  }
  SUBCASE("csv layout") {
    const std::string header = sweep_csv_header();
    CHECK(header.rfind("schema_version,", 0) == 0);
    const SweepResult s = sweep(udg_config(16, 8, 0), {16}, {8}, {1});
    const std::string row = sweep_row_csv(s.rows[0]);
    std::istringstream hs(header), rs(row);
    std::string tok;
    int header_cols = 0, row_cols = 0;
    while (std::getline(hs, tok, ',')) ++header_cols;
    while (std::getline(rs, tok, ',')) ++row_cols;
    // The trailing error column is empty on success.
    CHECK(row_cols + 1 == header_cols);
    CHECK(row.find(",ok,") != std::string::npos);
  }
}

TEST_CASE("trace emission") {
  TempFile f("trace_test.jsonl");
  RunConfig cfg = udg_config(24, 8, 13);
  cfg.trace.enabled = true;
  cfg.trace.path = f.path;
  const RunResult r = run(cfg);

  std::ifstream in(f.path);
  REQUIRE(in.good());
  std::string first;
  REQUIRE(std::getline(in, first));

  SUBCASE("the header mirrors the run setup") {
    const TraceHeader h = parse_trace_header(first);
    CHECK(h.schema_version == kSchemaVersion);
    CHECK(h.master_seed == 13);
    CHECK(h.n == 24);
    CHECK(h.wake == std::vector<long>(24, 0));
    CHECK(h.params.tau_lonely == r.params.tau_lonely);
    CHECK(h.params.gamma_min == doctest::Approx(r.params.gamma_min));
  }
  SUBCASE("the summary carries the run's digest") {
    char expected[19];
    std::snprintf(expected, sizeof expected, "0x%016llx",
                  static_cast<unsigned long long>(r.trace_hash));
    const std::string summary = last_line(f.path);
    CHECK(summary.find("\"type\":\"summary\"") != std::string::npos);
    CHECK(summary.find(expected) != std::string::npos);
  }
  SUBCASE("a non-header line is rejected as a header") {
    CHECK_THROWS(parse_trace_header(R"({"type":"summary"})"));
  }
}

TEST_CASE("config files") {
  RunConfig cfg;
  cfg.graph.kind = GraphSpecKind::Structured;
  cfg.graph.structured = StructuredKind::Grid;
  cfg.graph.n = 16;
  cfg.graph.grid_width = 4;
  cfg.freq = 12;
  cfg.alpha = 3;
  cfg.overrides.tau_lonely = 400;
  cfg.overrides.gamma_min = 0.01;
  cfg.overrides.lonely_in_all_states = true;
  cfg.schedule.kind = ScheduleKind::Blocks;
  cfg.schedule.block_size = 4;
  cfg.schedule.block_gap = 25;
  cfg.seed = 99;
  cfg.max_rounds = 50000;
  cfg.aggregate_stride = 5;

  TempFile f("config_test.json");
  {
    std::ofstream out(f.path);
    out << run_config_to_json(cfg);
  }
  const RunConfig back = load_run_config(f.path);
  CHECK(back.graph.kind == GraphSpecKind::Structured);
  CHECK(back.graph.structured == StructuredKind::Grid);
  CHECK(back.graph.n == 16);
  CHECK(back.graph.grid_width == 4);
  CHECK(back.freq == 12);
  REQUIRE(back.alpha.has_value());
  CHECK(*back.alpha == 3);
  REQUIRE(back.overrides.tau_lonely.has_value());
  CHECK(*back.overrides.tau_lonely == 400);
  REQUIRE(back.overrides.gamma_min.has_value());
  CHECK(*back.overrides.gamma_min == doctest::Approx(0.01));
  REQUIRE(back.overrides.lonely_in_all_states.has_value());
  CHECK(*back.overrides.lonely_in_all_states);
  CHECK(back.schedule.kind == ScheduleKind::Blocks);
  CHECK(back.schedule.block_size == 4);
  CHECK(back.schedule.block_gap == 25);
  CHECK(back.seed == 99);
  CHECK(back.max_rounds == 50000);
  CHECK(back.aggregate_stride == 5);

  SUBCASE("identical configs run to identical results") {
    const RunResult a = run(cfg);
    const RunResult b = run(back);
    CHECK(a.trace_hash == b.trace_hash);
  }
  SUBCASE("missing files and malformed documents are reported") {
    CHECK_THROWS(load_run_config("no_such_config.json"));
    TempFile bad("config_bad.json");
    {
      std::ofstream out(bad.path);
      out << "{not json";
    }
    CHECK_THROWS(load_run_config(bad.path));
  }
}
