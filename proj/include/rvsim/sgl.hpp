#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvsim/bounds.hpp"
#include "rvsim/engine.hpp"
#include "rvsim/est.hpp"
#include "rvsim/route_program.hpp"
#include "rvsim/schedulers.hpp"
#include "rvsim/uxs.hpp"

namespace rvsim {

enum class SglRole : std::uint8_t { Traveller, Token, Explorer };
const char* sgl_role_name(SglRole r);

/// Monotone set of (label, initial value) pairs; gossip values ride along
/// with the labels.
using Bag = std::map<std::uint64_t, std::string>;

/// The four derived problems are pure functions of a completed bag.
struct ProblemOutputs {
  std::uint64_t team_size = 0;
  std::uint64_t leader = 0;
  std::uint64_t new_name = 0;                // rank of own label, 1-based
  std::vector<std::string> gossip;           // values ordered by label
};
ProblemOutputs derive_outputs(const Bag& bag, std::uint64_t own_label);

struct SglAgentConfig {
  std::uint64_t label = 0;
  std::int32_t start = 0;
  std::string value;
};

struct SglAgentReport {
  std::uint64_t label = 0;
  SglRole final_role = SglRole::Traveller;
  bool output = false;
  ProblemOutputs outputs;
  std::uint64_t cost_total = 0;
  std::uint64_t cost_traveller = 0;
  std::uint64_t cost_est = 0;
  std::uint64_t cost_phase2 = 0;
  std::uint64_t cost_dfs = 0;
  bool phase2_budget_hit = false;  // ran the full Pi(n,1) budget without the cut
};

struct SglRunReport {
  bool all_output = false;
  RunEnd end = RunEnd::Stopped;
  std::int32_t graph_size = 0;
  std::uint64_t events = 0;
  std::uint64_t total_cost = 0;
  std::vector<SglAgentReport> agents;
  std::size_t max_meeting_entries = 0;  // labels exchanged in one meeting
  std::uint64_t tokens_created = 0;
  std::vector<std::string> trace_lines;  // filled when engine.record_trace
  std::string to_json() const;
};

struct SglConfig {
  std::int32_t est_max_n = 6;
  std::uint64_t event_cap = 2000000;
  /// Ends an explorer's bounded walk at the first traversal boundary where
  /// the walk's postcondition already holds (every other agent met, or
  /// already token/explorer); the exact Pi(n,1) budget is astronomically
  /// large at any length function, so running it out is not simulatable.
  bool phase2_oracle_cutoff = true;
  EngineConfig engine;
};

SglRunReport run_sgl(const PortLabeledGraph& graph,
                     const std::vector<SglAgentConfig>& agents, Scheduler& scheduler,
                     std::shared_ptr<const UxsProvider> provider,
                     const SglConfig& config);

/// Ground truth for a configuration: every agent must output exactly these.
ProblemOutputs expected_outputs(const std::vector<SglAgentConfig>& agents,
                                std::uint64_t own_label);

/// True iff every agent output and every output matches the ground truth for
/// all four derived problems.
bool check_sgl_report(const SglRunReport& report,
                      const std::vector<SglAgentConfig>& agents, std::string* why);

/// Closed walk covering every edge in both directions (one traversal per
/// directed port), smallest-port-first; length exactly 2|E|.
std::vector<std::int32_t> full_edge_tour(const PortLabeledGraph& map,
                                         std::int32_t start);

struct SglSweepConfig {
  std::int32_t max_nodes = 5;
  std::int32_t max_team = 5;
  std::uint32_t placements = 10;
  std::vector<std::string> schedulers = {"round_robin", "random", "stalker_avoider"};
  std::uint32_t random_seeds = 10;
  std::uint64_t event_cap = 500000;
  unsigned threads = 2;
  std::uint64_t placement_seed = 424242;
};

struct SglSweepRow {
  std::string graph_tag;
  std::int32_t n = 0;
  std::int32_t team = 0;
  std::uint32_t placement = 0;
  std::string scheduler;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  std::uint64_t total_cost = 0;
  std::uint64_t min_label_length = 0;
};

struct SglSweepResult {
  std::vector<SglSweepRow> rows;
  std::uint64_t ok = 0;
  std::uint64_t failed = 0;
};

/// Corpus x team sizes x random placements/labels x adversaries; each run is
/// checked against the ground truth of all four derived problems.
SglSweepResult sweep_sgl(const GraphCorpus& corpus,
                         std::shared_ptr<const UxsProvider> provider,
                         const SglSweepConfig& config);

std::string sgl_sweep_tsv_header();
std::string sgl_sweep_tsv_row(const SglSweepRow& row);

}  // namespace rvsim
