#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvsim/behaviors.hpp"
#include "rvsim/bounds.hpp"
#include "rvsim/engine.hpp"
#include "rvsim/schedulers.hpp"
#include "rvsim/uxs.hpp"

namespace rvsim {

struct RendezvousOutcome {
  bool met = false;
  SpacePoint location;
  std::uint64_t cost_a = 0;
  std::uint64_t cost_b = 0;
  std::uint64_t total_cost = 0;
  Annotation annotation_a;
  Annotation annotation_b;
  bool bound_exceeded = false;  // an individual cost passed Pi(n, min |L|) first
  RunEnd end = RunEnd::Stopped;
  std::uint64_t events = 0;
  std::vector<std::string> trace_lines;  // filled when record_trace is set
};

/// Two agents running the rendezvous route under an adversarial scheduler,
/// until their first meeting. Wake times are scheduler decisions (bounded by
/// the engine's wake budget).
RendezvousOutcome run_rendezvous(const PortLabeledGraph& graph, std::uint64_t label1,
                                 std::uint64_t label2, std::int32_t start1,
                                 std::int32_t start2, Scheduler& scheduler,
                                 std::shared_ptr<const UxsProvider> provider,
                                 std::uint64_t event_cap,
                                 const BigUint* pi_bound = nullptr,
                                 const EngineConfig* engine_cfg = nullptr);

/// Scripted tunnel scenario: agent b loops X(m,v) from its start v; agent a
/// follows one full X(m, a_start). Returns whether they met before a
/// finished.
bool tunnel_scenario(const PortLabeledGraph& graph, std::uint64_t m, std::int32_t v,
                     std::int32_t a_start, Scheduler& scheduler,
                     std::shared_ptr<const UxsProvider> provider,
                     std::uint64_t event_cap, const EngineConfig* engine_cfg = nullptr,
                     bool scripted_wakes = true,
                     std::vector<std::string>* trace_out = nullptr);

// Synchronization-lemma probes. Each run is classified per lemma instance:
// a Violation falsifies the claim; PassChecked means the checkpoint was
// reached and the claim held; PassVacuous means the agents met before the
// checkpoint (the claims are conditional on no earlier meeting); Unreached
// means the run ended with neither a meeting nor the checkpoint.
enum class ProbeOutcome : std::uint8_t { Violation, PassChecked, PassVacuous, Unreached };
const char* probe_outcome_name(ProbeOutcome o);

struct LemmaFinding {
  std::string lemma;
  ProbeOutcome outcome = ProbeOutcome::Unreached;
  std::string detail;
};

/// Everything the evaluator needs from one instrumented run.
struct ProbeRunData {
  std::uint64_t n = 0;  // graph size
  std::uint64_t l = 0;  // length of the smaller modified label
  std::optional<std::uint64_t> meeting_event;
  std::uint64_t end_event = 0;
  std::size_t bits[2] = {0, 0};  // modified label lengths s
  std::vector<ElementCompletion> completions[2];
};

/// Pure evaluation of the synchronization claims against one run's records;
/// separated from the engine so the checkpoint logic is testable on synthetic
/// histories.
std::vector<LemmaFinding> evaluate_lemmas(const ProbeRunData& data,
                                          const std::string& lemma_id);

struct ProbeReport {
  std::uint64_t violations = 0;
  std::uint64_t pass_checked = 0;
  std::uint64_t pass_vacuous = 0;
  std::uint64_t unreached = 0;
  std::vector<std::string> violation_details;

  void add(const std::vector<LemmaFinding>& findings);
};

/// Runs `seeds` random-scheduler probes of one lemma on one configuration.
ProbeReport lemma_probe(const PortLabeledGraph& graph, std::uint64_t label1,
                        std::uint64_t label2, const std::string& lemma_id,
                        std::uint64_t seeds, std::shared_ptr<const UxsProvider> provider,
                        std::uint64_t event_cap);

/// Cached Pi values per (n, m) so sweeps do not recompute the recurrences.
class PiCache {
 public:
  explicit PiCache(std::shared_ptr<const UxsProvider> provider)
      : provider_(std::move(provider)) {}
  const BigUint& get(std::uint64_t n, std::uint64_t m);

 private:
  std::shared_ptr<const UxsProvider> provider_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, BigUint> cache_;
};

struct RvSweepRow {
  std::string graph_tag;
  std::int32_t n = 0;
  std::uint64_t label1 = 0;
  std::uint64_t label2 = 0;
  std::string scheduler;
  std::uint64_t seed = 0;
  bool met = false;
  std::uint64_t total_cost = 0;
  bool bound_exceeded = false;
};

std::string rv_sweep_tsv_header();
std::string rv_sweep_tsv_row(const RvSweepRow& row);

/// Simple index-space parallel runner used by the sweep drivers; results must
/// be written to preallocated slots (order independence by construction).
void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn);

struct RvSweepConfig {
  std::vector<std::uint64_t> labels = {1, 2, 3, 5, 12};
  std::vector<std::string> schedulers = {"round_robin", "stalker_avoider", "random"};
  std::uint32_t random_seeds = 20;
  std::uint64_t event_cap = 500000;
  unsigned threads = 2;
  std::int32_t max_nodes = 5;
};

struct RvSweepResult {
  std::vector<RvSweepRow> rows;
  std::uint64_t met = 0;
  std::uint64_t unmet = 0;
  std::uint64_t bound_exceeded = 0;
  std::uint64_t max_events_met = 0;  // slowest meeting among met runs
};

/// Corpus x ordered start pairs x label pairs x adversaries.
RvSweepResult sweep_rendezvous(const GraphCorpus& corpus,
                               std::shared_ptr<const UxsProvider> provider,
                               const RvSweepConfig& config);

struct TunnelSweepResult {
  std::uint64_t runs = 0;
  std::uint64_t met = 0;
  std::vector<std::string> failures;
};

/// Tunnel scenarios over the corpus: every anchor node, every other start,
/// every adversary (random with `random_seeds` seeds), m = graph size.
TunnelSweepResult sweep_tunnel(const GraphCorpus& corpus,
                               std::shared_ptr<const UxsProvider> provider,
                               const RvSweepConfig& config);

}  // namespace rvsim
