#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvsim/engine.hpp"
#include "rvsim/graph.hpp"

namespace rvsim {

/// One executed exploration step as the agent perceives it.
struct ObservationStep {
  std::int32_t exit_port = -1;
  std::int32_t entry_port = -1;
  std::int32_t degree = -1;
  bool token_present = false;
};

struct ObservationLog {
  std::int32_t home_degree = -1;
  std::vector<ObservationStep> steps;
};

/// Replays the log's exit ports on a candidate map from its home; true iff
/// every observed degree, entry port and token flag is reproduced.
bool log_consistent(const ObservationLog& log, const PortLabeledGraph& map,
                    std::int32_t home);

class HypothesisExhaustedError : public std::runtime_error {
 public:
  explicit HypothesisExhaustedError(const std::string& what)
      : std::runtime_error("hypothesis-exhausted: " + what) {}
};

/// Surfaced, never silently canonicalized: two complete non-isomorphic
/// candidates with no distinguishing walk would falsify the reconstruction
/// conjecture this module leans on.
class ObservationEquivalenceError : public std::runtime_error {
 public:
  explicit ObservationEquivalenceError(const std::string& what)
      : std::runtime_error("observation-equivalent non-isomorphic maps: " + what) {}
};

/// Graph reconstruction against a stationary token: maintains every candidate
/// map of size <= max_nodes consistent with the log (as partial quotients of
/// the walk), plans shortest walks whose predictions differ between two
/// surviving candidates or reach unexplored ports, and finishes with a walk
/// home once a single complete candidate survives.
class EstCore {
 public:
  EstCore(std::int32_t max_nodes, std::int32_t home_degree);

  /// Feeds the observation of one executed step.
  void observe(const ObservationStep& step);

  /// Exit port to take next, or nullopt when exploration and the walk home
  /// are complete.
  std::optional<std::int32_t> plan_next();

  bool finished() const { return finished_; }

  /// The surviving candidate (complete, home-rooted). Valid once finished.
  PortLabeledGraph result_map() const;
  std::int32_t result_home() const { return 0; }

  const ObservationLog& log() const { return log_; }
  std::uint64_t hypotheses_pruned() const { return pruned_; }
  std::size_t hypothesis_count() const { return maps_.size(); }

 private:
  // Candidate quotient of the walk; node 0 is home. Port target -1 means
  // unexplored. Degrees are observed and fixed.
  struct Candidate {
    std::vector<std::vector<PortTarget>> adj;
    std::int32_t current = 0;
    std::string key;  // canonical form incl. current marker
  };

  static std::string canonical_key(const Candidate& c);
  void dedupe();
  bool complete(const Candidate& c) const;
  std::vector<std::int32_t> shortest_distinguishing_walk(const Candidate& a,
                                                         const Candidate& b) const;
  std::vector<std::int32_t> walk_to_unassigned(const Candidate& c) const;
  std::vector<std::int32_t> walk_home(const Candidate& c) const;

  std::int32_t max_nodes_;
  ObservationLog log_;
  std::vector<Candidate> maps_;
  std::vector<std::int32_t> plan_;
  std::size_t plan_cursor_ = 0;
  bool homing_ = false;
  bool finished_ = false;
  std::uint64_t pruned_ = 0;
};

/// Exploration driver running inside the engine. In the plain mode the token
/// rests at the home node. In the virtual mode the token was met inside an
/// edge: the agent simulates exploration of the graph with a degree-2 node w
/// inserted in that edge, mapping in-edge token meetings to visits of w and
/// realizing moves out of w with the finish-the-edge rule; a token meeting at
/// an edge endpoint aborts the simulation and restarts plain exploration
/// anchored there.
class EstAgentLogic {
 public:
  /// Plain: agent co-located with the token at `home`.
  EstAgentLogic(std::int32_t max_nodes, std::int32_t home_degree,
                std::int32_t token_agent);
  /// Virtual: agent mid-traversal inside `edge`, token inside the same edge.
  EstAgentLogic(std::int32_t max_nodes, const EdgeRef& edge, std::int32_t token_agent);

  /// Engine hooks (called by the owning behavior/policy).
  std::optional<std::int32_t> next_exit(std::int32_t degree, std::int32_t current_node);
  void traversal_completed(std::int32_t entry_port, std::int32_t degree,
                           std::int32_t node);
  void token_met_at_node(std::int32_t node, std::int32_t degree);
  void token_met_inside_edge();

  bool finished() const { return core_ && core_->finished(); }
  bool aborted_to_real() const { return aborted_; }
  bool virtual_mode() const { return virtual_mode_; }
  std::int32_t token_agent() const { return token_agent_; }

  /// Recovered map in the simulated world (G' when the virtual simulation ran
  /// to completion) rooted at home 0.
  PortLabeledGraph recovered_map() const { return core_->result_map(); }
  /// Size of the true graph (undoes the virtual subdivision).
  std::int32_t true_size() const;
  /// True map with the virtual node removed (identity in plain mode).
  PortLabeledGraph true_map() const;
  /// The agent's node in true_map() when exploration finishes (home in plain
  /// mode; the resting endpoint of the subdivided edge in virtual mode).
  std::int32_t finish_position_in_true_map() const;
  const ObservationLog& log() const { return core_->log(); }
  std::uint64_t hypotheses_pruned() const { return core_->hypotheses_pruned(); }
  /// Final token meeting on the walk home (virtual mode reaches w again).
  bool ended_with_token() const { return ended_with_token_; }

 private:
  enum class Mode : std::uint8_t {
    Real,          // plain exploration, token at a node
    AtWFinishing,  // adopted in-edge; completing the traversal underway
    AtW,           // simulated position w, physically at an edge endpoint
    CrossingFromW, // realizing a w -> far-side move
    EnteringW      // realizing a move into the subdivided edge
  };

  void feed(const ObservationStep& step);

  std::int32_t max_nodes_;
  std::int32_t token_agent_;
  bool virtual_mode_ = false;
  bool aborted_ = false;
  bool ended_with_token_ = false;
  EdgeRef edge_;
  Mode mode_ = Mode::Real;
  std::int32_t physical_side_ = -1;   // endpoint the agent rests at in AtW
  std::int32_t expected_side_ = -1;   // arrival side of the current crossing
  std::int32_t crossing_from_side_ = -1;  // endpoint the current crossing left
  bool met_token_this_crossing_ = false;
  std::int32_t pending_exit_sim_ = -1;  // simulated exit of the current move
  std::optional<ObservationStep> pending_obs_;  // awaiting same-event meetings
  std::optional<EstCore> core_;
};

/// Scripted harness results.
struct EstRunResult {
  PortLabeledGraph map;     // recovered map (G' in virtual mode)
  std::int32_t home = 0;
  std::optional<PortLabeledGraph> true_map;  // unsubdivided (virtual mode)
  std::uint64_t cost = 0;
  std::uint64_t log_length = 0;
  std::uint64_t hypotheses_pruned = 0;
  bool aborted_to_real = false;
  bool ended_with_token = false;
  ObservationLog log;
};

/// Recovered map in the graph text format with a provenance comment (log
/// length, hypotheses pruned).
std::string est_map_text(const EstRunResult& result);

/// Token at `home`, explorer starting beside it.
EstRunResult run_est(const PortLabeledGraph& graph, std::int32_t home,
                     std::int32_t est_max_n, Scheduler& scheduler,
                     std::uint64_t event_cap);

/// Token frozen at the canonical position inside `edge`; the explorer starts
/// mid-traversal at the same point (they have just met there).
EstRunResult run_est_virtual(const PortLabeledGraph& graph, const EdgeRef& edge,
                             Fraction meeting_coord, std::int32_t est_max_n,
                             Scheduler& scheduler, std::uint64_t event_cap);

}  // namespace rvsim
