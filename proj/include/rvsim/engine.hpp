#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvsim/fraction.hpp"
#include "rvsim/graph.hpp"

namespace rvsim {

class Engine;

enum class Lifecycle : std::uint8_t { Dormant, Active, Halted };

/// An exact location in the embedding: a node, or a point strictly inside an
/// edge at a canonical rational coordinate (measured from the canonical
/// origin endpoint).
struct SpacePoint {
  bool is_node = true;
  std::int32_t node = -1;
  EdgeRef edge;
  Fraction coord;

  bool operator==(const SpacePoint& o) const {
    if (is_node != o.is_node) return false;
    if (is_node) return node == o.node;
    return edge == o.edge && coord == o.coord;
  }
};

/// A committed directed traversal: the walk must eventually cover the whole
/// edge and end at the far endpoint.
struct Traversal {
  EdgeRef edge;
  bool from_a = true;          // direction: origin endpoint -> far endpoint
  Fraction progress;           // directed fraction in [0,1)
  std::int32_t entry_port = -1;  // port at the far endpoint on completion

  std::int32_t origin_node() const { return from_a ? edge.a : edge.b; }
  std::int32_t target_node() const { return from_a ? edge.b : edge.a; }
  Fraction canonical(const Fraction& directed) const {
    return from_a ? directed : directed.complement();
  }
};

/// Per-agent protocol hook. Route decisions must be pure functions of the
/// observation history; the engine caches the desired exit port between
/// arrivals, so implementations are asked at most once per node visit.
class AgentBehavior {
 public:
  virtual ~AgentBehavior() = default;
  virtual void on_wake(std::int32_t degree, Engine& engine, std::int32_t self) = 0;
  /// Next exit port at the current node, or nullopt to stay idle.
  virtual std::optional<std::int32_t> desired_exit(std::int32_t degree, Engine& engine,
                                                   std::int32_t self) = 0;
  virtual void on_traversal_complete(std::int32_t entry_port, std::int32_t degree,
                                     Engine& engine, std::int32_t self) = 0;
};

struct MeetingEvent {
  SpacePoint point;
  std::vector<std::int32_t> agents;  // sorted agent indices, mover included
  std::uint64_t event_index = 0;
};

/// Multi-agent meeting resolution (bag merges, role transitions, stop flags).
/// Invoked once per distinct meeting point, in sweep order.
class MeetingPolicy {
 public:
  virtual ~MeetingPolicy() = default;
  virtual void on_meeting(const MeetingEvent& meeting, Engine& engine) = 0;
};

struct Decision {
  enum class Kind : std::uint8_t { Wake, Move } kind = Kind::Wake;
  std::int32_t agent = -1;
  Fraction target;  // Move: directed target fraction in [0,1]

  static Decision wake(std::int32_t agent) { return Decision{Kind::Wake, agent, {}}; }
  static Decision move(std::int32_t agent, Fraction target) {
    return Decision{Kind::Move, agent, target};
  }
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  /// Next decision, or nullopt if the scheduler sees nothing to do.
  virtual std::optional<Decision> decide(Engine& engine) = 0;
  virtual std::string name() const = 0;
};

struct AgentState {
  std::uint64_t label = 0;
  Lifecycle lifecycle = Lifecycle::Dormant;
  std::int32_t node = -1;  // valid when no traversal is in progress
  std::optional<Traversal> traversal;
  std::uint64_t cost = 0;  // completed edge traversals
  std::int32_t partial_moves = 0;
  std::uint64_t last_touched_event = 0;
  std::optional<std::int32_t> pending_exit;
  std::optional<SpacePoint> frozen;  // scripted stationary in-edge marker
  AgentBehavior* behavior = nullptr;

  SpacePoint space_point() const {
    if (frozen) return *frozen;
    SpacePoint p;
    if (!traversal) {
      p.is_node = true;
      p.node = node;
      return p;
    }
    Fraction canon = traversal->canonical(traversal->progress);
    if (canon.is_zero()) {
      p.is_node = true;
      p.node = traversal->edge.a;
    } else if (canon.is_one()) {
      p.is_node = true;
      p.node = traversal->edge.b;
    } else {
      p.is_node = false;
      p.edge = traversal->edge;
      p.coord = canon;
    }
    return p;
  }
};

struct EngineConfig {
  std::uint64_t event_cap = 2000000;
  std::int32_t move_budget = 8;    // partial moves per traversal before forced finish
  std::int32_t wake_budget = 64;   // events before a dormant agent is force-woken
  std::int32_t stall_budget = 96;  // events an in-progress traversal may sit untouched
  std::int32_t fairness_budget = 128;  // events an active movable agent may be starved
  bool require_distinct_starts = true;
  bool record_trace = false;
};

struct EngineEvent {
  std::uint64_t index = 0;
  Decision decision;
  bool forced = false;  // liveness override replaced/adjusted the proposal
  bool completed = false;
  std::optional<Traversal> sweep;  // edge/direction of a move
  Fraction from;
  Fraction to;
  std::vector<MeetingEvent> meetings;
  std::vector<std::int32_t> woken;
};

enum class RunEnd : std::uint8_t { Stopped, EventCap, Quiescent };

class Engine {
 public:
  Engine(const PortLabeledGraph& graph, EngineConfig config);

  std::int32_t add_agent(std::uint64_t label, std::int32_t start, AgentBehavior* behavior);
  /// Scripted stationary marker inside an edge (never moves, never wakes).
  std::int32_t add_frozen_agent(std::uint64_t label, const EdgeRef& edge,
                                Fraction canonical_coord);

  /// Scripted harness setup: agent becomes active mid-traversal (as if the
  /// walk were already underway when the scenario starts).
  void script_traversal(std::int32_t agent, const EdgeRef& edge, bool from_a,
                        Fraction progress);

  void set_policy(MeetingPolicy* policy) { policy_ = policy; }
  void set_observer(std::function<void(const EngineEvent&)> obs) {
    observer_ = std::move(obs);
  }

  const PortLabeledGraph& graph() const { return graph_; }
  const EngineConfig& config() const { return config_; }
  std::uint64_t event_index() const { return event_index_; }
  std::int32_t agent_count() const { return static_cast<std::int32_t>(agents_.size()); }
  const AgentState& agent(std::int32_t i) const {
    return agents_[static_cast<std::size_t>(i)];
  }

  bool agent_movable(std::int32_t i);
  bool any_dormant() const;
  /// Exit port the agent's behavior wants at its current node (cached until
  /// the next arrival); nullopt when idle or mid-traversal.
  std::optional<std::int32_t> peek_exit(std::int32_t i);
  void clear_pending_exit(std::int32_t i) {
    agents_[static_cast<std::size_t>(i)].pending_exit.reset();
  }
  void halt_agent(std::int32_t i);

  /// Stationary agents whose point lies in the closed canonical interval a
  /// candidate sweep would cover; used by meeting-avoiding schedulers.
  std::vector<std::int32_t> agents_in_sweep(std::int32_t mover, const Traversal& t,
                                            const Fraction& from_directed,
                                            const Fraction& to_directed) const;
  /// The traversal a Move decision would sweep (commits nothing).
  std::optional<Traversal> preview_traversal(std::int32_t i);

  /// Applies one effective decision. Returns the structured event.
  const EngineEvent& advance(const Decision& decision, bool forced = false);

  /// Scheduler loop with engine liveness enforcement. `stop` is evaluated
  /// after every event.
  RunEnd run(Scheduler& scheduler, const std::function<bool()>& stop);

  /// Liveness override applied to a proposal; exposed so replays re-derive
  /// identical effective decisions.
  Decision enforce_liveness(std::optional<Decision> proposal, bool& forced);

  const std::vector<EngineEvent>& events() const { return events_; }
  std::uint64_t total_cost() const;
  std::string event_json_line(const EngineEvent& ev) const;

  /// Trace lines: protocol-level records (role transitions, outputs) are
  /// emitted during event processing, the engine's own event line follows.
  /// Byte-for-byte reproducible under replay.
  void emit_protocol_line(const std::string& json_line);
  const std::vector<std::string>& trace_lines() const { return trace_lines_; }

 private:
  struct PointGroup {
    SpacePoint point;
    Fraction distance;  // from sweep start, for ordering
    std::vector<std::int32_t> agents;
  };

  void process_meeting(const SpacePoint& point, std::vector<std::int32_t> agents,
                       EngineEvent& ev);
  void wake_agent(std::int32_t i, EngineEvent& ev);
  void complete_traversal(std::int32_t i, EngineEvent& ev);
  std::vector<PointGroup> collect_sweep_groups(std::int32_t mover, const Traversal& t,
                                               const Fraction& from_dir,
                                               const Fraction& to_dir,
                                               bool exclude_target_node) const;

  const PortLabeledGraph& graph_;
  EngineConfig config_;
  std::vector<AgentState> agents_;
  MeetingPolicy* policy_ = nullptr;
  std::function<void(const EngineEvent&)> observer_;
  std::uint64_t event_index_ = 0;
  std::vector<EngineEvent> events_;
  std::vector<std::string> trace_lines_;
  EngineEvent scratch_event_;
};

}  // namespace rvsim
