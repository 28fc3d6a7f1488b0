#include "rvsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace rvsim {

namespace {

Fraction frac_distance(const Fraction& a, const Fraction& b) {
  // |a - b|; denominators stay tiny (scheduler-chosen), no overflow concern.
  std::int64_t num = a.num * b.den - b.num * a.den;
  if (num < 0) num = -num;
  return Fraction(num, a.den * b.den);
}

}  // namespace

Engine::Engine(const PortLabeledGraph& graph, EngineConfig config)
    : graph_(graph), config_(config) {}

std::int32_t Engine::add_agent(std::uint64_t label, std::int32_t start,
                               AgentBehavior* behavior) {
  if (start < 0 || start >= graph_.node_count())
    throw std::invalid_argument("agent start node out of range");
  if (config_.require_distinct_starts) {
    for (const AgentState& a : agents_) {
      if (a.lifecycle == Lifecycle::Dormant && a.node == start)
        throw std::invalid_argument("agents must start at distinct nodes");
    }
  }
  AgentState st;
  st.label = label;
  st.node = start;
  st.behavior = behavior;
  agents_.push_back(std::move(st));
  return static_cast<std::int32_t>(agents_.size()) - 1;
}

std::int32_t Engine::add_frozen_agent(std::uint64_t label, const EdgeRef& edge,
                                      Fraction canonical_coord) {
  AgentState st;
  st.label = label;
  st.lifecycle = Lifecycle::Halted;
  st.node = edge.a;
  if (!canonical_coord.is_zero() && !canonical_coord.is_one()) {
    SpacePoint p;
    p.is_node = false;
    p.edge = edge;
    p.coord = canonical_coord;
    st.frozen = p;
  } else {
    st.node = canonical_coord.is_zero() ? edge.a : edge.b;
  }
  agents_.push_back(std::move(st));
  return static_cast<std::int32_t>(agents_.size()) - 1;
}

void Engine::script_traversal(std::int32_t agent, const EdgeRef& edge, bool from_a,
                              Fraction progress) {
  AgentState& a = agents_[static_cast<std::size_t>(agent)];
  if (a.behavior) a.behavior->on_wake(graph_.degree(a.node), *this, agent);
  a.lifecycle = Lifecycle::Active;
  Traversal t;
  t.edge = edge;
  t.from_a = from_a;
  t.progress = progress;
  t.entry_port = from_a ? edge.b_port : edge.a_port;
  a.traversal = t;
  a.node = t.origin_node();
}

bool Engine::any_dormant() const {
  for (const AgentState& a : agents_)
    if (a.lifecycle == Lifecycle::Dormant) return true;
  return false;
}

std::optional<std::int32_t> Engine::peek_exit(std::int32_t i) {
  AgentState& a = agents_[static_cast<std::size_t>(i)];
  if (a.lifecycle != Lifecycle::Active || a.traversal) return std::nullopt;
  if (a.pending_exit) return a.pending_exit;
  if (!a.behavior) return std::nullopt;
  a.pending_exit = a.behavior->desired_exit(graph_.degree(a.node), *this, i);
  return a.pending_exit;
}

bool Engine::agent_movable(std::int32_t i) {
  AgentState& a = agents_[static_cast<std::size_t>(i)];
  if (a.lifecycle != Lifecycle::Active) return false;
  if (a.traversal) return true;
  return peek_exit(i).has_value();
}

void Engine::halt_agent(std::int32_t i) {
  AgentState& a = agents_[static_cast<std::size_t>(i)];
  if (a.traversal)
    throw std::logic_error("cannot halt an agent with a traversal in progress");
  a.lifecycle = Lifecycle::Halted;
  a.pending_exit.reset();
}

std::optional<Traversal> Engine::preview_traversal(std::int32_t i) {
  AgentState& a = agents_[static_cast<std::size_t>(i)];
  if (a.traversal) return a.traversal;
  auto exit = peek_exit(i);
  if (!exit) return std::nullopt;
  Traversal t;
  t.edge = graph_.edge_from(a.node, *exit);
  t.from_a = a.node == t.edge.a;
  t.progress = Fraction::zero();
  t.entry_port = graph_.step(a.node, *exit).port;
  return t;
}

std::vector<Engine::PointGroup> Engine::collect_sweep_groups(
    std::int32_t mover, const Traversal& t, const Fraction& from_dir,
    const Fraction& to_dir, bool exclude_target_node) const {
  Fraction start = t.canonical(from_dir);
  Fraction end = t.canonical(to_dir);
  const Fraction& lo = min_frac(start, end);
  const Fraction& hi = max_frac(start, end);

  std::vector<PointGroup> groups;
  auto add_to_group = [&](const SpacePoint& p, std::int32_t agent) {
    for (PointGroup& g : groups) {
      if (g.point == p) {
        g.agents.push_back(agent);
        return;
      }
    }
    PointGroup g;
    g.point = p;
    g.distance = frac_distance(p.is_node ? (p.node == t.edge.a ? Fraction::zero()
                                                               : Fraction::one())
                                         : p.coord,
                               start);
    g.agents.push_back(agent);
    groups.push_back(std::move(g));
  };

  for (std::int32_t j = 0; j < agent_count(); ++j) {
    if (j == mover) continue;
    const AgentState& other = agents_[static_cast<std::size_t>(j)];
    SpacePoint p = other.space_point();
    if (p.is_node) {
      if (p.node == t.edge.a && lo.is_zero()) {
        if (exclude_target_node && t.target_node() == t.edge.a) continue;
        add_to_group(p, j);
      } else if (p.node == t.edge.b && hi.is_one()) {
        if (exclude_target_node && t.target_node() == t.edge.b) continue;
        add_to_group(p, j);
      }
    } else if (p.edge == t.edge && lo <= p.coord && p.coord <= hi) {
      add_to_group(p, j);
    }
  }
  std::sort(groups.begin(), groups.end(), [](const PointGroup& a, const PointGroup& b) {
    return a.distance < b.distance;
  });
  for (PointGroup& g : groups) std::sort(g.agents.begin(), g.agents.end());
  return groups;
}

std::vector<std::int32_t> Engine::agents_in_sweep(std::int32_t mover, const Traversal& t,
                                                  const Fraction& from_directed,
                                                  const Fraction& to_directed) const {
  auto groups = collect_sweep_groups(mover, t, from_directed, to_directed, false);
  std::vector<std::int32_t> out;
  for (const PointGroup& g : groups)
    out.insert(out.end(), g.agents.begin(), g.agents.end());
  std::sort(out.begin(), out.end());
  return out;
}

void Engine::wake_agent(std::int32_t i, EngineEvent& ev) {
  AgentState& a = agents_[static_cast<std::size_t>(i)];
  if (a.lifecycle != Lifecycle::Dormant) return;
  a.lifecycle = Lifecycle::Active;
  a.last_touched_event = event_index_;
  ev.woken.push_back(i);
  if (a.behavior) a.behavior->on_wake(graph_.degree(a.node), *this, i);
}

void Engine::process_meeting(const SpacePoint& point, std::vector<std::int32_t> agents,
                             EngineEvent& ev) {
  for (std::int32_t i : agents) wake_agent(i, ev);
  std::sort(agents.begin(), agents.end());
  MeetingEvent m;
  m.point = point;
  m.agents = std::move(agents);
  m.event_index = event_index_;
  ev.meetings.push_back(m);
  if (policy_) policy_->on_meeting(ev.meetings.back(), *this);
}

void Engine::complete_traversal(std::int32_t i, EngineEvent& ev) {
  AgentState& a = agents_[static_cast<std::size_t>(i)];
  Traversal t = *a.traversal;
  std::int32_t target = t.target_node();
  a.node = target;
  a.traversal.reset();
  a.partial_moves = 0;
  a.cost += 1;
  ev.completed = true;
  if (a.behavior)
    a.behavior->on_traversal_complete(t.entry_port, graph_.degree(target), *this, i);

  // Arrival co-location: everyone at the reached node, dormant agents first
  // woken by the visit.
  std::vector<std::int32_t> here;
  for (std::int32_t j = 0; j < agent_count(); ++j) {
    if (j == i) continue;
    SpacePoint p = agents_[static_cast<std::size_t>(j)].space_point();
    if (p.is_node && p.node == target) here.push_back(j);
  }
  if (!here.empty()) {
    here.push_back(i);
    SpacePoint p;
    p.is_node = true;
    p.node = target;
    process_meeting(p, std::move(here), ev);
  }
}

const EngineEvent& Engine::advance(const Decision& decision, bool forced) {
  if (decision.agent < 0 || decision.agent >= agent_count())
    throw std::invalid_argument("decision targets an unknown agent");
  EngineEvent& ev = scratch_event_;
  ev = EngineEvent{};
  ev.index = event_index_;
  ev.decision = decision;
  ev.forced = forced;

  AgentState& a = agents_[static_cast<std::size_t>(decision.agent)];
  if (decision.kind == Decision::Kind::Wake) {
    if (a.lifecycle != Lifecycle::Dormant)
      throw std::logic_error("wake on a non-dormant agent (scheduler bug)");
    wake_agent(decision.agent, ev);
    // Co-location immediately after a wake counts as a meeting.
    std::vector<std::int32_t> here;
    for (std::int32_t j = 0; j < agent_count(); ++j) {
      if (j == decision.agent) continue;
      SpacePoint p = agents_[static_cast<std::size_t>(j)].space_point();
      if (p.is_node && p.node == a.node) here.push_back(j);
    }
    if (!here.empty()) {
      here.push_back(decision.agent);
      SpacePoint p;
      p.is_node = true;
      p.node = a.node;
      process_meeting(p, std::move(here), ev);
    }
  } else {
    if (a.lifecycle == Lifecycle::Halted)
      throw std::logic_error("move on halted agent (scheduler bug)");
    if (a.lifecycle == Lifecycle::Dormant)
      throw std::logic_error("move on dormant agent (scheduler bug)");
    if (decision.target < Fraction::zero() || Fraction::one() < decision.target)
      throw std::invalid_argument("move target outside [0,1]");

    if (!a.traversal) {
      auto exit = peek_exit(decision.agent);
      if (!exit) throw std::logic_error("move on idle agent (scheduler bug)");
      Traversal t;
      t.edge = graph_.edge_from(a.node, *exit);
      t.from_a = a.node == t.edge.a;
      t.progress = Fraction::zero();
      t.entry_port = graph_.step(a.node, *exit).port;
      a.traversal = t;
      a.pending_exit.reset();
    }

    Fraction from = a.traversal->progress;
    Fraction to = decision.target;
    ev.sweep = a.traversal;
    ev.from = from;
    ev.to = to;

    auto groups =
        collect_sweep_groups(decision.agent, *a.traversal, from, to, to.is_one());
    for (PointGroup& g : groups) {
      std::vector<std::int32_t> agents = g.agents;
      agents.push_back(decision.agent);
      process_meeting(g.point, std::move(agents), ev);
    }

    if (to.is_one()) {
      complete_traversal(decision.agent, ev);
    } else {
      a.traversal->progress = to;
      a.partial_moves += 1;
    }
    a.last_touched_event = event_index_;
  }

  if (observer_) observer_(ev);
  if (config_.record_trace) {
    events_.push_back(ev);
    trace_lines_.push_back(event_json_line(ev));
  }
  ++event_index_;
  return ev;
}

std::string Engine::event_json_line(const EngineEvent& ev) const {
  nlohmann::ordered_json j;
  j["ev"] = ev.index;
  j["kind"] = ev.decision.kind == Decision::Kind::Wake ? "wake" : "move";
  j["agent"] = ev.decision.agent;
  j["forced"] = ev.forced ? 1 : 0;
  if (ev.decision.kind == Decision::Kind::Move && ev.sweep) {
    j["edge"] = {ev.sweep->edge.a, ev.sweep->edge.a_port, ev.sweep->edge.b,
                 ev.sweep->edge.b_port};
    j["dir"] = ev.sweep->from_a ? "ab" : "ba";
    j["from"] = ev.from.to_string();
    j["to"] = ev.to.to_string();
    j["completed"] = ev.completed ? 1 : 0;
  }
  if (!ev.meetings.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MeetingEvent& m : ev.meetings) {
      nlohmann::ordered_json e;
      if (m.point.is_node) {
        e["at"] = {{"n", m.point.node}};
      } else {
        e["at"] = {{"e", {m.point.edge.a, m.point.edge.a_port, m.point.edge.b,
                          m.point.edge.b_port}},
                   {"p", m.point.coord.to_string()}};
      }
      e["agents"] = m.agents;
      arr.push_back(std::move(e));
    }
    j["meet"] = std::move(arr);
  }
  if (!ev.woken.empty()) j["woken"] = ev.woken;
  nlohmann::ordered_json costs = nlohmann::ordered_json::array();
  for (const AgentState& a : agents_) costs.push_back(a.cost);
  j["cost"] = std::move(costs);
  return j.dump();
}

Decision Engine::enforce_liveness(std::optional<Decision> proposal, bool& forced) {
  // `forced` depends only on engine state and the effective decision, never
  // on how the proposal happened to be phrased, so replayed (already
  // effective) decision streams reproduce it bit for bit.
  forced = false;
  // Dormant agents must be woken within the wake budget.
  if (event_index_ >= static_cast<std::uint64_t>(config_.wake_budget)) {
    for (std::int32_t i = 0; i < agent_count(); ++i) {
      if (agents_[static_cast<std::size_t>(i)].lifecycle == Lifecycle::Dormant) {
        forced = true;
        return Decision::wake(i);
      }
    }
  }
  // A committed traversal may not sit untouched forever.
  for (std::int32_t i = 0; i < agent_count(); ++i) {
    const AgentState& a = agents_[static_cast<std::size_t>(i)];
    if (a.lifecycle == Lifecycle::Active && a.traversal &&
        event_index_ - a.last_touched_event >=
            static_cast<std::uint64_t>(config_.stall_budget)) {
      forced = true;
      return Decision::move(i, Fraction::one());
    }
  }
  // No active agent with route work may be starved outright.
  for (std::int32_t i = 0; i < agent_count(); ++i) {
    const AgentState& a = agents_[static_cast<std::size_t>(i)];
    if (a.lifecycle == Lifecycle::Active &&
        event_index_ - a.last_touched_event >=
            static_cast<std::uint64_t>(config_.fairness_budget) &&
        agent_movable(i)) {
      forced = true;
      return Decision::move(i, Fraction::one());
    }
  }
  if (!proposal) return Decision{Decision::Kind::Wake, -1, {}};
  // Partial-move budget: the traversal must finish now.
  if (proposal->kind == Decision::Kind::Move) {
    const AgentState& a = agents_[static_cast<std::size_t>(proposal->agent)];
    if (a.partial_moves >= config_.move_budget) {
      forced = true;
      return Decision::move(proposal->agent, Fraction::one());
    }
  }
  return *proposal;
}

RunEnd Engine::run(Scheduler& scheduler, const std::function<bool()>& stop) {
  for (;;) {
    if (stop()) return RunEnd::Stopped;
    if (event_index_ >= config_.event_cap) return RunEnd::EventCap;
    std::optional<Decision> proposal = scheduler.decide(*this);
    bool forced = false;
    Decision effective = enforce_liveness(std::move(proposal), forced);
    if (effective.agent < 0) return RunEnd::Quiescent;
    advance(effective, forced);
  }
}

std::uint64_t Engine::total_cost() const {
  std::uint64_t total = 0;
  for (const AgentState& a : agents_) total += a.cost;
  return total;
}

void Engine::emit_protocol_line(const std::string& json_line) {
  if (config_.record_trace) trace_lines_.push_back(json_line);
}

}  // namespace rvsim
