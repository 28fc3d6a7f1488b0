#include "rvsim/est.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "rvsim/behaviors.hpp"

namespace rvsim {

bool log_consistent(const ObservationLog& log, const PortLabeledGraph& map,
                    std::int32_t home) {
  if (map.degree(home) != log.home_degree) return false;
  std::int32_t cur = home;
  for (const ObservationStep& s : log.steps) {
    if (s.exit_port < 0 || s.exit_port >= map.degree(cur)) return false;
    PortTarget t = map.step(cur, s.exit_port);
    if (t.port != s.entry_port) return false;
    if (map.degree(t.node) != s.degree) return false;
    if ((t.node == home) != s.token_present) return false;
    cur = t.node;
  }
  return true;
}

EstCore::EstCore(std::int32_t max_nodes, std::int32_t home_degree)
    : max_nodes_(max_nodes) {
  if (max_nodes < 1) throw std::invalid_argument("est size bound must be positive");
  log_.home_degree = home_degree;
  Candidate c;
  c.adj.push_back(std::vector<PortTarget>(static_cast<std::size_t>(home_degree),
                                          PortTarget{-1, -1}));
  c.current = 0;
  c.key = canonical_key(c);
  maps_.push_back(std::move(c));
}

std::string EstCore::canonical_key(const Candidate& c) {
  // BFS renumbering from home over assigned ports; every candidate node was
  // reached by the walk, so the traversal covers all of them.
  const std::int32_t n = static_cast<std::int32_t>(c.adj.size());
  std::vector<std::int32_t> order(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> bfs{0};
  order[0] = 0;
  std::int32_t next = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    std::int32_t v = bfs[i];
    for (const PortTarget& t : c.adj[static_cast<std::size_t>(v)]) {
      if (t.node >= 0 && order[static_cast<std::size_t>(t.node)] == -1) {
        order[static_cast<std::size_t>(t.node)] = next++;
        bfs.push_back(t.node);
      }
    }
  }
  std::ostringstream out;
  std::vector<std::int32_t> inverse(static_cast<std::size_t>(next));
  for (std::int32_t v = 0; v < n; ++v)
    if (order[static_cast<std::size_t>(v)] >= 0)
      inverse[static_cast<std::size_t>(order[static_cast<std::size_t>(v)])] = v;
  out << "c" << order[static_cast<std::size_t>(c.current)] << ";";
  for (std::int32_t i = 0; i < next; ++i) {
    std::int32_t v = inverse[static_cast<std::size_t>(i)];
    out << "[";
    for (const PortTarget& t : c.adj[static_cast<std::size_t>(v)]) {
      if (t.node < 0) {
        out << "?,";
      } else {
        out << order[static_cast<std::size_t>(t.node)] << "." << t.port << ",";
      }
    }
    out << "]";
  }
  return out.str();
}

void EstCore::dedupe() {
  std::sort(maps_.begin(), maps_.end(),
            [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
  maps_.erase(std::unique(maps_.begin(), maps_.end(),
                          [](const Candidate& a, const Candidate& b) {
                            return a.key == b.key;
                          }),
              maps_.end());
}

bool EstCore::complete(const Candidate& c) const {
  for (const auto& row : c.adj)
    for (const PortTarget& t : row)
      if (t.node < 0) return false;
  return true;
}

void EstCore::observe(const ObservationStep& step) {
  log_.steps.push_back(step);
  std::vector<Candidate> next;
  const std::size_t before = maps_.size();
  for (Candidate& c : maps_) {
    auto& row = c.adj[static_cast<std::size_t>(c.current)];
    if (step.exit_port < 0 || step.exit_port >= static_cast<std::int32_t>(row.size()))
      continue;
    PortTarget t = row[static_cast<std::size_t>(step.exit_port)];
    if (t.node >= 0) {
      // Assigned: predictions must match.
      if (t.port != step.entry_port) continue;
      if (static_cast<std::int32_t>(c.adj[static_cast<std::size_t>(t.node)].size()) !=
          step.degree)
        continue;
      if ((t.node == 0) != step.token_present) continue;
      Candidate n2 = c;
      n2.current = t.node;
      n2.key = canonical_key(n2);
      next.push_back(std::move(n2));
      continue;
    }
    // Unassigned: identify the far end with an existing node, or mint a new
    // one. Candidate graphs stay simple (the model's graphs are).
    for (std::int32_t u = 0; u < static_cast<std::int32_t>(c.adj.size()); ++u) {
      if (u == c.current) continue;
      const auto& urow = c.adj[static_cast<std::size_t>(u)];
      if (static_cast<std::int32_t>(urow.size()) != step.degree) continue;
      if ((u == 0) != step.token_present) continue;
      if (step.entry_port >= static_cast<std::int32_t>(urow.size())) continue;
      if (urow[static_cast<std::size_t>(step.entry_port)].node >= 0) continue;
      bool already_adjacent = false;
      for (const PortTarget& x : row)
        if (x.node == u) already_adjacent = true;
      if (already_adjacent) continue;
      Candidate n2 = c;
      n2.adj[static_cast<std::size_t>(n2.current)][static_cast<std::size_t>(
          step.exit_port)] = PortTarget{u, step.entry_port};
      n2.adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(step.entry_port)] =
          PortTarget{n2.current, step.exit_port};
      n2.current = u;
      n2.key = canonical_key(n2);
      next.push_back(std::move(n2));
    }
    if (static_cast<std::int32_t>(c.adj.size()) < max_nodes_ && !step.token_present &&
        step.entry_port < step.degree) {
      Candidate n2 = c;
      std::int32_t w = static_cast<std::int32_t>(n2.adj.size());
      n2.adj.push_back(std::vector<PortTarget>(static_cast<std::size_t>(step.degree),
                                               PortTarget{-1, -1}));
      n2.adj[static_cast<std::size_t>(n2.current)][static_cast<std::size_t>(
          step.exit_port)] = PortTarget{w, step.entry_port};
      n2.adj[static_cast<std::size_t>(w)][static_cast<std::size_t>(step.entry_port)] =
          PortTarget{n2.current, step.exit_port};
      n2.current = w;
      n2.key = canonical_key(n2);
      next.push_back(std::move(n2));
    }
  }
  maps_ = std::move(next);
  dedupe();
  if (maps_.size() > 200000)
    throw std::runtime_error("est hypothesis set exceeded internal capacity");
  if (maps_.empty())
    throw HypothesisExhaustedError("no candidate of size <= " +
                                   std::to_string(max_nodes_) +
                                   " is consistent with the log");
  pruned_ += before > maps_.size() ? before - maps_.size() : 0;
}

std::vector<std::int32_t> EstCore::shortest_distinguishing_walk(
    const Candidate& a, const Candidate& b) const {
  const std::int32_t na = static_cast<std::int32_t>(a.adj.size());
  const std::int32_t nb = static_cast<std::int32_t>(b.adj.size());
  auto idx = [&](std::int32_t x, std::int32_t y) { return x * nb + y; };
  std::vector<std::int32_t> parent(static_cast<std::size_t>(na * nb), -2);
  std::vector<std::int32_t> via_port(static_cast<std::size_t>(na * nb), -1);
  std::queue<std::pair<std::int32_t, std::int32_t>> q;
  q.emplace(a.current, b.current);
  parent[static_cast<std::size_t>(idx(a.current, b.current))] = -1;

  auto reconstruct = [&](std::int32_t state, std::int32_t final_port) {
    std::vector<std::int32_t> walk{final_port};
    while (parent[static_cast<std::size_t>(state)] != -1) {
      walk.push_back(via_port[static_cast<std::size_t>(state)]);
      state = parent[static_cast<std::size_t>(state)];
    }
    std::reverse(walk.begin(), walk.end());
    return walk;
  };

  while (!q.empty()) {
    auto [xa, xb] = q.front();
    q.pop();
    std::int32_t state = idx(xa, xb);
    const auto& rowa = a.adj[static_cast<std::size_t>(xa)];
    const auto& rowb = b.adj[static_cast<std::size_t>(xb)];
    // Consistency keeps the two current degrees equal along explored states.
    std::int32_t deg = static_cast<std::int32_t>(rowa.size());
    for (std::int32_t p = 0; p < deg; ++p) {
      PortTarget ta = rowa[static_cast<std::size_t>(p)];
      PortTarget tb = rowb[static_cast<std::size_t>(p)];
      if (ta.node < 0 || tb.node < 0) return reconstruct(state, p);
      bool same =
          ta.port == tb.port &&
          a.adj[static_cast<std::size_t>(ta.node)].size() ==
              b.adj[static_cast<std::size_t>(tb.node)].size() &&
          (ta.node == 0) == (tb.node == 0);
      if (!same) return reconstruct(state, p);
      std::int32_t nxt = idx(ta.node, tb.node);
      if (parent[static_cast<std::size_t>(nxt)] == -2) {
        parent[static_cast<std::size_t>(nxt)] = state;
        via_port[static_cast<std::size_t>(nxt)] = p;
        q.emplace(ta.node, tb.node);
      }
    }
  }
  return {};
}

std::vector<std::int32_t> EstCore::walk_to_unassigned(const Candidate& c) const {
  const std::int32_t n = static_cast<std::int32_t>(c.adj.size());
  std::vector<std::int32_t> parent(static_cast<std::size_t>(n), -2);
  std::vector<std::int32_t> via_port(static_cast<std::size_t>(n), -1);
  std::queue<std::int32_t> q;
  q.push(c.current);
  parent[static_cast<std::size_t>(c.current)] = -1;
  while (!q.empty()) {
    std::int32_t v = q.front();
    q.pop();
    const auto& row = c.adj[static_cast<std::size_t>(v)];
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(row.size()); ++p) {
      if (row[static_cast<std::size_t>(p)].node < 0) {
        std::vector<std::int32_t> walk{p};
        std::int32_t x = v;
        while (parent[static_cast<std::size_t>(x)] != -1) {
          walk.push_back(via_port[static_cast<std::size_t>(x)]);
          x = parent[static_cast<std::size_t>(x)];
        }
        std::reverse(walk.begin(), walk.end());
        return walk;
      }
    }
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(row.size()); ++p) {
      std::int32_t u = row[static_cast<std::size_t>(p)].node;
      if (u >= 0 && parent[static_cast<std::size_t>(u)] == -2) {
        parent[static_cast<std::size_t>(u)] = v;
        via_port[static_cast<std::size_t>(u)] = p;
        q.push(u);
      }
    }
  }
  return {};
}

std::vector<std::int32_t> EstCore::walk_home(const Candidate& c) const {
  if (c.current == 0) return {};
  const std::int32_t n = static_cast<std::int32_t>(c.adj.size());
  std::vector<std::int32_t> parent(static_cast<std::size_t>(n), -2);
  std::vector<std::int32_t> via_port(static_cast<std::size_t>(n), -1);
  std::queue<std::int32_t> q;
  q.push(c.current);
  parent[static_cast<std::size_t>(c.current)] = -1;
  while (!q.empty()) {
    std::int32_t v = q.front();
    q.pop();
    const auto& row = c.adj[static_cast<std::size_t>(v)];
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(row.size()); ++p) {
      std::int32_t u = row[static_cast<std::size_t>(p)].node;
      if (u < 0) continue;
      if (parent[static_cast<std::size_t>(u)] == -2) {
        parent[static_cast<std::size_t>(u)] = v;
        via_port[static_cast<std::size_t>(u)] = p;
        if (u == 0) {
          std::vector<std::int32_t> walk;
          std::int32_t x = 0;
          while (parent[static_cast<std::size_t>(x)] != -1) {
            walk.push_back(via_port[static_cast<std::size_t>(x)]);
            x = parent[static_cast<std::size_t>(x)];
          }
          std::reverse(walk.begin(), walk.end());
          return walk;
        }
        q.push(u);
      }
    }
  }
  throw std::logic_error("candidate map has no path home");
}

std::optional<std::int32_t> EstCore::plan_next() {
  if (finished_) return std::nullopt;
  for (;;) {
    // Follow the current walk to its end: its final observation is the one
    // that prunes a candidate or assigns a port, so each completed walk makes
    // strict progress (replanning per step could chase an oscillating pair of
    // candidates forever).
    if (plan_cursor_ < plan_.size()) {
      std::int32_t port = plan_[plan_cursor_];
      std::int32_t degree =
          static_cast<std::int32_t>(maps_[0].adj[static_cast<std::size_t>(
              maps_[0].current)].size());
      if (port < degree) {
        ++plan_cursor_;
        return port;
      }
      plan_.clear();  // a prune made the rest of the plan meaningless
      plan_cursor_ = 0;
    }
    if (maps_.size() >= 2) {
      auto walk = shortest_distinguishing_walk(maps_[0], maps_[1]);
      if (walk.empty()) {
        // Behaviorally equivalent from here. With no reachable unassigned
        // port both are complete; identical rooted maps merge, anything else
        // falsifies the reconstruction conjecture and must surface.
        PortLabeledGraph g0(maps_[0].adj);
        PortLabeledGraph g1(maps_[1].adj);
        if (isomorphic_rooted(g0, 0, g1, 0)) {
          maps_.erase(maps_.begin() + 1);
          ++pruned_;
          continue;
        }
        throw ObservationEquivalenceError(g0.serialize() + "--vs--" + g1.serialize());
      }
      plan_ = std::move(walk);
      plan_cursor_ = 0;
      continue;
    }
    const Candidate& c = maps_[0];
    if (!complete(c)) {
      auto walk = walk_to_unassigned(c);
      if (walk.empty())
        throw std::logic_error("incomplete candidate with no reachable frontier");
      plan_ = std::move(walk);
      plan_cursor_ = 0;
      continue;
    }
    if (c.current != 0) {
      plan_ = walk_home(c);
      plan_cursor_ = 0;
      continue;
    }
    finished_ = true;
    return std::nullopt;
  }
}

PortLabeledGraph EstCore::result_map() const {
  if (maps_.size() != 1 || !complete(maps_[0]))
    throw std::logic_error("est result requested before completion");
  return PortLabeledGraph(maps_[0].adj);
}

EstAgentLogic::EstAgentLogic(std::int32_t max_nodes, std::int32_t home_degree,
                             std::int32_t token_agent)
    : max_nodes_(max_nodes), token_agent_(token_agent) {
  core_.emplace(max_nodes, home_degree);
  mode_ = Mode::Real;
}

EstAgentLogic::EstAgentLogic(std::int32_t max_nodes, const EdgeRef& edge,
                             std::int32_t token_agent)
    : max_nodes_(max_nodes), token_agent_(token_agent), virtual_mode_(true),
      edge_(edge) {
  core_.emplace(max_nodes, 2);  // home is the virtual degree-2 node
  mode_ = Mode::AtWFinishing;
}

void EstAgentLogic::feed(const ObservationStep& step) { core_->observe(step); }

std::optional<std::int32_t> EstAgentLogic::next_exit(std::int32_t degree,
                                                     std::int32_t current_node) {
  if (pending_obs_) {
    feed(*pending_obs_);
    pending_obs_.reset();
  }
  for (;;) {
    switch (mode_) {
      case Mode::AtWFinishing:
        // Still realizing the pre-adoption traversal; no route decision yet.
        return std::nullopt;
      case Mode::CrossingFromW:
      case Mode::EnteringW:
        if (mode_ == Mode::EnteringW && !met_token_this_crossing_)
          throw std::logic_error(
              "virtual est: edge crossed without meeting the token");
        return std::nullopt;  // traversal in progress
      case Mode::AtW: {
        auto sim = core_->plan_next();
        if (!sim) {
          ended_with_token_ = true;
          return std::nullopt;
        }
        std::int32_t side = *sim == 0 ? edge_.a : edge_.b;
        if (side == physical_side_) {
          // The simulated move out of w ends where the agent already stands.
          ObservationStep s;
          s.exit_port = *sim;
          s.entry_port = side == edge_.a ? edge_.a_port : edge_.b_port;
          s.degree = degree;
          s.token_present = false;
          feed(s);
          mode_ = Mode::Real;
          continue;
        }
        pending_exit_sim_ = *sim;
        expected_side_ = side;
        crossing_from_side_ = physical_side_;
        met_token_this_crossing_ = false;
        mode_ = Mode::CrossingFromW;
        return physical_side_ == edge_.a ? edge_.a_port : edge_.b_port;
      }
      case Mode::Real: {
        auto sim = core_->plan_next();
        if (!sim) {
          ended_with_token_ = true;
          return std::nullopt;
        }
        if (virtual_mode_ && !aborted_) {
          bool at_a = current_node == edge_.a;
          bool at_b = current_node == edge_.b;
          if ((at_a && *sim == edge_.a_port) || (at_b && *sim == edge_.b_port)) {
            pending_exit_sim_ = *sim;
            crossing_from_side_ = current_node;
            met_token_this_crossing_ = false;
            mode_ = Mode::EnteringW;
            return *sim;
          }
        }
        pending_exit_sim_ = *sim;
        return *sim;
      }
    }
  }
}

void EstAgentLogic::traversal_completed(std::int32_t entry_port, std::int32_t degree,
                                        std::int32_t node) {
  switch (mode_) {
    case Mode::AtWFinishing:
      physical_side_ = node;
      mode_ = Mode::AtW;
      return;
    case Mode::CrossingFromW: {
      physical_side_ = node;
      ObservationStep s;
      s.exit_port = pending_exit_sim_;
      s.entry_port = node == edge_.a ? edge_.a_port : edge_.b_port;
      s.degree = degree;
      s.token_present = false;
      pending_obs_ = s;
      mode_ = Mode::Real;
      return;
    }
    case Mode::EnteringW:
      physical_side_ = node;
      if (met_token_this_crossing_) mode_ = Mode::AtW;
      // Otherwise the token must sit at this endpoint: the arrival meeting
      // (same event) aborts the simulation; next_exit guards the impossible
      // remainder.
      return;
    case Mode::AtW:
      throw std::logic_error("virtual est: unexpected traversal while at w");
    case Mode::Real: {
      ObservationStep s;
      s.exit_port = pending_exit_sim_;
      s.entry_port = entry_port;
      s.degree = degree;
      s.token_present = false;  // upgraded by a same-event token meeting
      pending_obs_ = s;
      return;
    }
  }
}

void EstAgentLogic::token_met_at_node(std::int32_t node, std::int32_t degree) {
  (void)node;
  if (virtual_mode_ && !aborted_) {
    // Meeting the token at an extremity: abort the simulation and restart
    // plain exploration anchored at this node.
    aborted_ = true;
    pending_obs_.reset();
    core_.emplace(max_nodes_, degree);
    mode_ = Mode::Real;
    physical_side_ = -1;
    return;
  }
  if (pending_obs_) pending_obs_->token_present = true;
}

void EstAgentLogic::token_met_inside_edge() {
  if (!virtual_mode_ || aborted_) return;
  switch (mode_) {
    case Mode::EnteringW:
      if (!met_token_this_crossing_) {
        met_token_this_crossing_ = true;
        ObservationStep s;
        s.exit_port = pending_exit_sim_;
        // w's port 0 faces the canonical origin endpoint.
        s.entry_port = crossing_from_side_ == edge_.a ? 0 : 1;
        s.degree = 2;
        s.token_present = true;
        feed(s);
      }
      return;
    case Mode::AtWFinishing:
    case Mode::CrossingFromW:
      // Expected co-location while departing w or completing the adoption
      // traversal; carries no new simulated observation.
      met_token_this_crossing_ = true;
      return;
    case Mode::AtW:
    case Mode::Real:
      // A zero-length sweep can re-touch the meeting point.
      return;
  }
}

std::int32_t EstAgentLogic::true_size() const {
  std::int32_t n = core_->result_map().node_count();
  return virtual_mode_ && !aborted_ ? n - 1 : n;
}

PortLabeledGraph EstAgentLogic::true_map() const {
  PortLabeledGraph g = core_->result_map();
  if (virtual_mode_ && !aborted_) return unsubdivide_node(g, 0);
  return g;
}

std::int32_t EstAgentLogic::finish_position_in_true_map() const {
  if (!virtual_mode_ || aborted_) return 0;
  // Simulated position is w (= node 0 of the recovered map); physically the
  // agent rests at one of the subdivided edge's endpoints. Unsubdividing
  // removes node 0, shifting every other handle down by one.
  std::int32_t port = physical_side_ == edge_.a ? 0 : 1;
  return core_->result_map().step(0, port).node - 1;
}

namespace {

class EstExplorerBehavior : public AgentBehavior {
 public:
  explicit EstExplorerBehavior(EstAgentLogic logic) : logic_(std::move(logic)) {}

  void on_wake(std::int32_t, Engine&, std::int32_t) override {}

  std::optional<std::int32_t> desired_exit(std::int32_t degree, Engine& engine,
                                           std::int32_t self) override {
    if (pending_) return pending_;
    pending_ = logic_.next_exit(degree, engine.agent(self).node);
    return pending_;
  }

  void on_traversal_complete(std::int32_t entry_port, std::int32_t degree,
                             Engine& engine, std::int32_t self) override {
    pending_.reset();
    logic_.traversal_completed(entry_port, degree, engine.agent(self).node);
  }

  void invalidate_plan() { pending_.reset(); }

  EstAgentLogic& logic() { return logic_; }

 private:
  EstAgentLogic logic_;
  std::optional<std::int32_t> pending_;
};

class EstMeetingPolicy : public MeetingPolicy {
 public:
  EstMeetingPolicy(EstExplorerBehavior* behavior, std::int32_t explorer,
                   std::int32_t token)
      : behavior_(behavior), explorer_(explorer), token_(token) {}

  void on_meeting(const MeetingEvent& m, Engine& engine) override {
    bool has_explorer = false;
    bool has_token = false;
    for (std::int32_t a : m.agents) {
      if (a == explorer_) has_explorer = true;
      if (a == token_) has_token = true;
    }
    if (!has_explorer || !has_token) return;
    if (m.point.is_node) {
      bool was_virtual =
          behavior_->logic().virtual_mode() && !behavior_->logic().aborted_to_real();
      behavior_->logic().token_met_at_node(m.point.node,
                                           engine.graph().degree(m.point.node));
      if (was_virtual) {
        behavior_->invalidate_plan();
        engine.clear_pending_exit(explorer_);
      }
    } else {
      behavior_->logic().token_met_inside_edge();
    }
  }

 private:
  EstExplorerBehavior* behavior_;
  std::int32_t explorer_;
  std::int32_t token_;
};

EstRunResult collect_result(EstAgentLogic& logic, const Engine& engine,
                            std::int32_t explorer) {
  EstRunResult res;
  res.map = logic.recovered_map();
  res.home = 0;
  if (logic.virtual_mode() && !logic.aborted_to_real()) res.true_map = logic.true_map();
  res.cost = engine.agent(explorer).cost;
  res.log_length = logic.log().steps.size();
  res.hypotheses_pruned = logic.hypotheses_pruned();
  res.aborted_to_real = logic.aborted_to_real();
  res.ended_with_token = logic.ended_with_token();
  res.log = logic.log();
  return res;
}

}  // namespace

std::string est_map_text(const EstRunResult& result) {
  std::ostringstream out;
  out << "# est home=" << result.home << " log_length=" << result.log_length
      << " hypotheses_pruned=" << result.hypotheses_pruned
      << " aborted=" << (result.aborted_to_real ? 1 : 0) << "\n";
  out << result.map.serialize();
  return out.str();
}

EstRunResult run_est(const PortLabeledGraph& graph, std::int32_t home,
                     std::int32_t est_max_n, Scheduler& scheduler,
                     std::uint64_t event_cap) {
  EngineConfig cfg;
  cfg.require_distinct_starts = false;
  cfg.event_cap = event_cap;
  Engine engine(graph, cfg);
  IdleBehavior token_behavior;
  std::int32_t token = engine.add_agent(0, home, &token_behavior);
  EstExplorerBehavior explorer_behavior(
      EstAgentLogic(est_max_n, graph.degree(home), token));
  std::int32_t explorer = engine.add_agent(1, home, &explorer_behavior);
  EstMeetingPolicy policy(&explorer_behavior, explorer, token);
  engine.set_policy(&policy);
  engine.advance(Decision::wake(token));  // co-location wakes the explorer too
  if (engine.agent(explorer).lifecycle == Lifecycle::Dormant)
    engine.advance(Decision::wake(explorer));
  engine.run(scheduler, [&] { return explorer_behavior.logic().finished(); });
  if (!explorer_behavior.logic().finished())
    throw std::runtime_error("est run did not finish within the event cap");
  return collect_result(explorer_behavior.logic(), engine, explorer);
}

EstRunResult run_est_virtual(const PortLabeledGraph& graph, const EdgeRef& edge,
                             Fraction meeting_coord, std::int32_t est_max_n,
                             Scheduler& scheduler, std::uint64_t event_cap) {
  if (meeting_coord.is_zero() || meeting_coord.is_one())
    throw std::invalid_argument("virtual est needs an interior meeting point");
  EngineConfig cfg;
  cfg.require_distinct_starts = false;
  cfg.event_cap = event_cap;
  Engine engine(graph, cfg);
  std::int32_t token = engine.add_frozen_agent(0, edge, meeting_coord);
  EstExplorerBehavior explorer_behavior(EstAgentLogic(est_max_n, edge, token));
  std::int32_t explorer = engine.add_agent(1, edge.a, &explorer_behavior);
  EstMeetingPolicy policy(&explorer_behavior, explorer, token);
  engine.set_policy(&policy);
  engine.script_traversal(explorer, edge, true, meeting_coord);
  engine.run(scheduler, [&] { return explorer_behavior.logic().finished(); });
  if (!explorer_behavior.logic().finished())
    throw std::runtime_error("virtual est run did not finish within the event cap");
  return collect_result(explorer_behavior.logic(), engine, explorer);
}

}  // namespace rvsim
