#include "rvsim/sgl.hpp"

#include <algorithm>
#include <sstream>

#include "rvsim/modified_label.hpp"
#include "rvsim/prng.hpp"
#include "rvsim/rendezvous.hpp"

#include <json.hpp>

namespace rvsim {

const char* sgl_role_name(SglRole r) {
  switch (r) {
    case SglRole::Traveller: return "traveller";
    case SglRole::Token: return "token";
    case SglRole::Explorer: return "explorer";
  }
  return "?";
}

ProblemOutputs derive_outputs(const Bag& bag, std::uint64_t own_label) {
  if (bag.size() < 2)
    throw std::logic_error("a singleton bag can never be final (team size > 1)");
  ProblemOutputs out;
  out.team_size = bag.size();
  out.leader = bag.begin()->first;
  std::uint64_t rank = 0;
  bool found = false;
  for (const auto& [label, value] : bag) {
    ++rank;
    out.gossip.push_back(value);
    if (label == own_label) {
      out.new_name = rank;
      found = true;
    }
  }
  if (!found) throw std::logic_error("own label missing from bag");
  return out;
}

std::vector<std::int32_t> full_edge_tour(const PortLabeledGraph& map,
                                         std::int32_t start) {
  const std::int32_t n = map.node_count();
  std::vector<std::vector<char>> used(static_cast<std::size_t>(n));
  std::vector<std::int32_t> next_port(static_cast<std::size_t>(n), 0);
  for (std::int32_t v = 0; v < n; ++v)
    used[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(map.degree(v)), 0);

  std::vector<std::pair<std::int32_t, std::int32_t>> path;  // (node, exit port)
  std::vector<std::int32_t> circuit;
  std::int32_t cur = start;
  for (;;) {
    std::int32_t d = map.degree(cur);
    std::int32_t& np = next_port[static_cast<std::size_t>(cur)];
    while (np < d && used[static_cast<std::size_t>(cur)][static_cast<std::size_t>(np)])
      ++np;
    if (np < d) {
      std::int32_t p = np;
      used[static_cast<std::size_t>(cur)][static_cast<std::size_t>(p)] = 1;
      path.emplace_back(cur, p);
      cur = map.step(cur, p).node;
    } else {
      if (path.empty()) break;
      circuit.push_back(path.back().second);
      cur = path.back().first;
      path.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  if (circuit.size() != static_cast<std::size_t>(2 * map.edge_count()))
    throw std::logic_error("edge tour failed to cover every directed port");
  return circuit;
}

ProblemOutputs expected_outputs(const std::vector<SglAgentConfig>& agents,
                                std::uint64_t own_label) {
  Bag bag;
  for (const SglAgentConfig& a : agents) bag[a.label] = a.value;
  return derive_outputs(bag, own_label);
}

namespace {

class SglAgentLogic;

/// Run-wide shared state: who met whom, role views, bookkeeping.
struct SglContext {
  std::vector<SglAgentLogic*> logics;
  std::vector<std::uint32_t> met;  // bitmask per agent
  PiCache* pis = nullptr;
  const SglConfig* config = nullptr;
  std::shared_ptr<const UxsProvider> provider;
  std::size_t max_meeting_entries = 0;
  std::uint64_t tokens_created = 0;

  bool have_met(std::int32_t a, std::int32_t b) const {
    return (met[static_cast<std::size_t>(a)] >> b) & 1u;
  }
  void note_met(std::int32_t a, std::int32_t b) {
    met[static_cast<std::size_t>(a)] |= 1u << b;
    met[static_cast<std::size_t>(b)] |= 1u << a;
  }
  SglRole role_of(std::int32_t i) const;
  bool phase2_can_stop(std::int32_t self, const Engine& engine) const;
};

class SglAgentLogic : public AgentBehavior {
 public:
  SglAgentLogic(SglContext* ctx, std::int32_t index, std::uint64_t label,
                std::string value, std::shared_ptr<const UxsProvider> provider)
      : ctx_(ctx), index_(index), label_(label), provider_(std::move(provider)) {
    bag_[label_] = std::move(value);
  }

  SglRole role() const { return role_; }
  const Bag& bag() const { return bag_; }
  bool has_output() const { return has_output_; }
  bool final_flag() const { return final_flag_; }
  const ProblemOutputs& outputs() const { return outputs_; }
  std::int32_t adopted_token() const { return adopted_token_; }
  std::uint64_t cost_traveller() const { return cost_traveller_; }
  std::uint64_t cost_est() const { return cost_est_; }
  std::uint64_t cost_phase2() const { return cost_phase2_; }
  std::uint64_t cost_dfs() const { return cost_dfs_; }
  bool phase2_budget_hit() const { return phase2_budget_hit_; }

  void merge_bag(const Bag& other) {
    for (const auto& [label, value] : other) bag_.emplace(label, value);
  }

  void receive_final(Engine& engine, std::int32_t self) {
    if (role_ != SglRole::Token || has_output_) return;
    final_flag_ = true;
    output(engine, self);
  }

  void become_token(Engine& engine, std::int32_t self) {
    role_ = SglRole::Token;
    rv_.reset();
    pending_.reset();
    engine.clear_pending_exit(self);
    // Completes the traversal underway (the walk covers all of the current
    // edge), then rests at its extremity forever.
    if (!engine.agent(self).traversal) engine.halt_agent(self);
    else wants_halt_ = true;
    note_transition(engine, self);
  }

  void become_explorer(Engine& engine, std::int32_t self, std::int32_t token_agent,
                       const SpacePoint& point) {
    role_ = SglRole::Explorer;
    adopted_token_ = token_agent;
    rv_.reset();
    pending_.reset();
    engine.clear_pending_exit(self);
    if (point.is_node) {
      if (engine.agent(self).traversal) {
        // Adopted while standing at the committed traversal's origin: finish
        // that edge, walk back to the token, then explore.
        pre_est_return_ = true;
        est_.reset();
        phase_ = Phase::PreEst;
      } else {
        est_.emplace(ctx_->config->est_max_n, engine.graph().degree(point.node),
                     token_agent);
        phase_ = Phase::Est;
      }
    } else {
      est_.emplace(ctx_->config->est_max_n, point.edge, token_agent);
      phase_ = Phase::Est;
    }
    note_transition(engine, self);
  }

  void token_meeting(Engine& engine, std::int32_t self, const SpacePoint& point) {
    if (role_ != SglRole::Explorer || !est_ || phase_ != Phase::Est) return;
    if (point.is_node) {
      bool was_virtual = est_->virtual_mode() && !est_->aborted_to_real();
      est_->token_met_at_node(point.node, engine.graph().degree(point.node));
      if (was_virtual) {
        pending_.reset();
        engine.clear_pending_exit(self);
      }
    } else {
      est_->token_met_inside_edge();
    }
  }

  // AgentBehavior:
  void on_wake(std::int32_t, Engine&, std::int32_t) override {
    if (role_ != SglRole::Traveller || rv_) return;
    ModifiedLabel m = modified_label(label_ + 1);
    rv_.emplace(RouteProgram::rv_algorithm(m, provider_));
  }

  std::optional<std::int32_t> desired_exit(std::int32_t degree, Engine& engine,
                                           std::int32_t self) override {
    if (pending_) return pending_;
    switch (role_) {
      case SglRole::Traveller:
        if (!rv_) return std::nullopt;
        pending_ = rv_->next_exit(degree);
        return pending_;
      case SglRole::Token:
        return std::nullopt;
      case SglRole::Explorer:
        return explorer_exit(degree, engine, self);
    }
    return std::nullopt;
  }

  void on_traversal_complete(std::int32_t entry_port, std::int32_t degree,
                             Engine& engine, std::int32_t self) override {
    std::int32_t taken = pending_ ? *pending_ : -1;
    pending_.reset();
    switch (role_) {
      case SglRole::Traveller:
        ++cost_traveller_;
        if (rv_) rv_->arrived(entry_port);
        return;
      case SglRole::Token:
        ++cost_traveller_;
        if (wants_halt_) {
          wants_halt_ = false;
          engine.halt_agent(self);
        }
        return;
      case SglRole::Explorer:
        switch (phase_) {
          case Phase::PreEst:
            ++cost_est_;
            if (pre_est_return_) {
              // Finished the stale committed edge; now walk straight back.
              pre_est_return_ = false;
              pre_est_back_port_ = entry_port;
            } else {
              // Arrived back beside the token: exploration proper begins.
              est_.emplace(ctx_->config->est_max_n, degree, adopted_token_);
              phase_ = Phase::Est;
            }
            return;
          case Phase::Est:
            ++cost_est_;
            if (est_) est_->traversal_completed(entry_port, degree,
                                                engine.agent(self).node);
            return;
          case Phase::Phase2:
            ++cost_phase2_;
            ++phase2_traversals_;
            if (rv_) rv_->arrived(entry_port);
            advance_map_position(taken, entry_port);
            return;
          case Phase::Dfs:
            ++cost_dfs_;
            ++tour_cursor_;
            advance_map_position(taken, entry_port);
            if (tour_cursor_ >= tour_.size()) {
              if (dfs_round_ == 1) {
                // The walk covered every edge, so every token (they sit at
                // nodes forever) has been met: the bag is complete.
                final_flag_ = true;
                dfs_round_ = 2;
                tour_cursor_ = 0;
              } else {
                output(engine, self);
                engine.halt_agent(self);
              }
            }
            return;
        }
        return;
    }
  }

 private:
  enum class Phase : std::uint8_t { PreEst, Est, Phase2, Dfs };

  void note_transition(Engine& engine, std::int32_t self) {
    nlohmann::ordered_json j;
    j["ev"] = engine.event_index();
    j["kind"] = "transition";
    j["agent"] = self;
    j["role"] = sgl_role_name(role_);
    engine.emit_protocol_line(j.dump());
  }

  void advance_map_position(std::int32_t exit_port, std::int32_t entry_port) {
    PortTarget t = true_map_.step(map_position_, exit_port);
    if (t.port != entry_port)
      throw std::logic_error("recovered map disagrees with the walked graph");
    map_position_ = t.node;
  }

  std::optional<std::int32_t> explorer_exit(std::int32_t degree, Engine& engine,
                                            std::int32_t self) {
    for (;;) {
      switch (phase_) {
        case Phase::PreEst: {
          if (pre_est_return_) return std::nullopt;  // traversal still underway
          pending_ = pre_est_back_port_;
          return pending_;
        }
        case Phase::Est: {
          auto exit = est_->next_exit(degree, engine.agent(self).node);
          if (exit) {
            pending_ = exit;
            return pending_;
          }
          if (!est_->finished()) return std::nullopt;
          enter_phase2();
          continue;
        }
        case Phase::Phase2: {
          bool budget_done = BigUint(phase2_traversals_) >= *phase2_budget_;
          bool cut = ctx_->config->phase2_oracle_cutoff &&
                     ctx_->phase2_can_stop(index_, engine);
          if (budget_done || cut) {
            phase2_budget_hit_ = budget_done && !cut;
            tour_ = full_edge_tour(true_map_, map_position_);
            tour_cursor_ = 0;
            dfs_round_ = 1;
            phase_ = Phase::Dfs;
            continue;
          }
          pending_ = rv_->next_exit(degree);
          return pending_;
        }
        case Phase::Dfs: {
          if (tour_cursor_ < tour_.size()) {
            pending_ = tour_[tour_cursor_];
            return pending_;
          }
          // Round endings are handled at the completing arrival.
          return std::nullopt;
        }
      }
    }
  }

  void enter_phase2() {
    true_size_ = est_->true_size();
    true_map_ = est_->true_map();
    map_position_ = est_->finish_position_in_true_map();
    ModifiedLabel one = modified_label(1);
    rv_.emplace(RouteProgram::rv_algorithm(one, provider_));
    phase2_budget_ = &ctx_->pis->get(static_cast<std::uint64_t>(true_size_), 1);
    phase2_traversals_ = 0;
    phase_ = Phase::Phase2;
  }

  void output(Engine& engine, std::int32_t self) {
    outputs_ = derive_outputs(bag_, label_);
    has_output_ = true;
    nlohmann::ordered_json j;
    j["ev"] = engine.event_index();
    j["kind"] = "output";
    j["agent"] = self;
    j["team_size"] = outputs_.team_size;
    j["leader"] = outputs_.leader;
    j["new_name"] = outputs_.new_name;
    j["gossip"] = outputs_.gossip;
    engine.emit_protocol_line(j.dump());
  }

  SglContext* ctx_;
  std::int32_t index_;
  std::uint64_t label_;
  std::shared_ptr<const UxsProvider> provider_;

  SglRole role_ = SglRole::Traveller;
  Bag bag_;
  bool final_flag_ = false;
  bool has_output_ = false;
  ProblemOutputs outputs_;
  bool wants_halt_ = false;

  std::optional<RouteProgram> rv_;
  std::optional<std::int32_t> pending_;

  Phase phase_ = Phase::Est;
  std::optional<EstAgentLogic> est_;
  std::int32_t adopted_token_ = -1;
  bool pre_est_return_ = false;
  std::int32_t pre_est_back_port_ = -1;

  std::int32_t true_size_ = 0;
  PortLabeledGraph true_map_;
  std::int32_t map_position_ = 0;
  const BigUint* phase2_budget_ = nullptr;
  std::uint64_t phase2_traversals_ = 0;
  bool phase2_budget_hit_ = false;

  std::vector<std::int32_t> tour_;
  std::size_t tour_cursor_ = 0;
  int dfs_round_ = 0;

  std::uint64_t cost_traveller_ = 0;
  std::uint64_t cost_est_ = 0;
  std::uint64_t cost_phase2_ = 0;
  std::uint64_t cost_dfs_ = 0;

  friend struct SglContext;
};

SglRole SglContext::role_of(std::int32_t i) const {
  return logics[static_cast<std::size_t>(i)]->role();
}

bool SglContext::phase2_can_stop(std::int32_t self, const Engine& engine) const {
  // The bounded walk's postcondition: every other agent has been met, or is
  // already token/explorer (its label is then registered in a token's bag).
  for (std::int32_t x = 0; x < engine.agent_count(); ++x) {
    if (x == self) continue;
    if (have_met(self, x)) continue;
    SglRole r = role_of(x);
    if (r == SglRole::Token || r == SglRole::Explorer) continue;
    return false;
  }
  return true;
}

class SglMeetingPolicy : public MeetingPolicy {
 public:
  explicit SglMeetingPolicy(SglContext* ctx) : ctx_(ctx) {}

  void on_meeting(const MeetingEvent& m, Engine& engine) override {
    auto& logics = ctx_->logics;
    // Everyone records everyone.
    for (std::size_t i = 0; i < m.agents.size(); ++i)
      for (std::size_t j = i + 1; j < m.agents.size(); ++j)
        ctx_->note_met(m.agents[i], m.agents[j]);

    // Bags merge across all co-located agents.
    Bag merged;
    for (std::int32_t a : m.agents) {
      for (const auto& [label, value] : logics[static_cast<std::size_t>(a)]->bag())
        merged.emplace(label, value);
    }
    ctx_->max_meeting_entries = std::max(ctx_->max_meeting_entries, merged.size());
    for (std::int32_t a : m.agents)
      logics[static_cast<std::size_t>(a)]->merge_bag(merged);

    // A completed bag announced by an explorer lets tokens output.
    bool final_present = false;
    for (std::int32_t a : m.agents) {
      SglAgentLogic* l = logics[static_cast<std::size_t>(a)];
      if (l->role() == SglRole::Explorer && l->final_flag()) final_present = true;
    }
    if (final_present) {
      for (std::int32_t a : m.agents) {
        SglAgentLogic* l = logics[static_cast<std::size_t>(a)];
        if (l->role() == SglRole::Token) l->receive_final(engine, a);
      }
    }

    // Route token meetings into exploration logics.
    for (std::int32_t a : m.agents) {
      SglAgentLogic* l = logics[static_cast<std::size_t>(a)];
      if (l->role() == SglRole::Explorer && l->adopted_token() >= 0) {
        bool token_here = false;
        for (std::int32_t other : m.agents)
          if (other == l->adopted_token()) token_here = true;
        if (token_here) l->token_meeting(engine, a, m.point);
      }
    }

    // Role transitions, atomically by the smallest-label rules.
    std::vector<std::int32_t> travellers;
    std::vector<std::int32_t> tokens;
    for (std::int32_t a : m.agents) {
      SglRole r = logics[static_cast<std::size_t>(a)]->role();
      if (r == SglRole::Traveller) travellers.push_back(a);
      if (r == SglRole::Token) tokens.push_back(a);
    }
    if (travellers.empty()) return;
    if (!tokens.empty()) {
      std::int32_t tok = tokens[0];
      for (std::int32_t t : tokens)
        if (engine.agent(t).label < engine.agent(tok).label) tok = t;
      for (std::int32_t t : travellers)
        logics[static_cast<std::size_t>(t)]->become_explorer(engine, t, tok, m.point);
      return;
    }
    if (travellers.size() < 2) return;  // only explorers besides: ignored
    std::int32_t smallest = travellers[0];
    for (std::int32_t t : travellers)
      if (engine.agent(t).label < engine.agent(smallest).label) smallest = t;
    logics[static_cast<std::size_t>(smallest)]->become_token(engine, smallest);
    ++ctx_->tokens_created;
    for (std::int32_t t : travellers) {
      if (t == smallest) continue;
      logics[static_cast<std::size_t>(t)]->become_explorer(engine, t, smallest,
                                                           m.point);
    }
  }

 private:
  SglContext* ctx_;
};

}  // namespace

SglRunReport run_sgl(const PortLabeledGraph& graph,
                     const std::vector<SglAgentConfig>& agents, Scheduler& scheduler,
                     std::shared_ptr<const UxsProvider> provider,
                     const SglConfig& config) {
  if (agents.size() < 2)
    throw std::invalid_argument("the problems are unsolvable for a single agent");
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      if (agents[i].label == agents[j].label)
        throw std::invalid_argument("agent labels must be distinct");

  EngineConfig ecfg = config.engine;
  ecfg.event_cap = config.event_cap;
  Engine engine(graph, ecfg);

  PiCache pis(provider);
  SglContext ctx;
  ctx.pis = &pis;
  ctx.config = &config;
  ctx.provider = provider;
  ctx.met.assign(agents.size(), 0);

  std::vector<std::unique_ptr<SglAgentLogic>> logics;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    logics.push_back(std::make_unique<SglAgentLogic>(
        &ctx, static_cast<std::int32_t>(i), agents[i].label, agents[i].value,
        provider));
    ctx.logics.push_back(logics.back().get());
    engine.add_agent(agents[i].label, agents[i].start, logics.back().get());
  }
  SglMeetingPolicy policy(&ctx);
  engine.set_policy(&policy);

  auto all_output = [&] {
    for (const auto& l : logics)
      if (!l->has_output()) return false;
    return true;
  };
  RunEnd end = engine.run(scheduler, all_output);

  SglRunReport report;
  report.all_output = all_output();
  report.end = end;
  report.graph_size = graph.node_count();
  report.events = engine.event_index();
  report.total_cost = engine.total_cost();
  report.max_meeting_entries = ctx.max_meeting_entries;
  report.tokens_created = ctx.tokens_created;
  report.trace_lines = engine.trace_lines();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    SglAgentReport ar;
    ar.label = agents[i].label;
    ar.final_role = logics[i]->role();
    ar.output = logics[i]->has_output();
    if (ar.output) ar.outputs = logics[i]->outputs();
    ar.cost_total = engine.agent(static_cast<std::int32_t>(i)).cost;
    ar.cost_traveller = logics[i]->cost_traveller();
    ar.cost_est = logics[i]->cost_est();
    ar.cost_phase2 = logics[i]->cost_phase2();
    ar.cost_dfs = logics[i]->cost_dfs();
    ar.phase2_budget_hit = logics[i]->phase2_budget_hit();
    report.agents.push_back(std::move(ar));
  }
  return report;
}

bool check_sgl_report(const SglRunReport& report,
                      const std::vector<SglAgentConfig>& agents, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!report.all_output) return fail("not every agent produced an output");
  if (report.max_meeting_entries > agents.size())
    return fail("a meeting exchanged more labels than the team size");
  for (const SglAgentReport& ar : report.agents) {
    ProblemOutputs want = expected_outputs(agents, ar.label);
    if (ar.outputs.team_size != want.team_size)
      return fail("wrong team size for label " + std::to_string(ar.label));
    if (ar.outputs.leader != want.leader)
      return fail("wrong leader for label " + std::to_string(ar.label));
    if (ar.outputs.new_name != want.new_name)
      return fail("wrong new name for label " + std::to_string(ar.label));
    if (ar.outputs.gossip != want.gossip)
      return fail("wrong gossip set for label " + std::to_string(ar.label));
  }
  // Renaming across agents must be a bijection onto 1..k.
  std::vector<char> taken(agents.size() + 1, 0);
  for (const SglAgentReport& ar : report.agents) {
    if (ar.outputs.new_name < 1 || ar.outputs.new_name > agents.size())
      return fail("new name out of range");
    if (taken[ar.outputs.new_name]) return fail("duplicate new name");
    taken[ar.outputs.new_name] = 1;
  }
  return true;
}

std::string SglRunReport::to_json() const {
  nlohmann::ordered_json j;
  j["all_output"] = all_output;
  j["events"] = events;
  j["total_cost"] = total_cost;
  j["tokens_created"] = tokens_created;
  j["max_meeting_entries"] = max_meeting_entries;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  std::uint64_t min_label = UINT64_MAX;
  for (const SglAgentReport& a : agents) {
    min_label = std::min(min_label, a.label);
    nlohmann::ordered_json e;
    e["label"] = a.label;
    e["role"] = sgl_role_name(a.final_role);
    e["output"] = a.output;
    if (a.output) {
      e["team_size"] = a.outputs.team_size;
      e["leader"] = a.outputs.leader;
      e["new_name"] = a.outputs.new_name;
      e["gossip"] = a.outputs.gossip;
    }
    e["cost"] = {{"total", a.cost_total},
                 {"traveller", a.cost_traveller},
                 {"est", a.cost_est},
                 {"phase2", a.cost_phase2},
                 {"dfs", a.cost_dfs}};
    arr.push_back(std::move(e));
  }
  j["agents"] = std::move(arr);
  j["polynomial_witness"] = {{"n", graph_size},
                             {"min_label_length", binary_length(min_label)},
                             {"total_cost", total_cost}};
  return j.dump();
}

}  // namespace rvsim

namespace rvsim {

SglSweepResult sweep_sgl(const GraphCorpus& corpus,
                         std::shared_ptr<const UxsProvider> provider,
                         const SglSweepConfig& config) {
  struct Task {
    const CorpusEntry* entry;
    std::vector<SglAgentConfig> agents;
    std::uint32_t placement;
    std::string scheduler;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const CorpusEntry& e : corpus.entries) {
    std::int32_t n = e.graph.node_count();
    if (n > config.max_nodes || n < 2) continue;
    for (std::int32_t k = 2; k <= std::min(config.max_team, n); ++k) {
      for (std::uint32_t pl = 0; pl < config.placements; ++pl) {
        // Deterministic placement and label assignment per tuple.
        SplitMix64 rng(derive_seed(config.placement_seed, fnv1a64(e.tag),
                                   static_cast<std::uint64_t>(k), pl));
        std::vector<std::int32_t> nodes(static_cast<std::size_t>(n));
        for (std::int32_t v = 0; v < n; ++v) nodes[static_cast<std::size_t>(v)] = v;
        for (std::size_t i = nodes.size(); i > 1; --i) {
          std::size_t j = static_cast<std::size_t>(rng.next_below(i));
          std::swap(nodes[i - 1], nodes[j]);
        }
        std::vector<SglAgentConfig> agents;
        std::vector<char> used_label(64, 0);
        for (std::int32_t a = 0; a < k; ++a) {
          std::uint64_t label;
          do {
            label = 1 + rng.next_below(40);
          } while (used_label[label]);
          used_label[label] = 1;
          agents.push_back(SglAgentConfig{label, nodes[static_cast<std::size_t>(a)],
                                          "val-" + std::to_string(label)});
        }
        for (const std::string& sched : config.schedulers) {
          if (sched == "random") {
            for (std::uint32_t seed = 0; seed < config.random_seeds; ++seed)
              tasks.push_back(Task{&e, agents, pl, sched, seed});
          } else {
            tasks.push_back(Task{&e, agents, pl, sched, 0});
          }
        }
      }
    }
  }

  SglSweepResult result;
  result.rows.resize(tasks.size());
  parallel_for_index(tasks.size(), config.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    auto sched = make_scheduler(t.scheduler, t.seed);
    SglConfig cfg;
    cfg.est_max_n = t.entry->graph.node_count() + 1;
    cfg.event_cap = config.event_cap;
    SglRunReport rep = run_sgl(t.entry->graph, t.agents, *sched, provider, cfg);
    SglSweepRow row;
    row.graph_tag = t.entry->tag;
    row.n = t.entry->graph.node_count();
    row.team = static_cast<std::int32_t>(t.agents.size());
    row.placement = t.placement;
    row.scheduler = t.scheduler;
    row.seed = t.seed;
    std::string why;
    row.ok = check_sgl_report(rep, t.agents, &why);
    if (!row.ok) row.failure = why;
    row.total_cost = rep.total_cost;
    std::uint64_t min_label = UINT64_MAX;
    for (const SglAgentConfig& a : t.agents) min_label = std::min(min_label, a.label);
    row.min_label_length = binary_length(min_label);
    result.rows[ti] = std::move(row);
  });
  for (const SglSweepRow& row : result.rows) {
    if (row.ok) {
      ++result.ok;
    } else {
      ++result.failed;
    }
  }
  return result;
}

std::string sgl_sweep_tsv_header() {
  return "graph_id\tn\tk\tplacement\tscheduler\tseed\tok\ttotal_cost\tmin_label_"
         "length\tfailure\n";
}

std::string sgl_sweep_tsv_row(const SglSweepRow& r) {
  std::ostringstream out;
  out << r.graph_tag << "\t" << r.n << "\t" << r.team << "\t" << r.placement << "\t"
      << r.scheduler << "\t" << r.seed << "\t" << (r.ok ? 1 : 0) << "\t"
      << r.total_cost << "\t" << r.min_label_length << "\t" << r.failure << "\n";
  return out.str();
}

}  // namespace rvsim
