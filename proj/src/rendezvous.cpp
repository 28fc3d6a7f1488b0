#include "rvsim/rendezvous.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "rvsim/modified_label.hpp"
#include "rvsim/route_program.hpp"

namespace rvsim {

namespace {

/// Stops the run at the first meeting and records where it happened.
class FirstMeetingPolicy : public MeetingPolicy {
 public:
  void on_meeting(const MeetingEvent& m, Engine&) override {
    if (met_) return;
    met_ = true;
    location_ = m.point;
    event_ = m.event_index;
  }
  bool met() const { return met_; }
  const SpacePoint& location() const { return location_; }
  std::uint64_t event() const { return event_; }

 private:
  bool met_ = false;
  SpacePoint location_;
  std::uint64_t event_ = 0;
};

}  // namespace

RendezvousOutcome run_rendezvous(const PortLabeledGraph& graph, std::uint64_t label1,
                                 std::uint64_t label2, std::int32_t start1,
                                 std::int32_t start2, Scheduler& scheduler,
                                 std::shared_ptr<const UxsProvider> provider,
                                 std::uint64_t event_cap, const BigUint* pi_bound,
                                 const EngineConfig* engine_cfg) {
  if (label1 == label2)
    throw std::invalid_argument("rendezvous requires distinct labels");
  if (start1 == start2)
    throw std::invalid_argument("rendezvous requires distinct starting nodes");

  EngineConfig cfg = engine_cfg ? *engine_cfg : EngineConfig{};
  cfg.event_cap = event_cap;
  Engine engine(graph, cfg);

  ModifiedLabel m1 = modified_label(label1);
  ModifiedLabel m2 = modified_label(label2);
  ProgramBehavior b1([m1, provider] { return RouteProgram::rv_algorithm(m1, provider); },
                     ProgramBehavior::Mode::Once);
  ProgramBehavior b2([m2, provider] { return RouteProgram::rv_algorithm(m2, provider); },
                     ProgramBehavior::Mode::Once);
  std::int32_t a = engine.add_agent(label1, start1, &b1);
  std::int32_t b = engine.add_agent(label2, start2, &b2);

  FirstMeetingPolicy policy;
  engine.set_policy(&policy);
  RunEnd end = engine.run(scheduler, [&] { return policy.met(); });

  RendezvousOutcome out;
  out.met = policy.met();
  out.location = policy.location();
  out.cost_a = engine.agent(a).cost;
  out.cost_b = engine.agent(b).cost;
  out.total_cost = out.cost_a + out.cost_b;
  out.annotation_a = b1.annotation();
  out.annotation_b = b2.annotation();
  out.end = end;
  out.events = engine.event_index();
  out.trace_lines = engine.trace_lines();

  BigUint pi_local;
  const BigUint* pi = pi_bound;
  if (!pi) {
    pi_local = compute_pi(static_cast<std::uint64_t>(graph.node_count()),
                          std::min(binary_length(label1), binary_length(label2)),
                          provider);
    pi = &pi_local;
  }
  out.bound_exceeded = BigUint(out.cost_a) > *pi || BigUint(out.cost_b) > *pi;
  return out;
}

namespace {

// Agent a of the tunnel scenario: walks a fixed port path to the anchor node,
// then follows one entire X(m, anchor) -- the lemma quantifies both agents
// over the same anchored trajectory.
class ApproachThenProgram : public AgentBehavior {
 public:
  ApproachThenProgram(std::vector<std::int32_t> approach,
                      ProgramBehavior::ProgramFactory factory)
      : approach_(std::move(approach)), factory_(std::move(factory)) {}

  bool exhausted() const { return exhausted_; }

  void on_wake(std::int32_t, Engine&, std::int32_t) override {}

  std::optional<std::int32_t> desired_exit(std::int32_t degree, Engine&,
                                           std::int32_t) override {
    if (pending_) return pending_;
    if (cursor_ < approach_.size()) {
      pending_ = approach_[cursor_];
      return pending_;
    }
    if (!program_) program_.emplace(factory_());
    if (program_->done()) {
      exhausted_ = true;
      return std::nullopt;
    }
    pending_ = program_->next_exit(degree);
    return pending_;
  }

  void on_traversal_complete(std::int32_t entry_port, std::int32_t, Engine&,
                             std::int32_t) override {
    pending_.reset();
    if (cursor_ < approach_.size()) {
      ++cursor_;
      return;
    }
    program_->arrived(entry_port);
    if (program_->done()) exhausted_ = true;
  }

 private:
  std::vector<std::int32_t> approach_;
  ProgramBehavior::ProgramFactory factory_;
  std::size_t cursor_ = 0;
  std::optional<RouteProgram> program_;
  std::optional<std::int32_t> pending_;
  bool exhausted_ = false;
};

// Deterministic shortest port path (BFS, smallest ports first).
std::vector<std::int32_t> shortest_port_path(const PortLabeledGraph& g,
                                             std::int32_t from, std::int32_t to) {
  std::vector<std::int32_t> parent(static_cast<std::size_t>(g.node_count()), -2);
  std::vector<std::int32_t> via(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<std::int32_t> queue{from};
  parent[static_cast<std::size_t>(from)] = -1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::int32_t u = queue[qi];
    for (std::int32_t p = 0; p < g.degree(u); ++p) {
      std::int32_t w = g.step(u, p).node;
      if (parent[static_cast<std::size_t>(w)] != -2) continue;
      parent[static_cast<std::size_t>(w)] = u;
      via[static_cast<std::size_t>(w)] = p;
      queue.push_back(w);
    }
  }
  std::vector<std::int32_t> path;
  for (std::int32_t x = to; parent[static_cast<std::size_t>(x)] != -1;
       x = parent[static_cast<std::size_t>(x)])
    path.push_back(via[static_cast<std::size_t>(x)]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

bool tunnel_scenario(const PortLabeledGraph& graph, std::uint64_t m, std::int32_t v,
                     std::int32_t a_start, Scheduler& scheduler,
                     std::shared_ptr<const UxsProvider> provider,
                     std::uint64_t event_cap, const EngineConfig* engine_cfg,
                     bool scripted_wakes, std::vector<std::string>* trace_out) {
  if (v == a_start) throw std::invalid_argument("tunnel scenario needs distinct starts");
  EngineConfig cfg = engine_cfg ? *engine_cfg : EngineConfig{};
  cfg.event_cap = event_cap;
  Engine engine(graph, cfg);

  TrajExpr x = TrajExpr::named(TrajForm::X, m);
  ProgramBehavior looper([x, provider] { return RouteProgram::for_expr(x, provider); },
                         ProgramBehavior::Mode::Loop);
  ApproachThenProgram oneshot(
      shortest_port_path(graph, a_start, v),
      [x, provider] { return RouteProgram::for_expr(x, provider); });
  std::int32_t b = engine.add_agent(2, v, &looper);
  std::int32_t a = engine.add_agent(1, a_start, &oneshot);

  FirstMeetingPolicy policy;
  engine.set_policy(&policy);
  // The window: b repeats X(m,v) from the start of the run; a then walks one
  // entire X(m, a_start) inside it. Replays drive the wakes themselves.
  if (scripted_wakes) {
    engine.advance(Decision::wake(b));
    if (engine.agent(a).lifecycle == Lifecycle::Dormant)
      engine.advance(Decision::wake(a));
  }
  engine.run(scheduler, [&] { return policy.met() || oneshot.exhausted(); });
  if (trace_out) *trace_out = engine.trace_lines();
  return policy.met();
}

const char* probe_outcome_name(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::Violation: return "violation";
    case ProbeOutcome::PassChecked: return "pass-checked";
    case ProbeOutcome::PassVacuous: return "pass-vacuous";
    case ProbeOutcome::Unreached: return "unreached";
  }
  return "?";
}

void ProbeReport::add(const std::vector<LemmaFinding>& findings) {
  for (const LemmaFinding& f : findings) {
    switch (f.outcome) {
      case ProbeOutcome::Violation:
        ++violations;
        violation_details.push_back(f.lemma + ": " + f.detail);
        break;
      case ProbeOutcome::PassChecked: ++pass_checked; break;
      case ProbeOutcome::PassVacuous: ++pass_vacuous; break;
      case ProbeOutcome::Unreached: ++unreached; break;
    }
  }
}

namespace {

struct ElementIndex {
  // Completion events keyed by (piece, bit, kind).
  std::map<std::tuple<std::uint64_t, std::uint32_t, int>, std::uint64_t> events;
  std::size_t s = 0;

  void build(const std::vector<ElementCompletion>& log, std::size_t bits) {
    s = bits;
    for (const ElementCompletion& e : log)
      events.emplace(std::make_tuple(e.element.piece, e.element.bit_index,
                                     static_cast<int>(e.element.kind)),
                     e.event_index);
  }
  std::optional<std::uint64_t> fence(std::uint64_t k) const {
    return find(k, static_cast<std::uint32_t>(std::min<std::uint64_t>(k, s)),
                ElemKind::Fence);
  }
  std::optional<std::uint64_t> piece_done(std::uint64_t k) const {
    // A piece ends with the second atom of its last segment.
    return find(k, static_cast<std::uint32_t>(std::min<std::uint64_t>(k, s)),
                ElemKind::AtomSecond);
  }
  std::optional<std::uint64_t> find(std::uint64_t k, std::uint32_t bit,
                                    ElemKind kind) const {
    auto it = events.find(std::make_tuple(k, bit, static_cast<int>(kind)));
    if (it == events.end()) return std::nullopt;
    return it->second;
  }
};

// Global plan position of an element, for window-containment reasoning.
std::int64_t plan_position(std::uint64_t piece, std::uint32_t bit, ElemKind kind,
                           std::size_t s) {
  std::int64_t pos = 0;
  for (std::uint64_t k = 1; k < piece; ++k)
    pos += 3 * static_cast<std::int64_t>(std::min<std::uint64_t>(k, s));
  pos += 3 * (static_cast<std::int64_t>(bit) - 1);
  switch (kind) {
    case ElemKind::AtomFirst: return pos;
    case ElemKind::AtomSecond: return pos + 1;
    case ElemKind::Border:
    case ElemKind::Fence: return pos + 2;
    default: return -1;
  }
}

ProbeOutcome conditional_outcome(const ProbeRunData& d,
                                 std::optional<std::uint64_t> checkpoint) {
  if (!checkpoint) {
    return d.meeting_event ? ProbeOutcome::PassVacuous : ProbeOutcome::Unreached;
  }
  if (d.meeting_event && *d.meeting_event <= *checkpoint)
    return ProbeOutcome::PassVacuous;
  return ProbeOutcome::PassChecked;  // caller refines to Violation if the claim fails
}

// Plan index of the element an agent is inside just after `at_event`:
// elements complete in plan order, so it is the number of completions so far.
std::int64_t in_progress_position(const std::vector<ElementCompletion>& log,
                                  std::uint64_t at_event) {
  std::int64_t count = 0;
  for (const ElementCompletion& e : log)
    if (e.event_index <= at_event) ++count;
  return count;
}

// Index j of agent `a` per the synchronization analysis: during the interval
// in which b follows its 2(n+l)th fence, a's trajectory stays within
// [last atom of piece j, fence j, first atom of piece j+1] for one fixed
// j in [n+l+1, 2(n+l)].
struct IndexJResult {
  ProbeOutcome outcome;
  std::uint64_t j = 0;
  int agent_b = -1;
  std::uint64_t fence_end = 0;
  std::string detail;
};

IndexJResult index_of_other_agent(const ProbeRunData& d, const ElementIndex idx[2],
                                  const std::vector<ElementCompletion> logs[2]) {
  const std::uint64_t target = 2 * (d.n + d.l);
  std::optional<std::uint64_t> fb0 = idx[0].fence(target);
  std::optional<std::uint64_t> fb1 = idx[1].fence(target);
  IndexJResult r;
  int b;
  if (fb0 && (!fb1 || *fb0 <= *fb1)) {
    b = 0;
  } else if (fb1) {
    b = 1;
  } else {
    r.outcome = conditional_outcome(d, std::nullopt);
    return r;
  }
  const std::uint64_t fence_end = b == 0 ? *fb0 : *fb1;
  r.agent_b = b;
  r.fence_end = fence_end;
  ProbeOutcome base = conditional_outcome(d, fence_end);
  if (base == ProbeOutcome::PassVacuous) {
    r.outcome = base;
    return r;
  }
  const int a = 1 - b;
  const std::uint64_t window_start = idx[b].piece_done(target).value_or(0);
  std::int64_t pos_start = in_progress_position(logs[a], window_start);
  std::int64_t pos_end = in_progress_position(logs[a], fence_end);

  for (std::uint64_t j = d.n + d.l + 1; j <= target; ++j) {
    std::int64_t span_lo = plan_position(
        j, static_cast<std::uint32_t>(std::min<std::uint64_t>(j, idx[a].s)),
        ElemKind::AtomSecond, idx[a].s);
    std::int64_t span_hi = span_lo + 2;  // fence j, then first atom of piece j+1
    if (pos_start >= span_lo && pos_end <= span_hi) {
      r.outcome = ProbeOutcome::PassChecked;
      r.j = j;
      return r;
    }
  }
  r.outcome = ProbeOutcome::Violation;
  std::ostringstream msg;
  msg << "agent followed plan elements [" << pos_start << "," << pos_end
      << "] during the fence window; no admissible j in [" << d.n + d.l + 1 << ","
      << target << "]";
  r.detail = msg.str();
  return r;
}

}  // namespace

std::vector<LemmaFinding> evaluate_lemmas(const ProbeRunData& d,
                                          const std::string& lemma_id) {
  ElementIndex idx[2];
  idx[0].build(d.completions[0], d.bits[0]);
  idx[1].build(d.completions[1], d.bits[1]);
  std::vector<LemmaFinding> out;

  auto meeting_before = [&](std::uint64_t ev) {
    return d.meeting_event && *d.meeting_event <= ev;
  };

  if (lemma_id == "3.2") {
    // By the time one agent completes its (n+l+i)th fence, the other must
    // have completed its (i+1)th piece.
    for (std::uint64_t i = 1; i <= 3; ++i) {
      LemmaFinding f;
      f.lemma = "3.2/i=" + std::to_string(i);
      std::optional<std::uint64_t> cp;
      int who = -1;
      for (int agent = 0; agent < 2; ++agent) {
        auto ev = idx[agent].fence(d.n + d.l + i);
        if (ev && (!cp || *ev < *cp)) {
          cp = ev;
          who = agent;
        }
      }
      f.outcome = conditional_outcome(d, cp);
      if (f.outcome == ProbeOutcome::PassChecked) {
        auto other_piece = idx[1 - who].piece_done(i + 1);
        if (!other_piece || *other_piece > *cp) {
          f.outcome = ProbeOutcome::Violation;
          f.detail = "fence " + std::to_string(d.n + d.l + i) +
                     " completed before the other agent finished piece " +
                     std::to_string(i + 1);
        }
      }
      out.push_back(std::move(f));
    }
    return out;
  }

  if (lemma_id == "3.3") {
    LemmaFinding f;
    f.lemma = "3.3";
    IndexJResult r = index_of_other_agent(d, idx, d.completions);
    f.outcome = r.outcome;
    f.detail = r.detail;
    out.push_back(std::move(f));
    return out;
  }

  if (lemma_id == "3.4") {
    // By the time b completes its 2(n+l)th fence, a has completed the last
    // atom of its piece j.
    LemmaFinding f;
    f.lemma = "3.4";
    IndexJResult r = index_of_other_agent(d, idx, d.completions);
    if (r.outcome != ProbeOutcome::PassChecked) {
      f.outcome = r.outcome;
      f.detail = r.detail;
      out.push_back(std::move(f));
      return out;
    }
    auto last_atom = idx[1 - r.agent_b].find(
        r.j,
        static_cast<std::uint32_t>(std::min<std::uint64_t>(r.j, idx[1 - r.agent_b].s)),
        ElemKind::AtomSecond);
    f.outcome = ProbeOutcome::PassChecked;
    if (!last_atom || *last_atom > r.fence_end) {
      f.outcome = ProbeOutcome::Violation;
      f.detail = "last atom of piece j=" + std::to_string(r.j) +
                 " not completed by the fence checkpoint";
    }
    out.push_back(std::move(f));
    return out;
  }

  if (lemma_id == "3.5") {
    // By the time b completes the first atom of S_1(2(n+l)+1), a has
    // completed its jth fence.
    LemmaFinding f;
    f.lemma = "3.5";
    IndexJResult r = index_of_other_agent(d, idx, d.completions);
    if (r.outcome != ProbeOutcome::PassChecked) {
      f.outcome = r.outcome;
      f.detail = r.detail;
      out.push_back(std::move(f));
      return out;
    }
    const std::uint64_t next_piece = 2 * (d.n + d.l) + 1;
    const int b = r.agent_b;
    auto cp = idx[b].find(next_piece, 1, ElemKind::AtomFirst);
    ProbeOutcome base = conditional_outcome(d, cp);
    if (base != ProbeOutcome::PassChecked) {
      f.outcome = base;
      out.push_back(std::move(f));
      return out;
    }
    auto fj = idx[1 - b].fence(r.j);
    f.outcome = ProbeOutcome::PassChecked;
    if (!fj || *fj > *cp) {
      f.outcome = ProbeOutcome::Violation;
      f.detail = "fence j=" + std::to_string(r.j) + " not completed by checkpoint";
    }
    out.push_back(std::move(f));
    return out;
  }

  if (lemma_id == "properties") {
    // Interleaving properties of segments and borders once pieces reach
    // 2(n+l)+1, conditional on no meeting by the first completion of that
    // piece.
    const std::uint64_t big = 2 * (d.n + d.l) + 1;
    std::optional<std::uint64_t> t;
    for (int agent = 0; agent < 2; ++agent) {
      auto ev = idx[agent].piece_done(big);
      if (ev && (!t || *ev < *t)) t = ev;
    }
    IndexJResult r = index_of_other_agent(d, idx, d.completions);
    LemmaFinding f;
    f.lemma = "properties";
    if (r.outcome != ProbeOutcome::PassChecked) {
      f.outcome = r.outcome;
      out.push_back(std::move(f));
      return out;
    }
    ProbeOutcome base = conditional_outcome(d, t);
    if (base != ProbeOutcome::PassChecked) {
      f.outcome = base;
      out.push_back(std::move(f));
      return out;
    }
    const int b = r.agent_b;
    const int a = 1 - b;
    f.outcome = ProbeOutcome::PassChecked;
    const std::uint64_t limit_b = std::min<std::uint64_t>(big, idx[b].s);
    // Property 1: a completes S_i(j+1) before b completes K_{i,i+1}(2(n+l)+1).
    // Property 2: symmetric. Property 3/4: borders before next first atoms.
    std::uint64_t limit_a = std::min<std::uint64_t>(r.j + 1, idx[a].s);
    for (std::uint32_t i = 1; i < std::min<std::uint64_t>(limit_a, limit_b); ++i) {
      auto a_seg = idx[a].find(r.j + 1, i, ElemKind::AtomSecond);
      auto b_border = idx[b].find(big, i, ElemKind::Border);
      if (a_seg && b_border && !(*a_seg < *b_border) && !meeting_before(*b_border)) {
        f.outcome = ProbeOutcome::Violation;
        f.detail = "property 1 fails at i=" + std::to_string(i);
      }
      auto b_seg = idx[b].find(big, i, ElemKind::AtomSecond);
      auto a_border = idx[a].find(r.j + 1, i, ElemKind::Border);
      if (b_seg && a_border && !(*b_seg < *a_border) && !meeting_before(*a_border)) {
        f.outcome = ProbeOutcome::Violation;
        f.detail = "property 2 fails at i=" + std::to_string(i);
      }
      auto b_next_atom = idx[b].find(big, i + 1, ElemKind::AtomFirst);
      if (a_border && b_next_atom && !(*a_border < *b_next_atom) &&
          !meeting_before(*b_next_atom)) {
        f.outcome = ProbeOutcome::Violation;
        f.detail = "property 3 fails at i=" + std::to_string(i);
      }
      auto a_next_atom = idx[a].find(r.j + 1, i + 1, ElemKind::AtomFirst);
      if (b_border && a_next_atom && !(*b_border < *a_next_atom) &&
          !meeting_before(*a_next_atom)) {
        f.outcome = ProbeOutcome::Violation;
        f.detail = "property 4 fails at i=" + std::to_string(i);
      }
    }
    out.push_back(std::move(f));
    return out;
  }

  throw std::invalid_argument("unknown lemma id: " + lemma_id);
}

ProbeReport lemma_probe(const PortLabeledGraph& graph, std::uint64_t label1,
                        std::uint64_t label2, const std::string& lemma_id,
                        std::uint64_t seeds, std::shared_ptr<const UxsProvider> provider,
                        std::uint64_t event_cap) {
  ProbeReport report;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    EngineConfig cfg;
    cfg.event_cap = event_cap;
    Engine engine(graph, cfg);
    ModifiedLabel m1 = modified_label(label1);
    ModifiedLabel m2 = modified_label(label2);
    ProgramBehavior b1(
        [m1, provider] { return RouteProgram::rv_algorithm(m1, provider); },
        ProgramBehavior::Mode::Once);
    ProgramBehavior b2(
        [m2, provider] { return RouteProgram::rv_algorithm(m2, provider); },
        ProgramBehavior::Mode::Once);
    engine.add_agent(label1, 0, &b1);
    engine.add_agent(label2, 1 % graph.node_count(), &b2);
    FirstMeetingPolicy policy;
    engine.set_policy(&policy);
    RandomScheduler sched(derive_seed(seed, label1, label2, fnv1a64(lemma_id)));
    engine.run(sched, [&] { return policy.met(); });

    ProbeRunData data;
    data.n = static_cast<std::uint64_t>(graph.node_count());
    data.l = std::min(m1.size(), m2.size());
    if (policy.met()) data.meeting_event = policy.event();
    data.end_event = engine.event_index();
    data.bits[0] = m1.size();
    data.bits[1] = m2.size();
    data.completions[0] = b1.completions();
    data.completions[1] = b2.completions();
    report.add(evaluate_lemmas(data, lemma_id));
  }
  return report;
}

const BigUint& PiCache::get(std::uint64_t n, std::uint64_t m) {
  auto key = std::make_pair(n, m);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, compute_pi(n, m, provider_)).first->second;
}

std::string rv_sweep_tsv_header() {
  return "graph_id\tn\tL1\tL2\tscheduler\tseed\tmet\ttotal_cost\tpi_bound_exceeded\n";
}

std::string rv_sweep_tsv_row(const RvSweepRow& r) {
  std::ostringstream out;
  out << r.graph_tag << "\t" << r.n << "\t" << r.label1 << "\t" << r.label2 << "\t"
      << r.scheduler << "\t" << r.seed << "\t" << (r.met ? 1 : 0) << "\t"
      << r.total_cost << "\t" << (r.bound_exceeded ? 1 : 0) << "\n";
  return out.str();
}

RvSweepResult sweep_rendezvous(const GraphCorpus& corpus,
                               std::shared_ptr<const UxsProvider> provider,
                               const RvSweepConfig& config) {
  struct Task {
    const CorpusEntry* entry;
    std::int32_t s1, s2;
    std::uint64_t l1, l2;
    std::string scheduler;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const CorpusEntry& e : corpus.entries) {
    if (e.graph.node_count() > config.max_nodes) continue;
    std::int32_t n = e.graph.node_count();
    for (std::int32_t s1 = 0; s1 < n; ++s1) {
      for (std::int32_t s2 = 0; s2 < n; ++s2) {
        if (s1 == s2) continue;
        for (std::size_t i = 0; i < config.labels.size(); ++i) {
          for (std::size_t j = i + 1; j < config.labels.size(); ++j) {
            for (const std::string& sched : config.schedulers) {
              if (sched == "random") {
                for (std::uint32_t seed = 0; seed < config.random_seeds; ++seed)
                  tasks.push_back(Task{&e, s1, s2, config.labels[i], config.labels[j],
                                       sched, seed});
              } else {
                tasks.push_back(
                    Task{&e, s1, s2, config.labels[i], config.labels[j], sched, 0});
              }
            }
          }
        }
      }
    }
  }

  // Pi values per (n, m) resolved up front so workers share nothing mutable.
  std::map<std::pair<std::uint64_t, std::uint64_t>, BigUint> pis;
  for (const CorpusEntry& e : corpus.entries) {
    if (e.graph.node_count() > config.max_nodes) continue;
    for (std::size_t i = 0; i < config.labels.size(); ++i) {
      for (std::size_t j = i + 1; j < config.labels.size(); ++j) {
        std::uint64_t n = static_cast<std::uint64_t>(e.graph.node_count());
        std::uint64_t m = std::min(binary_length(config.labels[i]),
                                   binary_length(config.labels[j]));
        auto key = std::make_pair(n, m);
        if (!pis.count(key)) pis.emplace(key, compute_pi(n, m, provider));
      }
    }
  }

  RvSweepResult result;
  result.rows.resize(tasks.size());
  std::vector<std::uint64_t> events(tasks.size(), 0);
  parallel_for_index(tasks.size(), config.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    auto sched = make_scheduler(t.scheduler, t.seed);
    std::uint64_t n = static_cast<std::uint64_t>(t.entry->graph.node_count());
    std::uint64_t m = std::min(binary_length(t.l1), binary_length(t.l2));
    const BigUint& pi = pis.at(std::make_pair(n, m));
    RendezvousOutcome out = run_rendezvous(t.entry->graph, t.l1, t.l2, t.s1, t.s2,
                                           *sched, provider, config.event_cap, &pi);
    RvSweepRow row;
    row.graph_tag = t.entry->tag;
    row.n = t.entry->graph.node_count();
    row.label1 = t.l1;
    row.label2 = t.l2;
    row.scheduler = t.scheduler;
    row.seed = t.seed;
    row.met = out.met;
    row.total_cost = out.total_cost;
    row.bound_exceeded = out.bound_exceeded;
    result.rows[ti] = std::move(row);
    events[ti] = out.events;
  });
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const RvSweepRow& row = result.rows[i];
    if (row.met) {
      ++result.met;
      result.max_events_met = std::max(result.max_events_met, events[i]);
    } else {
      ++result.unmet;
    }
    if (row.bound_exceeded) ++result.bound_exceeded;
  }
  return result;
}

TunnelSweepResult sweep_tunnel(const GraphCorpus& corpus,
                               std::shared_ptr<const UxsProvider> provider,
                               const RvSweepConfig& config) {
  struct Task {
    const CorpusEntry* entry;
    std::int32_t anchor, a_start;
    std::string scheduler;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const CorpusEntry& e : corpus.entries) {
    if (e.graph.node_count() > config.max_nodes) continue;
    std::int32_t n = e.graph.node_count();
    for (std::int32_t v = 0; v < n; ++v) {
      for (std::int32_t a = 0; a < n; ++a) {
        if (a == v) continue;
        for (const std::string& sched : config.schedulers) {
          if (sched == "random") {
            for (std::uint32_t seed = 0; seed < config.random_seeds; ++seed)
              tasks.push_back(Task{&e, v, a, sched, seed});
          } else {
            tasks.push_back(Task{&e, v, a, sched, 0});
          }
        }
      }
    }
  }
  TunnelSweepResult result;
  result.runs = tasks.size();
  std::vector<char> met(tasks.size(), 0);
  parallel_for_index(tasks.size(), config.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    auto sched = make_scheduler(t.scheduler, t.seed);
    std::uint64_t m = static_cast<std::uint64_t>(t.entry->graph.node_count());
    met[ti] = tunnel_scenario(t.entry->graph, m, t.anchor, t.a_start, *sched, provider,
                              config.event_cap)
                  ? 1
                  : 0;
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (met[i]) {
      ++result.met;
    } else {
      std::ostringstream msg;
      msg << tasks[i].entry->tag << " anchor=" << tasks[i].anchor
          << " a_start=" << tasks[i].a_start << " " << tasks[i].scheduler << "/"
          << tasks[i].seed;
      result.failures.push_back(msg.str());
    }
  }
  return result;
}

void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rvsim
