#include <doctest.h>

#include "rvsim/behaviors.hpp"
#include "rvsim/corpus.hpp"
#include "rvsim/engine.hpp"
#include "rvsim/schedulers.hpp"

using namespace rvsim;

namespace {

/// Walks a fixed port sequence, one port per traversal.
class FixedRouteBehavior : public AgentBehavior {
 public:
  explicit FixedRouteBehavior(std::vector<std::int32_t> ports)
      : ports_(std::move(ports)) {}
  void on_wake(std::int32_t, Engine&, std::int32_t) override {}
  std::optional<std::int32_t> desired_exit(std::int32_t, Engine&, std::int32_t) override {
    if (next_ >= ports_.size()) return std::nullopt;
    return ports_[next_];
  }
  void on_traversal_complete(std::int32_t, std::int32_t, Engine&, std::int32_t) override {
    ++next_;
  }

 private:
  std::vector<std::int32_t> ports_;
  std::size_t next_ = 0;
};

struct MeetingLog : MeetingPolicy {
  std::vector<MeetingEvent> meetings;
  void on_meeting(const MeetingEvent& m, Engine&) override { meetings.push_back(m); }
};

}  // namespace

TEST_CASE("sweep meets a stationary in-edge agent by interval containment") {
  // Stationary agent frozen at canonical 2/5; mover sweeps canonical
  // 7/10 -> 1/5, whose closed interval contains 2/5.
  PortLabeledGraph g = make_path(2);
  Engine eng(g, EngineConfig{});
  MeetingLog log;
  eng.set_policy(&log);
  EdgeRef e = g.edge_from(0, 0);
  eng.add_frozen_agent(99, e, Fraction(2, 5));
  FixedRouteBehavior route({0});
  std::int32_t mover = eng.add_agent(1, 0, &route);

  eng.advance(Decision::wake(mover));
  eng.advance(Decision::move(mover, Fraction(7, 10)));
  CHECK(log.meetings.size() == 1);  // passes 2/5 on the way to 7/10
  log.meetings.clear();
  eng.advance(Decision::move(mover, Fraction(1, 5)));
  REQUIRE(log.meetings.size() == 1);
  CHECK_FALSE(log.meetings[0].point.is_node);
  CHECK(log.meetings[0].point.coord == Fraction(2, 5));
}

TEST_CASE("full sweep with nobody around costs one traversal and meets no one") {
  PortLabeledGraph g = make_path(3);
  Engine eng(g, EngineConfig{});
  MeetingLog log;
  eng.set_policy(&log);
  FixedRouteBehavior route({0});
  std::int32_t mover = eng.add_agent(1, 0, &route);
  eng.advance(Decision::wake(mover));
  eng.advance(Decision::move(mover, Fraction::one()));
  CHECK(log.meetings.empty());
  CHECK(eng.agent(mover).cost == 1);
  CHECK(eng.agent(mover).node == 1);
}

TEST_CASE("wake co-location emits a meeting and arrival wakes dormant agents") {
  PortLabeledGraph g = make_path(2);
  EngineConfig cfg;
  cfg.require_distinct_starts = true;
  Engine eng(g, cfg);
  MeetingLog log;
  eng.set_policy(&log);
  FixedRouteBehavior r0({0});
  FixedRouteBehavior r1({0});
  std::int32_t a = eng.add_agent(1, 0, &r0);
  std::int32_t b = eng.add_agent(2, 1, &r1);
  eng.advance(Decision::wake(a));
  // a crosses to node 1 where b is dormant: b wakes, meeting emitted.
  const EngineEvent& ev = eng.advance(Decision::move(a, Fraction::one()));
  CHECK(ev.woken == std::vector<std::int32_t>{b});
  REQUIRE(log.meetings.size() == 1);
  CHECK(log.meetings[0].point.is_node);
  CHECK(log.meetings[0].point.node == 1);
  CHECK(log.meetings[0].agents == std::vector<std::int32_t>{a, b});
}

TEST_CASE("distinct start enforcement") {
  PortLabeledGraph g = make_path(2);
  Engine eng(g, EngineConfig{});
  FixedRouteBehavior r({0});
  eng.add_agent(1, 0, &r);
  CHECK_THROWS(eng.add_agent(2, 0, &r));
}

TEST_CASE("move on a halted agent is rejected") {
  PortLabeledGraph g = make_path(2);
  Engine eng(g, EngineConfig{});
  FixedRouteBehavior r({0});
  std::int32_t a = eng.add_agent(1, 0, &r);
  eng.advance(Decision::wake(a));
  eng.halt_agent(a);
  CHECK_THROWS_AS(eng.advance(Decision::move(a, Fraction::one())),
                  std::logic_error);
}

TEST_CASE("partial move budget forces completion") {
  PortLabeledGraph g = make_path(2);
  EngineConfig cfg;
  cfg.move_budget = 3;
  Engine eng(g, cfg);
  FixedRouteBehavior r({0});
  std::int32_t a = eng.add_agent(1, 0, &r);
  eng.advance(Decision::wake(a));
  for (int i = 1; i <= 3; ++i)
    eng.advance(Decision::move(a, Fraction(1, 8)));
  bool forced = false;
  Decision d = eng.enforce_liveness(Decision::move(a, Fraction(1, 4)), forced);
  CHECK(forced);
  CHECK(d.target.is_one());
}

TEST_CASE("dormant agents are force-woken within the wake budget") {
  PortLabeledGraph g = make_path(3);
  EngineConfig cfg;
  cfg.wake_budget = 4;
  Engine eng(g, cfg);
  FixedRouteBehavior r0({0});
  FixedRouteBehavior r1({0});
  eng.add_agent(1, 0, &r0);
  std::int32_t b = eng.add_agent(2, 2, &r1);
  eng.advance(Decision::wake(0));
  for (int i = 0; i < 3; ++i) eng.advance(Decision::move(0, Fraction(1, 8)));
  // Event index is now 4 >= wake_budget, b still dormant.
  bool forced = false;
  Decision d = eng.enforce_liveness(Decision::move(0, Fraction(1, 2)), forced);
  CHECK(forced);
  CHECK(d.kind == Decision::Kind::Wake);
  CHECK(d.agent == b);
}

TEST_CASE("cost conservation under a scheduler run") {
  PortLabeledGraph g = make_cycle(4, true);
  EngineConfig cfg;
  cfg.event_cap = 500;
  cfg.record_trace = true;
  Engine eng(g, cfg);
  auto lin = toy_length_function(ToyShape::Linear);
  ProgramBehavior b0([lin] { return RouteProgram::for_expr(TrajExpr::named(TrajForm::X, 3), lin); },
                     ProgramBehavior::Mode::Loop);
  ProgramBehavior b1([lin] { return RouteProgram::for_expr(TrajExpr::named(TrajForm::X, 2), lin); },
                     ProgramBehavior::Mode::Loop);
  std::int32_t a0 = eng.add_agent(1, 0, &b0);
  std::int32_t a1 = eng.add_agent(2, 2, &b1);
  RandomScheduler sched(12345);
  eng.run(sched, [] { return false; });
  std::uint64_t completed0 = 0;
  std::uint64_t completed1 = 0;
  for (const EngineEvent& ev : eng.events()) {
    if (ev.completed && ev.decision.agent == a0) ++completed0;
    if (ev.completed && ev.decision.agent == a1) ++completed1;
  }
  CHECK(eng.agent(a0).cost == completed0);
  CHECK(eng.agent(a1).cost == completed1);
  CHECK(eng.agent(a0).cost + eng.agent(a1).cost == eng.total_cost());
}

TEST_CASE("liveness: no traversal persists past the stall budget") {
  PortLabeledGraph g = make_path(3);
  EngineConfig cfg;
  cfg.stall_budget = 5;
  cfg.event_cap = 100;
  Engine eng(g, cfg);
  FixedRouteBehavior r0({0});
  FixedRouteBehavior r1({0, 0, 0, 0, 0, 0, 0, 0});
  std::int32_t a = eng.add_agent(1, 0, &r0);
  std::int32_t b = eng.add_agent(2, 2, &r1);
  eng.advance(Decision::wake(a));
  eng.advance(Decision::wake(b));
  eng.advance(Decision::move(a, Fraction(1, 2)));  // a stuck mid-edge
  // A scheduler that only ever touches b; the engine must rescue a.
  for (int i = 0; i < 8; ++i) {
    bool forced = false;
    Decision d = eng.enforce_liveness(Decision::move(b, Fraction(1, 8)), forced);
    eng.advance(d, forced);
    if (d.agent == a) {
      CHECK(forced);
      CHECK(d.kind == Decision::Kind::Move);
      CHECK(d.target.is_one());
      CHECK_FALSE(eng.agent(a).traversal.has_value());
      return;
    }
  }
  FAIL("stalled traversal was never forced to complete");
}

TEST_CASE("round robin alternates full moves") {
  PortLabeledGraph g = make_path(3);
  EngineConfig cfg;
  cfg.event_cap = 10;
  cfg.record_trace = true;
  Engine eng(g, cfg);
  FixedRouteBehavior r0({0, 0, 0, 0});
  FixedRouteBehavior r1({0, 0, 0, 0});
  eng.add_agent(1, 0, &r0);
  eng.add_agent(2, 2, &r1);
  RoundRobinScheduler sched;
  eng.run(sched, [] { return false; });
  const auto& evs = eng.events();
  REQUIRE(evs.size() >= 4);
  CHECK(evs[0].decision.kind == Decision::Kind::Wake);
  CHECK(evs[0].decision.agent == 0);
  CHECK(evs[1].decision.kind == Decision::Kind::Wake);
  CHECK(evs[1].decision.agent == 1);
  CHECK(evs[2].decision.agent == 0);
  CHECK(evs[2].completed);
  CHECK(evs[3].decision.agent == 1);
}

TEST_CASE("random scheduler is reproducible") {
  auto run_events = [](std::uint64_t seed) {
    PortLabeledGraph g = make_cycle(3, true);
    EngineConfig cfg;
    cfg.event_cap = 60;
    cfg.record_trace = true;
    Engine eng(g, cfg);
    auto lin = toy_length_function(ToyShape::Linear);
    ProgramBehavior b0([lin] { return RouteProgram::for_expr(TrajExpr::named(TrajForm::X, 2), lin); },
                       ProgramBehavior::Mode::Loop);
    ProgramBehavior b1([lin] { return RouteProgram::for_expr(TrajExpr::named(TrajForm::Q, 2), lin); },
                       ProgramBehavior::Mode::Loop);
    eng.add_agent(1, 0, &b0);
    eng.add_agent(2, 1, &b1);
    RandomScheduler sched(seed);
    eng.run(sched, [] { return false; });
    std::vector<std::pair<std::int32_t, std::string>> sig;
    for (const EngineEvent& ev : eng.events())
      sig.emplace_back(ev.decision.agent, ev.decision.kind == Decision::Kind::Wake
                                              ? "w"
                                              : ev.to.to_string());
    return sig;
  };
  CHECK(run_events(7) == run_events(7));
  CHECK(run_events(7) != run_events(8));
}

TEST_CASE("zero event cap yields a nonterminated run") {
  PortLabeledGraph g = make_path(2);
  EngineConfig cfg;
  cfg.event_cap = 0;
  Engine eng(g, cfg);
  FixedRouteBehavior r0({0});
  FixedRouteBehavior r1({0});
  eng.add_agent(1, 0, &r0);
  eng.add_agent(2, 1, &r1);
  RoundRobinScheduler sched;
  RunEnd end = eng.run(sched, [] { return false; });
  CHECK(end == RunEnd::EventCap);
  CHECK(eng.event_index() == 0);
}
