#include "rvsim/schedulers.hpp"

#include <stdexcept>

namespace rvsim {

std::optional<Decision> RoundRobinScheduler::decide(Engine& engine) {
  const std::int32_t n = engine.agent_count();
  for (std::int32_t tried = 0; tried < n; ++tried) {
    std::int32_t i = cursor_;
    cursor_ = (cursor_ + 1) % n;
    const AgentState& a = engine.agent(i);
    if (a.lifecycle == Lifecycle::Dormant) return Decision::wake(i);
    if (engine.agent_movable(i)) return Decision::move(i, Fraction::one());
  }
  return std::nullopt;
}

std::optional<Decision> RandomScheduler::decide(Engine& engine) {
  struct Option {
    bool wake;
    std::int32_t agent;
  };
  std::vector<Option> options;
  for (std::int32_t i = 0; i < engine.agent_count(); ++i) {
    const AgentState& a = engine.agent(i);
    if (a.lifecycle == Lifecycle::Dormant) {
      options.push_back({true, i});
    } else if (engine.agent_movable(i)) {
      options.push_back({false, i});
    }
  }
  if (options.empty()) return std::nullopt;
  const Option& pick = options[static_cast<std::size_t>(rng_.next_below(options.size()))];
  if (pick.wake) return Decision::wake(pick.agent);
  // Target fraction j/8, j uniform in 1..8.
  std::int64_t j = static_cast<std::int64_t>(rng_.next_below(8)) + 1;
  return Decision::move(pick.agent, Fraction(j, 8));
}

std::optional<Decision> StalkerAvoiderScheduler::decide(Engine& engine) {
  struct Candidate {
    Decision decision;
    std::size_t touches;
    int preference;  // lower preferred among equal touches
  };
  std::vector<Candidate> candidates;

  for (std::int32_t i = 0; i < engine.agent_count(); ++i) {
    const AgentState& a = engine.agent(i);
    if (a.lifecycle != Lifecycle::Active) continue;
    if (!engine.agent_movable(i)) continue;
    auto t = engine.preview_traversal(i);
    if (!t) continue;
    Fraction from = t->progress;
    bool budget_spent = a.partial_moves >= engine.config().move_budget;

    auto add = [&](Fraction target, int pref) {
      std::size_t touches = engine.agents_in_sweep(i, *t, from, target).size();
      candidates.push_back({Decision::move(i, target), touches, pref});
    };
    if (!budget_spent) {
      // Creep: cover an eighth of what remains, postponing arrival.
      Fraction creep(from.num * 8 + (from.den - from.num), from.den * 8);
      if (from < creep && creep < Fraction::one()) add(creep, 0);
      add(from, 1);  // stall in place
    }
    add(Fraction::one(), 2);
  }
  if (candidates.empty()) {
    // Nothing movable; wake the lowest dormant agent if any remain.
    for (std::int32_t i = 0; i < engine.agent_count(); ++i) {
      if (engine.agent(i).lifecycle == Lifecycle::Dormant) return Decision::wake(i);
    }
    return std::nullopt;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const Candidate& x = candidates[c];
    const Candidate& b = candidates[best];
    if (x.touches < b.touches || (x.touches == b.touches && x.preference < b.preference))
      best = c;
  }
  return candidates[best].decision;
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& spec, std::uint64_t seed) {
  if (spec == "round_robin") return std::make_unique<RoundRobinScheduler>();
  if (spec == "random") return std::make_unique<RandomScheduler>(seed);
  if (spec == "stalker_avoider") return std::make_unique<StalkerAvoiderScheduler>();
  throw std::invalid_argument("unknown scheduler: " + spec);
}

}  // namespace rvsim
