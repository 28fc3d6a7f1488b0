#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rvsim/engine.hpp"
#include "rvsim/prng.hpp"

namespace rvsim {

/// Alternates full-edge moves over agents in index order; wakes dormant
/// agents when their turn comes up.
class RoundRobinScheduler : public Scheduler {
 public:
  std::optional<Decision> decide(Engine& engine) override;
  std::string name() const override { return "round_robin"; }

 private:
  std::int32_t cursor_ = 0;
};

/// Uniformly random choice among wakes and moves with target fractions in
/// eighths; reproducible from the seed.
class RandomScheduler : public Scheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed) : rng_(seed), seed_(seed) {}
  std::optional<Decision> decide(Engine& engine) override;
  std::string name() const override { return "random"; }
  std::uint64_t seed() const { return seed_; }

 private:
  SplitMix64 rng_;
  std::uint64_t seed_;
};

/// Greedy adversary: scores candidate decisions by the number of agents the
/// sweep would touch and postpones meetings as long as the liveness budgets
/// allow (lookahead 1). Deterministic, no randomness.
class StalkerAvoiderScheduler : public Scheduler {
 public:
  std::optional<Decision> decide(Engine& engine) override;
  std::string name() const override { return "stalker_avoider"; }
};

/// Feeds back a recorded decision sequence; the engine's liveness overrides
/// are idempotent on already-effective decisions, so a replayed run
/// reproduces the original trace byte for byte.
class ReplayScheduler : public Scheduler {
 public:
  explicit ReplayScheduler(std::vector<Decision> decisions)
      : decisions_(std::move(decisions)) {}
  std::optional<Decision> decide(Engine&) override {
    if (cursor_ >= decisions_.size()) return std::nullopt;
    return decisions_[cursor_++];
  }
  std::string name() const override { return "replay"; }

 private:
  std::vector<Decision> decisions_;
  std::size_t cursor_ = 0;
};

/// Factory over the built-in adversary family. `spec` is "round_robin",
/// "stalker_avoider" or "random" (seeded separately).
std::unique_ptr<Scheduler> make_scheduler(const std::string& spec, std::uint64_t seed);

}  // namespace rvsim
