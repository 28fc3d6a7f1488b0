#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "rvsim/engine.hpp"
#include "rvsim/route_program.hpp"

namespace rvsim {

struct ElementCompletion {
  CompletedElement element;
  std::uint64_t event_index = 0;
};

/// Follows a RouteProgram; optionally restarts it forever (closed trajectories
/// loop at their anchor node). Keeps a completion log so harnesses can track
/// pieces, fences, atoms and borders against engine time.
class ProgramBehavior : public AgentBehavior {
 public:
  using ProgramFactory = std::function<RouteProgram()>;
  enum class Mode { Once, Loop };

  ProgramBehavior(ProgramFactory factory, Mode mode)
      : factory_(std::move(factory)), mode_(mode) {}

  void on_wake(std::int32_t, Engine&, std::int32_t) override {
    program_.emplace(factory_());
  }

  std::optional<std::int32_t> desired_exit(std::int32_t degree, Engine&,
                                           std::int32_t) override {
    if (pending_) return pending_;
    if (!program_ || exhausted_) return std::nullopt;
    if (program_->done()) {
      if (mode_ == Mode::Once) {
        exhausted_ = true;
        return std::nullopt;
      }
      program_.emplace(factory_());
    }
    pending_ = program_->next_exit(degree);
    return pending_;
  }

  void on_traversal_complete(std::int32_t entry_port, std::int32_t, Engine& engine,
                             std::int32_t) override {
    program_->arrived(entry_port);
    pending_.reset();
    ++traversals_;
    if (program_->has_completed_elements()) {
      for (CompletedElement e : program_->drain_completed_elements())
        completions_.push_back(ElementCompletion{e, engine.event_index()});
    }
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t traversals() const { return traversals_; }
  const Annotation& annotation() const {
    static const Annotation none{};
    return program_ ? program_->last_annotation() : none;
  }
  const std::vector<ElementCompletion>& completions() const { return completions_; }

 private:
  ProgramFactory factory_;
  Mode mode_;
  std::optional<RouteProgram> program_;
  std::optional<std::int32_t> pending_;
  bool exhausted_ = false;
  std::uint64_t traversals_ = 0;
  std::vector<ElementCompletion> completions_;
};

/// Never moves; a stationary marker (used as the token in exploration
/// harnesses).
class IdleBehavior : public AgentBehavior {
 public:
  void on_wake(std::int32_t, Engine&, std::int32_t) override {}
  std::optional<std::int32_t> desired_exit(std::int32_t, Engine&, std::int32_t) override {
    return std::nullopt;
  }
  void on_traversal_complete(std::int32_t, std::int32_t, Engine&, std::int32_t) override {}
};

}  // namespace rvsim
