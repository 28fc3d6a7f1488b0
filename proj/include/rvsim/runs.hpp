#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvsim/engine.hpp"
#include "rvsim/sgl.hpp"
#include "rvsim/uxs.hpp"

namespace rvsim {

/// A fully self-describing run: everything needed to execute it, embedded in
/// the trace header so a trace alone reproduces the run bit for bit.
struct RunSetup {
  std::string protocol;  // "rendezvous" | "sgl" | "tunnel"
  std::string graph_text;
  std::vector<SglAgentConfig> agents;  // labels/starts (+values for sgl)
  std::string scheduler = "round_robin";
  std::uint64_t seed = 0;
  EngineConfig engine;
  std::string provider_kind = "toy:constant1";  // or "certified"
  std::string provider_manifest;                // certified sequences, inline
  std::int32_t est_max_n = 6;
  bool phase2_oracle_cutoff = true;
  std::uint64_t tunnel_m = 0;  // tunnel protocol parameter

  std::shared_ptr<const UxsProvider> make_provider() const;
  std::string header_json() const;
  static RunSetup from_header_json(const std::string& line);
};

struct RunArtifacts {
  std::string trace;  // header line + event/protocol lines, '\n' separated
  bool met = false;
  bool all_output = false;
  RunEnd end = RunEnd::Stopped;
  std::uint64_t events = 0;
  std::uint64_t total_cost = 0;
};

/// Executes the run; when `replay_decisions` is given the recorded effective
/// decision stream drives the engine instead of the named scheduler.
RunArtifacts execute_run(const RunSetup& setup,
                         const std::vector<Decision>* replay_decisions = nullptr);

std::vector<Decision> parse_trace_decisions(const std::string& trace);

/// Re-runs a trace from its own header and decision stream; returns true iff
/// the regenerated trace is byte-identical.
bool replay_trace(const std::string& trace, std::string* regenerated = nullptr);

}  // namespace rvsim
