#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvsim/graph.hpp"

namespace rvsim {

struct CorpusEntry {
  PortLabeledGraph graph;
  std::string tag;
};

/// Deterministic test corpus: every connected unlabeled topology on
/// 2..nmax nodes with sampled port labelings, plus the named families. The
/// same (nmax, labelings, seed) always yields a byte-identical corpus file.
struct GraphCorpus {
  std::int32_t nmax = 0;
  std::int32_t labelings_per_topology = 0;
  std::uint64_t seed = 0;
  std::vector<CorpusEntry> entries;

  std::string serialize() const;
  static GraphCorpus parse(const std::string& text);
  std::uint64_t content_hash() const;

  std::vector<const CorpusEntry*> entries_up_to(std::int32_t max_nodes) const;
};

GraphCorpus generate_corpus(std::int32_t nmax, std::int32_t labelings_per_topology,
                            std::uint64_t seed);

/// Named family constructors (fixed canonical labelings).
PortLabeledGraph make_path(std::int32_t n);
PortLabeledGraph make_cycle(std::int32_t n, bool clockwise);
PortLabeledGraph make_star(std::int32_t n);
PortLabeledGraph make_complete(std::int32_t n);

/// All connected unlabeled topologies on exactly n nodes (2 <= n <= 7ish),
/// each returned with an arbitrary reference port labeling.
std::vector<std::vector<std::vector<std::int32_t>>> connected_topologies(std::int32_t n);

}  // namespace rvsim
