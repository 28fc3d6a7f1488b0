#include "rvsim/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "rvsim/prng.hpp"

namespace rvsim {

namespace {

// Builds a port-labeled graph from neighbor lists by assigning ports in the
// order the neighbors appear.
PortLabeledGraph from_neighbor_lists(const std::vector<std::vector<std::int32_t>>& nbrs) {
  const std::int32_t n = static_cast<std::int32_t>(nbrs.size());
  std::vector<std::vector<PortTarget>> adj(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v)
    adj[static_cast<std::size_t>(v)].resize(nbrs[static_cast<std::size_t>(v)].size());
  // port index of u in v's list
  auto port_of = [&](std::int32_t v, std::int32_t u) {
    const auto& row = nbrs[static_cast<std::size_t>(v)];
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(row.size()); ++p)
      if (row[static_cast<std::size_t>(p)] == u) return p;
    throw GraphError("neighbor list asymmetry");
  };
  for (std::int32_t v = 0; v < n; ++v) {
    const auto& row = nbrs[static_cast<std::size_t>(v)];
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(row.size()); ++p) {
      std::int32_t u = row[static_cast<std::size_t>(p)];
      adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] =
          PortTarget{u, port_of(u, v)};
    }
  }
  return PortLabeledGraph(std::move(adj));
}

bool mask_connected(std::int32_t n, std::uint32_t mask,
                    const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs) {
  std::vector<std::vector<std::int32_t>> nbrs(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (mask & (1u << i)) {
      nbrs[static_cast<std::size_t>(pairs[i].first)].push_back(pairs[i].second);
      nbrs[static_cast<std::size_t>(pairs[i].second)].push_back(pairs[i].first);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::int32_t> stack{0};
  seen[0] = 1;
  std::int32_t count = 1;
  while (!stack.empty()) {
    std::int32_t v = stack.back();
    stack.pop_back();
    for (std::int32_t u : nbrs[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  for (std::int32_t v = 0; v < n; ++v)
    if (nbrs[static_cast<std::size_t>(v)].empty()) return false;
  return count == n;
}

std::string mask_canonical_key(std::int32_t n, std::uint32_t mask,
                               const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs) {
  std::vector<std::vector<char>> m(static_cast<std::size_t>(n),
                                   std::vector<char>(static_cast<std::size_t>(n), 0));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (mask & (1u << i)) {
      m[static_cast<std::size_t>(pairs[i].first)][static_cast<std::size_t>(pairs[i].second)] = 1;
      m[static_cast<std::size_t>(pairs[i].second)][static_cast<std::size_t>(pairs[i].first)] = 1;
    }
  }
  std::vector<std::int32_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string key(static_cast<std::size_t>(n * n), '0');
    for (std::int32_t a = 0; a < n; ++a)
      for (std::int32_t b = 0; b < n; ++b)
        if (m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
          key[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)] * n +
                                       perm[static_cast<std::size_t>(b)])] = '1';
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<std::vector<std::vector<std::int32_t>>> connected_topologies(std::int32_t n) {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::int32_t a = 0; a < n; ++a)
    for (std::int32_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::vector<std::vector<std::vector<std::int32_t>>> out;
  std::set<std::string> seen;
  const std::uint32_t top = 1u << pairs.size();
  for (std::uint32_t mask = 0; mask < top; ++mask) {
    if (!mask_connected(n, mask, pairs)) continue;
    std::string key = mask_canonical_key(n, mask, pairs);
    if (!seen.insert(key).second) continue;
    std::vector<std::vector<std::int32_t>> nbrs(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (mask & (1u << i)) {
        nbrs[static_cast<std::size_t>(pairs[i].first)].push_back(pairs[i].second);
        nbrs[static_cast<std::size_t>(pairs[i].second)].push_back(pairs[i].first);
      }
    }
    out.push_back(std::move(nbrs));
  }
  return out;
}

PortLabeledGraph make_path(std::int32_t n) {
  std::vector<std::vector<std::int32_t>> nbrs(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) {
    if (v > 0) nbrs[static_cast<std::size_t>(v)].push_back(v - 1);
    if (v + 1 < n) nbrs[static_cast<std::size_t>(v)].push_back(v + 1);
  }
  return from_neighbor_lists(nbrs);
}

PortLabeledGraph make_cycle(std::int32_t n, bool clockwise) {
  std::vector<std::vector<std::int32_t>> nbrs(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) {
    std::int32_t cw = (v + 1) % n;
    std::int32_t ccw = (v + n - 1) % n;
    if (clockwise) {
      nbrs[static_cast<std::size_t>(v)] = {cw, ccw};  // port 0 clockwise
    } else {
      nbrs[static_cast<std::size_t>(v)] = {ccw, cw};  // port 0 counterclockwise
    }
  }
  return from_neighbor_lists(nbrs);
}

PortLabeledGraph make_star(std::int32_t n) {
  std::vector<std::vector<std::int32_t>> nbrs(static_cast<std::size_t>(n));
  for (std::int32_t v = 1; v < n; ++v) {
    nbrs[0].push_back(v);
    nbrs[static_cast<std::size_t>(v)].push_back(0);
  }
  return from_neighbor_lists(nbrs);
}

PortLabeledGraph make_complete(std::int32_t n) {
  std::vector<std::vector<std::int32_t>> nbrs(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v)
    for (std::int32_t u = 0; u < n; ++u)
      if (u != v) nbrs[static_cast<std::size_t>(v)].push_back(u);
  return from_neighbor_lists(nbrs);
}

GraphCorpus generate_corpus(std::int32_t nmax, std::int32_t labelings_per_topology,
                            std::uint64_t seed) {
  if (nmax < 2) throw GraphError("corpus requires nmax >= 2");
  GraphCorpus corpus;
  corpus.nmax = nmax;
  corpus.labelings_per_topology = labelings_per_topology;
  corpus.seed = seed;

  for (std::int32_t n = 2; n <= nmax; ++n) {
    auto topologies = connected_topologies(n);
    for (std::size_t ti = 0; ti < topologies.size(); ++ti) {
      const auto& base = topologies[ti];
      // Sample labelings: per node, a pseudorandom permutation of its
      // incident edges. Identical samples are deduplicated.
      std::set<std::string> seen;
      std::int32_t emitted = 0;
      for (std::int32_t s = 0; s < labelings_per_topology; ++s) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(ti),
                                   static_cast<std::uint64_t>(s)));
        std::vector<std::vector<std::int32_t>> shuffled = base;
        for (auto& row : shuffled) {
          for (std::size_t i = row.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.next_below(i));
            std::swap(row[i - 1], row[j]);
          }
        }
        PortLabeledGraph g = from_neighbor_lists(shuffled);
        std::string text = g.serialize();
        if (!seen.insert(text).second) continue;
        std::ostringstream tag;
        tag << "n" << n << "_t" << ti << "_lab" << emitted;
        corpus.entries.push_back(CorpusEntry{std::move(g), tag.str()});
        ++emitted;
      }
    }
    corpus.entries.push_back(CorpusEntry{make_path(n), "path_" + std::to_string(n)});
    if (n >= 3) {
      corpus.entries.push_back(
          CorpusEntry{make_cycle(n, true), "cycle_cw_" + std::to_string(n)});
      corpus.entries.push_back(
          CorpusEntry{make_cycle(n, false), "cycle_ccw_" + std::to_string(n)});
      corpus.entries.push_back(CorpusEntry{make_star(n), "star_" + std::to_string(n)});
      corpus.entries.push_back(
          CorpusEntry{make_complete(n), "complete_" + std::to_string(n)});
    }
  }
  return corpus;
}

std::string GraphCorpus::serialize() const {
  std::ostringstream out;
  out << "# corpus nmax=" << nmax << " labelings=" << labelings_per_topology
      << " seed=" << seed << "\n";
  bool first = true;
  for (const CorpusEntry& e : entries) {
    if (!first) out << "---\n";
    first = false;
    out << "# tag " << e.tag << "\n";
    out << e.graph.serialize();
  }
  return out.str();
}

GraphCorpus GraphCorpus::parse(const std::string& text) {
  GraphCorpus corpus;
  std::istringstream in(text);
  std::string line;
  std::string current;
  std::string tag;
  bool have_params = false;
  auto flush = [&]() {
    if (current.find_first_not_of(" \t\n\r") == std::string::npos) return;
    corpus.entries.push_back(CorpusEntry{PortLabeledGraph::parse(current),
                                         tag.empty() ? "untagged" : tag});
    current.clear();
    tag.clear();
  };
  while (std::getline(in, line)) {
    if (!have_params && line.rfind("# corpus", 0) == 0) {
      std::istringstream ls(line);
      std::string kw;
      ls >> kw >> kw;  // "#", "corpus"
      std::string field;
      while (ls >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq);
        std::string val = field.substr(eq + 1);
        if (key == "nmax") corpus.nmax = std::stoi(val);
        if (key == "labelings") corpus.labelings_per_topology = std::stoi(val);
        if (key == "seed") corpus.seed = std::stoull(val);
      }
      have_params = true;
      continue;
    }
    if (line.rfind("# tag ", 0) == 0) {
      tag = line.substr(6);
      continue;
    }
    if (line.rfind("---", 0) == 0) {
      flush();
      continue;
    }
    current += line;
    current += "\n";
  }
  flush();
  return corpus;
}

std::uint64_t GraphCorpus::content_hash() const { return fnv1a64(serialize()); }

std::vector<const CorpusEntry*> GraphCorpus::entries_up_to(std::int32_t max_nodes) const {
  std::vector<const CorpusEntry*> out;
  for (const CorpusEntry& e : entries)
    if (e.graph.node_count() <= max_nodes) out.push_back(&e);
  return out;
}

}  // namespace rvsim
