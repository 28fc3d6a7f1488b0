#include "rvsim/uxs.hpp"

#include <algorithm>
#include <sstream>

#include "rvsim/prng.hpp"

namespace rvsim {

namespace {

class ToyProvider : public UxsProvider {
 public:
  explicit ToyProvider(ToyShape shape) : shape_(shape) {}
  std::uint64_t length(std::uint64_t k) const override {
    return shape_ == ToyShape::Constant1 ? 1 : k;
  }
  const std::vector<std::int32_t>& sequence(std::uint64_t k) const override {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    std::vector<std::int32_t> seq;
    std::uint64_t len = length(k);
    seq.reserve(len);
    for (std::uint64_t i = 0; i < len; ++i)
      seq.push_back(static_cast<std::int32_t>(i % k));
    return cache_.emplace(k, std::move(seq)).first->second;
  }
  std::string describe() const override {
    return shape_ == ToyShape::Constant1 ? "toy:constant1" : "toy:linear";
  }

 private:
  ToyShape shape_;
  mutable std::map<std::uint64_t, std::vector<std::int32_t>> cache_;
};

}  // namespace

std::shared_ptr<UxsProvider> toy_length_function(ToyShape shape) {
  return std::make_shared<ToyProvider>(shape);
}

CertifiedProvider::CertifiedProvider(
    std::map<std::uint64_t, std::vector<std::int32_t>> seqs, std::uint64_t corpus_hash)
    : seqs_(std::move(seqs)), corpus_hash_(corpus_hash) {
  if (seqs_.empty() || seqs_.begin()->first != 1)
    throw std::invalid_argument("certified provider needs sequences from k=1");
  max_k_ = seqs_.rbegin()->first;
  std::uint64_t prev = 0;
  for (std::uint64_t k = 1; k <= max_k_; ++k) {
    auto it = seqs_.find(k);
    if (it == seqs_.end())
      throw std::invalid_argument("certified provider has a gap at k=" + std::to_string(k));
    if (it->second.empty()) throw std::invalid_argument("empty sequence");
    if (it->second.size() < prev)
      throw std::invalid_argument("P must be non-decreasing");
    prev = it->second.size();
  }
}

std::uint64_t CertifiedProvider::length(std::uint64_t k) const {
  return sequence(k).size();
}

const std::vector<std::int32_t>& CertifiedProvider::sequence(std::uint64_t k) const {
  if (k < 1) throw std::invalid_argument("k must be positive");
  auto it = seqs_.find(k <= max_k_ ? k : max_k_);
  return it->second;
}

std::string CertifiedProvider::describe() const {
  return "certified:kmax=" + std::to_string(max_k_) + ":corpus=" + hex16(corpus_hash_);
}

std::string CertifiedProvider::serialize() const {
  std::ostringstream out;
  out << "# uxs-manifest corpus=" << hex16(corpus_hash_) << " kmax=" << max_k_ << "\n";
  for (const auto& [k, seq] : seqs_) {
    out << "uxs " << k << " " << seq.size() << "\n";
    for (std::size_t i = 0; i < seq.size(); ++i)
      out << seq[i] << (i + 1 == seq.size() ? "\n" : " ");
  }
  return out.str();
}

std::shared_ptr<CertifiedProvider> CertifiedProvider::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::uint64_t corpus_hash = 0;
  std::map<std::uint64_t, std::vector<std::int32_t>> seqs;
  std::uint64_t pending_k = 0;
  std::uint64_t pending_len = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# uxs-manifest", 0) == 0) {
      std::istringstream ls(line);
      std::string field;
      while (ls >> field) {
        if (field.rfind("corpus=", 0) == 0)
          corpus_hash = std::stoull(field.substr(7), nullptr, 16);
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("uxs ", 0) == 0) {
      std::istringstream ls(line);
      std::string kw;
      ls >> kw >> pending_k >> pending_len;
      seqs[pending_k] = {};
      continue;
    }
    std::istringstream ls(line);
    std::int32_t x;
    while (ls >> x) seqs[pending_k].push_back(x);
  }
  for (const auto& [k, seq] : seqs) {
    (void)k;
    if (seq.empty()) throw std::runtime_error("uxs manifest with empty sequence");
  }
  return std::make_shared<CertifiedProvider>(std::move(seqs), corpus_hash);
}

RouteTrace induce_route(const std::vector<std::int32_t>& increments,
                        const PortLabeledGraph& graph, std::int32_t start) {
  RouteTrace trace;
  trace.nodes.reserve(increments.size() + 1);
  trace.nodes.push_back(start);
  std::int32_t node = start;
  std::int32_t entry = 0;  // conventional entry port at the first node
  for (std::int32_t x : increments) {
    std::int32_t d = graph.degree(node);
    std::int32_t exit = static_cast<std::int32_t>(
        (static_cast<std::int64_t>(entry) + x) % d);
    PortTarget t = graph.step(node, exit);
    trace.exit_ports.push_back(exit);
    trace.entry_ports.push_back(t.port);
    node = t.node;
    entry = t.port;
    trace.nodes.push_back(node);
  }
  return trace;
}

IntegralityResult check_integral(const std::vector<std::int32_t>& increments,
                                 const PortLabeledGraph& graph, std::int32_t start) {
  std::vector<char> covered(static_cast<std::size_t>(graph.edge_count()), 0);
  std::int32_t remaining = graph.edge_count();
  std::int32_t node = start;
  std::int32_t entry = 0;
  for (std::int32_t x : increments) {
    if (remaining == 0) break;
    std::int32_t d = graph.degree(node);
    std::int32_t exit = static_cast<std::int32_t>(
        (static_cast<std::int64_t>(entry) + x) % d);
    std::int32_t ei = graph.edge_index(graph.edge_from(node, exit));
    if (!covered[static_cast<std::size_t>(ei)]) {
      covered[static_cast<std::size_t>(ei)] = 1;
      --remaining;
    }
    PortTarget t = graph.step(node, exit);
    node = t.node;
    entry = t.port;
  }
  IntegralityResult res;
  res.integral = remaining == 0;
  if (!res.integral) {
    for (std::size_t i = 0; i < covered.size(); ++i) {
      if (!covered[i]) {
        res.uncovered = graph.edges()[i];
        break;
      }
    }
  }
  return res;
}

namespace {

// Flattened step tables for the search inner loop.
struct FlatGraph {
  std::vector<std::int32_t> degree;
  std::vector<std::int32_t> row_offset;
  std::vector<std::int32_t> to_node;
  std::vector<std::int32_t> to_port;
  std::vector<std::int32_t> edge_id;
  std::int32_t edge_count = 0;

  explicit FlatGraph(const PortLabeledGraph& g) {
    std::int32_t n = g.node_count();
    degree.resize(static_cast<std::size_t>(n));
    row_offset.resize(static_cast<std::size_t>(n) + 1, 0);
    for (std::int32_t v = 0; v < n; ++v) {
      degree[static_cast<std::size_t>(v)] = g.degree(v);
      row_offset[static_cast<std::size_t>(v) + 1] =
          row_offset[static_cast<std::size_t>(v)] + g.degree(v);
    }
    to_node.resize(static_cast<std::size_t>(row_offset.back()));
    to_port.resize(to_node.size());
    edge_id.resize(to_node.size());
    for (std::int32_t v = 0; v < n; ++v) {
      for (std::int32_t p = 0; p < g.degree(v); ++p) {
        std::size_t idx = static_cast<std::size_t>(row_offset[static_cast<std::size_t>(v)] + p);
        PortTarget t = g.step(v, p);
        to_node[idx] = t.node;
        to_port[idx] = t.port;
        edge_id[idx] = g.edge_index(g.edge_from(v, p));
      }
    }
    edge_count = g.edge_count();
  }
};

struct Target {
  const FlatGraph* graph;
  std::int32_t start;
};

// Covers all edges of the target within the sequence? Cheap early-exit scan.
bool covers(const std::vector<std::int32_t>& seq, const FlatGraph& g, std::int32_t start,
            std::vector<std::uint64_t>& stamp, std::uint64_t token, std::uint64_t& steps) {
  std::int32_t remaining = g.edge_count;
  std::int32_t node = start;
  std::int32_t entry = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::int32_t d = g.degree[static_cast<std::size_t>(node)];
    std::int32_t exit = (entry + seq[i]) % d;
    std::size_t idx = static_cast<std::size_t>(g.row_offset[static_cast<std::size_t>(node)] + exit);
    std::int32_t ei = g.edge_id[idx];
    if (stamp[static_cast<std::size_t>(ei)] != token) {
      stamp[static_cast<std::size_t>(ei)] = token;
      if (--remaining == 0) {
        steps += i + 1;
        return true;
      }
    }
    entry = g.to_port[idx];
    node = g.to_node[idx];
  }
  steps += seq.size();
  return false;
}

}  // namespace

FindUxsResult find_uxs(const GraphCorpus& corpus, std::int32_t k, std::uint64_t budget,
                       std::uint64_t seed) {
  // Targets: every corpus graph with <= k nodes, every start node.
  std::vector<FlatGraph> flats;
  std::vector<std::pair<std::int32_t, std::int32_t>> target_ix;  // (flat idx, start)
  std::size_t max_edges = 1;
  for (const CorpusEntry& e : corpus.entries) {
    if (e.graph.node_count() > k) continue;
    flats.emplace_back(e.graph);
    max_edges = std::max(max_edges, static_cast<std::size_t>(e.graph.edge_count()));
  }
  {
    std::size_t fi = 0;
    for (const CorpusEntry& e : corpus.entries) {
      if (e.graph.node_count() > k) continue;
      for (std::int32_t s = 0; s < e.graph.node_count(); ++s)
        target_ix.emplace_back(static_cast<std::int32_t>(fi), s);
      ++fi;
    }
  }

  std::uint64_t steps = 0;
  // One stamp array per flat graph; a fresh token per coverage check avoids
  // clearing between candidates and between starts.
  std::vector<std::vector<std::uint64_t>> stamps(flats.size());
  for (std::size_t i = 0; i < flats.size(); ++i)
    stamps[i].assign(static_cast<std::size_t>(flats[i].edge_count), 0);
  std::uint64_t token = 0;

  // Order targets adaptively: a failing target moves to the front so later
  // candidates die fast.
  std::vector<std::size_t> order(target_ix.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto try_candidate = [&](const std::vector<std::int32_t>& seq) -> bool {
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const auto& [fi, start] = target_ix[order[oi]];
      if (steps >= budget) throw BudgetExhaustedError(
          "find_uxs: budget exhausted at k=" + std::to_string(k));
      ++token;
      if (!covers(seq, flats[static_cast<std::size_t>(fi)], start,
                  stamps[static_cast<std::size_t>(fi)], token, steps)) {
        if (oi != 0) std::rotate(order.begin(), order.begin() + static_cast<long>(oi),
                                 order.begin() + static_cast<long>(oi) + 1);
        return false;
      }
    }
    return true;
  };

  if (target_ix.empty()) {
    // No graph of size <= k in the corpus: any sequence is vacuously integral.
    if (budget == 0) throw BudgetExhaustedError("find_uxs: zero budget");
    return FindUxsResult{{0}, 0};
  }

  const std::uint64_t alphabet = static_cast<std::uint64_t>(k);
  // Iterative deepening, exhaustive while the space is small.
  const std::uint64_t exhaustive_cap = 300000;
  std::vector<std::int32_t> seq;
  for (std::uint32_t len = 1; len <= 12; ++len) {
    double space = 1;
    for (std::uint32_t i = 0; i < len; ++i) space *= static_cast<double>(alphabet);
    if (space > static_cast<double>(exhaustive_cap)) break;
    seq.assign(len, 0);
    for (;;) {
      if (try_candidate(seq)) return FindUxsResult{seq, steps};
      std::size_t pos = len;
      while (pos > 0) {
        if (++seq[pos - 1] < k) break;
        seq[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }

  // Randomized lengths, growing schedule. Deterministic given seed.
  SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(k), 0x75780001ull));
  for (std::uint32_t len = 8;; len = len + len / 2 + 1) {
    const std::uint32_t tries = 4000;
    for (std::uint32_t t = 0; t < tries; ++t) {
      seq.resize(len);
      for (std::uint32_t i = 0; i < len; ++i)
        seq[i] = static_cast<std::int32_t>(rng.next_below(alphabet));
      if (try_candidate(seq)) return FindUxsResult{seq, steps};
    }
    if (steps >= budget)
      throw BudgetExhaustedError("find_uxs: budget exhausted at k=" + std::to_string(k));
  }
}

std::shared_ptr<CertifiedProvider> build_certified_provider(const GraphCorpus& corpus,
                                                            std::int32_t kmax,
                                                            std::uint64_t budget,
                                                            std::uint64_t seed,
                                                            bool share_down_max) {
  std::map<std::uint64_t, std::vector<std::int32_t>> seqs;
  seqs[1] = {0};
  for (std::int32_t k = 2; k <= kmax; ++k) {
    FindUxsResult r = find_uxs(corpus, k, budget, seed);
    std::vector<std::int32_t> seq = std::move(r.increments);
    const auto& prev = seqs[static_cast<std::uint64_t>(k) - 1];
    // Pad by cyclically repeating own increments so P stays non-decreasing;
    // extra steps only add coverage.
    std::size_t base = seq.size();
    while (seq.size() < prev.size()) seq.push_back(seq[seq.size() % base]);
    seqs[static_cast<std::uint64_t>(k)] = std::move(seq);
  }
  if (share_down_max) {
    const auto& top = seqs[static_cast<std::uint64_t>(kmax)];
    for (std::int32_t k = 1; k < kmax; ++k)
      seqs[static_cast<std::uint64_t>(k)] = top;
  }
  auto provider =
      std::make_shared<CertifiedProvider>(std::move(seqs), corpus.content_hash());
  if (auto failure = verify_provider(*provider, corpus))
    throw std::runtime_error("certification failed after padding: " + *failure);
  return provider;
}

std::optional<std::string> verify_provider(const CertifiedProvider& provider,
                                           const GraphCorpus& corpus) {
  for (std::uint64_t k = 2; k <= provider.max_k(); ++k) {
    const auto& seq = provider.sequence(k);
    for (const CorpusEntry& e : corpus.entries) {
      if (e.graph.node_count() > static_cast<std::int32_t>(k)) continue;
      for (std::int32_t s = 0; s < e.graph.node_count(); ++s) {
        IntegralityResult r = check_integral(seq, e.graph, s);
        if (!r.integral) {
          std::ostringstream msg;
          msg << "k=" << k << " graph=" << e.tag << " start=" << s
              << " uncovered edge (" << r.uncovered->a << "," << r.uncovered->b << ")";
          return msg.str();
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace rvsim
