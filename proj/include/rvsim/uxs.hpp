#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvsim/corpus.hpp"
#include "rvsim/graph.hpp"

namespace rvsim {

/// Source of exploration sequences and of the length function P. P(k) is the
/// number of edge traversals of the induced trajectory R(k,v); it is graph
/// independent and non-decreasing in k, and must be total in k so the
/// trajectory calculus and the bound recurrences can resolve any index.
class UxsProvider {
 public:
  virtual ~UxsProvider() = default;
  virtual std::uint64_t length(std::uint64_t k) const = 0;  // P(k) >= 1
  virtual const std::vector<std::int32_t>& sequence(std::uint64_t k) const = 0;
  virtual std::string describe() const = 0;
};

/// Toy providers for length-calculus and bound tests. Never used where
/// integrality matters.
enum class ToyShape { Constant1, Linear };
std::shared_ptr<UxsProvider> toy_length_function(ToyShape shape);

/// Sequences certified by find_uxs against a corpus; indices above the
/// largest certified k reuse the largest certified sequence (universality is
/// only ever claimed relative to the certified corpus).
class CertifiedProvider : public UxsProvider {
 public:
  CertifiedProvider(std::map<std::uint64_t, std::vector<std::int32_t>> seqs,
                    std::uint64_t corpus_hash);
  std::uint64_t length(std::uint64_t k) const override;
  const std::vector<std::int32_t>& sequence(std::uint64_t k) const override;
  std::string describe() const override;
  std::uint64_t corpus_hash() const { return corpus_hash_; }
  std::uint64_t max_k() const { return max_k_; }

  std::string serialize() const;
  static std::shared_ptr<CertifiedProvider> parse(const std::string& text);

 private:
  std::map<std::uint64_t, std::vector<std::int32_t>> seqs_;
  std::uint64_t corpus_hash_;
  std::uint64_t max_k_;
};

struct RouteTrace {
  std::vector<std::int32_t> nodes;       // length = moves + 1
  std::vector<std::int32_t> exit_ports;  // per move
  std::vector<std::int32_t> entry_ports; // per move
};

/// Applies q_i = (p_{i-1} + x_i) mod deg starting with the conventional entry
/// port 0 at `start`.
RouteTrace induce_route(const std::vector<std::int32_t>& increments,
                        const PortLabeledGraph& graph, std::int32_t start);

/// True iff the induced route covers every undirected edge; otherwise the
/// witness is one uncovered edge.
struct IntegralityResult {
  bool integral = false;
  std::optional<EdgeRef> uncovered;
};
IntegralityResult check_integral(const std::vector<std::int32_t>& increments,
                                 const PortLabeledGraph& graph, std::int32_t start);

class BudgetExhaustedError : public std::runtime_error {
 public:
  explicit BudgetExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

struct FindUxsResult {
  std::vector<std::int32_t> increments;
  std::uint64_t steps_spent = 0;  // simulation steps consumed by the search
};

/// Searches for a sequence that is integral on every corpus graph with at
/// most k nodes from every start node. Iterative deepening over length;
/// exhaustive over increments {0..k-1} while the candidate space is small,
/// seeded random sampling beyond. Deterministic given (corpus, k, budget,
/// seed). Throws BudgetExhaustedError when `budget` simulation steps are
/// spent without success.
FindUxsResult find_uxs(const GraphCorpus& corpus, std::int32_t k, std::uint64_t budget,
                       std::uint64_t seed);

/// Runs find_uxs for k = 2..kmax, pads lengths so P is non-decreasing, and
/// re-verifies integrality after padding. k=1 is the fixed sequence [0]
/// (vacuously integral: no corpus graph has fewer than 2 nodes).
///
/// With `share_down_max` set, every level reuses the kmax sequence instead of
/// the minimal found one (re-verified per level). Integrality per level only
/// requires covering graphs up to that size, so a sequence certified at kmax
/// is certified everywhere below; the richer low-level walks keep early route
/// pieces integral on the whole corpus, which keeps protocol runs at desk
/// scale instead of stranding agents in tiny bounce regions.
std::shared_ptr<CertifiedProvider> build_certified_provider(const GraphCorpus& corpus,
                                                            std::int32_t kmax,
                                                            std::uint64_t budget,
                                                            std::uint64_t seed,
                                                            bool share_down_max = false);

/// Independent re-verification sweep: every corpus graph of size <= k, every
/// start. Returns the first failure description, or nullopt if all pass.
std::optional<std::string> verify_provider(const CertifiedProvider& provider,
                                           const GraphCorpus& corpus);

}  // namespace rvsim
