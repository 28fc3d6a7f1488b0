#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvsim/bigint.hpp"
#include "rvsim/uxs.hpp"

namespace rvsim {

/// The named trajectory forms. R is the base exploration walk; X..Omega are
/// the derived constructions the rendezvous route is assembled from. All of
/// X..Omega are closed (end at their start node).
enum class TrajForm : std::uint8_t { R, X, Q, Y, Z, A, B, K, Omega };

const char* traj_form_name(TrajForm f);

/// Symbolic trajectory term: named form, reversal, concatenation, or power of
/// a closed term.
struct TrajExpr {
  enum class Kind : std::uint8_t { Named, Reverse, Concat, Power };
  Kind kind = Kind::Named;
  TrajForm form = TrajForm::R;  // Named
  std::uint64_t k = 0;          // Named
  std::vector<TrajExpr> children;
  BigUint exponent;  // Power

  static TrajExpr named(TrajForm f, std::uint64_t k) {
    TrajExpr e;
    e.kind = Kind::Named;
    e.form = f;
    e.k = k;
    return e;
  }
  static TrajExpr reverse(TrajExpr inner) {
    TrajExpr e;
    e.kind = Kind::Reverse;
    e.children.push_back(std::move(inner));
    return e;
  }
  static TrajExpr concat(std::vector<TrajExpr> parts) {
    TrajExpr e;
    e.kind = Kind::Concat;
    e.children = std::move(parts);
    return e;
  }
  static TrajExpr power(TrajExpr base, BigUint exponent) {
    if (exponent.is_zero()) throw std::invalid_argument("power exponent must be positive");
    TrajExpr e;
    e.kind = Kind::Power;
    e.children.push_back(std::move(base));
    e.exponent = std::move(exponent);
    return e;
  }

  std::string to_string() const;
};

class UndefinedPError : public std::runtime_error {
 public:
  explicit UndefinedPError(std::uint64_t k)
      : std::runtime_error("undefined-P: length function lacks index " +
                           std::to_string(k)) {}
};

/// Test-only provider with a bounded domain; exercises the undefined-P path.
class TableProvider : public UxsProvider {
 public:
  explicit TableProvider(std::map<std::uint64_t, std::vector<std::int32_t>> seqs)
      : seqs_(std::move(seqs)) {}
  std::uint64_t length(std::uint64_t k) const override { return sequence(k).size(); }
  const std::vector<std::int32_t>& sequence(std::uint64_t k) const override {
    auto it = seqs_.find(k);
    if (it == seqs_.end()) throw UndefinedPError(k);
    return it->second;
  }
  std::string describe() const override { return "table"; }

 private:
  std::map<std::uint64_t, std::vector<std::int32_t>> seqs_;
};

/// Exact node counts of the named forms and the exponents inside B, K and
/// Omega. All values are graph independent (UXS lengths are fixed) and are
/// memoized; arbitrary precision because Omega exponents explode already at
/// small k.
class LengthCalculus {
 public:
  explicit LengthCalculus(std::shared_ptr<const UxsProvider> provider)
      : provider_(std::move(provider)) {}

  /// Number of nodes |T| of the named form (sequence length, counted with
  /// multiplicity).
  const BigUint& named_length(TrajForm f, std::uint64_t k);

  /// Repetition count inside B(k), K(k), Omega(k).
  const BigUint& power_exponent(TrajForm f, std::uint64_t k);

  /// Node count of an arbitrary term.
  BigUint expr_length(const TrajExpr& e);

  /// Edge traversals = nodes - 1.
  BigUint named_moves(TrajForm f, std::uint64_t k) {
    return named_length(f, k) - BigUint(1);
  }

  const UxsProvider& provider() const { return *provider_; }

 private:
  BigUint p(std::uint64_t k) { return BigUint(provider_->length(k)); }

  std::shared_ptr<const UxsProvider> provider_;
  std::map<std::pair<int, std::uint64_t>, BigUint> length_memo_;
  std::map<std::pair<int, std::uint64_t>, BigUint> exponent_memo_;
};

/// Node count of power(T, x) for closed T: x * (|T| - 1) + 1.
BigUint power_length(const BigUint& base_len, const BigUint& exponent);

}  // namespace rvsim
