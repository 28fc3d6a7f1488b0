#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rvsim/bigint.hpp"
#include "rvsim/uxs.hpp"

namespace rvsim {

/// The starred upper-bound calculus behind the meeting-cost bound. These are
/// bounds on trajectory node counts, kept separate from the exact length
/// calculus: the exact values drive route construction, the starred values
/// drive the guarantee.
class StarredBounds {
 public:
  explicit StarredBounds(std::shared_ptr<const UxsProvider> provider)
      : provider_(std::move(provider)) {}

  const BigUint& x_star(std::uint64_t k) { return memo(0, k); }
  const BigUint& q_star(std::uint64_t k) { return memo(1, k); }
  const BigUint& y_star(std::uint64_t k) { return memo(2, k); }
  const BigUint& z_star(std::uint64_t k) { return memo(3, k); }
  const BigUint& a_star(std::uint64_t k) { return memo(4, k); }
  const BigUint& b_star(std::uint64_t k) { return memo(5, k); }
  const BigUint& k_star(std::uint64_t k) { return memo(6, k); }
  const BigUint& omega_star(std::uint64_t k) { return memo(7, k); }

  /// Node bound for the whole piece of iteration k, N(2A*_{4k}+2B*_{2k}+K*_k).
  BigUint piece_star(std::uint64_t k, std::uint64_t big_n) {
    return BigUint(big_n) *
           (BigUint(2) * a_star(4 * k) + BigUint(2) * b_star(2 * k) + k_star(k));
  }

 private:
  const BigUint& memo(int which, std::uint64_t k);

  std::shared_ptr<const UxsProvider> provider_;
  std::map<std::pair<int, std::uint64_t>, BigUint> memo_;
};

/// l = 2m+2: length of the shorter modified label when m is the length of the
/// smaller original label.
inline std::uint64_t modified_length_l(std::uint64_t m) { return 2 * m + 2; }

/// N = 2(n+l)+1.
inline std::uint64_t bound_index_n(std::uint64_t n, std::uint64_t m) {
  return 2 * (n + modified_length_l(m)) + 1;
}

/// Pi(n,m) = sum over k=1..N of (T*_k + Omega*_k): meeting is guaranteed by
/// the time one agent performs this many edge traversals. Exact big-integer
/// evaluation; non-decreasing in both arguments.
BigUint compute_pi(std::uint64_t n, std::uint64_t m,
                   std::shared_ptr<const UxsProvider> provider);

/// TSV table of the starred quantities for k = 1..N, for the bound
/// subcommand's diagnostic output.
std::string starred_table(std::uint64_t n, std::uint64_t m,
                          std::shared_ptr<const UxsProvider> provider);

}  // namespace rvsim
