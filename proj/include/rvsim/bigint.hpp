#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvsim {

/// Arbitrary-precision unsigned integer. Trajectory exponents and the Pi(n,m)
/// cost bound overflow 64 bits already at small parameters, so every static
/// length quantity is kept exact in one of these. Base 2^32 limbs, little
/// endian, no leading zero limbs (zero == empty limb vector).
class BigUint {
 public:
  BigUint() = default;
  BigUint(std::uint64_t v) {  // NOLINT(google-explicit-constructor)
    if (v != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
      std::uint32_t hi = static_cast<std::uint32_t>(v >> 32);
      if (hi != 0) limbs_.push_back(hi);
    }
  }

  static BigUint from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty decimal string");
    BigUint r;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
      r = r.mul_small(10);
      r.add_in_place(BigUint(static_cast<std::uint64_t>(c - '0')));
    }
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  bool fits_u64() const { return limbs_.size() <= 2; }
  std::uint64_t as_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigUint does not fit in u64");
    std::uint64_t v = 0;
    if (limbs_.size() > 1) v = static_cast<std::uint64_t>(limbs_[1]) << 32;
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
  }

  int compare(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    }
    return 0;
  }
  bool operator==(const BigUint& o) const { return compare(o) == 0; }
  bool operator!=(const BigUint& o) const { return compare(o) != 0; }
  bool operator<(const BigUint& o) const { return compare(o) < 0; }
  bool operator<=(const BigUint& o) const { return compare(o) <= 0; }
  bool operator>(const BigUint& o) const { return compare(o) > 0; }
  bool operator>=(const BigUint& o) const { return compare(o) >= 0; }

  BigUint operator+(const BigUint& o) const {
    BigUint r = *this;
    r.add_in_place(o);
    return r;
  }
  BigUint& operator+=(const BigUint& o) {
    add_in_place(o);
    return *this;
  }

  /// Subtraction requires *this >= o.
  BigUint operator-(const BigUint& o) const {
    if (*this < o) throw std::underflow_error("BigUint underflow");
    BigUint r;
    r.limbs_.resize(limbs_.size());
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::int64_t x = static_cast<std::int64_t>(limbs_[i]) - borrow -
                       (i < o.limbs_.size() ? o.limbs_[i] : 0);
      borrow = 0;
      if (x < 0) {
        x += (1LL << 32);
        borrow = 1;
      }
      r.limbs_[i] = static_cast<std::uint32_t>(x);
    }
    r.trim();
    return r;
  }

  BigUint operator*(const BigUint& o) const {
    if (is_zero() || o.is_zero()) return BigUint();
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) * o.limbs_[j] +
                            r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
        carry = cur >> 32;
      }
      std::size_t pos = i + o.limbs_.size();
      while (carry != 0) {
        std::uint64_t cur = r.limbs_[pos] + carry;
        r.limbs_[pos] = static_cast<std::uint32_t>(cur & 0xffffffffu);
        carry = cur >> 32;
        ++pos;
      }
    }
    r.trim();
    return r;
  }
  BigUint& operator*=(const BigUint& o) {
    *this = *this * o;
    return *this;
  }

  /// Decrement by one; *this must be nonzero.
  void decrement() {
    if (is_zero()) throw std::underflow_error("decrement of zero BigUint");
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      if (limbs_[i] != 0) {
        --limbs_[i];
        break;
      }
      limbs_[i] = 0xffffffffu;
    }
    trim();
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> work(limbs_);
    std::string out;
    while (!work.empty()) {
      std::uint64_t rem = 0;
      for (std::size_t i = work.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | work[i];
        work[i] = static_cast<std::uint32_t>(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      while (!work.empty() && work.back() == 0) work.pop_back();
      char buf[10];
      if (work.empty()) {
        int n = 0;
        std::uint64_t r2 = rem;
        do {
          buf[n++] = static_cast<char>('0' + (r2 % 10));
          r2 /= 10;
        } while (r2 != 0);
        for (int i = 0; i < n; ++i) out.push_back(buf[i]);
      } else {
        for (int i = 0; i < 9; ++i) {
          buf[i] = static_cast<char>('0' + (rem % 10));
          rem /= 10;
        }
        for (int i = 0; i < 9; ++i) out.push_back(buf[i]);
      }
    }
    return std::string(out.rbegin(), out.rend());
  }

 private:
  BigUint mul_small(std::uint32_t m) const {
    BigUint r;
    std::uint64_t carry = 0;
    for (std::uint32_t limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      r.limbs_.push_back(static_cast<std::uint32_t>(cur & 0xffffffffu));
      carry = cur >> 32;
    }
    if (carry != 0) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
    r.trim();
    return r;
  }

  void add_in_place(const BigUint& o) {
    if (o.limbs_.size() > limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) + carry +
                          (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    if (carry != 0) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;
};

}  // namespace rvsim
