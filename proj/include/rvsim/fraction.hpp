#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rvsim {

/// Exact rational in normalized form (gcd(num,den)=1, den>0). Positions inside
/// edges are compared exactly; meeting detection must never be tolerance
/// based. Schedulers only produce small denominators, so 64-bit components
/// with 128-bit cross multiplication are always safe.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("fraction with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Fraction zero() { return Fraction(0, 1); }
  static Fraction one() { return Fraction(1, 1); }

  bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Fraction& o) const { return !(*this == o); }
  bool operator<(const Fraction& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
  bool operator<=(const Fraction& o) const { return !(o < *this); }
  bool operator>(const Fraction& o) const { return o < *this; }
  bool operator>=(const Fraction& o) const { return !(*this < o); }

  Fraction complement() const { return Fraction(den - num, den); }  // 1 - f

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == den; }

  std::string to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  static Fraction parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("bad fraction: " + s);
    return Fraction(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }
};

inline const Fraction& min_frac(const Fraction& a, const Fraction& b) {
  return b < a ? b : a;
}
inline const Fraction& max_frac(const Fraction& a, const Fraction& b) {
  return a < b ? b : a;
}

}  // namespace rvsim
