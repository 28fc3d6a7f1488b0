#include <doctest.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rvsim/bounds.hpp"
#include "rvsim/uxs.hpp"

using namespace rvsim;

namespace {

// Independent re-evaluation of the starred recurrences on decimal digit
// vectors. Deliberately avoids BigUint so the two routes share no arithmetic.
struct Dec {
  std::vector<int> d;  // little-endian decimal digits
  static Dec from_u64(std::uint64_t v) {
    Dec x;
    if (v == 0) x.d = {0};
    while (v > 0) {
      x.d.push_back(static_cast<int>(v % 10));
      v /= 10;
    }
    if (x.d.empty()) x.d = {0};
    return x;
  }
  static Dec add(const Dec& a, const Dec& b) {
    Dec r;
    int carry = 0;
    for (std::size_t i = 0; i < a.d.size() || i < b.d.size() || carry; ++i) {
      int s = carry;
      if (i < a.d.size()) s += a.d[i];
      if (i < b.d.size()) s += b.d[i];
      r.d.push_back(s % 10);
      carry = s / 10;
    }
    return r;
  }
  static Dec mul(const Dec& a, const Dec& b) {
    std::vector<int> out(a.d.size() + b.d.size(), 0);
    for (std::size_t i = 0; i < a.d.size(); ++i)
      for (std::size_t j = 0; j < b.d.size(); ++j) out[i + j] += a.d[i] * b.d[j];
    int carry = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      int s = out[i] + carry;
      out[i] = s % 10;
      carry = s / 10;
    }
    while (carry) {
      out.push_back(carry % 10);
      carry /= 10;
    }
    Dec r;
    r.d = std::move(out);
    while (r.d.size() > 1 && r.d.back() == 0) r.d.pop_back();
    return r;
  }
  std::string str() const {
    std::string s;
    for (auto it = d.rbegin(); it != d.rend(); ++it) s.push_back(char('0' + *it));
    return s;
  }
};

std::string pi_by_digit_vectors(std::uint64_t n, std::uint64_t m, bool linear_p) {
  auto P = [&](std::uint64_t k) { return linear_p ? k : 1; };
  std::uint64_t l = 2 * m + 2;
  std::uint64_t N = 2 * (n + l) + 1;
  // Evaluate top-down with simple recursion; sizes are tiny.
  std::function<Dec(std::uint64_t)> X = [&](std::uint64_t k) {
    return Dec::from_u64(2 * P(k) + 1);
  };
  std::function<Dec(std::uint64_t)> Q = [&](std::uint64_t k) {
    Dec s = Dec::from_u64(0);
    for (std::uint64_t i = 1; i <= k; ++i) s = Dec::add(s, X(i));
    return s;
  };
  std::function<Dec(std::uint64_t)> Y = [&](std::uint64_t k) {
    return Dec::mul(Dec::from_u64(2 * P(k)), Q(k));
  };
  std::function<Dec(std::uint64_t)> Z = [&](std::uint64_t k) {
    Dec s = Dec::from_u64(0);
    for (std::uint64_t i = 1; i <= k; ++i) s = Dec::add(s, Y(i));
    return s;
  };
  std::function<Dec(std::uint64_t)> A = [&](std::uint64_t k) {
    return Dec::mul(Dec::from_u64(2 * P(k)), Z(k));
  };
  std::function<Dec(std::uint64_t)> B = [&](std::uint64_t k) {
    return Dec::mul(Dec::mul(Dec::from_u64(2), A(8 * k)), Y(k));
  };
  std::function<Dec(std::uint64_t)> K = [&](std::uint64_t k) {
    return Dec::mul(Dec::mul(Dec::from_u64(2), B(8 * k)), X(k));
  };
  std::function<Dec(std::uint64_t)> Om = [&](std::uint64_t k) {
    return Dec::mul(Dec::mul(Dec::from_u64(2 * k - 1), K(k)), X(k));
  };
  Dec total = Dec::from_u64(0);
  for (std::uint64_t k = 1; k <= N; ++k) {
    Dec t = Dec::mul(Dec::from_u64(N),
                     Dec::add(Dec::add(Dec::mul(Dec::from_u64(2), A(4 * k)),
                                       Dec::mul(Dec::from_u64(2), B(2 * k))),
                              K(k)));
    total = Dec::add(total, Dec::add(t, Om(k)));
  }
  return total.str();
}

struct Frozen {
  std::uint64_t n, m;
  const char* value;
};

// Computed with an independent big-integer engine and frozen.
const Frozen kPiConstant1[] = {
    {1, 1, "3898714141344"},        {1, 2, "17629402603392"},
    {1, 3, "56073664489056"},       {2, 1, "8775230934288"},
    {2, 2, "32510268870768"},       {2, 3, "91661109381072"},
    {3, 1, "17629402603392"},       {3, 2, "56073664489056"},
    {3, 3, "143378698779456"},      {4, 1, "32510268870768"},
    {4, 2, "91661109381072"},       {4, 3, "216175993366320"},
};
const Frozen kPiLinear[] = {
    {1, 1, "16629633225669514650102528"},
    {1, 2, "593892812300736786517318656"},
    {1, 3, "9274475701768089774319671552"},
    {2, 1, "113561901828220162305154816"},
    {2, 2, "2539253422451251201504813056"},
    {2, 3, "29845889087152348488271299840"},
    {3, 1, "593892812300736786517318656"},
    {3, 2, "9274475701768089774319671552"},
    {3, 3, "86558440414898171906366493184"},
    {4, 1, "2539253422451251201504813056"},
    {4, 2, "29845889087152348488271299840"},
    {4, 3, "230124460014699737140756610560"},
};

}  // namespace

TEST_CASE("starred recurrence spot values with constant-1 P") {
  auto c1 = toy_length_function(ToyShape::Constant1);
  StarredBounds b(c1);
  CHECK(b.x_star(1).as_u64() == 3);
  CHECK(b.x_star(7).as_u64() == 3);
  CHECK(b.q_star(2).as_u64() == 6);
  CHECK(b.y_star(2).as_u64() == 12);
}

TEST_CASE("l and N arithmetic") {
  CHECK(modified_length_l(1) == 4);
  CHECK(bound_index_n(2, 1) == 13);
}

TEST_CASE("compute_pi matches the frozen independent table") {
  auto c1 = toy_length_function(ToyShape::Constant1);
  for (const Frozen& f : kPiConstant1)
    CHECK(compute_pi(f.n, f.m, c1).to_decimal() == f.value);
  auto lin = toy_length_function(ToyShape::Linear);
  for (const Frozen& f : kPiLinear)
    CHECK(compute_pi(f.n, f.m, lin).to_decimal() == f.value);
}

TEST_CASE("compute_pi agrees with the digit-vector re-evaluation") {
  auto c1 = toy_length_function(ToyShape::Constant1);
  auto lin = toy_length_function(ToyShape::Linear);
  for (std::uint64_t n = 1; n <= 3; ++n) {
    for (std::uint64_t m = 1; m <= 2; ++m) {
      CHECK(compute_pi(n, m, c1).to_decimal() == pi_by_digit_vectors(n, m, false));
      CHECK(compute_pi(n, m, lin).to_decimal() == pi_by_digit_vectors(n, m, true));
    }
  }
}

TEST_CASE("pi is monotone in each argument up to 6") {
  for (ToyShape shape : {ToyShape::Constant1, ToyShape::Linear}) {
    auto p = toy_length_function(shape);
    BigUint table[7][7];
    for (std::uint64_t n = 1; n <= 6; ++n)
      for (std::uint64_t m = 1; m <= 6; ++m) table[n][m] = compute_pi(n, m, p);
    for (std::uint64_t n = 1; n <= 6; ++n) {
      for (std::uint64_t m = 1; m <= 6; ++m) {
        if (n < 6) CHECK(table[n][m] <= table[n + 1][m]);
        if (m < 6) CHECK(table[n][m] <= table[n][m + 1]);
      }
    }
  }
}

TEST_CASE("starred table renders every k row") {
  auto c1 = toy_length_function(ToyShape::Constant1);
  std::string t = starred_table(2, 1, c1);
  CHECK(t.find("Omega*") != std::string::npos);
  // 13 data rows for N=13.
  std::size_t rows = 0;
  for (char c : t)
    if (c == '\n') ++rows;
  CHECK(rows == 14);
}
