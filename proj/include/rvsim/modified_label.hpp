#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvsim {

/// Prefix-free encoding of an agent label: every bit of the binary
/// representation doubled, then the suffix "01". For distinct labels neither
/// encoding is a prefix of the other, which is what lets the two agents'
/// route structures diverge at some bit position.
struct ModifiedLabel {
  std::uint64_t original = 0;
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }

  std::string to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
  }
};

inline ModifiedLabel modified_label(std::uint64_t label) {
  if (label < 1) throw std::invalid_argument("labels are positive integers");
  std::vector<std::uint8_t> binary;
  for (std::uint64_t v = label; v > 0; v >>= 1)
    binary.push_back(static_cast<std::uint8_t>(v & 1));
  ModifiedLabel m;
  m.original = label;
  m.bits.reserve(binary.size() * 2 + 2);
  for (std::size_t i = binary.size(); i-- > 0;) {
    m.bits.push_back(binary[i]);
    m.bits.push_back(binary[i]);
  }
  m.bits.push_back(0);
  m.bits.push_back(1);
  return m;
}

/// Length of the binary representation, |x| in the cost calculus.
inline std::uint64_t binary_length(std::uint64_t label) {
  std::uint64_t n = 0;
  for (std::uint64_t v = label; v > 0; v >>= 1) ++n;
  return n;
}

inline bool is_prefix_of(const std::vector<std::uint8_t>& a,
                         const std::vector<std::uint8_t>& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace rvsim
