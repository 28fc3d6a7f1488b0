#include "rvsim/bounds.hpp"

#include <sstream>

namespace rvsim {

const BigUint& StarredBounds::memo(int which, std::uint64_t k) {
  auto key = std::make_pair(which, k);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  BigUint v;
  BigUint pk(provider_->length(k));
  switch (which) {
    case 0:  // X*_k = 2P(k) + 1
      v = BigUint(2) * pk + BigUint(1);
      break;
    case 1: {  // Q*_k = sum X*_i
      BigUint sum;
      for (std::uint64_t i = 1; i <= k; ++i) sum += x_star(i);
      v = sum;
      break;
    }
    case 2:  // Y*_k = 2P(k) Q*_k
      v = BigUint(2) * pk * q_star(k);
      break;
    case 3: {  // Z*_k = sum Y*_i
      BigUint sum;
      for (std::uint64_t i = 1; i <= k; ++i) sum += y_star(i);
      v = sum;
      break;
    }
    case 4:  // A*_k = 2P(k) Z*_k
      v = BigUint(2) * pk * z_star(k);
      break;
    case 5:  // B*_k = 2 A*_{8k} Y*_k
      v = BigUint(2) * a_star(8 * k) * y_star(k);
      break;
    case 6:  // K*_k = 2 B*_{8k} X*_k
      v = BigUint(2) * b_star(8 * k) * x_star(k);
      break;
    case 7:  // Omega*_k = (2k-1) K*_k X*_k
      v = BigUint(2 * k - 1) * k_star(k) * x_star(k);
      break;
  }
  return memo_.emplace(key, std::move(v)).first->second;
}

BigUint compute_pi(std::uint64_t n, std::uint64_t m,
                   std::shared_ptr<const UxsProvider> provider) {
  if (n < 1 || m < 1) throw std::invalid_argument("compute_pi needs n,m >= 1");
  StarredBounds bounds(std::move(provider));
  const std::uint64_t big_n = bound_index_n(n, m);
  BigUint total;
  for (std::uint64_t k = 1; k <= big_n; ++k) {
    total += bounds.piece_star(k, big_n);
    total += bounds.omega_star(k);
  }
  return total;
}

std::string starred_table(std::uint64_t n, std::uint64_t m,
                          std::shared_ptr<const UxsProvider> provider) {
  StarredBounds bounds(provider);
  const std::uint64_t big_n = bound_index_n(n, m);
  std::ostringstream out;
  out << "k\tX*\tQ*\tY*\tZ*\tA*\tB*\tK*\tOmega*\tT*\n";
  for (std::uint64_t k = 1; k <= big_n; ++k) {
    out << k << "\t" << bounds.x_star(k).to_decimal() << "\t"
        << bounds.q_star(k).to_decimal() << "\t" << bounds.y_star(k).to_decimal()
        << "\t" << bounds.z_star(k).to_decimal() << "\t"
        << bounds.a_star(k).to_decimal() << "\t" << bounds.b_star(k).to_decimal()
        << "\t" << bounds.k_star(k).to_decimal() << "\t"
        << bounds.omega_star(k).to_decimal() << "\t"
        << bounds.piece_star(k, big_n).to_decimal() << "\n";
  }
  return out.str();
}

}  // namespace rvsim
