#include "rvsim/traj.hpp"

#include <sstream>

namespace rvsim {

const char* traj_form_name(TrajForm f) {
  switch (f) {
    case TrajForm::R: return "R";
    case TrajForm::X: return "X";
    case TrajForm::Q: return "Q";
    case TrajForm::Y: return "Y";
    case TrajForm::Z: return "Z";
    case TrajForm::A: return "A";
    case TrajForm::B: return "B";
    case TrajForm::K: return "K";
    case TrajForm::Omega: return "Omega";
  }
  return "?";
}

std::string TrajExpr::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Named:
      out << traj_form_name(form) << "(" << k << ")";
      break;
    case Kind::Reverse:
      out << "rev(" << children[0].to_string() << ")";
      break;
    case Kind::Concat: {
      out << "concat(";
      for (std::size_t i = 0; i < children.size(); ++i)
        out << (i ? "," : "") << children[i].to_string();
      out << ")";
      break;
    }
    case Kind::Power:
      out << "pow(" << children[0].to_string() << "," << exponent.to_decimal() << ")";
      break;
  }
  return out.str();
}

BigUint power_length(const BigUint& base_len, const BigUint& exponent) {
  // x copies of a closed trajectory share x-1 junction nodes.
  return exponent * (base_len - BigUint(1)) + BigUint(1);
}

const BigUint& LengthCalculus::named_length(TrajForm f, std::uint64_t k) {
  auto key = std::make_pair(static_cast<int>(f), k);
  auto it = length_memo_.find(key);
  if (it != length_memo_.end()) return it->second;

  BigUint value;
  switch (f) {
    case TrajForm::R:
      value = p(k) + BigUint(1);
      break;
    case TrajForm::X:
      value = BigUint(2) * p(k) + BigUint(1);
      break;
    case TrajForm::Q: {
      // X(1)...X(k) chained through k-1 shared junction nodes.
      BigUint sum;
      for (std::uint64_t i = 1; i <= k; ++i) sum += named_length(TrajForm::X, i);
      value = sum - BigUint(k - 1);
      break;
    }
    case TrajForm::Y: {
      BigUint y_prime = (p(k) + BigUint(1)) * named_length(TrajForm::Q, k);
      value = BigUint(2) * y_prime - BigUint(1);
      break;
    }
    case TrajForm::Z: {
      BigUint sum;
      for (std::uint64_t i = 1; i <= k; ++i) sum += named_length(TrajForm::Y, i);
      value = sum - BigUint(k - 1);
      break;
    }
    case TrajForm::A: {
      BigUint a_prime = (p(k) + BigUint(1)) * named_length(TrajForm::Z, k);
      value = BigUint(2) * a_prime - BigUint(1);
      break;
    }
    case TrajForm::B:
      value = power_length(named_length(TrajForm::Y, k), power_exponent(TrajForm::B, k));
      break;
    case TrajForm::K:
      value = power_length(named_length(TrajForm::X, k), power_exponent(TrajForm::K, k));
      break;
    case TrajForm::Omega:
      value =
          power_length(named_length(TrajForm::X, k), power_exponent(TrajForm::Omega, k));
      break;
  }
  return length_memo_.emplace(key, std::move(value)).first->second;
}

const BigUint& LengthCalculus::power_exponent(TrajForm f, std::uint64_t k) {
  auto key = std::make_pair(static_cast<int>(f), k);
  auto it = exponent_memo_.find(key);
  if (it != exponent_memo_.end()) return it->second;

  BigUint value;
  switch (f) {
    case TrajForm::B:
      value = BigUint(2) * named_length(TrajForm::A, 4 * k);
      break;
    case TrajForm::K:
      value = BigUint(2) *
              (named_length(TrajForm::B, 4 * k) + named_length(TrajForm::A, 8 * k));
      break;
    case TrajForm::Omega:
      value = BigUint(2 * k - 1) * named_length(TrajForm::K, k);
      break;
    default:
      throw std::invalid_argument("form has no power exponent");
  }
  return exponent_memo_.emplace(key, std::move(value)).first->second;
}

BigUint LengthCalculus::expr_length(const TrajExpr& e) {
  switch (e.kind) {
    case TrajExpr::Kind::Named:
      return named_length(e.form, e.k);
    case TrajExpr::Kind::Reverse:
      return expr_length(e.children[0]);
    case TrajExpr::Kind::Concat: {
      if (e.children.empty()) throw std::invalid_argument("empty concat");
      BigUint sum;
      for (const TrajExpr& c : e.children) sum += expr_length(c);
      return sum - BigUint(static_cast<std::uint64_t>(e.children.size() - 1));
    }
    case TrajExpr::Kind::Power:
      return power_length(expr_length(e.children[0]), e.exponent);
  }
  throw std::logic_error("unreachable");
}

}  // namespace rvsim
