#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zernike/phase_space.hpp"

namespace zernike {

// Selects a member of the Hamiltonian family: the order N plus either fully
// symbolic parameters or an explicit rational assignment g1..gN.
class SystemSpec {
 public:
  static constexpr int kMaxOrder = static_cast<int>(kMaxGamma);

  static SystemSpec symbolic(int order) { return SystemSpec(order, std::nullopt); }

  static SystemSpec numeric(int order, std::vector<GaussianRational> gammas) {
    if (static_cast<int>(gammas.size()) != order)
      throw std::invalid_argument("numeric spec needs exactly N parameter values");
    return SystemSpec(order, std::move(gammas));
  }

  int order() const { return order_; }
  bool is_symbolic() const { return !gammas_.has_value(); }

  const std::vector<GaussianRational>& gamma_values() const {
    if (is_symbolic()) throw std::logic_error("symbolic spec carries no parameter values");
    return *gammas_;
  }

  // Coefficient of (q.p)^n in this member: the formal g_n symbol, or its
  // assigned value.
  ParamPolynomial gamma_coefficient(int n) const {
    if (n < 1 || n > order_) throw std::out_of_range("gamma index outside 1..N");
    if (is_symbolic()) return gamma(static_cast<std::size_t>(n));
    return ParamPolynomial::constant((*gammas_)[static_cast<std::size_t>(n) - 1]);
  }

  bool all_gammas_real() const {
    if (is_symbolic()) return false;
    for (const auto& g : *gammas_) {
      if (!g.is_real()) return false;
    }
    return true;
  }

 private:
  SystemSpec(int order, std::optional<std::vector<GaussianRational>> gammas)
      : order_(order), gammas_(std::move(gammas)) {
    if (order_ < 1 || order_ > kMaxOrder)
      throw std::invalid_argument("order N must be between 1 and 8");
  }

  int order_;
  std::optional<std::vector<GaussianRational>> gammas_;
};

}  // namespace zernike
