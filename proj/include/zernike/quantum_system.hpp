#pragma once

#include <map>
#include <vector>

#include "zernike/linear_solver.hpp"
#include "zernike/operator_polynomial.hpp"
#include "zernike/system_spec.hpp"

namespace zernike {

struct UnsupportedOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline OperatorPolynomial build_quantum_angular_momentum() {
  return OperatorPolynomial::monomial({1, 0, 0, 1}) -
         OperatorPolynomial::monomial({0, 1, 1, 0});
}

// H_N as the same formal expression as the classical family, read in
// operators: P1^2 + P2^2 + sum_n g_n (Q1 P1 + Q2 P2)^n with the n-th power
// formed by repeated products of the literal sum, then normal ordered.
inline OperatorPolynomial build_quantum_hamiltonian(const SystemSpec& spec) {
  OperatorPolynomial h = OperatorPolynomial::monomial({0, 0, 2, 0}) +
                         OperatorPolynomial::monomial({0, 0, 0, 2});
  const OperatorPolynomial d = OperatorPolynomial::monomial({1, 0, 1, 0}) +
                               OperatorPolynomial::monomial({0, 1, 0, 1});
  OperatorPolynomial dn = OperatorPolynomial::identity();
  for (int n = 1; n <= spec.order(); ++n) {
    dn = dn * d;
    h += dn * spec.gamma_coefficient(n);
  }
  return h;
}

namespace detail {

// The four displayed blocks of the N=4 quantum integral; block n is the
// operator multiplying g_n. Lower orders truncate this list.
inline std::vector<OperatorPolynomial> quantum_integral_blocks() {
  using Op = OperatorPolynomial;
  const GaussianRational i3 = GaussianRational(3) * GaussianRational::i();
  const GaussianRational i6 = GaussianRational(6) * GaussianRational::i();
  const Op csq = build_quantum_angular_momentum().pow(2);

  std::vector<OperatorPolynomial> blocks;

  // g1: Q2 P2
  blocks.push_back(Op::monomial({0, 1, 0, 1}));

  // g2: (Q1^2 + Q2^2) P2^2 - C^2
  blocks.push_back(Op::monomial({2, 0, 0, 2}) + Op::monomial({0, 2, 0, 2}) - csq);

  // g3: Q2^3 (P2^3 - P1^2 P2) + (Q1^3 + 3 Q1 Q2^2) P1 P2^2
  //     - 3i Q2^2 P2^2 - 3i Q1 Q2 P1 P2 - Q2 P2
  blocks.push_back(Op::monomial({0, 3, 0, 3}) - Op::monomial({0, 3, 2, 1}) +
                   Op::monomial({3, 0, 1, 2}) +
                   Op::monomial({1, 2, 1, 2}, ParamPolynomial::constant(GaussianRational(3))) -
                   Op::monomial({0, 2, 0, 2}, ParamPolynomial::constant(i3)) -
                   Op::monomial({1, 1, 1, 1}, ParamPolynomial::constant(i3)) -
                   Op::monomial({0, 1, 0, 1}));

  // g4: (Q2^4 - Q1^4)(P2^4 - P1^2 P2^2) + 4 (Q1^3 Q2 + Q1 Q2^3) P1 P2^3
  //     - 6i (Q2^3 + Q1^2 Q2) P2^3 - 6i (Q1^3 + Q1 Q2^2) P1 P2^2
  //     - 4 (Q1^2 + Q2^2) P2^2 + 4 C^2
  Op g4 = Op::monomial({0, 4, 0, 4}) - Op::monomial({0, 4, 2, 2}) -
          Op::monomial({4, 0, 0, 4}) + Op::monomial({4, 0, 2, 2});
  g4 += Op::monomial({3, 1, 1, 3}, ParamPolynomial::constant(GaussianRational(4))) +
        Op::monomial({1, 3, 1, 3}, ParamPolynomial::constant(GaussianRational(4)));
  g4 -= Op::monomial({0, 3, 0, 3}, ParamPolynomial::constant(i6)) +
        Op::monomial({2, 1, 0, 3}, ParamPolynomial::constant(i6));
  g4 -= Op::monomial({3, 0, 1, 2}, ParamPolynomial::constant(i6)) +
        Op::monomial({1, 2, 1, 2}, ParamPolynomial::constant(i6));
  g4 -= Op::monomial({2, 0, 0, 2}, ParamPolynomial::constant(GaussianRational(4))) +
        Op::monomial({0, 2, 0, 2}, ParamPolynomial::constant(GaussianRational(4)));
  g4 += csq * ParamPolynomial::constant(GaussianRational(4));
  blocks.push_back(std::move(g4));

  return blocks;
}

}  // namespace detail

// The displayed quantum integral, truncated to the g-blocks with index <= N.
// Commutation with H_N is certified on construction.
inline OperatorPolynomial build_quantum_integral(const SystemSpec& spec) {
  if (spec.order() > 4)
    throw UnsupportedOrderError("quantum integral is only available for N <= 4");
  const auto blocks = detail::quantum_integral_blocks();
  OperatorPolynomial integral = OperatorPolynomial::monomial({0, 0, 0, 2});
  for (int n = 1; n <= spec.order(); ++n)
    integral += blocks[static_cast<std::size_t>(n) - 1] * spec.gamma_coefficient(n);
  if (!commutator(build_quantum_hamiltonian(spec), integral).is_zero())
    throw UnsupportedOrderError("quantum integral fails to commute with the Hamiltonian");
  return integral;
}

inline OperatorPolynomial swap_operator_indices(const OperatorPolynomial& a) {
  OperatorPolynomial r;
  for (const auto& [e, c] : a.terms())
    r.add_term({e[kQ2], e[kQ1], e[kP2], e[kP1]}, c);
  return r;
}

// The displayed integral carries a -(g2 - 4 g4) C^2 dressing on top of a
// swap-covariant core (the core is what reduces to the classical integral in
// the commutative limit). Both views are useful.
inline OperatorPolynomial quantum_integral_dressing(const SystemSpec& spec) {
  const OperatorPolynomial csq = build_quantum_angular_momentum().pow(2);
  OperatorPolynomial dressing;
  if (spec.order() >= 2) dressing += csq * spec.gamma_coefficient(2);
  if (spec.order() >= 4)
    dressing -= csq * (spec.gamma_coefficient(4) * ParamPolynomial::constant(GaussianRational(4)));
  return dressing;
}

inline OperatorPolynomial quantum_integral_core(const SystemSpec& spec) {
  return build_quantum_integral(spec) + quantum_integral_dressing(spec);
}

// The partner integral I'_N: the 1 <-> 2 interchange of the core. Unlike
// the naive swap of I_N itself this satisfies the displayed dependence
// relation; its commutative limit is the swapped classical integral.
inline OperatorPolynomial build_quantum_partner_integral(const SystemSpec& spec) {
  return swap_operator_indices(quantum_integral_core(spec));
}

struct QuantumRelation {
  bool holds = false;
  OperatorPolynomial residual;
  // H_N - I_N - I'_N expressed as sum_k c_k C^k.
  std::map<unsigned, ParamPolynomial> angular_powers;
};

// Exact dependence relation among {H, C, I, I'}: the difference
// H - I - I' is resolved into powers of the angular momentum operator by an
// exact linear solve, one parameter monomial at a time. For N = 4 the result
// is additionally required to be -4 g4 C^2 + g4 C^4.
inline QuantumRelation verify_quantum_relation(const SystemSpec& spec) {
  if (spec.order() > 4)
    throw UnsupportedOrderError("quantum relation is only available for N <= 4");
  const OperatorPolynomial h = build_quantum_hamiltonian(spec);
  const OperatorPolynomial integral = build_quantum_integral(spec);
  const OperatorPolynomial rest = h - integral - build_quantum_partner_integral(spec);

  const OperatorPolynomial c_op = build_quantum_angular_momentum();
  const unsigned max_power = static_cast<unsigned>(spec.order());
  std::vector<OperatorPolynomial> c_powers;
  for (unsigned k = 0; k <= max_power; ++k) c_powers.push_back(c_op.pow(k));

  // Parameter-monomial blocks of `rest`, each a scalar-coefficient operator
  // polynomial to be matched against the (parameter-free) powers of C.
  std::map<ExpVec<ParamVars::count>, std::map<ExpVec<4>, GaussianRational>> blocks;
  for (const auto& [pe, pc] : rest.terms()) {
    for (const auto& [ge, v] : pc.terms()) blocks[ge][pe] = v;
  }

  QuantumRelation out;
  OperatorPolynomial reconstructed;
  bool solvable = true;
  for (const auto& [ge, block] : blocks) {
    std::map<ExpVec<4>, std::size_t> row_of;
    auto row_index = [&](const ExpVec<4>& e) {
      return row_of.try_emplace(e, row_of.size()).first->second;
    };
    for (const auto& [e, v] : block) row_index(e);
    for (const auto& p : c_powers) {
      for (const auto& [e, pc] : p.terms()) row_index(e);
    }
    ExactMatrix a(row_of.size(),
                  std::vector<GaussianRational>(c_powers.size(), GaussianRational(0)));
    std::vector<GaussianRational> b(row_of.size(), GaussianRational(0));
    for (std::size_t k = 0; k < c_powers.size(); ++k) {
      for (const auto& [e, pc] : c_powers[k].terms())
        a[row_index(e)][k] = pc.coeff(ExpVec<ParamVars::count>{});
    }
    for (const auto& [e, v] : block) b[row_index(e)] = v;

    const LinearSolution sol = solve_linear_system(a, b);
    if (sol.status == LinearSolution::Status::kInconsistent) {
      solvable = false;
      continue;
    }
    for (std::size_t k = 0; k < c_powers.size(); ++k) {
      if (sol.values[k].is_zero()) continue;
      const ParamPolynomial coeff =
          ParamPolynomial::monomial(ge, sol.values[k]);
      out.angular_powers[static_cast<unsigned>(k)] += coeff;
      reconstructed += c_powers[k] * coeff;
    }
  }

  out.residual = rest - reconstructed;
  out.holds = solvable && out.residual.is_zero();

  if (out.holds && spec.order() == 4 && spec.is_symbolic()) {
    std::map<unsigned, ParamPolynomial> displayed;
    displayed[2] = gamma(4) * ParamPolynomial::constant(GaussianRational(-4));
    displayed[4] = gamma(4);
    out.holds = out.angular_powers == displayed;
  }
  return out;
}

}  // namespace zernike
