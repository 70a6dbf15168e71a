#pragma once

#include <string>
#include <vector>

#include "zernike/classical_integrals.hpp"
#include "zernike/text_form.hpp"

namespace zernike {

struct BracketClosureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// L1 = C/2, L2 = (I' - I)/2, L3 = {L1, L2}; the pair of sl(2)-type brackets
// {L1,L2} = L3 and {L1,L3} = -L2 is certified on construction.
struct SymmetryGenerators {
  PhasePolynomial l1;
  PhasePolynomial l2;
  PhasePolynomial l3;
};

inline SymmetryGenerators build_generators(const SystemSpec& spec, const IntegralSolution& sol) {
  const GaussianRational half = GaussianRational::rational(1, 2);
  SymmetryGenerators g;
  g.l1 = build_angular_momentum() * ParamPolynomial::constant(half);
  g.l2 = (swap_phase_indices(sol.integral) - sol.integral) * ParamPolynomial::constant(half);
  g.l3 = poisson_bracket(g.l1, g.l2);
  if (poisson_bracket(g.l1, g.l3) != -g.l2)
    throw BracketClosureError("generators do not close: {L1,L3} != -L2");
  (void)spec;
  return g;
}

// One closing-bracket coefficient: at most linear in the Hamiltonian,
// Phi = constant_part + h_coefficient * H.
struct StructureFunction {
  ParamPolynomial constant_part;
  ParamPolynomial h_coefficient;

  bool is_zero() const { return constant_part.is_zero() && h_coefficient.is_zero(); }
};

struct StructureFunctionTable {
  int order = 0;
  std::vector<StructureFunction> entries;  // index n-1 holds Phi_{N,n}

  const StructureFunction& at(int n) const { return entries.at(static_cast<std::size_t>(n - 1)); }
};

// Phi_{N,n} = g_n^2/2 - (-1)^n g_{2n} H [present iff N-2n+1 >= 1]
//           + sum_{s=1}^{min(n-1,N-n)} (-1)^s g_{n-s} g_{n+s}.
// Parameters with index beyond N are identically zero, which the range
// conditions already encode.
inline StructureFunctionTable structure_functions(const SystemSpec& spec) {
  const int order = spec.order();
  StructureFunctionTable table;
  table.order = order;
  const GaussianRational half = GaussianRational::rational(1, 2);
  for (int n = 1; n <= order; ++n) {
    StructureFunction phi;
    phi.constant_part = spec.gamma_coefficient(n) * spec.gamma_coefficient(n) *
                        ParamPolynomial::constant(half);
    for (int s = 1; s <= std::min(n - 1, order - n); ++s) {
      ParamPolynomial cross = spec.gamma_coefficient(n - s) * spec.gamma_coefficient(n + s);
      if (s % 2 == 1) {
        phi.constant_part -= cross;
      } else {
        phi.constant_part += cross;
      }
    }
    if (order - 2 * n + 1 >= 1) {
      phi.h_coefficient = spec.gamma_coefficient(2 * n);
      if (n % 2 == 0) phi.h_coefficient = -phi.h_coefficient;  // -(-1)^n g_{2n}
      else /* n odd: -(-1)^n = +1 */ {}
    }
    table.entries.push_back(std::move(phi));
  }
  return table;
}

inline std::string structure_function_text(const StructureFunction& phi) {
  ParamPolynomial c0 = phi.constant_part;
  std::string out;
  for (auto it = c0.terms().rbegin(); it != c0.terms().rend(); ++it) {
    out = textform::join_terms(
        std::move(out),
        textform::term_text(it->second,
                            textform::monomial_text<ParamVars>(it->first, ParamVars::names)));
  }
  for (auto it = phi.h_coefficient.terms().rbegin(); it != phi.h_coefficient.terms().rend(); ++it) {
    std::string mono = textform::monomial_text<ParamVars>(it->first, ParamVars::names);
    mono = mono.empty() ? "H" : mono + "*H";
    out = textform::join_terms(std::move(out), textform::term_text(it->second, std::move(mono)));
  }
  return out.empty() ? "0" : out;
}

struct Prop2Result {
  bool holds = false;
  PhasePolynomial residual;
  int bracket_degree = 0;  // degree in 2L1 of the closing bracket
};

// Checks {L2, L3} = -sum_{n=1}^N n Phi_{N,n}(H_N) (2 L1)^{2n-1} exactly,
// substituting the explicit Hamiltonian for the formal H.
inline Prop2Result verify_prop2(const SystemSpec& spec, const SymmetryGenerators& gens,
                                const StructureFunctionTable& table) {
  const PhasePolynomial h = build_hamiltonian(spec);
  const PhasePolynomial two_l1 = gens.l1 + gens.l1;
  PhasePolynomial rhs;
  int bracket_degree = 0;
  for (int n = 1; n <= table.order; ++n) {
    const StructureFunction& phi = table.at(n);
    if (phi.is_zero()) continue;
    PhasePolynomial factor = PhasePolynomial::constant(phi.constant_part);
    factor += h * phi.h_coefficient;
    rhs -= factor * two_l1.pow(static_cast<unsigned>(2 * n - 1)) *
           ParamPolynomial::constant(GaussianRational(n));
    bracket_degree = 2 * n - 1;
  }
  PhasePolynomial residual = poisson_bracket(gens.l2, gens.l3) - rhs;
  return {residual.is_zero(), std::move(residual), bracket_degree};
}

}  // namespace zernike
