#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zernike/quantum_system.hpp"
#include "zernike/text_form.hpp"

namespace zernike {

struct LadderClosureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureIdentityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Number and ladder operators obtained from {C, I_N, I'_N} by the nonlinear
// change of basis K = K1/2, K± = K2 ± K3/2 - (g2/2 - 2 g4) K1^2 (absent
// parameters zeroed for N < 4).
struct LadderBasis {
  OperatorPolynomial k1, k2, k3;
  OperatorPolynomial number_op;  // K
  OperatorPolynomial raising;    // K+
  OperatorPolynomial lowering;   // K-
  ParamPolynomial change_of_basis_coefficient;
};

inline LadderBasis build_ladder_basis(const SystemSpec& spec) {
  if (spec.order() > 4)
    throw UnsupportedOrderError("ladder basis is only available for N <= 4");
  const ParamPolynomial half = ParamPolynomial::constant(GaussianRational::rational(1, 2));
  LadderBasis b;
  b.k1 = build_quantum_angular_momentum();
  b.k2 = (build_quantum_partner_integral(spec) - build_quantum_integral(spec)) * half;
  b.k3 = commutator(b.k1, b.k2);
  b.number_op = b.k1 * half;

  ParamPolynomial cob;
  if (spec.order() >= 2) cob += spec.gamma_coefficient(2) * half;
  if (spec.order() >= 4)
    cob -= spec.gamma_coefficient(4) * ParamPolynomial::constant(GaussianRational(2));
  b.change_of_basis_coefficient = cob;

  const OperatorPolynomial shift = b.k1.pow(2) * cob;
  b.raising = b.k2 + b.k3 * half - shift;
  b.lowering = b.k2 - b.k3 * half - shift;

  if (commutator(b.number_op, b.raising) != b.raising)
    throw LadderClosureError("[K, K+] != K+ (integral ordering mismatch)");
  if (commutator(b.number_op, b.lowering) != -b.lowering)
    throw LadderClosureError("[K, K-] != -K- (integral ordering mismatch)");
  return b;
}

// Formal polynomials in the ladder eigenvalue k and the energy E.
using KEPolynomial = SparsePoly<KEVars, ParamPolynomial>;
inline constexpr std::size_t kVarK = 0, kVarE = 1;

// K+ K- = Phi1 * Phi2 with both factors at most degree N in k and linear
// in E.
struct StructureOperator {
  KEPolynomial phi1;
  KEPolynomial phi2;

  KEPolynomial product() const { return phi1 * phi2; }
};

// Evaluates a (k, E)-polynomial on a commuting operator pair.
inline OperatorPolynomial substitute_operators(const KEPolynomial& f,
                                               const OperatorPolynomial& k_op,
                                               const OperatorPolynomial& h_op) {
  const std::uint64_t dk = f.degree_in(kVarK).value_or(0);
  const std::uint64_t de = f.degree_in(kVarE).value_or(0);
  std::vector<OperatorPolynomial> kp{OperatorPolynomial::identity()};
  for (std::uint64_t m = 1; m <= dk; ++m) kp.push_back(kp.back() * k_op);
  std::vector<OperatorPolynomial> hp{OperatorPolynomial::identity()};
  for (std::uint64_t m = 1; m <= de; ++m) hp.push_back(hp.back() * h_op);
  OperatorPolynomial out;
  for (const auto& [e, c] : f.terms()) out += kp[e[kVarK]] * hp[e[kVarE]] * c;
  return out;
}

// The displayed factor pair, truncated to the parameters present:
//   Phi1 = (E - 2i g1 k + 4 g2 k^2 + 8i g3 k^3 - 16 g4 k^4) / 4
//   Phi2 =  E + 2i g1 (k-1) + 4 g2 (k-1)^2 - 8i g3 (k-1)^3 - 16 g4 (k-1)^4
// Both identities of the ladder algebra are certified before returning.
inline StructureOperator build_structure_operator(const SystemSpec& spec,
                                                  const LadderBasis& basis) {
  if (spec.order() > 4)
    throw UnsupportedOrderError("structure operator is only available for N <= 4");
  const GaussianRational two_i = GaussianRational(2) * GaussianRational::i();
  const std::array<GaussianRational, 4> a_coeffs{-two_i, GaussianRational(4),
                                                 GaussianRational(4) * two_i,
                                                 GaussianRational(-16)};
  const std::array<GaussianRational, 4> b_coeffs{two_i, GaussianRational(4),
                                                 GaussianRational(-4) * two_i,
                                                 GaussianRational(-16)};
  const KEPolynomial kvar = KEPolynomial::variable(kVarK);
  const KEPolynomial evar = KEPolynomial::variable(kVarE);
  const KEPolynomial k_minus_one = kvar - KEPolynomial::one();

  KEPolynomial phi1 = evar;
  KEPolynomial phi2 = evar;
  for (int m = 1; m <= std::min(spec.order(), 4); ++m) {
    const auto idx = static_cast<std::size_t>(m) - 1;
    phi1 += kvar.pow(static_cast<unsigned>(m)) *
            (spec.gamma_coefficient(m) * ParamPolynomial::constant(a_coeffs[idx]));
    phi2 += k_minus_one.pow(static_cast<unsigned>(m)) *
            (spec.gamma_coefficient(m) * ParamPolynomial::constant(b_coeffs[idx]));
  }
  phi1 = phi1 * ParamPolynomial::constant(GaussianRational::rational(1, 4));

  StructureOperator structure{std::move(phi1), std::move(phi2)};

  const OperatorPolynomial h = build_quantum_hamiltonian(spec);
  const OperatorPolynomial op1 = substitute_operators(structure.phi1, basis.number_op, h);
  const OperatorPolynomial op2 = substitute_operators(structure.phi2, basis.number_op, h);
  if (basis.raising * basis.lowering != op1 * op2)
    throw StructureIdentityError("K+ K- != Phi1 Phi2 as operators");

  const KEPolynomial phi = structure.product();
  const OperatorPolynomial shifted =
      substitute_operators(phi, basis.number_op + OperatorPolynomial::identity(), h);
  if (commutator(basis.lowering, basis.raising) != shifted - op1 * op2)
    throw StructureIdentityError("[K-, K+] != Phi(K+I) - Phi(K)");
  return structure;
}

// Shifted triple B = K - u I, b- = K-, b+ = K+ with the defining
// commutators verified with u carried as a formal parameter.
struct DeformedOscillator {
  OperatorPolynomial number_shifted;  // B
  OperatorPolynomial lowering;        // b-
  OperatorPolynomial raising;         // b+
};

inline DeformedOscillator deformed_oscillator(const SystemSpec& spec, const LadderBasis& basis,
                                              const StructureOperator& structure) {
  DeformedOscillator d;
  d.number_shifted = basis.number_op - OperatorPolynomial::constant(aux_u());
  d.lowering = basis.lowering;
  d.raising = basis.raising;

  if (commutator(d.number_shifted, d.raising) != d.raising)
    throw LadderClosureError("[B, b+] != b+");
  if (commutator(d.number_shifted, d.lowering) != -d.lowering)
    throw LadderClosureError("[B, b-] != -b-");

  const OperatorPolynomial h = build_quantum_hamiltonian(spec);
  const KEPolynomial phi = structure.product();
  const ParamPolynomial u = aux_u();
  const OperatorPolynomial arg_up =
      d.number_shifted + OperatorPolynomial::constant(u + ParamPolynomial::one());
  const OperatorPolynomial arg_dn = d.number_shifted + OperatorPolynomial::constant(u);
  const OperatorPolynomial rhs =
      substitute_operators(phi, arg_up, h) - substitute_operators(phi, arg_dn, h);
  if (commutator(d.lowering, d.raising) != rhs)
    throw StructureIdentityError("[b-, b+] != Phi(B+(u+1)I) - Phi(B+uI)");
  return d;
}

// ---------------------------------------------------------------------------
// Finite-dimensional representation conditions and the two-branch spectrum.

using NPoly = SparsePoly<LevelVars, GaussianRational>;
using EnergyPolynomial = SparsePoly<LevelVars, ParamPolynomial>;
using BoundaryPoly = SparsePoly<NUVars, ParamPolynomial>;
using BoundaryPolyScalar = SparsePoly<NUVars, GaussianRational>;
inline constexpr std::size_t kVarN = 0, kVarU = 1;

namespace detail {

inline GaussianRational scale_coeff(const GaussianRational& c, const GaussianRational& s) {
  return c * s;
}
inline ParamPolynomial scale_coeff(const ParamPolynomial& c, const GaussianRational& s) {
  return c * s;
}

// Univariate exact division; throws when the divisor does not divide.
template <class Coeff>
SparsePoly<LevelVars, Coeff> divide_exact(SparsePoly<LevelVars, Coeff> num, const NPoly& den) {
  if (den.is_zero()) throw std::domain_error("division by the zero polynomial");
  SparsePoly<LevelVars, Coeff> quotient;
  const std::uint64_t dd = *den.degree();
  const GaussianRational lead = den.coeff({static_cast<std::uint32_t>(dd)});
  while (!num.is_zero()) {
    const std::uint64_t dn = *num.degree();
    if (dn < dd) throw std::domain_error("polynomial division leaves a remainder");
    const Coeff q =
        scale_coeff(num.coeff({static_cast<std::uint32_t>(dn)}), GaussianRational(1) / lead);
    const ExpVec<1> shift{static_cast<std::uint32_t>(dn - dd)};
    quotient.add_term(shift, q);
    for (const auto& [e, c] : den.terms()) {
      num.add_term({e[0] + shift[0]}, scale_coeff(q, -c));
    }
  }
  return quotient;
}

inline BoundaryPoly substitute_ladder_point(const KEPolynomial& w, const BoundaryPoly& arg) {
  const std::uint64_t dk = w.degree_in(kVarK).value_or(0);
  std::vector<BoundaryPoly> powers{BoundaryPoly::one()};
  for (std::uint64_t m = 1; m <= dk; ++m) powers.push_back(powers.back() * arg);
  BoundaryPoly out;
  for (const auto& [e, c] : w.terms()) {
    if (e[kVarE] != 0) throw std::logic_error("energy variable left in ladder substitution");
    out += powers[e[kVarK]] * c;
  }
  return out;
}

// Splits E out of a factor: f = e * E + W(k) with constant e.
inline std::pair<GaussianRational, KEPolynomial> split_energy(const KEPolynomial& f) {
  GaussianRational e(0);
  KEPolynomial w;
  for (const auto& [exp, c] : f.terms()) {
    if (exp[kVarE] == 0) {
      w.add_term(exp, c);
    } else if (exp[kVarE] == 1 && exp[kVarK] == 0) {
      e = c.coeff(ExpVec<ParamVars::count>{});
      if (ParamPolynomial::constant(e) != c)
        throw std::logic_error("factor has a non-constant energy coefficient");
    } else {
      throw std::logic_error("factor is not linear in the energy");
    }
  }
  if (e.is_zero()) throw std::logic_error("factor does not involve the energy");
  return {e, w};
}

inline std::map<ExpVec<ParamVars::count>, BoundaryPolyScalar> split_by_params(
    const BoundaryPoly& g) {
  std::map<ExpVec<ParamVars::count>, BoundaryPolyScalar> blocks;
  for (const auto& [e, pc] : g.terms()) {
    for (const auto& [ge, c] : pc.terms()) blocks[ge].add_term(e, c);
  }
  return blocks;
}

inline NPoly coefficient_of_u(const BoundaryPolyScalar& p, std::uint32_t j) {
  NPoly out;
  for (const auto& [e, c] : p.terms()) {
    if (e[kVarU] == j) out.add_term({e[kVarN]}, c);
  }
  return out;
}

}  // namespace detail

struct RationalFunctionN {
  NPoly num;
  NPoly den = NPoly::one();

  bool den_is_one() const { return den == NPoly::one(); }

  GaussianRational at(long n) const {
    const std::array<GaussianRational, 1> pt{GaussianRational(n)};
    const GaussianRational d = evaluate(den, pt);
    if (d.is_zero()) throw std::domain_error("rational function pole at sampled n");
    return evaluate(num, pt) / d;
  }

  friend bool operator==(const RationalFunctionN& a, const RationalFunctionN& b) {
    return a.num * b.den == b.num * a.den;
  }
};

// One branch of the representation conditions: which factor vanishes at the
// bottom weight B = 0 and which at the top cutoff B = n + 1, together with
// the closed forms u(n) and E(n).
struct SpectrumFamily {
  std::string label;
  int bottom_factor = 1;
  int top_factor = 2;
  RationalFunctionN u;
  EnergyPolynomial energy;

  GaussianRational energy_at(long n, std::span<const GaussianRational> gammas) const {
    const std::array<GaussianRational, 1> pt{GaussianRational(n)};
    GaussianRational acc(0);
    for (const auto& [e, c] : energy.terms())
      acc += evaluate_params(c, gammas) * pt[0].pow(e[0]);
    return acc;
  }

  // E(n) with the parameters still symbolic, at a fixed integer n.
  ParamPolynomial energy_params_at(long n) const {
    ParamPolynomial acc;
    for (const auto& [e, c] : energy.terms())
      acc += c * ParamPolynomial::constant(GaussianRational(n).pow(e[0]));
    return acc;
  }
};

struct SpectrumResult {
  std::vector<SpectrumFamily> families;
  std::vector<std::string> log;
};

// Enumerates the four assignments of the two factors to the two boundary
// conditions Phi(0) = 0 and Phi(n+1) = 0, solves each pair of linear-in-E
// equations over the rational functions of the formal size n, and keeps the
// assignments that are satisfiable identically in n. With symbolic
// parameters every parameter monomial must vanish separately, so the
// candidate u(n) comes from a block linear in u and is then checked against
// all blocks.
inline SpectrumResult solve_spectrum(const SystemSpec& spec) {
  const LadderBasis basis = build_ladder_basis(spec);
  const StructureOperator structure = build_structure_operator(spec, basis);

  const auto [e1, w1] = detail::split_energy(structure.phi1);
  const auto [e2, w2] = detail::split_energy(structure.phi2);

  const BoundaryPoly n_var = BoundaryPoly::variable(kVarN);
  const BoundaryPoly u_var = BoundaryPoly::variable(kVarU);

  SpectrumResult result;
  int extra_label = 3;
  for (const auto& [bottom, top] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {1, 1}, {2, 2}}) {
    const auto& wb = bottom == 1 ? w1 : w2;
    const auto& wt = top == 1 ? w1 : w2;
    const GaussianRational eb = bottom == 1 ? e1 : e2;
    const GaussianRational et = top == 1 ? e1 : e2;
    const std::string tag =
        "Phi" + std::to_string(bottom) + "@0, Phi" + std::to_string(top) + "@n+1";

    const BoundaryPoly wb_at = detail::substitute_ladder_point(wb, u_var);
    const BoundaryPoly wt_at =
        detail::substitute_ladder_point(wt, n_var + u_var + BoundaryPoly::one());
    const BoundaryPoly g = wt_at * ParamPolynomial::constant(eb) -
                           wb_at * ParamPolynomial::constant(et);

    const auto blocks = detail::split_by_params(g);
    if (blocks.empty()) {
      result.log.push_back("assignment (" + tag + ") imposes no constraint; skipped");
      continue;
    }

    const BoundaryPolyScalar* pivot = nullptr;
    for (const auto& [ge, block] : blocks) {
      if (block.degree_in(kVarU) == 1) {
        pivot = &block;
        break;
      }
    }
    if (pivot == nullptr) {
      result.log.push_back("assignment (" + tag + ") dropped: no block linear in u");
      continue;
    }

    RationalFunctionN u;
    u.num = -detail::coefficient_of_u(*pivot, 0);
    u.den = detail::coefficient_of_u(*pivot, 1);
    // Normalize: divide through when exact, otherwise make the denominator
    // monic so equal functions compare equal.
    try {
      u.num = detail::divide_exact(u.num, u.den);
      u.den = NPoly::one();
    } catch (const std::domain_error&) {
      const GaussianRational lead = u.den.coeff({static_cast<std::uint32_t>(*u.den.degree())});
      u.num = u.num * (GaussianRational(1) / lead);
      u.den = u.den * (GaussianRational(1) / lead);
    }

    bool consistent = true;
    for (const auto& [ge, block] : blocks) {
      const std::uint64_t ju = block.degree_in(kVarU).value_or(0);
      NPoly acc;
      for (const auto& [e, c] : block.terms()) {
        NPoly term = NPoly::monomial({e[kVarN]}, c);
        term = term * u.num.pow(e[kVarU]) *
               u.den.pow(static_cast<unsigned>(ju - e[kVarU]));
        acc += term;
      }
      if (!acc.is_zero()) {
        consistent = false;
        break;
      }
    }
    if (!consistent) {
      result.log.push_back("assignment (" + tag + ") dropped: boundary conditions inconsistent");
      continue;
    }

    // E(n) = -Wb(u(n)) / eb, cleared of the u-denominator.
    const std::uint64_t ju = wb_at.degree_in(kVarU).value_or(0);
    EnergyPolynomial energy_num;
    for (const auto& [e, c] : wb_at.terms()) {
      NPoly scalar = NPoly::monomial({e[kVarN]}, GaussianRational(1));
      scalar = scalar * u.num.pow(e[kVarU]) *
               u.den.pow(static_cast<unsigned>(ju - e[kVarU]));
      for (const auto& [se, sc] : scalar.terms())
        energy_num.add_term(se, c * ParamPolynomial::constant(-sc));
    }
    const NPoly energy_den = u.den.pow(static_cast<unsigned>(ju)) * eb;
    EnergyPolynomial energy;
    try {
      energy = detail::divide_exact(energy_num, energy_den);
    } catch (const std::domain_error&) {
      result.log.push_back("assignment (" + tag + ") dropped: energy is not polynomial in n");
      continue;
    }

    SpectrumFamily family;
    family.bottom_factor = bottom;
    family.top_factor = top;
    family.u = u;
    family.energy = energy;

    bool duplicate = false;
    for (const auto& known : result.families) {
      if (known.u == family.u && known.energy == family.energy) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      result.log.push_back("assignment (" + tag + ") duplicates an earlier family");
      continue;
    }

    if (bottom == 1 && top == 2) family.label = "I";
    else if (bottom == 2 && top == 1) family.label = "II";
    else family.label = "F" + std::to_string(extra_label++);
    result.families.push_back(std::move(family));
  }
  return result;
}

// Structure operator evaluated on a family at integer (B, n); parameters
// stay symbolic. Vanishes at B = 0 and B = n + 1, must not vanish inside.
inline ParamPolynomial structure_value(const StructureOperator& structure,
                                       const SpectrumFamily& family, long b, long n) {
  const GaussianRational k_val = GaussianRational(b) + family.u.at(n);
  const ParamPolynomial e_val = family.energy_params_at(n);
  ParamPolynomial acc;
  for (const auto& [e, c] : structure.product().terms()) {
    ParamPolynomial term = c * ParamPolynomial::constant(k_val.pow(e[kVarK]));
    term = term * e_val.pow(e[kVarE]);
    acc += term;
  }
  return acc;
}

// The two Zernike-type perturbed spectra at alpha = -1, beta = -2:
//   E_I  = n(n+2) - mu n^3 - nu n^4
//   E_II = n(n+2) + mu (n+2)^3 - nu (n+2)^4
inline std::pair<NPoly, NPoly> zernike_specialization(const mpq_class& mu, const mpq_class& nu) {
  const SpectrumResult spectra = solve_spectrum(SystemSpec::symbolic(4));
  const GaussianRational i = GaussianRational::i();
  const std::vector<GaussianRational> gammas{
      GaussianRational(2) * i,               // g1 = -i beta, beta = -2
      GaussianRational(-1),                  // g2 = alpha = -1
      i * GaussianRational(mu),              // g3 = i mu
      -GaussianRational(nu)};                // g4 = -nu
  NPoly e_i, e_ii;
  for (const auto& family : spectra.families) {
    NPoly out;
    for (const auto& [e, c] : family.energy.terms())
      out.add_term(e, evaluate_params(c, gammas));
    if (family.label == "I") e_i = out;
    if (family.label == "II") e_ii = out;
  }
  return {e_i, e_ii};
}

}  // namespace zernike
