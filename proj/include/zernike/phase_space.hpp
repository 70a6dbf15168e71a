#pragma once

#include <array>
#include <span>
#include <stdexcept>

#include "zernike/gaussian_rational.hpp"
#include "zernike/monomial.hpp"
#include "zernike/polynomial.hpp"

namespace zernike {

// Polynomials in the central parameters g1..g8 (and the auxiliary u).
using ParamPolynomial = SparsePoly<ParamVars, GaussianRational>;

// Commutative phase-space polynomials with symbolic parameter coefficients.
// This is the working representation of every classical observable.
using PhasePolynomial = SparsePoly<PhaseVars, ParamPolynomial>;

// Fast path for randomized identity testing: parameters already evaluated.
using NumericPhasePolynomial = SparsePoly<PhaseVars, GaussianRational>;

// gamma(n) is 1-based to match the family H_N = p^2 + sum_n g_n (q.p)^n.
inline ParamPolynomial gamma(std::size_t n) {
  if (n < 1 || n > kMaxGamma) throw std::out_of_range("gamma index must be 1..8");
  return ParamPolynomial::variable(n - 1);
}

inline ParamPolynomial aux_u() { return ParamPolynomial::variable(kAuxU); }

template <class Coeff = ParamPolynomial>
SparsePoly<PhaseVars, Coeff> phase_variable(std::size_t index) {
  return SparsePoly<PhaseVars, Coeff>::variable(index);
}

inline PhasePolynomial q1() { return phase_variable(kQ1); }
inline PhasePolynomial q2() { return phase_variable(kQ2); }
inline PhasePolynomial p1() { return phase_variable(kP1); }
inline PhasePolynomial p2() { return phase_variable(kP2); }

// Canonical bracket {a,b} = sum_i da/dq_i db/dp_i - da/dp_i db/dq_i.
template <class Coeff>
SparsePoly<PhaseVars, Coeff> poisson_bracket(const SparsePoly<PhaseVars, Coeff>& a,
                                             const SparsePoly<PhaseVars, Coeff>& b) {
  SparsePoly<PhaseVars, Coeff> r;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t qi = i, pi = i + 2;
    r += a.partial_derivative(qi) * b.partial_derivative(pi);
    r -= a.partial_derivative(pi) * b.partial_derivative(qi);
  }
  return r;
}

// The interchange 1 <-> 2 of both canonical pairs.
template <class Coeff>
SparsePoly<PhaseVars, Coeff> swap_phase_indices(const SparsePoly<PhaseVars, Coeff>& a) {
  return a.permute_variables({kQ2, kQ1, kP2, kP1});
}

// Evaluates the parameter part of a coefficient. The assignment must cover
// every parameter slot the polynomial actually uses.
inline GaussianRational evaluate_params(const ParamPolynomial& p,
                                        std::span<const GaussianRational> gammas) {
  GaussianRational acc(0);
  for (const auto& [e, c] : p.terms()) {
    GaussianRational term = c;
    for (std::size_t i = 0; i < ParamVars::count; ++i) {
      if (e[i] == 0) continue;
      if (i >= gammas.size())
        throw MissingVariableError("assignment missing parameter " +
                                   std::string(ParamVars::names[i]));
      term *= gammas[i].pow(e[i]);
    }
    acc += term;
  }
  return acc;
}

inline NumericPhasePolynomial substitute_params(const PhasePolynomial& p,
                                                std::span<const GaussianRational> gammas) {
  NumericPhasePolynomial r;
  for (const auto& [e, c] : p.terms()) r.add_term(e, evaluate_params(c, gammas));
  return r;
}

// Exact evaluation at a full phase-space + parameter assignment.
inline GaussianRational evaluate(const PhasePolynomial& p,
                                 const std::array<GaussianRational, 4>& point,
                                 std::span<const GaussianRational> gammas) {
  GaussianRational acc(0);
  for (const auto& [e, c] : p.terms()) {
    GaussianRational term = evaluate_params(c, gammas);
    for (std::size_t i = 0; i < 4; ++i) {
      if (e[i] != 0) term *= point[i].pow(e[i]);
    }
    acc += term;
  }
  return acc;
}

// Per-slot rescaling g_i -> factor_i * g_i. This is how the real-parameter
// presentation (g1,g2,g3,g4) = (-i b, a, i m, -v) is reached: rescale and
// read the slots under their new names.
inline ParamPolynomial scale_params(const ParamPolynomial& p,
                                    std::span<const GaussianRational> factors) {
  ParamPolynomial r;
  for (const auto& [e, c] : p.terms()) {
    GaussianRational f = c;
    for (std::size_t i = 0; i < ParamVars::count && i < factors.size(); ++i) {
      if (e[i] != 0) f *= factors[i].pow(e[i]);
    }
    r.add_term(e, f);
  }
  return r;
}

// Sets g_m = 0 for m > n; used for family-truncation consistency checks.
inline ParamPolynomial truncate_params_above(const ParamPolynomial& p, std::size_t n) {
  ParamPolynomial r;
  for (const auto& [e, c] : p.terms()) {
    bool drop = false;
    for (std::size_t i = n; i < kMaxGamma; ++i) {
      if (e[i] != 0) {
        drop = true;
        break;
      }
    }
    if (!drop) r.add_term(e, c);
  }
  return r;
}

inline PhasePolynomial truncate_params_above(const PhasePolynomial& p, std::size_t n) {
  PhasePolynomial r;
  for (const auto& [e, c] : p.terms()) r.add_term(e, truncate_params_above(c, n));
  return r;
}

}  // namespace zernike
