#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "zernike/gaussian_rational.hpp"
#include "zernike/monomial.hpp"

namespace zernike {

struct MissingVariableError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sparse multivariate polynomial over an exact coefficient ring. Canonical
// form is maintained at all times: the term map never holds a zero
// coefficient and monomials are unique, so structural equality of the maps
// is polynomial equality. Values are immutable in spirit; every operation
// returns a fresh polynomial.
template <class VarsT, class CoeffT>
class SparsePoly {
 public:
  using Vars = VarsT;
  using Coeff = CoeffT;
  static constexpr std::size_t nvars = VarsT::count;
  using Exp = ExpVec<nvars>;
  using TermMap = std::map<Exp, Coeff, GradedLexLess<VarsT>>;

  SparsePoly() = default;

  // Integer constants embed into any coefficient ring; lets nested
  // polynomials act as coefficients themselves.
  SparsePoly(int v) : SparsePoly(static_cast<long>(v)) {}
  SparsePoly(long v) {
    if (v != 0) terms_.emplace(Exp{}, Coeff(v));
  }

  static SparsePoly zero() { return {}; }

  static SparsePoly constant(Coeff c) {
    SparsePoly p;
    p.add_term(Exp{}, std::move(c));
    return p;
  }

  static SparsePoly one() { return constant(Coeff(1)); }

  static SparsePoly variable(std::size_t index, Coeff c = Coeff(1)) {
    if (index >= nvars) throw std::out_of_range("variable index out of range");
    Exp e{};
    e[index] = 1;
    SparsePoly p;
    p.add_term(e, std::move(c));
    return p;
  }

  static SparsePoly monomial(const Exp& e, Coeff c) {
    SparsePoly p;
    p.add_term(e, std::move(c));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Total degree; empty for the zero polynomial (the spec's "minus
  // infinity" marker).
  std::optional<std::uint64_t> degree() const {
    if (terms_.empty()) return std::nullopt;
    return total_degree(terms_.rbegin()->first);
  }

  std::optional<std::uint64_t> degree_in(std::size_t var) const {
    if (var >= nvars) throw std::out_of_range("variable index out of range");
    if (terms_.empty()) return std::nullopt;
    std::uint64_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max<std::uint64_t>(d, e[var]);
    return d;
  }

  Coeff coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(const Exp& e, Coeff c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  SparsePoly operator-() const {
    SparsePoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  SparsePoly& operator+=(const SparsePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  SparsePoly& operator-=(const SparsePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exp e;
        for (std::size_t i = 0; i < nvars; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

  // Scalar multiple (scalar from the coefficient ring).
  friend SparsePoly operator*(const SparsePoly& a, const Coeff& s) {
    SparsePoly r;
    if (s.is_zero()) return r;
    for (const auto& [e, c] : a.terms_) r.add_term(e, c * s);
    return r;
  }
  friend SparsePoly operator*(const Coeff& s, const SparsePoly& a) { return a * s; }

  SparsePoly pow(unsigned k) const {
    SparsePoly r = one();
    for (unsigned j = 0; j < k; ++j) r = r * *this;
    return r;
  }

  SparsePoly partial_derivative(std::size_t var) const {
    if (var >= nvars) throw std::out_of_range("variable index out of range");
    SparsePoly r;
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exp d = e;
      d[var] -= 1;
      r.add_term(d, c * Coeff(static_cast<long>(e[var])));
    }
    return r;
  }

  // Variable relabeling: old variable i becomes variable perm[i].
  SparsePoly permute_variables(const std::array<std::size_t, nvars>& perm) const {
    SparsePoly r;
    for (const auto& [e, c] : terms_) {
      Exp m{};
      for (std::size_t i = 0; i < nvars; ++i) m[perm[i]] += e[i];
      r.add_term(m, c);
    }
    return r;
  }

  template <class F>
  auto map_coeffs(F&& f) const {
    using R = decltype(f(std::declval<const Coeff&>()));
    SparsePoly<VarsT, R> r;
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const SparsePoly& a, const SparsePoly& b) { return !(a == b); }

 private:
  TermMap terms_;
};

// Exact evaluation of a polynomial with scalar coefficients at a full point.
template <class Vars>
GaussianRational evaluate(const SparsePoly<Vars, GaussianRational>& p,
                          const std::array<GaussianRational, Vars::count>& point) {
  GaussianRational acc(0);
  for (const auto& [e, c] : p.terms()) {
    GaussianRational term = c;
    for (std::size_t i = 0; i < Vars::count; ++i) {
      if (e[i] != 0) term *= point[i].pow(e[i]);
    }
    acc += term;
  }
  return acc;
}

}  // namespace zernike
