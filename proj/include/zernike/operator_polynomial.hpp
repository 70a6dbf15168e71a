#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "zernike/phase_space.hpp"
#include "zernike/text_form.hpp"

namespace zernike {

namespace detail {

inline mpz_class binomial_mpz(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline mpz_class factorial_mpz(unsigned k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

inline GaussianRational neg_i_power(unsigned k) {
  switch (k % 4) {
    case 0: return GaussianRational(1);
    case 1: return -GaussianRational::i();
    case 2: return GaussianRational(-1);
    default: return GaussianRational::i();
  }
}

}  // namespace detail

// Noncommutative polynomial in Q1, Q2, P1, P2 under [Q_i, P_j] = i delta_ij
// (hbar = 1). Every stored monomial is normal ordered: Q1^a Q2^b P1^c P2^d.
// The product reorders P^c Q^a within each index by the exact closed-form
// expansion P^c Q^a = sum_k k! C(c,k) C(a,k) (-i)^k Q^(a-k) P^(c-k); the
// word rewriter below provides the independent brute-force route.
class OperatorPolynomial {
 public:
  using Exp = ExpVec<4>;
  using TermMap = std::map<Exp, ParamPolynomial, GradedLexLess<OpVars>>;

  OperatorPolynomial() = default;

  static OperatorPolynomial zero() { return {}; }

  static OperatorPolynomial constant(ParamPolynomial c) {
    OperatorPolynomial p;
    p.add_term(Exp{}, std::move(c));
    return p;
  }

  static OperatorPolynomial identity() { return constant(ParamPolynomial::one()); }

  static OperatorPolynomial monomial(const Exp& e, ParamPolynomial c = ParamPolynomial::one()) {
    OperatorPolynomial p;
    p.add_term(e, std::move(c));
    return p;
  }

  static OperatorPolynomial position(std::size_t i) {
    Exp e{};
    e[kQ1 + i] = 1;
    return monomial(e);
  }

  static OperatorPolynomial momentum(std::size_t i) {
    Exp e{};
    e[kP1 + i] = 1;
    return monomial(e);
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  std::optional<std::uint64_t> degree() const {
    if (terms_.empty()) return std::nullopt;
    return total_degree(terms_.rbegin()->first);
  }

  void add_term(const Exp& e, ParamPolynomial c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  OperatorPolynomial operator-() const {
    OperatorPolynomial r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  OperatorPolynomial& operator+=(const OperatorPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  OperatorPolynomial& operator-=(const OperatorPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) {
    return a += b;
  }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) {
    return a -= b;
  }

  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    OperatorPolynomial r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        multiply_monomials(ea, eb, ca * cb, r);
      }
    }
    return r;
  }

  OperatorPolynomial& operator*=(const OperatorPolynomial& o) { return *this = *this * o; }

  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const ParamPolynomial& s) {
    OperatorPolynomial r;
    if (s.is_zero()) return r;
    for (const auto& [e, c] : a.terms_) r.add_term(e, c * s);
    return r;
  }
  friend OperatorPolynomial operator*(const ParamPolynomial& s, const OperatorPolynomial& a) {
    return a * s;
  }

  OperatorPolynomial pow(unsigned k) const {
    OperatorPolynomial r = identity();
    for (unsigned j = 0; j < k; ++j) r = r * *this;
    return r;
  }

  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    return !(a == b);
  }

 private:
  // (Q^a1 P^c1) * (Q^a2 P^c2), reordering each index independently; the two
  // indices commute with each other.
  static void multiply_monomials(const Exp& ea, const Exp& eb, const ParamPolynomial& coeff,
                                 OperatorPolynomial& out) {
    const std::uint32_t a2 = eb[kQ1], b2 = eb[kQ2];
    const std::uint32_t c1 = ea[kP1], d1 = ea[kP2];
    for (std::uint32_t k = 0; k <= std::min(c1, a2); ++k) {
      const GaussianRational ck{mpq_class(detail::factorial_mpz(k) *
                                          detail::binomial_mpz(c1, k) *
                                          detail::binomial_mpz(a2, k))};
      for (std::uint32_t l = 0; l <= std::min(d1, b2); ++l) {
        const GaussianRational cl{mpq_class(detail::factorial_mpz(l) *
                                            detail::binomial_mpz(d1, l) *
                                            detail::binomial_mpz(b2, l))};
        const GaussianRational scale =
            ck * cl * detail::neg_i_power(k) * detail::neg_i_power(l);
        Exp e;
        e[kQ1] = ea[kQ1] + a2 - k;
        e[kQ2] = ea[kQ2] + b2 - l;
        e[kP1] = c1 + eb[kP1] - k;
        e[kP2] = d1 + eb[kP2] - l;
        out.add_term(e, coeff * scale);
      }
    }
  }

  TermMap terms_;
};

inline OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  return a * b - b * a;
}

inline std::string canonical_text(const OperatorPolynomial& a) {
  SparsePoly<OpVars, ParamPolynomial> view;
  for (const auto& [e, c] : a.terms()) view.add_term(e, c);
  return canonical_text(view);
}

// Reads every normal-ordered monomial commutatively.
inline PhasePolynomial classical_limit(const OperatorPolynomial& a) {
  PhasePolynomial r;
  for (const auto& [e, c] : a.terms()) r.add_term(e, c);
  return r;
}

// ---------------------------------------------------------------------------
// Word rewriter. A word is a product of generators in arbitrary order; the
// single rule P_i Q_i -> Q_i P_i - i (cross-index factors commute freely) is
// applied until no momentum stands left of a position. Each application
// strictly reduces the number of (P.., Q..) inversions, so rewriting
// terminates; confluence across strategies is exercised by tests.

enum class Generator : std::uint8_t { kGenQ1 = 0, kGenQ2 = 1, kGenP1 = 2, kGenP2 = 3 };

using OperatorWord = std::vector<Generator>;

struct RewriteStrategy {
  enum class Kind { kLeftmost, kRightmost, kRandom };
  Kind kind = Kind::kLeftmost;
  std::uint64_t seed = 0;

  static RewriteStrategy leftmost() { return {Kind::kLeftmost, 0}; }
  static RewriteStrategy rightmost() { return {Kind::kRightmost, 0}; }
  static RewriteStrategy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
};

namespace detail {

inline bool is_momentum(Generator g) { return static_cast<std::uint8_t>(g) >= 2; }

inline bool same_index(Generator p, Generator q) {
  return static_cast<std::uint8_t>(p) - 2 == static_cast<std::uint8_t>(q);
}

}  // namespace detail

inline OperatorPolynomial normal_order_word(const OperatorWord& word, RewriteStrategy strategy) {
  std::mt19937_64 rng(strategy.seed);
  OperatorPolynomial result;
  std::vector<std::pair<GaussianRational, OperatorWord>> work;
  work.emplace_back(GaussianRational(1), word);
  while (!work.empty()) {
    auto [coeff, w] = std::move(work.back());
    work.pop_back();

    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (detail::is_momentum(w[i]) && !detail::is_momentum(w[i + 1])) sites.push_back(i);
    }
    if (sites.empty()) {
      ExpVec<4> e{};
      for (Generator g : w) e[static_cast<std::size_t>(g)] += 1;
      result.add_term(e, ParamPolynomial::constant(coeff));
      continue;
    }

    std::size_t site = sites.front();
    if (strategy.kind == RewriteStrategy::Kind::kRightmost) {
      site = sites.back();
    } else if (strategy.kind == RewriteStrategy::Kind::kRandom) {
      std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
      site = sites[pick(rng)];
    }

    const bool contracts = detail::same_index(w[site], w[site + 1]);
    OperatorWord swapped = w;
    std::swap(swapped[site], swapped[site + 1]);
    work.emplace_back(coeff, std::move(swapped));
    if (contracts) {
      OperatorWord contracted;
      contracted.reserve(w.size() - 2);
      contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(site));
      contracted.insert(contracted.end(), w.begin() + static_cast<std::ptrdiff_t>(site) + 2, w.end());
      work.emplace_back(coeff * -GaussianRational::i(), std::move(contracted));
    }
  }
  return result;
}

// The same word folded through the normal-ordered product, one generator at
// a time. Serves as the second route when testing the rewriter.
inline OperatorPolynomial word_product(const OperatorWord& word) {
  OperatorPolynomial r = OperatorPolynomial::identity();
  for (Generator g : word) {
    const auto i = static_cast<std::size_t>(g);
    r *= detail::is_momentum(g) ? OperatorPolynomial::momentum(i - 2)
                                : OperatorPolynomial::position(i);
  }
  return r;
}

}  // namespace zernike
