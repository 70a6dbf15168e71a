#pragma once

#include <string>

#include "zernike/phase_space.hpp"

namespace zernike {
namespace textform {

struct SignedText {
  bool negative = false;
  std::string text;
};

inline bool leading_sign_negative(const GaussianRational& c) {
  return sgn(c.re()) < 0 || (c.re() == 0 && sgn(c.im()) < 0);
}

inline std::string rational_factor(const mpq_class& q) {
  const std::string s = q.get_str();
  return q.get_den() == 1 ? s : "(" + s + ")";
}

// Multiplicative factor for a coefficient already normalized to the
// positive-sign convention.
inline std::string scalar_factor(const GaussianRational& c) {
  if (c.is_real()) return rational_factor(c.re());
  if (c.re() == 0) {
    if (c.im() == 1) return "i";
    return rational_factor(c.im()) + "*i";
  }
  return "(" + c.str() + ")";
}

template <class Vars>
std::string monomial_text(const ExpVec<Vars::count>& e,
                          const std::array<const char*, Vars::count>& names) {
  std::string out;
  for (std::size_t i = 0; i < Vars::count; ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (e[i] > 1) out += '^' + std::to_string(e[i]);
  }
  return out;
}

inline SignedText term_text(GaussianRational c, std::string mono) {
  SignedText r;
  if (leading_sign_negative(c)) {
    r.negative = true;
    c = -c;
  }
  if (c.is_one() && !mono.empty()) {
    r.text = std::move(mono);
  } else if (mono.empty()) {
    r.text = scalar_factor(c);
  } else {
    r.text = scalar_factor(c) + "*" + std::move(mono);
  }
  return r;
}

inline std::string join_terms(std::string acc, const SignedText& t) {
  if (acc.empty()) return (t.negative ? "-" : "") + t.text;
  return acc + (t.negative ? " - " : " + ") + t.text;
}

}  // namespace textform

// Canonical text form: terms in descending monomial order, deterministic
// coefficient rendering. Serves as the golden-fixture format.
template <class Vars>
std::string canonical_text(const SparsePoly<Vars, GaussianRational>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    out = textform::join_terms(
        std::move(out),
        textform::term_text(it->second, textform::monomial_text<Vars>(it->first, Vars::names)));
  }
  return out;
}

template <class Vars>
std::string canonical_text(const SparsePoly<Vars, ParamPolynomial>& p,
                           const std::array<const char*, ParamVars::count>& param_names =
                               ParamVars::names) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const std::string mono = textform::monomial_text<Vars>(it->first, Vars::names);
    const ParamPolynomial& pc = it->second;
    if (pc.term_count() == 1) {
      const auto& [ge, c] = *pc.terms().begin();
      std::string full = textform::monomial_text<ParamVars>(ge, param_names);
      if (!full.empty() && !mono.empty()) full += '*';
      full += mono;
      out = textform::join_terms(std::move(out), textform::term_text(c, std::move(full)));
    } else {
      std::string inner;
      for (auto jt = pc.terms().rbegin(); jt != pc.terms().rend(); ++jt) {
        inner = textform::join_terms(
            std::move(inner),
            textform::term_text(jt->second,
                                textform::monomial_text<ParamVars>(jt->first, param_names)));
      }
      std::string full = "(" + inner + ")";
      if (!mono.empty()) full += "*" + mono;
      out = textform::join_terms(std::move(out), {false, std::move(full)});
    }
  }
  return out;
}

}  // namespace zernike
