#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>

namespace zernike {

template <std::size_t K>
using ExpVec = std::array<std::uint32_t, K>;

template <std::size_t K>
constexpr std::uint64_t total_degree(const ExpVec<K>& e) {
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  return d;
}

// Graded order: total degree first, ties broken by scanning exponents in the
// variable-significance order declared by the traits. std::map keyed with
// this comparator iterates monomials in ascending canonical order.
template <class Vars>
struct GradedLexLess {
  bool operator()(const ExpVec<Vars::count>& a, const ExpVec<Vars::count>& b) const noexcept {
    const auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (std::size_t i : Vars::significance) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

// Phase-space variables q1, q2, p1, p2. Momentum-heavy monomials lead, so
// p2^2 is the top term of a typical conserved quantity.
struct PhaseVars {
  static constexpr std::size_t count = 4;
  static constexpr std::array<const char*, count> names{"q1", "q2", "p1", "p2"};
  static constexpr std::array<std::size_t, count> significance{3, 2, 1, 0};
};

// Operator variables: same layout as PhaseVars, capitalized to flag the
// noncommutative (normal-ordered) reading Q1^a Q2^b P1^c P2^d.
struct OpVars {
  static constexpr std::size_t count = 4;
  static constexpr std::array<const char*, count> names{"Q1", "Q2", "P1", "P2"};
  static constexpr std::array<std::size_t, count> significance{3, 2, 1, 0};
};

// Central parameters g1..g8 plus one auxiliary formal constant "u" used by
// the deformed-oscillator shift. Lower index = more significant.
struct ParamVars {
  static constexpr std::size_t count = 9;
  static constexpr std::array<const char*, count> names{"g1", "g2", "g3", "g4",
                                                        "g5", "g6", "g7", "g8", "u"};
  static constexpr std::array<std::size_t, count> significance{0, 1, 2, 3, 4, 5, 6, 7, 8};
};

inline constexpr std::size_t kQ1 = 0, kQ2 = 1, kP1 = 2, kP2 = 3;
inline constexpr std::size_t kMaxGamma = 8;
inline constexpr std::size_t kAuxU = 8;  // ParamVars slot of the formal "u"

// Formal variables of a structure-operator factor: ladder eigenvalue k and
// energy E.
struct KEVars {
  static constexpr std::size_t count = 2;
  static constexpr std::array<const char*, count> names{"k", "E"};
  static constexpr std::array<std::size_t, count> significance{1, 0};
};

// Representation-size n and lowering-point u of the boundary equations.
struct NUVars {
  static constexpr std::size_t count = 2;
  static constexpr std::array<const char*, count> names{"n", "u"};
  static constexpr std::array<std::size_t, count> significance{1, 0};
};

// Univariate polynomials in the representation label n (energy formulas).
struct LevelVars {
  static constexpr std::size_t count = 1;
  static constexpr std::array<const char*, count> names{"n"};
  static constexpr std::array<std::size_t, count> significance{0};
};

}  // namespace zernike
