#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace zernike;
using zernike::testing::op_monomial;
using zernike::testing::table_integral_n4;

namespace {

// The N = 4 quantum integral exactly as displayed, monomial by monomial;
// the only noncommutative products in the display act on C^2.
OperatorPolynomial displayed_quantum_integral_n4() {
  const GaussianRational i = GaussianRational::i();
  const auto c3i = ParamPolynomial::constant(GaussianRational(3) * i);
  const auto c6i = ParamPolynomial::constant(GaussianRational(6) * i);
  const auto c3 = ParamPolynomial::constant(GaussianRational(3));
  const auto c4 = ParamPolynomial::constant(GaussianRational(4));
  const OperatorPolynomial csq = build_quantum_angular_momentum().pow(2);

  OperatorPolynomial p = op_monomial(0, 0, 0, 2);
  p += op_monomial(0, 1, 0, 1) * gamma(1);
  p += (op_monomial(2, 0, 0, 2) + op_monomial(0, 2, 0, 2) - csq) * gamma(2);

  OperatorPolynomial g3 = op_monomial(0, 3, 0, 3) - op_monomial(0, 3, 2, 1);
  g3 += op_monomial(3, 0, 1, 2) + op_monomial(1, 2, 1, 2) * c3;
  g3 -= op_monomial(0, 2, 0, 2) * c3i + op_monomial(1, 1, 1, 1) * c3i;
  g3 -= op_monomial(0, 1, 0, 1);
  p += g3 * gamma(3);

  OperatorPolynomial g4 = op_monomial(0, 4, 0, 4) - op_monomial(0, 4, 2, 2) -
                          op_monomial(4, 0, 0, 4) + op_monomial(4, 0, 2, 2);
  g4 += (op_monomial(3, 1, 1, 3) + op_monomial(1, 3, 1, 3)) * c4;
  g4 -= (op_monomial(0, 3, 0, 3) + op_monomial(2, 1, 0, 3)) * c6i;
  g4 -= (op_monomial(3, 0, 1, 2) + op_monomial(1, 2, 1, 2)) * c6i;
  g4 -= (op_monomial(2, 0, 0, 2) + op_monomial(0, 2, 0, 2)) * c4;
  g4 += csq * c4;
  p += g4 * gamma(4);
  return p;
}

}  // namespace

TEST_CASE("free quantum Hamiltonian") {
  const SystemSpec spec = SystemSpec::numeric(1, {GaussianRational(0)});
  CHECK(build_quantum_hamiltonian(spec) == op_monomial(0, 0, 2, 0) + op_monomial(0, 0, 0, 2));
}

TEST_CASE("quadratic member in real parameters") {
  // (g1, g2) = (-i b, a) turns the family head into
  // P^2 - i b D + a D D with D = Q1 P1 + Q2 P2 multiplied as written.
  const OperatorPolynomial h2 = build_quantum_hamiltonian(SystemSpec::symbolic(2));
  const std::vector<GaussianRational> to_real{-GaussianRational::i(), GaussianRational(1)};
  OperatorPolynomial scaled;
  for (const auto& [e, c] : h2.terms()) scaled.add_term(e, scale_params(c, to_real));

  const OperatorPolynomial d = op_monomial(1, 0, 1, 0) + op_monomial(0, 1, 0, 1);
  OperatorPolynomial expected = op_monomial(0, 0, 2, 0) + op_monomial(0, 0, 0, 2);
  expected += d * (gamma(1) * ParamPolynomial::constant(-GaussianRational::i()));
  expected += d * d * gamma(2);
  CHECK(scaled == expected);
}

TEST_CASE("quantum Hamiltonian matches its classical head") {
  // The commutative limit differs from the classical Hamiltonian only in
  // strictly lower-degree ordering corrections, parameter block by block.
  const PhasePolynomial difference =
      classical_limit(build_quantum_hamiltonian(SystemSpec::symbolic(4))) -
      build_hamiltonian(SystemSpec::symbolic(4));
  for (const auto& [pe, pc] : difference.terms()) {
    for (const auto& [ge, c] : pc.terms()) {
      std::uint64_t block_degree = 0;
      for (std::size_t m = 0; m < kMaxGamma; ++m) block_degree += 2ull * (m + 1) * ge[m];
      CHECK(total_degree(pe) < block_degree);
    }
  }
}

TEST_CASE("displayed integral commutes and matches the table") {
  const SystemSpec spec = SystemSpec::symbolic(4);
  const OperatorPolynomial integral = build_quantum_integral(spec);
  CHECK(integral == displayed_quantum_integral_n4());
  CHECK(commutator(build_quantum_hamiltonian(spec), integral).is_zero());
}

TEST_CASE("lower orders truncate the displayed blocks") {
  const OperatorPolynomial i4 = build_quantum_integral(SystemSpec::symbolic(4));
  for (int n = 1; n <= 3; ++n) {
    const SystemSpec spec = SystemSpec::symbolic(n);
    const OperatorPolynomial in = build_quantum_integral(spec);
    CHECK(in == [&] {
      OperatorPolynomial t;
      for (const auto& [e, c] : i4.terms())
        t.add_term(e, truncate_params_above(c, static_cast<std::size_t>(n)));
      return t;
    }());
    CHECK(commutator(build_quantum_hamiltonian(spec), in).is_zero());
  }
}

TEST_CASE("quantum integral is unavailable beyond N = 4") {
  CHECK_THROWS_AS(build_quantum_integral(SystemSpec::symbolic(5)), UnsupportedOrderError);
}

TEST_CASE("classical limit of the integral matches the table integral") {
  // The commutative limit reproduces the classical integral with its
  // angular-momentum dressing, up to lower-degree ordering corrections.
  const PhasePolynomial c = build_angular_momentum();
  const PhasePolynomial dressed = table_integral_n4() - c.pow(2) * gamma(2) +
                                  c.pow(2) * (gamma(4) * ParamPolynomial::constant(GaussianRational(4)));
  const PhasePolynomial difference =
      classical_limit(build_quantum_integral(SystemSpec::symbolic(4))) - dressed;
  for (const auto& [pe, pc] : difference.terms()) {
    for (const auto& [ge, c2] : pc.terms()) {
      std::uint64_t block_degree = 0;
      for (std::size_t m = 0; m < kMaxGamma; ++m) block_degree += 2ull * (m + 1) * ge[m];
      CHECK(total_degree(pe) < block_degree);
    }
  }
}

TEST_CASE("partner integral commutes and has the swapped classical head") {
  const SystemSpec spec = SystemSpec::symbolic(4);
  const OperatorPolynomial partner = build_quantum_partner_integral(spec);
  CHECK(commutator(build_quantum_hamiltonian(spec), partner).is_zero());

  // The naive index swap of the displayed integral also commutes.
  const OperatorPolynomial swapped = swap_operator_indices(build_quantum_integral(spec));
  CHECK(commutator(build_quantum_hamiltonian(spec), swapped).is_zero());

  // Classical head of the partner is the swapped classical integral.
  const PhasePolynomial difference =
      classical_limit(partner) - swap_phase_indices(table_integral_n4());
  for (const auto& [pe, pc] : difference.terms()) {
    for (const auto& [ge, c2] : pc.terms()) {
      std::uint64_t block_degree = 0;
      for (std::size_t m = 0; m < kMaxGamma; ++m) block_degree += 2ull * (m + 1) * ge[m];
      CHECK(total_degree(pe) < block_degree);
    }
  }
}

TEST_CASE("displayed dependence relation for N = 4") {
  const SystemSpec spec = SystemSpec::symbolic(4);
  const OperatorPolynomial csq = build_quantum_angular_momentum().pow(2);
  const OperatorPolynomial rhs =
      build_quantum_integral(spec) + build_quantum_partner_integral(spec) -
      csq * (gamma(4) * ParamPolynomial::constant(GaussianRational(4))) +
      csq * csq * gamma(4);
  CHECK(build_quantum_hamiltonian(spec) == rhs);

  const QuantumRelation relation = verify_quantum_relation(spec);
  CHECK(relation.holds);
  CHECK(relation.residual.is_zero());
}

TEST_CASE("derived dependence relation for the lower orders") {
  // The exact rewriting determines the corrections: they vanish for
  // N <= 3, while the naive swap leaves a g2 C^2 block behind.
  for (int n = 1; n <= 3; ++n) {
    const SystemSpec spec = SystemSpec::symbolic(n);
    const QuantumRelation relation = verify_quantum_relation(spec);
    INFO("N = " << n);
    CHECK(relation.holds);
    CHECK(relation.angular_powers.empty());
  }

  const SystemSpec two = SystemSpec::symbolic(2);
  const OperatorPolynomial i2 = build_quantum_integral(two);
  const OperatorPolynomial naive = build_quantum_hamiltonian(two) - i2 - swap_operator_indices(i2);
  CHECK(naive == build_quantum_angular_momentum().pow(2) * gamma(2));
}

TEST_CASE("free member relation is trivial") {
  const SystemSpec spec = SystemSpec::numeric(1, {GaussianRational(0)});
  const QuantumRelation relation = verify_quantum_relation(spec);
  CHECK(relation.holds);
  CHECK(relation.residual.is_zero());
}

TEST_CASE("commutator of the two integrals stays in the algebra") {
  // [I, I'] = -[R(C), K2] with R the dependence-relation correction and
  // K2 = (I' - I)/2; both sides are computed independently.
  for (int n = 2; n <= 4; ++n) {
    const SystemSpec spec = SystemSpec::symbolic(n);
    const OperatorPolynomial integral = build_quantum_integral(spec);
    const OperatorPolynomial partner = build_quantum_partner_integral(spec);
    const QuantumRelation relation = verify_quantum_relation(spec);
    REQUIRE(relation.holds);

    OperatorPolynomial correction;
    const OperatorPolynomial c_op = build_quantum_angular_momentum();
    for (const auto& [k, coeff] : relation.angular_powers)
      correction += c_op.pow(k) * coeff;

    const OperatorPolynomial k2 = (partner - integral) *
                                  ParamPolynomial::constant(GaussianRational::rational(1, 2));
    INFO("N = " << n);
    CHECK(commutator(integral, partner) == -commutator(correction, k2));
  }
}
