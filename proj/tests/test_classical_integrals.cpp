#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace zernike;
using zernike::testing::phase_monomial;
using zernike::testing::table_integral_n4;

TEST_CASE("momentum power bound") {
  CHECK(phi(1) == 0);
  CHECK(phi(2) == 0);
  CHECK(phi(3) == 2);
  CHECK(phi(4) == 2);
  CHECK(phi(5) == 4);
  CHECK(phi(6) == 4);
}

TEST_CASE("ansatz enumeration matches the momentum bound") {
  const IntegralAnsatz ansatz = make_integral_ansatz(5);
  // sum over n of (phi(n)+1)(n+1): 2 + 3 + 12 + 15 + 30
  CHECK(ansatz.unknowns.size() == 62);
  for (const auto& u : ansatz.unknowns) {
    CHECK(u.j <= phi(u.n));
    CHECK(u.a <= u.n);
  }
}

TEST_CASE("family Hamiltonian construction") {
  // All parameters zero: free motion.
  const SystemSpec free_spec = SystemSpec::numeric(1, {GaussianRational(0)});
  CHECK(build_hamiltonian(free_spec) == phase_monomial(0, 0, 2, 0) + phase_monomial(0, 0, 0, 2));

  // The quadratic member in terms of real parameters (g1, g2) = (-i b, a).
  const PhasePolynomial h2 = build_hamiltonian(SystemSpec::symbolic(2));
  const std::vector<GaussianRational> to_real{-GaussianRational::i(), GaussianRational(1)};
  PhasePolynomial expected = phase_monomial(0, 0, 2, 0) + phase_monomial(0, 0, 0, 2);
  expected += dilation_generator() * (gamma(1) * ParamPolynomial::constant(-GaussianRational::i()));
  expected += dilation_generator() * dilation_generator() * gamma(2);
  PhasePolynomial scaled;
  for (const auto& [e, c] : h2.terms()) scaled.add_term(e, scale_params(c, to_real));
  CHECK(scaled == expected);

  // Curved-oscillator presentation (g1, g2) = (2 i w, -k).
  const std::vector<GaussianRational> to_curved{GaussianRational(2) * GaussianRational::i(),
                                                GaussianRational(-1)};
  PhasePolynomial curved;
  for (const auto& [e, c] : h2.terms()) curved.add_term(e, scale_params(c, to_curved));
  PhasePolynomial curved_expected = phase_monomial(0, 0, 2, 0) + phase_monomial(0, 0, 0, 2);
  curved_expected += dilation_generator() *
                     (gamma(1) * ParamPolynomial::constant(GaussianRational(2) * GaussianRational::i()));
  curved_expected -= dilation_generator() * dilation_generator() * gamma(2);
  CHECK(curved == curved_expected);
}

TEST_CASE("angular momentum basics") {
  const PhasePolynomial c = build_angular_momentum();
  const std::array<GaussianRational, 4> point{GaussianRational(1), GaussianRational(0),
                                              GaussianRational(0), GaussianRational(1)};
  CHECK(evaluate(c, point, {}) == GaussianRational(1));
  CHECK(poisson_bracket(c, c).is_zero());
  for (int n = 1; n <= 5; ++n)
    CHECK(poisson_bracket(c, build_hamiltonian(SystemSpec::symbolic(n))).is_zero());
}

TEST_CASE("derived integral for N = 1") {
  const IntegralSolution sol = solve_integral_ansatz(SystemSpec::symbolic(1));
  CHECK(sol.integral == phase_monomial(0, 0, 0, 2) + phase_monomial(0, 1, 0, 1, gamma(1)));
  CHECK(sol.free_parameters.empty());
  CHECK(sol.q_table.at({1, 0}) == q2());
}

TEST_CASE("derived integral for N = 2") {
  const IntegralSolution sol = solve_integral_ansatz(SystemSpec::symbolic(2));
  const PhasePolynomial expected = phase_monomial(0, 0, 0, 2) +
                                   phase_monomial(0, 1, 0, 1, gamma(1)) +
                                   phase_monomial(2, 0, 0, 2, gamma(2)) +
                                   phase_monomial(0, 2, 0, 2, gamma(2));
  CHECK(sol.integral == expected);
  CHECK(sol.q_table.at({2, 0}) == q1() * q1() + q2() * q2());
}

TEST_CASE("derived integral for N = 4 matches the displayed table") {
  const IntegralSolution sol = solve_integral_ansatz(SystemSpec::symbolic(4));
  CHECK(sol.integral == table_integral_n4());
  CHECK(sol.free_parameters.empty());

  // Q-polynomial blocks of the highest order.
  CHECK(sol.q_table.at({4, 0}) == q2().pow(4) - q1().pow(4));
  CHECK(sol.q_table.at({4, 1}) ==
        (q1().pow(3) * q2() + q1() * q2().pow(3)) * ParamPolynomial::constant(GaussianRational(4)));
  CHECK(sol.q_table.at({4, 2}) == q1().pow(4) - q2().pow(4));
  CHECK(sol.q_table.at({3, 1}) == q1().pow(3) + q1() * q2().pow(2) * ParamPolynomial::constant(GaussianRational(3)));
}

TEST_CASE("the swapped integral") {
  const IntegralSolution one = solve_integral_ansatz(SystemSpec::symbolic(1));
  CHECK(swap_integral(one) == phase_monomial(0, 0, 2, 0) + phase_monomial(1, 0, 1, 0, gamma(1)));

  const IntegralSolution four = solve_integral_ansatz(SystemSpec::symbolic(4));
  const PhasePolynomial swapped = swap_integral(four);
  CHECK(swap_phase_indices(swapped) == four.integral);
  CHECK(poisson_bracket(build_hamiltonian(SystemSpec::symbolic(4)), swapped).is_zero());
}

TEST_CASE("dependence relation across the family") {
  for (int n = 1; n <= 5; ++n) {
    const SystemSpec spec = SystemSpec::symbolic(n);
    const RelationCheck check = check_relation_eq5(spec, solve_integral_ansatz(spec));
    INFO("N = " << n);
    CHECK(check.holds);
    CHECK(check.residual.is_zero());
  }
}

TEST_CASE("dependence relation in the displayed N = 4 form") {
  const SystemSpec spec = SystemSpec::symbolic(4);
  const IntegralSolution sol = solve_integral_ansatz(spec);
  const PhasePolynomial c = build_angular_momentum();
  const PhasePolynomial rhs = sol.integral + swap_phase_indices(sol.integral) -
                              c.pow(2) * gamma(2) + c.pow(4) * gamma(4);
  CHECK(build_hamiltonian(spec) == rhs);
}

TEST_CASE("dependence relation for N = 1 and N = 2 by direct expansion") {
  const IntegralSolution one = solve_integral_ansatz(SystemSpec::symbolic(1));
  CHECK(build_hamiltonian(SystemSpec::symbolic(1)) ==
        one.integral + swap_phase_indices(one.integral));

  const IntegralSolution two = solve_integral_ansatz(SystemSpec::symbolic(2));
  CHECK(build_hamiltonian(SystemSpec::symbolic(2)) ==
        two.integral + swap_phase_indices(two.integral) -
            build_angular_momentum().pow(2) * gamma(2));
}

TEST_CASE("integrals commute for the whole supported family") {
  for (int n = 1; n <= 5; ++n) {
    const SystemSpec spec = SystemSpec::symbolic(n);
    const PhasePolynomial h = build_hamiltonian(spec);
    const IntegralSolution sol = solve_integral_ansatz(spec);
    INFO("N = " << n);
    CHECK(poisson_bracket(h, sol.integral).is_zero());
    CHECK(poisson_bracket(h, swap_phase_indices(sol.integral)).is_zero());
  }
}

TEST_CASE("family truncation is coherent") {
  const PhasePolynomial i4 = solve_integral_ansatz(SystemSpec::symbolic(4)).integral;
  const PhasePolynomial i3 = solve_integral_ansatz(SystemSpec::symbolic(3)).integral;
  const PhasePolynomial i2 = solve_integral_ansatz(SystemSpec::symbolic(2)).integral;
  CHECK(truncate_params_above(i4, 3) == i3);
  CHECK(truncate_params_above(i4, 2) == i2);
}

TEST_CASE("functional independence rank") {
  RationalSampler sampler(43);
  const SystemSpec spec = SystemSpec::symbolic(4);
  const PhasePolynomial h = build_hamiltonian(spec);
  const PhasePolynomial c = build_angular_momentum();
  const PhasePolynomial i4 = solve_integral_ansatz(spec).integral;
  const std::vector<GaussianRational> gammas = sampler.real_gammas(4);

  int rank3 = 0;
  for (int t = 0; t < 10; ++t) {
    if (functional_independence_rank({h, c, i4}, sampler.phase_point(), gammas) == 3) ++rank3;
  }
  CHECK(rank3 >= 9);

  // Degenerate lists.
  CHECK(functional_independence_rank({h, h}, sampler.phase_point(), gammas) == 1);
  const std::array<GaussianRational, 4> point{GaussianRational(1), GaussianRational(0),
                                              GaussianRational(0), GaussianRational(1)};
  CHECK(functional_independence_rank({c}, point, gammas) == 1);

  const RankProbe probe = generic_independence_rank({h, c, i4}, gammas, 47);
  CHECK(probe.rank == 3);
  CHECK(!probe.degenerate_warning);
}

TEST_CASE("spec construction guards") {
  CHECK_THROWS_AS(SystemSpec::symbolic(0), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::symbolic(9), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::numeric(2, {GaussianRational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(solve_integral_ansatz(SystemSpec::numeric(1, {GaussianRational(1)})),
                  std::invalid_argument);
}
