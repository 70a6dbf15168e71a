#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace zernike;

namespace {

GaussianRational r(long n, long d) { return GaussianRational::rational(n, d); }

std::vector<double> observable_column(const TrajectoryResult& traj, std::size_t j) {
  std::vector<double> col;
  col.reserve(traj.observables.size());
  for (const auto& row : traj.observables) col.push_back(row[j]);
  return col;
}

}  // namespace

TEST_CASE("vector field of free motion") {
  const SystemSpec spec = SystemSpec::numeric(1, {GaussianRational(0)});
  const PhaseState v = hamilton_vector_field(spec, {0, 0, 1, 0});
  CHECK(v[0] == 2.0);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 0.0);
  CHECK(v[3] == 0.0);
}

TEST_CASE("vector field of the linear member") {
  // N = 1: dq1 = 2 p1 + g q1, dp1 = -g p1.
  const double g = 0.1;
  const SystemSpec spec = SystemSpec::numeric(1, {r(1, 10)});
  const PhaseState z{0.7, -0.4, 0.25, 0.5};
  const PhaseState v = hamilton_vector_field(spec, z);
  CHECK(v[0] == Catch::Approx(2 * z[2] + g * z[0]).epsilon(1e-14));
  CHECK(v[1] == Catch::Approx(2 * z[3] + g * z[1]).epsilon(1e-14));
  CHECK(v[2] == Catch::Approx(-g * z[2]).epsilon(1e-14));
  CHECK(v[3] == Catch::Approx(-g * z[3]).epsilon(1e-14));
}

TEST_CASE("flow is divergence free at sampled points") {
  const SystemSpec spec = SystemSpec::numeric(2, {r(1, 20), r(1, 40)});
  const CartesianSystem system(spec);
  const double h = 1e-5;
  for (const PhaseState z : {PhaseState{0.3, -0.2, 0.5, 0.1}, PhaseState{1.0, 0.7, -0.4, 0.2}}) {
    double div = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      PhaseState zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      div += (system.vector_field(zp)[i] - system.vector_field(zm)[i]) / (2 * h);
    }
    CHECK(std::abs(div) < 1e-8);
  }
}

TEST_CASE("complex parameters are refused") {
  const SystemSpec complex_spec =
      SystemSpec::numeric(1, {GaussianRational(mpq_class(0), mpq_class(1))});
  CHECK_THROWS_AS(CartesianSystem(complex_spec), std::invalid_argument);
  CHECK_THROWS_AS(CartesianSystem(SystemSpec::symbolic(2)), std::invalid_argument);
}

TEST_CASE("free motion integrates exactly") {
  const SystemSpec spec = SystemSpec::numeric(1, {GaussianRational(0)});
  TrajectoryConfig cfg;
  cfg.initial_state = {0, 0, 1, 0};
  cfg.t_end = 2.0;
  cfg.dt = 1e-3;
  const TrajectoryResult traj = integrate_trajectory(cfg, spec, conserved_observables(spec));
  CHECK(traj.states.back()[0] == Catch::Approx(4.0).margin(1e-12));
  CHECK(relative_drift(observable_column(traj, 0)) < 1e-15);
}

TEST_CASE("conserved quantities drift below tolerance on the reference set") {
  struct Case {
    SystemSpec spec;
    PhaseState ic;
  };
  const std::vector<Case> cases{
      {SystemSpec::numeric(1, {r(1, 10)}), {0.3, -0.2, 0.7, 0.4}},
      {SystemSpec::numeric(2, {r(1, 20), r(1, 40)}), {0.4, 0.3, 0.02, -0.01}},
      {SystemSpec::numeric(4, {r(1, 20), r(1, 40), r(1, 80), r(1, 160)}),
       {0.4, 0.3, 0.02, -0.01}},
  };
  for (const auto& c : cases) {
    TrajectoryConfig cfg;
    cfg.initial_state = c.ic;
    cfg.t_end = 20.0;  // the acceptance suite runs the full horizon
    cfg.dt = 1e-3;
    const TrajectoryResult traj = integrate_trajectory(cfg, c.spec, conserved_observables(c.spec));
    for (std::size_t j = 0; j < traj.observable_names.size(); ++j) {
      INFO("N = " << c.spec.order() << " observable " << traj.observable_names[j]);
      CHECK(relative_drift(observable_column(traj, j)) < 1e-9);
    }
  }
}

TEST_CASE("midpoint agrees with the fine-step explicit oracle") {
  const SystemSpec spec = SystemSpec::numeric(2, {r(1, 20), r(1, 40)});
  TrajectoryConfig mid;
  mid.initial_state = {0.4, 0.3, 0.02, -0.01};
  mid.t_end = 5.0;
  mid.dt = 1e-3;
  TrajectoryConfig fine = mid;
  fine.integrator = Integrator::kExplicitRk4;
  fine.dt = 1e-4;
  const auto a = integrate_trajectory(mid, spec, {});
  const auto b = integrate_trajectory(fine, spec, {});
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(a.states.back()[i] == Catch::Approx(b.states.back()[i]).margin(1e-7));
}

TEST_CASE("forward then backward integration returns to the start") {
  const SystemSpec spec = SystemSpec::numeric(2, {r(1, 20), r(1, 40)});
  const CartesianSystem system(spec);
  TrajectoryConfig cfg;
  cfg.initial_state = {0.4, 0.3, 0.02, -0.01};
  cfg.t_end = 10.0;
  cfg.dt = 1e-3;
  const auto forward = integrate_field(
      [&system](const PhaseState& z) { return system.vector_field(z); }, cfg, {});
  TrajectoryConfig back = cfg;
  back.initial_state = forward.states.back();
  const auto backward = integrate_field(
      [&system](const PhaseState& z) {
        PhaseState v = system.vector_field(z);
        for (auto& x : v) x = -x;
        return v;
      },
      back, {});
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(backward.states.back()[i] - cfg.initial_state[i]) < 1e-8);
}

TEST_CASE("curvature kernels") {
  // Flat limit formula.
  CHECK(curved_oscillator_hamiltonian({0.0, 1.0, 0.0}, 0.5, 0.0) == Catch::Approx(0.25));
  const CurvedOscillatorSpec flat{0.0, 1.0, 0.2};
  CHECK(curved_oscillator_hamiltonian(flat, 0.5, 0.3) ==
        Catch::Approx(0.09 + 0.04 / 0.25 + 0.25));

  // Spherical value tan^2(pi/4) = 1.
  const double pi = std::acos(-1.0);
  CHECK(curved_oscillator_hamiltonian({1.0, 1.0, 0.0}, pi / 4, 0.0) == Catch::Approx(1.0));

  // Hyperbolic branch: tanh^2 stays below one.
  CHECK(curved_oscillator_hamiltonian({-1.0, 1.0, 0.0}, 3.0, 0.0) < 1.0);
}

TEST_CASE("kernel branches agree near zero curvature") {
  for (double rho : {0.1, 0.2, 0.3}) {
    const double base = curved_oscillator_hamiltonian({0.0, 1.0, 0.05}, rho, 0.07);
    CHECK(std::abs(curved_oscillator_hamiltonian({1e-8, 1.0, 0.05}, rho, 0.07) - base) < 1e-10);
    CHECK(std::abs(curved_oscillator_hamiltonian({-1e-8, 1.0, 0.05}, rho, 0.07) - base) < 1e-10);
  }
  // Series window joins the closed forms smoothly: evaluate just on both
  // sides of the switch and against the library sine.
  const double x = 0.5;
  for (double kappa : {3.9e-6, 4.1e-6}) {
    CHECK(std::abs(curved_sin(kappa, x) - std::sin(std::sqrt(kappa) * x) / std::sqrt(kappa)) <
          1e-12);
  }
}

TEST_CASE("singularities raise domain errors") {
  const double pi = std::acos(-1.0);
  CHECK_THROWS_AS(curved_oscillator_hamiltonian({1.0, 1.0, 0.0}, pi / 2, 0.0), std::domain_error);
  CHECK_THROWS_AS(curved_oscillator_hamiltonian({1.0, 1.0, 0.5}, 0.0, 0.0), std::domain_error);
}

TEST_CASE("flat oscillator orbits close with period pi over omega") {
  const double pi = std::acos(-1.0);
  const CurvedOscillatorSpec spec{0.0, 1.0, 0.05};
  TrajectoryConfig cfg;
  cfg.initial_state = {0.3, 0.0, 0.0, 0.05};
  cfg.t_end = 10.0;
  cfg.dt = 2e-4;
  const OrbitCheck check = closed_orbit_check(cfg, spec);
  REQUIRE(check.is_closed);
  CHECK(std::abs(check.period - pi) / pi < 1e-4);
}

TEST_CASE("spherical oscillator orbits close") {
  const CurvedOscillatorSpec spec{1.0, 1.0, 0.05};
  TrajectoryConfig cfg;
  cfg.initial_state = {0.3, 0.0, 0.0, 0.05};
  cfg.t_end = 10.0;
  cfg.dt = 2e-4;
  const OrbitCheck check = closed_orbit_check(cfg, spec);
  CHECK(check.is_closed);
  CHECK(check.min_distance < 1e-6);
}

TEST_CASE("perturbed Cartesian member does not close") {
  const SystemSpec spec = SystemSpec::numeric(4, {r(1, 20), r(1, 40), r(1, 80), r(1, 160)});
  TrajectoryConfig cfg;
  cfg.initial_state = {0.4, 0.3, 0.02, -0.01};
  cfg.t_end = 50.0;
  cfg.dt = 1e-3;
  const OrbitCheck check = closed_orbit_check(cfg, spec);
  CHECK(!check.is_closed);
}

TEST_CASE("config validation") {
  TrajectoryConfig cfg;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dt = 1.0;
  cfg.t_end = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  const CurvedOscillatorSpec spec{0.0, 1.0, 0.05};
  TrajectoryConfig mismatched;
  mismatched.initial_state = {0.3, 0.0, 0.0, 0.2};
  CHECK_THROWS_AS(closed_orbit_check(mismatched, spec), std::invalid_argument);
}
