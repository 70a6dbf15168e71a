#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "zernike/classical_integrals.hpp"

namespace zernike {

struct IntegrationError : std::runtime_error {
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_index(step) {}
  std::size_t step_index;
};

using PhaseState = std::array<double, 4>;

// Double-precision form of a real-coefficient polynomial for the integrator
// hot loop.
class CompiledPoly {
 public:
  CompiledPoly() = default;

  explicit CompiledPoly(const NumericPhasePolynomial& p) {
    for (const auto& [e, c] : p.terms()) {
      if (!c.is_real())
        throw std::invalid_argument("cannot compile a polynomial with complex coefficients");
      terms_.push_back({c.real_to_double(), e});
    }
  }

  double operator()(const PhaseState& z) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
      double v = t.coefficient;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::uint32_t k = 0; k < t.exponents[i]; ++k) v *= z[i];
      }
      acc += v;
    }
    return acc;
  }

 private:
  struct Term {
    double coefficient;
    ExpVec<4> exponents;
  };
  std::vector<Term> terms_;
};

// Hamilton equations of the polynomial family, compiled once per spec:
// dq_i = dH/dp_i, dp_i = -dH/dq_i.
class CartesianSystem {
 public:
  explicit CartesianSystem(const SystemSpec& spec) {
    if (spec.is_symbolic() || !spec.all_gammas_real())
      throw std::invalid_argument(
          "Cartesian dynamics needs real parameter values; imaginary members are only "
          "real systems in the polar chart");
    const auto& gammas = spec.gamma_values();
    const NumericPhasePolynomial h = substitute_params(build_hamiltonian(spec), gammas);
    energy_ = CompiledPoly(h);
    flow_[0] = CompiledPoly(h.partial_derivative(kP1));
    flow_[1] = CompiledPoly(h.partial_derivative(kP2));
    flow_[2] = CompiledPoly(-h.partial_derivative(kQ1));
    flow_[3] = CompiledPoly(-h.partial_derivative(kQ2));
  }

  PhaseState vector_field(const PhaseState& z) const {
    return {flow_[0](z), flow_[1](z), flow_[2](z), flow_[3](z)};
  }

  double energy(const PhaseState& z) const { return energy_(z); }

 private:
  CompiledPoly energy_;
  std::array<CompiledPoly, 4> flow_;
};

inline PhaseState hamilton_vector_field(const SystemSpec& spec, const PhaseState& state) {
  return CartesianSystem(spec).vector_field(state);
}

enum class Integrator { kImplicitMidpoint, kExplicitRk4 };

struct TrajectoryConfig {
  PhaseState initial_state{};
  double t_end = 1.0;
  double dt = 1e-3;
  Integrator integrator = Integrator::kImplicitMidpoint;
  double inner_tolerance = 1e-15;
  int max_inner_iterations = 200;
  double closure_tolerance = 1e-6;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_end >= dt)) throw std::invalid_argument("t_end must be at least dt");
  }
};

namespace detail {

using VectorField = std::function<PhaseState(const PhaseState&)>;

inline PhaseState axpy(const PhaseState& z, double s, const PhaseState& d) {
  return {z[0] + s * d[0], z[1] + s * d[1], z[2] + s * d[2], z[3] + s * d[3]};
}

inline PhaseState midpoint(const PhaseState& a, const PhaseState& b) {
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2]), 0.5 * (a[3] + b[3])};
}

inline bool finite(const PhaseState& z) {
  return std::isfinite(z[0]) && std::isfinite(z[1]) && std::isfinite(z[2]) && std::isfinite(z[3]);
}

inline PhaseState rk4_step(const VectorField& f, const PhaseState& z, double dt) {
  const PhaseState k1 = f(z);
  const PhaseState k2 = f(axpy(z, 0.5 * dt, k1));
  const PhaseState k3 = f(axpy(z, 0.5 * dt, k2));
  const PhaseState k4 = f(axpy(z, dt, k3));
  PhaseState out = z;
  for (std::size_t i = 0; i < 4; ++i)
    out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// z_{n+1} = z_n + dt f((z_n + z_{n+1})/2), resolved by fixed-point
// iteration seeded with an explicit Euler predictor.
inline PhaseState implicit_midpoint_step(const VectorField& f, const PhaseState& z, double dt,
                                         double tol, int max_iter, std::size_t step) {
  PhaseState w = axpy(z, dt, f(z));
  for (int it = 0; it < max_iter; ++it) {
    const PhaseState next = axpy(z, dt, f(midpoint(z, w)));
    double delta = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < 4; ++i) {
      delta = std::max(delta, std::abs(next[i] - w[i]));
      scale = std::max(scale, std::abs(next[i]));
    }
    w = next;
    if (delta <= tol * scale) return w;
  }
  throw IntegrationError("implicit midpoint stage did not converge", step);
}

}  // namespace detail

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> observables;  // [step][observable]
};

// Fixed-step integration of an arbitrary field, emitting every step.
inline TrajectoryResult integrate_field(const detail::VectorField& field,
                                        const TrajectoryConfig& cfg,
                                        const std::vector<std::pair<std::string, CompiledPoly>>&
                                            observables = {}) {
  cfg.validate();
  const auto nsteps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  TrajectoryResult out;
  out.times.reserve(nsteps + 1);
  out.states.reserve(nsteps + 1);
  for (const auto& [name, poly] : observables) out.observable_names.push_back(name);

  PhaseState z = cfg.initial_state;
  for (std::size_t k = 0; k <= nsteps; ++k) {
    if (!detail::finite(z)) throw IntegrationError("state is not finite", k);
    out.times.push_back(static_cast<double>(k) * cfg.dt);
    out.states.push_back(z);
    if (!observables.empty()) {
      std::vector<double> row;
      row.reserve(observables.size());
      for (const auto& [name, poly] : observables) row.push_back(poly(z));
      out.observables.push_back(std::move(row));
    }
    if (k == nsteps) break;
    z = cfg.integrator == Integrator::kExplicitRk4
            ? detail::rk4_step(field, z, cfg.dt)
            : detail::implicit_midpoint_step(field, z, cfg.dt, cfg.inner_tolerance,
                                             cfg.max_inner_iterations, k);
  }
  return out;
}

// Cartesian trajectory of a real-parameter member with the conserved
// quantities monitored along the flow.
inline TrajectoryResult integrate_trajectory(
    const TrajectoryConfig& cfg, const SystemSpec& spec,
    const std::vector<std::pair<std::string, NumericPhasePolynomial>>& observables) {
  const CartesianSystem system(spec);
  std::vector<std::pair<std::string, CompiledPoly>> compiled;
  compiled.reserve(observables.size());
  for (const auto& [name, poly] : observables) compiled.emplace_back(name, CompiledPoly(poly));
  return integrate_field([&system](const PhaseState& z) { return system.vector_field(z); }, cfg,
                         compiled);
}

// Standard observable set H, C, I_N for a real-parameter spec.
inline std::vector<std::pair<std::string, NumericPhasePolynomial>> conserved_observables(
    const SystemSpec& spec) {
  const auto& gammas = spec.gamma_values();
  const SystemSpec symbolic = SystemSpec::symbolic(spec.order());
  return {{"H", substitute_params(build_hamiltonian(spec), gammas)},
          {"C", substitute_params(build_angular_momentum(), gammas)},
          {"I", substitute_params(solve_integral_ansatz(symbolic).integral, gammas)}};
}

// Largest relative excursion from the initial value.
inline double relative_drift(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double base = std::max(std::abs(values.front()),
                               std::numeric_limits<double>::epsilon());
  double drift = 0.0;
  for (double v : values) drift = std::max(drift, std::abs(v - values.front()) / base);
  return drift;
}

// ---------------------------------------------------------------------------
// Curvature-unified oscillator chart.

struct CurvedOscillatorSpec {
  double kappa = 0.0;
  double omega = 1.0;
  double p_phi = 0.0;
};

namespace detail {

inline constexpr double kKernelSeriesCut = 1e-6;

}  // namespace detail

// S_k(x): sin(sqrt(k) x)/sqrt(k) for k > 0, sinh(sqrt(-k) x)/sqrt(-k) for
// k < 0, x at k = 0; a 4-term series bridges the small-|k| x^2 regime where
// the closed forms cancel catastrophically.
inline double curved_sin(double kappa, double x) {
  const double s = kappa * x * x;
  if (std::abs(s) < detail::kKernelSeriesCut) {
    return x * (1.0 - s / 6.0 + s * s / 120.0 - s * s * s / 5040.0);
  }
  if (kappa > 0.0) {
    const double r = std::sqrt(kappa);
    return std::sin(r * x) / r;
  }
  const double r = std::sqrt(-kappa);
  return std::sinh(r * x) / r;
}

inline double curved_cos(double kappa, double x) {
  const double s = kappa * x * x;
  if (std::abs(s) < detail::kKernelSeriesCut) {
    return 1.0 - s / 2.0 + s * s / 24.0 - s * s * s / 720.0;
  }
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * x);
  return std::cosh(std::sqrt(-kappa) * x);
}

inline double curved_tan(double kappa, double x) { return curved_sin(kappa, x) / curved_cos(kappa, x); }

// H = p_rho^2 + p_phi^2 / S^2 + omega^2 S^2 / C^2; covers the spherical,
// hyperbolic and flat oscillators in one formula.
inline double curved_oscillator_hamiltonian(const CurvedOscillatorSpec& spec, double rho,
                                            double p_rho) {
  const double s = curved_sin(spec.kappa, rho);
  const double c = curved_cos(spec.kappa, rho);
  if (std::abs(c) < 1e-12)
    throw std::domain_error("potential singularity: sqrt(kappa) rho at pi/2");
  if (s == 0.0 && spec.p_phi != 0.0)
    throw std::domain_error("centrifugal singularity: rho = 0 with nonzero angular momentum");
  const double centrifugal = spec.p_phi == 0.0 ? 0.0 : spec.p_phi * spec.p_phi / (s * s);
  const double t = s / c;
  return p_rho * p_rho + centrifugal + spec.omega * spec.omega * t * t;
}

// Polar state layout: (rho, phi, p_rho, p_phi); p_phi is a constant of the
// flow and phi evolves by quadrature.
inline PhaseState curved_vector_field(const CurvedOscillatorSpec& spec, const PhaseState& z) {
  const double rho = z[0], p_rho = z[2], p_phi = z[3];
  const double s = curved_sin(spec.kappa, rho);
  const double c = curved_cos(spec.kappa, rho);
  const double w2 = spec.omega * spec.omega;
  const double dphi = p_phi == 0.0 ? 0.0 : 2.0 * p_phi / (s * s);
  const double dp_rho =
      (p_phi == 0.0 ? 0.0 : 2.0 * p_phi * p_phi * c / (s * s * s)) - 2.0 * w2 * s / (c * c * c);
  return {2.0 * p_rho, dphi, dp_rho, 0.0};
}

inline TrajectoryResult integrate_curved(const TrajectoryConfig& cfg,
                                         const CurvedOscillatorSpec& spec) {
  return integrate_field(
      [&spec](const PhaseState& z) { return curved_vector_field(spec, z); }, cfg, {});
}

// ---------------------------------------------------------------------------
// First-return detection.

struct OrbitCheck {
  bool is_closed = false;
  double period = 0.0;
  double min_distance = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::acos(-1.0));
}

// Distance history against the initial state; once the trajectory has left
// the neighborhood, local minima of the squared distance are refined by a
// parabola fit and the first refined minimum below tolerance is the return.
// Fitting the squared distance matters: near a true return d(t) is a "V"
// whose sampled value is floored at |v| dt / 2, while d(t)^2 is a clean
// parabola.
inline OrbitCheck first_return(const TrajectoryResult& traj, double tolerance,
                               bool angular_second_coordinate) {
  OrbitCheck out;
  const auto& states = traj.states;
  if (states.size() < 3) return out;
  const PhaseState z0 = states.front();
  std::vector<double> sq(states.size());
  double smax = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      double d = states[k][i] - z0[i];
      if (angular_second_coordinate && i == 1) d = wrap_angle(d);
      acc += d * d;
    }
    sq[k] = acc;
    smax = std::max(smax, acc);
  }
  const double escape = std::max(0.25 * smax, 100.0 * tolerance * tolerance);
  std::size_t k = 0;
  while (k < states.size() && sq[k] < escape) ++k;
  for (; k + 1 < states.size(); ++k) {
    if (sq[k] <= sq[k - 1] && sq[k] <= sq[k + 1]) {
      double t_star = traj.times[k];
      double s_star = sq[k];
      const double denom = sq[k + 1] - 2.0 * sq[k] + sq[k - 1];
      if (denom > 0.0) {
        const double slope = sq[k + 1] - sq[k - 1];
        const double h = traj.times[k + 1] - traj.times[k];
        t_star -= 0.5 * h * slope / denom;
        s_star -= slope * slope / (8.0 * denom);
      }
      const double d_star = std::sqrt(std::max(s_star, 0.0));
      out.min_distance = std::min(out.min_distance, d_star);
      if (d_star < tolerance) {
        out.is_closed = true;
        out.period = t_star;
        return out;
      }
    }
  }
  return out;
}

}  // namespace detail

inline OrbitCheck detect_first_return(const TrajectoryResult& traj, double tolerance,
                                      bool angular_chart) {
  return detail::first_return(traj, tolerance, angular_chart);
}

inline OrbitCheck closed_orbit_check(const TrajectoryConfig& cfg,
                                     const CurvedOscillatorSpec& spec) {
  if (cfg.initial_state[3] != spec.p_phi)
    throw std::invalid_argument("initial state carries a different p_phi than the spec");
  return detail::first_return(integrate_curved(cfg, spec), cfg.closure_tolerance, true);
}

inline OrbitCheck closed_orbit_check(const TrajectoryConfig& cfg, const SystemSpec& spec) {
  return detail::first_return(integrate_trajectory(cfg, spec, {}), cfg.closure_tolerance, false);
}

}  // namespace zernike
