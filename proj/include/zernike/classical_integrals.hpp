#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zernike/linear_solver.hpp"
#include "zernike/phase_space.hpp"
#include "zernike/sampling.hpp"
#include "zernike/system_spec.hpp"

namespace zernike {

struct NoSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Upper bound of the p1-power j in the integral ansatz: n-2 for even n,
// n-1 for odd n.
inline int phi(int n) { return n % 2 == 0 ? n - 2 : n - 1; }

// q1 p1 + q2 p2, the dilation-type generator every interaction term is a
// power of.
inline PhasePolynomial dilation_generator() {
  return q1() * p1() + q2() * p2();
}

inline PhasePolynomial build_angular_momentum() {
  return q1() * p2() - q2() * p1();
}

// H_N = p1^2 + p2^2 + sum_{n=1..N} g_n (q1 p1 + q2 p2)^n.
inline PhasePolynomial build_hamiltonian(const SystemSpec& spec) {
  PhasePolynomial h = p1() * p1() + p2() * p2();
  const PhasePolynomial d = dilation_generator();
  PhasePolynomial dn = PhasePolynomial::one();
  for (int n = 1; n <= spec.order(); ++n) {
    dn = dn * d;
    h += dn * spec.gamma_coefficient(n);
  }
  return h;
}

// One unknown of the ansatz: the coefficient of
// g_n * q1^a q2^(n-a) p1^j p2^(n-j).
struct AnsatzUnknown {
  int n = 0;
  int j = 0;
  int a = 0;

  std::string name() const {
    return "c[" + std::to_string(n) + "," + std::to_string(j) + "," + std::to_string(a) + "]";
  }
};

struct IntegralAnsatz {
  int order = 0;
  std::vector<AnsatzUnknown> unknowns;
};

inline IntegralAnsatz make_integral_ansatz(int order) {
  IntegralAnsatz ansatz;
  ansatz.order = order;
  for (int n = 1; n <= order; ++n) {
    for (int j = 0; j <= phi(n); ++j) {
      for (int a = 0; a <= n; ++a) ansatz.unknowns.push_back({n, j, a});
    }
  }
  return ansatz;
}

struct IntegralSolution {
  SystemSpec spec = SystemSpec::symbolic(1);
  PhasePolynomial integral;                              // I_N, leading term p2^2
  std::map<std::pair<int, int>, PhasePolynomial> q_table;  // (n, j) -> Q^(n-j,j)
  std::vector<std::string> free_parameters;              // zeroed residual unknowns
};

namespace detail {

inline PhasePolynomial ansatz_basis_polynomial(const AnsatzUnknown& u) {
  ExpVec<4> e{};
  e[kQ1] = static_cast<std::uint32_t>(u.a);
  e[kQ2] = static_cast<std::uint32_t>(u.n - u.a);
  e[kP1] = static_cast<std::uint32_t>(u.j);
  e[kP2] = static_cast<std::uint32_t>(u.n - u.j);
  return PhasePolynomial::monomial(e, gamma(static_cast<std::size_t>(u.n)));
}

}  // namespace detail

// Derives the additional constant of motion by expanding {H_N, ansatz},
// collecting the coefficient of every monomial in (q, p, g), and solving the
// resulting exact linear system for the ansatz coefficients. The q^2-free
// normalization (constant part exactly p2^2, no pure-momentum mixing terms)
// is built into the ansatz shape; any residual freedom is pinned to zero.
inline IntegralSolution solve_integral_ansatz(const SystemSpec& spec) {
  if (!spec.is_symbolic())
    throw std::invalid_argument("ansatz derivation requires a symbolic spec");

  const PhasePolynomial h = build_hamiltonian(spec);
  const IntegralAnsatz ansatz = make_integral_ansatz(spec.order());
  const std::size_t ncols = ansatz.unknowns.size();

  std::vector<PhasePolynomial> brackets;
  brackets.reserve(ncols);
  for (const auto& u : ansatz.unknowns)
    brackets.push_back(poisson_bracket(h, detail::ansatz_basis_polynomial(u)));
  const PhasePolynomial base_bracket =
      poisson_bracket(h, PhasePolynomial::monomial({0, 0, 0, 2}, ParamPolynomial::one()));

  // Row index per (phase monomial, parameter monomial) pair.
  std::map<std::pair<ExpVec<4>, ExpVec<ParamVars::count>>, std::size_t> row_of;
  auto row_index = [&](const ExpVec<4>& pe, const ExpVec<ParamVars::count>& ge) {
    auto [it, inserted] = row_of.try_emplace({pe, ge}, row_of.size());
    return it->second;
  };
  for (const auto& bk : brackets) {
    for (const auto& [pe, pc] : bk.terms()) {
      for (const auto& [ge, c] : pc.terms()) row_index(pe, ge);
    }
  }
  for (const auto& [pe, pc] : base_bracket.terms()) {
    for (const auto& [ge, c] : pc.terms()) row_index(pe, ge);
  }

  const std::size_t nrows = row_of.size();
  ExactMatrix a(nrows, std::vector<GaussianRational>(ncols, GaussianRational(0)));
  std::vector<GaussianRational> b(nrows, GaussianRational(0));
  for (std::size_t k = 0; k < ncols; ++k) {
    for (const auto& [pe, pc] : brackets[k].terms()) {
      for (const auto& [ge, c] : pc.terms()) a[row_index(pe, ge)][k] = c;
    }
  }
  for (const auto& [pe, pc] : base_bracket.terms()) {
    for (const auto& [ge, c] : pc.terms()) b[row_index(pe, ge)] = -c;
  }

  const LinearSolution sol = solve_linear_system(a, b);
  if (sol.status == LinearSolution::Status::kInconsistent)
    throw NoSolutionError("integral ansatz system has no solution");

  IntegralSolution out;
  out.spec = spec;
  out.integral = PhasePolynomial::monomial({0, 0, 0, 2}, ParamPolynomial::one());
  for (std::size_t k = 0; k < ncols; ++k) {
    if (sol.values[k].is_zero()) continue;
    out.integral += detail::ansatz_basis_polynomial(ansatz.unknowns[k]) *
                    ParamPolynomial::constant(sol.values[k]);
  }
  for (std::size_t k = 0; k < ncols; ++k) {
    const auto& u = ansatz.unknowns[k];
    auto& qpoly = out.q_table[{u.n, u.j}];
    if (sol.values[k].is_zero()) continue;
    ExpVec<4> e{};
    e[kQ1] = static_cast<std::uint32_t>(u.a);
    e[kQ2] = static_cast<std::uint32_t>(u.n - u.a);
    qpoly += PhasePolynomial::monomial(e, ParamPolynomial::constant(sol.values[k]));
  }
  for (auto c : sol.free_columns) out.free_parameters.push_back(ansatz.unknowns[c].name());

  if (!poisson_bracket(h, out.integral).is_zero())
    throw NoSolutionError("derived integral fails to commute with the Hamiltonian");
  return out;
}

// I'_N: the 1 <-> 2 interchange of I_N; commutation with H_N is re-verified.
inline PhasePolynomial swap_integral(const IntegralSolution& sol) {
  PhasePolynomial swapped = swap_phase_indices(sol.integral);
  if (sol.spec.is_symbolic() &&
      !poisson_bracket(build_hamiltonian(sol.spec), swapped).is_zero())
    throw NoSolutionError("swapped integral fails to commute with the Hamiltonian");
  return swapped;
}

struct RelationCheck {
  bool holds = false;
  PhasePolynomial residual;
};

// H_N - I_N - I'_N - sum_{k=1}^{phi(N+1)/2} (-1)^k g_{2k} C^{2k} == 0.
inline RelationCheck check_relation_eq5(const SystemSpec& spec, const IntegralSolution& sol) {
  const PhasePolynomial c = build_angular_momentum();
  PhasePolynomial residual = build_hamiltonian(spec) - sol.integral - swap_phase_indices(sol.integral);
  for (int k = 1; 2 * k <= phi(spec.order() + 1); ++k) {
    PhasePolynomial term = c.pow(static_cast<unsigned>(2 * k)) *
                           spec.gamma_coefficient(2 * k);
    if (k % 2 == 1) {
      residual += term;  // subtracting (-1)^k g_{2k} C^{2k}
    } else {
      residual -= term;
    }
  }
  return {residual.is_zero(), residual};
}

// Exact rank over the rationals of the Jacobian of `fns` with respect to
// (q1, q2, p1, p2) at one sampled point.
inline std::size_t functional_independence_rank(const std::vector<PhasePolynomial>& fns,
                                                const std::array<GaussianRational, 4>& point,
                                                std::span<const GaussianRational> gammas) {
  ExactMatrix jac;
  jac.reserve(fns.size());
  for (const auto& f : fns) {
    std::vector<GaussianRational> row;
    row.reserve(4);
    for (std::size_t v = 0; v < 4; ++v)
      row.push_back(evaluate(f.partial_derivative(v), point, gammas));
    jac.push_back(std::move(row));
  }
  return exact_rank(std::move(jac));
}

struct RankProbe {
  std::size_t rank = 0;             // generic (max observed) rank
  bool degenerate_warning = false;  // 5 consecutive samples below generic
  std::vector<std::size_t> samples;
};

inline RankProbe generic_independence_rank(const std::vector<PhasePolynomial>& fns,
                                           std::span<const GaussianRational> gammas,
                                           std::uint64_t seed, int trials = 10) {
  RationalSampler sampler(seed);
  RankProbe probe;
  for (int t = 0; t < trials; ++t) {
    probe.samples.push_back(functional_independence_rank(fns, sampler.phase_point(), gammas));
    probe.rank = std::max(probe.rank, probe.samples.back());
  }
  int run = 0;
  for (auto r : probe.samples) {
    run = r < probe.rank ? run + 1 : 0;
    if (run >= 5) probe.degenerate_warning = true;
  }
  return probe;
}

}  // namespace zernike
