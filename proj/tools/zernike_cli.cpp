#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zernike/report.hpp"
#include "zernike/zernike.hpp"

namespace {

using namespace zernike;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kIdentityFailure = 2;
constexpr int kUsage = 64;
constexpr int kInternal = 70;

struct GlobalOptions {
  std::string json_path;
  std::uint64_t seed = 20250801;
  bool quiet = false;
};

std::vector<GaussianRational> parse_gamma_list(const std::vector<std::string>& strs) {
  std::vector<GaussianRational> out;
  out.reserve(strs.size());
  for (const auto& s : strs) out.emplace_back(parse_rational(s));
  return out;
}

json spec_json(const SystemSpec& spec) {
  json j;
  j["N"] = spec.order();
  j["gamma_mode"] = spec.is_symbolic() ? "symbolic" : "numeric";
  if (!spec.is_symbolic()) {
    json values = json::array();
    for (const auto& g : spec.gamma_values()) values.push_back(g.str());
    j["gamma"] = values;
  }
  return j;
}

void print_checks(const RunReport& report, bool quiet) {
  if (quiet) return;
  for (const auto& c : report.checks) {
    std::cout << (c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "SKIP") << "  "
              << c.name;
    if (!c.detail.empty() && c.status != "pass") std::cout << "  (" << c.detail << ")";
    std::cout << "\n";
  }
}

int finish(RunReport& report, const GlobalOptions& global, const WallClock& clock) {
  report.seed = global.seed;
  report.wall_time_seconds = clock.seconds();
  print_checks(report, global.quiet);
  if (!global.json_path.empty()) {
    write_text_atomic(global.json_path, report.to_json().dump(2) + "\n");
    report.artifacts.push_back(global.json_path);
  }
  return report.all_passed() ? kOk : kIdentityFailure;
}

// Evaluates the canonical bracket of two observables at one exact point
// without forming the symbolic bracket; the independent route used for the
// sampled identity checks.
GaussianRational bracket_value_at(const PhasePolynomial& a, const PhasePolynomial& b,
                                  const std::array<GaussianRational, 4>& point,
                                  std::span<const GaussianRational> gammas) {
  GaussianRational acc(0);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t qi = i, pi = i + 2;
    acc += evaluate(a.partial_derivative(qi), point, gammas) *
           evaluate(b.partial_derivative(pi), point, gammas);
    acc -= evaluate(a.partial_derivative(pi), point, gammas) *
           evaluate(b.partial_derivative(qi), point, gammas);
  }
  return acc;
}

int run_verify_classical(int order, const std::vector<std::string>& gamma_strs,
                         const GlobalOptions& global) {
  WallClock clock;
  RunReport report;
  report.command = "verify classical";
  const bool numeric = !gamma_strs.empty();
  const SystemSpec spec = numeric ? SystemSpec::numeric(order, parse_gamma_list(gamma_strs))
                                  : SystemSpec::symbolic(order);
  report.spec = spec_json(spec);

  const SystemSpec symbolic = SystemSpec::symbolic(order);
  const PhasePolynomial h = build_hamiltonian(symbolic);
  const PhasePolynomial c = build_angular_momentum();
  report.add_check("poisson_H_C", poisson_bracket(h, c).is_zero());

  IntegralSolution sol;
  try {
    sol = solve_integral_ansatz(symbolic);
    report.add_check("integral_derived", true);
  } catch (const NoSolutionError& e) {
    report.add_check("integral_derived", false, e.what());
    return finish(report, global, clock);
  }
  report.add_check("poisson_H_I", poisson_bracket(h, sol.integral).is_zero());
  report.add_check("poisson_H_I_swap",
                   poisson_bracket(h, swap_phase_indices(sol.integral)).is_zero());

  const RelationCheck eq5 = check_relation_eq5(symbolic, sol);
  report.add_check("dependence_relation", eq5.holds,
                   eq5.holds ? "" : canonical_text(eq5.residual));

  int higgs_order = 0;
  bool residual_zero = false;
  try {
    const SymmetryGenerators gens = build_generators(symbolic, sol);
    report.add_check("generator_closure", true);
    const StructureFunctionTable table = structure_functions(symbolic);
    const Prop2Result prop2 = verify_prop2(symbolic, gens, table);
    residual_zero = prop2.holds;
    higgs_order = prop2.bracket_degree;
    report.add_check("symmetry_algebra", prop2.holds,
                     prop2.holds ? "" : canonical_text(prop2.residual));
  } catch (const BracketClosureError& e) {
    report.add_check("generator_closure", false, e.what());
  }

  if (numeric) {
    const auto& gammas = spec.gamma_values();
    RationalSampler sampler(global.seed);
    bool sampled_ok = true;
    for (int t = 0; t < 20 && sampled_ok; ++t) {
      const auto point = sampler.phase_point();
      sampled_ok = bracket_value_at(h, c, point, gammas).is_zero() &&
                   bracket_value_at(h, sol.integral, point, gammas).is_zero() &&
                   bracket_value_at(h, swap_phase_indices(sol.integral), point, gammas).is_zero();
    }
    report.add_check("sampled_identities", sampled_ok);

    int good = 0;
    for (int t = 0; t < 10; ++t) {
      const auto point = sampler.phase_point();
      if (functional_independence_rank({h, c, sol.integral}, point, gammas) == 3) ++good;
    }
    report.add_check("independence_rank", good >= 9,
                     "rank 3 at " + std::to_string(good) + "/10 points");
    report.result["rank3_points"] = good;
  }

  report.result["N"] = order;
  report.result["brackets_checked"] =
      static_cast<int>(report.checks.size());
  report.result["residual_zero"] = residual_zero;
  report.result["higgs_order"] = higgs_order;
  return finish(report, global, clock);
}

int run_verify_quantum(int order, const std::vector<std::string>& gamma_strs,
                       const GlobalOptions& global) {
  WallClock clock;
  RunReport report;
  report.command = "verify quantum";
  const SystemSpec spec = gamma_strs.empty()
                              ? SystemSpec::symbolic(order)
                              : SystemSpec::numeric(order, parse_gamma_list(gamma_strs));
  report.spec = spec_json(spec);

  const OperatorPolynomial h = build_quantum_hamiltonian(spec);
  report.add_check("commutator_H_C",
                   commutator(h, build_quantum_angular_momentum()).is_zero());

  OperatorPolynomial integral;
  try {
    integral = build_quantum_integral(spec);
    report.add_check("integral_commutes", true);
  } catch (const UnsupportedOrderError& e) {
    report.add_check("integral_commutes", false, e.what());
    return finish(report, global, clock);
  }
  report.add_check("partner_commutes",
                   commutator(h, build_quantum_partner_integral(spec)).is_zero());

  const QuantumRelation relation = verify_quantum_relation(spec);
  report.add_check("dependence_relation", relation.holds,
                   relation.holds ? "" : canonical_text(relation.residual));

  try {
    const LadderBasis basis = build_ladder_basis(spec);
    report.add_check("ladder_closure", true);
    const StructureOperator structure = build_structure_operator(spec, basis);
    report.add_check("structure_factorization", true);
    deformed_oscillator(spec, basis, structure);
    report.add_check("deformed_oscillator", true);
  } catch (const LadderClosureError& e) {
    report.add_check("ladder_closure", false, e.what());
  } catch (const StructureIdentityError& e) {
    report.add_check("structure_factorization", false, e.what());
  }

  report.result["N"] = order;
  report.result["residual_zero"] = relation.holds;
  return finish(report, global, clock);
}

std::string q_label(int n, int j) {
  return "Q(" + std::to_string(n - j) + "," + std::to_string(j) + ")";
}

int run_solve_ansatz(int order, const std::string& out_path, const GlobalOptions& global) {
  WallClock clock;
  RunReport report;
  report.command = "solve-ansatz";
  const SystemSpec spec = SystemSpec::symbolic(order);
  report.spec = spec_json(spec);

  IntegralSolution sol;
  try {
    sol = solve_integral_ansatz(spec);
  } catch (const NoSolutionError& e) {
    report.add_check("integral_derived", false, e.what());
    return finish(report, global, clock);
  }
  report.add_check("integral_derived", true);
  const bool residual_zero = poisson_bracket(build_hamiltonian(spec), sol.integral).is_zero();
  report.add_check("residual_zero", residual_zero);

  std::ostringstream text;
  text << "I_" << order << " = " << canonical_text(sol.integral) << "\n";
  json q_polys = json::object();
  for (const auto& [key, poly] : sol.q_table) {
    const std::string label = q_label(key.first, key.second);
    text << label << " = " << canonical_text(poly) << "\n";
    q_polys[label] = canonical_text(poly);
  }

  report.result["N"] = order;
  report.result["q_polynomials"] = q_polys;
  report.result["integral"] = canonical_text(sol.integral);
  report.result["residual_is_zero"] = residual_zero;
  report.result["free_parameters"] = sol.free_parameters;

  if (!out_path.empty()) {
    write_text_atomic(out_path, text.str());
    report.artifacts.push_back(out_path);
  } else if (!global.quiet) {
    std::cout << text.str();
  }
  return finish(report, global, clock);
}

std::string rational_function_text(const RationalFunctionN& f) {
  if (f.den_is_one()) return canonical_text(f.num);
  return "(" + canonical_text(f.num) + ")/(" + canonical_text(f.den) + ")";
}

int run_spectrum(int order, const std::vector<std::string>& param_strs, int n_max,
                 const std::string& csv_path, const GlobalOptions& global) {
  WallClock clock;
  RunReport report;
  report.command = "spectrum";
  const SystemSpec spec = SystemSpec::symbolic(order);
  report.spec = spec_json(spec);

  const bool numeric = !param_strs.empty();
  std::vector<GaussianRational> gammas;
  if (numeric) {
    if (param_strs.size() != 4)
      throw CLI::ValidationError("--params", "expected beta,alpha,mu,nu");
    const GaussianRational i = GaussianRational::i();
    const auto beta = parse_rational(param_strs[0]);
    const auto alpha = parse_rational(param_strs[1]);
    const auto mu = parse_rational(param_strs[2]);
    const auto nu = parse_rational(param_strs[3]);
    gammas = {-(i * GaussianRational(beta)), GaussianRational(alpha), i * GaussianRational(mu),
              -GaussianRational(nu)};
    gammas.resize(static_cast<std::size_t>(order));
  }

  const SpectrumResult spectra = solve_spectrum(spec);
  report.add_check("families_found", !spectra.families.empty(),
                   std::to_string(spectra.families.size()) + " families");

  json types = json::array();
  std::vector<std::pair<std::string, NPoly>> numeric_series;
  for (const auto& family : spectra.families) {
    json t;
    t["label"] = family.label;
    t["u"] = rational_function_text(family.u);
    json levels = json::array();
    if (numeric) {
      NPoly e_num;
      for (const auto& [e, coeff] : family.energy.terms())
        e_num.add_term(e, evaluate_params(coeff, gammas));
      t["energy_polynomial"] = canonical_text(e_num);
      bool real = true;
      for (const auto& [e, coeff] : e_num.terms()) real = real && coeff.is_real();
      report.add_check("levels_real_" + family.label, real);
      for (long n = 0; n <= n_max; ++n)
        levels.push_back(evaluate(e_num, std::array<GaussianRational, 1>{GaussianRational(n)}).str());
      numeric_series.emplace_back(family.label, e_num);
    } else {
      t["energy_polynomial"] = canonical_text(family.energy);
    }
    t["first_k_levels"] = levels;
    types.push_back(t);
  }
  report.result["types"] = types;
  for (const auto& l : spectra.log) report.result["solver_log"].push_back(l);

  if (!csv_path.empty() && numeric) {
    std::ostringstream csv;
    csv << "n";
    for (const auto& [label, poly] : numeric_series) csv << ",E_" << label;
    csv << "\n";
    for (long n = 0; n <= n_max; ++n) {
      csv << n;
      for (const auto& [label, poly] : numeric_series) {
        const GaussianRational v =
            evaluate(poly, std::array<GaussianRational, 1>{GaussianRational(n)});
        csv << "," << v.re().get_d();
      }
      csv << "\n";
    }
    write_text_atomic(csv_path, csv.str());
    report.artifacts.push_back(csv_path);
  } else if (!csv_path.empty()) {
    report.add_skipped("csv", "tabulated levels need --params");
  }

  if (!global.quiet) {
    for (const auto& t : types)
      std::cout << "Type " << t["label"].get<std::string>() << ":  u = "
                << t["u"].get<std::string>() << ",  E(n) = "
                << t["energy_polynomial"].get<std::string>() << "\n";
  }
  return finish(report, global, clock);
}

int run_simulate(const std::string& config_path, const std::string& csv_path,
                 const GlobalOptions& global) {
  WallClock clock;
  RunReport report;
  report.command = "simulate";

  std::ifstream is(config_path);
  if (!is) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json cfg_json = json::parse(is);

  TrajectoryConfig cfg;
  const auto& state = cfg_json.at("initial_state");
  for (std::size_t i = 0; i < 4; ++i) cfg.initial_state[i] = state.at(i).get<double>();
  cfg.t_end = cfg_json.at("t_end").get<double>();
  cfg.dt = cfg_json.at("dt").get<double>();
  if (cfg_json.contains("integrator")) {
    const std::string name = cfg_json["integrator"].get<std::string>();
    if (name == "implicit-midpoint") cfg.integrator = Integrator::kImplicitMidpoint;
    else if (name == "explicit-rk4") cfg.integrator = Integrator::kExplicitRk4;
    else throw CLI::ValidationError("config", "unknown integrator " + name);
  }
  if (cfg_json.contains("closure_tolerance"))
    cfg.closure_tolerance = cfg_json["closure_tolerance"].get<double>();
  const bool check_closure = cfg_json.value("check_closure", true);

  const json& system = cfg_json.at("system");
  const std::string chart = system.at("chart").get<std::string>();
  std::ostringstream csv;
  json summary;

  if (chart == "cartesian") {
    std::vector<std::string> gamma_strs;
    for (const auto& g : system.at("gamma")) gamma_strs.push_back(g.get<std::string>());
    const SystemSpec spec =
        SystemSpec::numeric(system.at("N").get<int>(), parse_gamma_list(gamma_strs));
    if (!spec.all_gammas_real())
      throw std::invalid_argument(
          "refusing complex parameters: the Cartesian flow is a real dynamical system only "
          "for real g_n; use the polar chart for imaginary g_1");
    report.spec = spec_json(spec);

    const auto observables = conserved_observables(spec);
    const TrajectoryResult traj = integrate_trajectory(cfg, spec, observables);

    csv << "t,q1,q2,p1,p2,H,C,I\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      csv << traj.times[k];
      for (double v : traj.states[k]) csv << "," << v;
      for (double v : traj.observables[k]) csv << "," << v;
      csv << "\n";
    }

    for (std::size_t j = 0; j < traj.observable_names.size(); ++j) {
      std::vector<double> col;
      col.reserve(traj.observables.size());
      for (const auto& row : traj.observables) col.push_back(row[j]);
      summary["drift_" + traj.observable_names[j]] = relative_drift(col);
    }
    if (check_closure) {
      const OrbitCheck orbit = detect_first_return(traj, cfg.closure_tolerance, false);
      summary["closed"] = orbit.is_closed;
      summary["period"] = orbit.is_closed ? json(orbit.period) : json();
    }
  } else if (chart == "polar") {
    CurvedOscillatorSpec osc;
    osc.kappa = system.at("kappa").get<double>();
    osc.omega = system.at("omega").get<double>();
    osc.p_phi = cfg.initial_state[3];
    if (system.contains("p_phi")) osc.p_phi = system["p_phi"].get<double>();
    cfg.initial_state[3] = osc.p_phi;
    report.spec = {{"chart", "polar"}, {"kappa", osc.kappa}, {"omega", osc.omega},
                   {"p_phi", osc.p_phi}};

    const TrajectoryResult traj = integrate_curved(cfg, osc);
    csv << "t,rho,phi,p_rho,p_phi,H\n";
    std::vector<double> energies;
    energies.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& z = traj.states[k];
      const double e = curved_oscillator_hamiltonian(osc, z[0], z[2]);
      energies.push_back(e);
      csv << traj.times[k] << "," << z[0] << "," << z[1] << "," << z[2] << "," << z[3] << ","
          << e << "\n";
    }
    summary["drift_H"] = relative_drift(energies);
    summary["drift_C"] = json();
    summary["drift_I"] = json();
    if (check_closure) {
      const OrbitCheck orbit = detect_first_return(traj, cfg.closure_tolerance, true);
      summary["closed"] = orbit.is_closed;
      summary["period"] = orbit.is_closed ? json(orbit.period) : json();
    }
  } else {
    throw CLI::ValidationError("config", "chart must be cartesian or polar");
  }

  const std::string out_csv = csv_path.empty() ? "trajectory.csv" : csv_path;
  write_text_atomic(out_csv, csv.str());
  report.artifacts.push_back(out_csv);
  report.result = summary;
  report.add_check("integration", true);
  if (!global.quiet) std::cout << summary.dump(2) << "\n";
  return finish(report, global, clock);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact symbolic and numerical engine for a family of momentum-coupled "
               "planar Hamiltonians: integrals of motion, symmetry algebras, spectra, "
               "and trajectories"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--json", global.json_path, "write the machine-readable run report here");
  app.add_option("--seed", global.seed, "seed for sampled checks (echoed in the report)");
  app.add_flag("--quiet", global.quiet, "suppress per-check output");

  auto* verify = app.add_subcommand("verify", "run the exact identity suite");
  std::string target;
  int verify_n = 2;
  std::vector<std::string> verify_gamma;
  verify->add_option("target", target, "classical or quantum")
      ->required()
      ->check(CLI::IsMember({"classical", "quantum"}));
  verify->add_option("--N", verify_n, "family order")->required()->check(CLI::Range(1, 8));
  verify->add_option("--gamma", verify_gamma, "rational parameter values p/q")
      ->delimiter(',');

  auto* ansatz = app.add_subcommand("solve-ansatz", "derive the additional integral of motion");
  int ansatz_n = 4;
  std::string ansatz_out;
  ansatz->add_option("--N", ansatz_n, "family order")->required()->check(CLI::Range(1, 5));
  ansatz->add_option("--out", ansatz_out, "write the canonical text artifact here");

  auto* spectrum = app.add_subcommand("spectrum", "algebraic energy spectra");
  int spectrum_n = 4;
  int n_max = 10;
  std::vector<std::string> params;
  std::string spectrum_csv;
  spectrum->add_option("--N", spectrum_n, "family order")->required()->check(CLI::Range(1, 4));
  spectrum->add_option("--params", params, "rational beta,alpha,mu,nu")->delimiter(',');
  spectrum->add_option("--n-max", n_max, "tabulate levels for n = 0..n_max")
      ->check(CLI::Range(0, 1000));
  spectrum->add_option("--csv", spectrum_csv, "write tabulated levels here");

  auto* simulate = app.add_subcommand("simulate", "integrate a trajectory from a JSON config");
  std::string config_path;
  std::string simulate_csv;
  simulate->add_option("--config", config_path, "JSON trajectory configuration")->required();
  simulate->add_option("--csv", simulate_csv, "time series output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      if (target == "classical" && verify_n > 5) {
        std::cerr << "verify classical supports N <= 5\n";
        return kUsage;
      }
      if (target == "quantum" && verify_n > 4) {
        std::cerr << "verify quantum supports N <= 4\n";
        return kUsage;
      }
      return target == "classical" ? run_verify_classical(verify_n, verify_gamma, global)
                                   : run_verify_quantum(verify_n, verify_gamma, global);
    }
    if (ansatz->parsed()) return run_solve_ansatz(ansatz_n, ansatz_out, global);
    if (spectrum->parsed()) return run_spectrum(spectrum_n, params, n_max, spectrum_csv, global);
    if (simulate->parsed()) return run_simulate(config_path, simulate_csv, global);
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
