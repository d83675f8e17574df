// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "structfem/canonical.hpp"
#include "structfem/errors.hpp"
#include "structfem/io.hpp"
#include "structfem/structures.hpp"
#include "studies.hpp"

namespace structfem::cli {

using nlohmann::json;
namespace fs = std::filesystem;

void CheckList::at_most(const std::string& name, double measured, double tol, std::string detail) {
  results_.push_back({name, measured, tol, "<=", measured <= tol, std::move(detail)});
}

void CheckList::at_least(const std::string& name, double measured, double bound, std::string detail) {
  results_.push_back({name, measured, bound, ">=", measured >= bound, std::move(detail)});
}

bool CheckList::all_passed() const {
  return std::all_of(results_.begin(), results_.end(), [](const CheckResult& r) { return r.passed; });
}

json CheckList::to_json() const {
  json out = json::array();
  for (const CheckResult& r : results_) {
    json e = {{"name", r.name},
              {"measured", r.measured},
              {"threshold", r.threshold},
              {"comparison", r.comparison},
              {"passed", r.passed}};
    if (!r.detail.empty()) e["detail"] = r.detail;
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

Potential make_potential(const PotentialConfig& p) {
  if (p.kind == "zero") return zero_potential();
  if (p.kind == "quadratic") return quadratic_potential(p.coefficient);
  if (p.kind == "quartic") return quartic_potential(p.coefficient);
  return studies::manufactured_cubic_potential(p.coefficient);
}

// Largest finite double, used where a check has no meaningful measurement.
constexpr double kUnmeasured = std::numeric_limits<double>::max();

double inf_norm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

Vector random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

std::string region_label(const RegionConfig& r) {
  return "[" + std::to_string(r.i0) + "," + std::to_string(r.i1) + ")x[" + std::to_string(r.j0) + "," +
         std::to_string(r.j1) + ")";
}

MeshPtr make_mesh(const Config& c) {
  return build_tensor_mesh(c.mesh.t_range, c.mesh.x_range, c.mesh.M, c.mesh.N, c.mesh.periodic_x);
}

std::vector<RegionConfig> verify_regions(const Config& c) {
  if (!c.verify.regions.empty()) return c.verify.regions;
  const int M = c.mesh.M, N = c.mesh.N;
  std::vector<RegionConfig> out{{0, M, 0, N}};
  if (M >= 4 && N >= 4) {
    out.push_back({1, M - 1, 1, N - 1});
    out.push_back({0, M / 2, 0, N / 2});
  }
  return out;
}

NewtonOptions newton_options(const Config& c) {
  NewtonOptions o;
  o.tol = c.solver.tol;
  o.max_iter = c.solver.max_iter;
  o.estimate_condition = true;
  return o;
}

json solve_json(const SolveReport& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"residual_norm", r.residual_norm},
          {"history", r.history},
          {"step_lengths", r.step_lengths},
          {"linear_solver", r.linear_solver},
          {"condition_estimate", r.condition_estimate}};
}

struct Solved {
  std::unique_ptr<CovariantProblem> problem;
  SolveResult result;
};

Solved solve_full(const Config& c) {
  Solved s;
  const LagrangianDensity L = make_density(c);
  s.problem = std::make_unique<CovariantProblem>(make_mesh(c), L, gauss_rule(c.solver.quadrature_points));
  const RegularRegion U = full_region(s.problem->mesh());
  const DirichletData bc = dirichlet_from_function(*s.problem, U, boundary_sampler(c, L.components));
  s.result = newton_solve(*s.problem, U, bc, newton_options(c));
  return s;
}

void write_report(const fs::path& out, json report, const CheckList& checks) {
  report["checks"] = checks.to_json();
  report["passed"] = checks.all_passed();
  write_file_atomic(out / "report.json", report.dump(2) + "\n");
}

int finish(const fs::path& out, json report, const CheckList& checks, std::ostream& log) {
  for (const CheckResult& r : checks.results())
    log << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << format_double(r.measured) << ' '
        << r.comparison << ' ' << format_double(r.threshold) << '\n';
  write_report(out, std::move(report), checks);
  return checks.all_passed() ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Config& c, const fs::path& out, std::ostream& log) {
  const Solved s = solve_full(c);
  const CovariantProblem& P = *s.problem;
  write_file_atomic(out / "field.csv", field_csv(*P.mesh(), s.result.phi, P.components()).str());
  CheckList checks;
  checks.at_most("newton_converged", s.result.report.residual_norm, c.solver.tol);
  json report = {{"command", "solve"},
                 {"config", to_json(c)},
                 {"density", P.density().name},
                 {"num_dofs", P.num_dofs()},
                 {"solve", solve_json(s.result.report)}};
  return finish(out, std::move(report), checks, log);
}

// ---------------------------------------------------------------- verify

bool selected(const Config& c, const std::string& check) {
  return c.verify.checks.empty() ||
         std::find(c.verify.checks.begin(), c.verify.checks.end(), check) != c.verify.checks.end();
}

int cmd_verify(const Config& c, const fs::path& out, std::ostream& log) {
  const Solved s = solve_full(c);
  const CovariantProblem& P = *s.problem;
  const Vector& phi = s.result.phi;
  const int m = P.components();
  const int n = P.num_dofs();
  std::mt19937_64 rng(c.seed);

  std::vector<SymmetryGenerator> gens;
  for (const std::string& g : c.verify.generators) gens.push_back(make_generator(g, m));

  std::vector<RegionConfig> boxes = verify_regions(c);
  std::vector<RegularRegion> regions;
  for (const RegionConfig& b : boxes)
    regions.push_back(classify_region(P.mesh(), rectangle_elements(*P.mesh(), b.i0, b.i1, b.j0, b.j1)));

  CheckList checks;
  json details = json::object();

  if (selected(c, "newton_converged"))
    checks.at_most("newton_converged", s.result.report.residual_norm, c.solver.tol);

  if (selected(c, "cartan_cross_validation")) {
    double worst = 0.0;
    for (const RegularRegion& U : regions) {
      for (int k = 0; k < c.verify.random_vectors; ++k) {
        const Vector V = random_vector(rng, n);
        const double direct = cartan_form(P, U, phi, V, c.solver.tol);
        const CartanTerms t = cartan_form_integral(P, U, phi, V);
        const double gap = std::abs(t.total() - direct) /
                           std::max({std::abs(direct), std::abs(t.flux), std::abs(t.ring), 1e-300});
        worst = std::max(worst, gap);
      }
    }
    checks.at_most("cartan_cross_validation", worst, 1e-8);
  }

  const bool want_ms = selected(c, "multisymplectic");
  const bool want_control = selected(c, "multisymplectic_control");
  if (want_ms || want_control) {
    CsvDocument csv({"region", "boundary_dofs", "pairs", "max_ratio", "control_min_ratio"});
    double worst = 0.0, control = kUnmeasured;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      const FirstVariations fv = first_variation_basis(P, regions[r], phi);
      const double Hn = infinity_norm(fv.H);
      const auto& B = fv.basis;
      double region_worst = 0.0;
      long pairs = 0;
      for (std::size_t a = 0; a < B.size(); ++a)
        for (std::size_t b = a + 1; b < B.size(); ++b) {
          const double res = multisymplectic_residual(fv.H, fv.dofs, B[a], B[b]);
          region_worst = std::max(region_worst, std::abs(res) / (Hn * inf_norm(B[a]) * inf_norm(B[b])));
          ++pairs;
        }
      double region_control = kUnmeasured;
      for (int k = 0; k < c.verify.random_vectors; ++k) {
        Vector V = Vector::Zero(n);
        for (const Vector& v : B) V += std::uniform_real_distribution<double>(-1.0, 1.0)(rng) * v;
        const Vector W = random_vector(rng, n);
        const double res = multisymplectic_residual(fv.H, fv.dofs, V, W);
        region_control = std::min(region_control, std::abs(res) / (Hn * inf_norm(V) * inf_norm(W)));
      }
      worst = std::max(worst, region_worst);
      control = std::min(control, region_control);
      csv.add_row({region_label(boxes[r]), std::to_string(fv.dofs.boundary.size()), std::to_string(pairs),
                   format_double(region_worst), format_double(region_control)});
    }
    write_file_atomic(out / "multisymplectic.csv", csv.str());
    if (want_ms) checks.at_most("multisymplectic", worst, 1e-8);
    if (want_control) checks.at_least("multisymplectic_control", control, 1e-4);
  }

  const bool want_noether = selected(c, "noether");
  const bool want_rearrangement = selected(c, "noether_rearrangement");
  if (want_noether || want_rearrangement) {
    CsvDocument csv({"region", "generator", "cartan_pairing", "invariance_term", "interior_term", "ring_term",
                     "boundary_flux", "el_pairing", "scale", "rearrangement_defect", "consistency_defect",
                     "equivariance_residual"});
    double worst = 0.0, worst_rearr = 0.0;
    std::string failure;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      for (const SymmetryGenerator& g : gens) {
        try {
          const NoetherReport nr = noether_check(P, regions[r], phi, g);
          worst = std::max(worst, std::abs(nr.cartan_pairing) / nr.scale);
          csv.add_row({region_label(boxes[r]), g.name, format_double(nr.cartan_pairing),
                       format_double(nr.invariance_term), format_double(nr.interior_term),
                       format_double(nr.ring_term), format_double(nr.boundary_flux),
                       format_double(nr.el_pairing), format_double(nr.scale),
                       format_double(nr.rearrangement_defect), format_double(nr.consistency_defect),
                       format_double(nr.equivariance_residual)});
          for (int k = 0; k < c.verify.random_vectors; ++k) {
            const Vector field = random_vector(rng, n);
            worst_rearr = std::max(worst_rearr, noether_check(P, regions[r], field, g).rearrangement_defect);
          }
        } catch (const NotEquivariant& e) {
          worst = worst_rearr = kUnmeasured;
          failure = e.what();
        }
      }
    }
    write_file_atomic(out / "noether.csv", csv.str());
    if (want_noether) checks.at_most("noether", worst, 1e-8, failure);
    if (want_rearrangement) checks.at_most("noether_rearrangement", worst_rearr, 1e-12, failure);
  }

  if (selected(c, "equivariance")) {
    double worst = 0.0;
    for (const SymmetryGenerator& g : gens)
      worst = std::max(worst, equivariance_check(*P.mesh(), g, default_samples(m)));
    checks.at_most("equivariance", worst, 1e-8);
  }

  if (selected(c, "tensor_product")) {
    const IntervalMesh& S = P.mesh()->space();
    const HamiltonianSystem sys(SpatialSpace(S, m, c.solver.quadrature_points), P.density());
    double worst = 0.0;
    for (int k = 0; k < c.verify.random_vectors; ++k) {
      const EquivalenceResult er = tensor_product_equivalence(sys, P.mesh()->time(), P, random_vector(rng, n));
      worst = std::max(worst, er.max_difference / er.scale);
    }
    checks.at_most("tensor_product", worst, 1e-12);
  }

  if (selected(c, "quadrature_ordering")) {
    const RegularRegion U = full_region(P.mesh());
    const QuadratureRule nodal = nodal_vertex_rule();
    double worst = 0.0, gauss1 = 0.0;
    for (int k = 0; k <= c.verify.random_vectors; ++k) {
      const Vector field = k == 0 ? phi : random_vector(rng, n);
      const Vector a = quadrature_residual(P, field, U, nodal);
      const Vector b = residual_quadrature_after_variation(P, field, U, nodal);
      worst = std::max(worst, inf_norm(a - b) / std::max(inf_norm(a), 1e-300));
      const Vector a1 = quadrature_residual(P, field, U, gauss_rule(1));
      const Vector b1 = residual_quadrature_after_variation(P, field, U, gauss_rule(1));
      gauss1 = std::max(gauss1, inf_norm(a1 - b1));
    }
    details["quadrature_ordering_gauss1_difference"] = gauss1;
    checks.at_most("quadrature_ordering", worst, 0.0);
  }

  json region_list = json::array();
  for (const RegionConfig& b : boxes) region_list.push_back({b.i0, b.i1, b.j0, b.j1});
  json report = {{"command", "verify"},
                 {"config", to_json(c)},
                 {"density", P.density().name},
                 {"regions", region_list},
                 {"solve", solve_json(s.result.report)},
                 {"details", details}};
  return finish(out, std::move(report), checks, log);
}

// ---------------------------------------------------------------- simulate

double m_norm(const Eigen::MatrixXd& M, const Vector& v) { return std::sqrt(std::max(0.0, v.dot(M * v))); }

int cmd_simulate(const Config& c, const fs::path& out, std::ostream& log) {
  const LagrangianDensity L = make_density(c);
  const int m = L.components;
  const IntervalMesh S(c.mesh.x_range[0], c.mesh.x_range[1], c.mesh.N, c.mesh.periodic_x);
  HamiltonianSystem sys(SpatialSpace(S, m, c.solver.quadrature_points), L);
  for (const std::string& g : c.simulate.generators) sys.add_generator(make_generator(g, m));

  const SimulateConfig& sc = c.simulate;
  const int n = S.num_nodes();
  const double k = 2.0 * kPi * sc.wavenumber / S.length();
  Vector phi(m * n), phidot(m * n);
  for (int comp = 0; comp < m; ++comp)
    for (int i = 0; i < n; ++i) {
      const double arg = k * (S.node(i) - S.lo()) + 0.5 * kPi * comp;
      phi[comp * n + i] = sc.amplitude * std::sin(arg);
      phidot[comp * n + i] = sc.amplitude * k * std::cos(arg) + sc.momentum_offset;
    }
  PhaseState state{c.mesh.t_range[0], phi, legendre_transform(sys, c.mesh.t_range[0], phi, phidot)};

  const Eigen::MatrixXd& M = sys.space().mass();
  std::vector<std::string> header{"step", "t", "H"};
  for (int g = 0; g < sys.num_generators(); ++g) header.push_back("momentum_" + sys.generator(g).name);
  header.push_back("phi_norm");
  header.push_back("pi_norm");
  CsvDocument csv(header);

  const double H0 = hamiltonian(sys, state);
  std::vector<double> J0, Jscale;
  for (int g = 0; g < sys.num_generators(); ++g) {
    J0.push_back(momentum_map(sys, state, g));
    const Vector xi = sys.generator(g).apply(state.phi, n);
    Jscale.push_back(std::max({std::abs(J0.back()), m_norm(M, xi) * m_norm(M, state.pi), 1e-300}));
  }
  double energy_drift = 0.0;
  std::vector<double> momentum_drift(J0.size(), 0.0);
  auto record = [&](int step) {
    std::vector<double> row{double(step), state.t, hamiltonian(sys, state)};
    for (int g = 0; g < sys.num_generators(); ++g) row.push_back(momentum_map(sys, state, g));
    row.push_back(m_norm(M, state.phi));
    row.push_back(m_norm(M, state.pi));
    csv.add_numeric_row(row);
  };
  record(0);
  for (int step = 1; step <= sc.steps; ++step) {
    state = step_implicit_midpoint(sys, state, sc.dt);
    energy_drift = std::max(energy_drift, std::abs(hamiltonian(sys, state) - H0) / std::max(std::abs(H0), 1e-300));
    for (int g = 0; g < sys.num_generators(); ++g)
      momentum_drift[g] = std::max(momentum_drift[g], std::abs(momentum_map(sys, state, g) - J0[g]) / Jscale[g]);
    if (step % sc.output_every == 0 || step == sc.steps) record(step);
  }
  write_file_atomic(out / "trajectory.csv", csv.str());

  CheckList checks;
  checks.at_most("energy_drift", energy_drift, sc.energy_tol);
  for (int g = 0; g < sys.num_generators(); ++g)
    checks.at_most("momentum_drift_" + sys.generator(g).name, momentum_drift[g], sc.momentum_tol);
  const double Hf = hamiltonian(sys, state);
  const double pairing = energy_momentum_pairing(sys, state, hamiltonian_extended_field(sys, state));
  checks.at_most("energy_momentum_pairing", std::abs(pairing - Hf) / std::max(std::abs(Hf), 1e-300), 1e-12);

  json final_state = {{"t", state.t},
                      {"phi", std::vector<double>(state.phi.data(), state.phi.data() + state.phi.size())},
                      {"pi", std::vector<double>(state.pi.data(), state.pi.data() + state.pi.size())}};
  json report = {{"command", "simulate"},
                 {"config", to_json(c)},
                 {"density", L.name},
                 {"initial_hamiltonian", H0},
                 {"final_hamiltonian", Hf},
                 {"initial_momenta", J0},
                 {"final_state", final_state}};
  return finish(out, std::move(report), checks, log);
}

// ---------------------------------------------------------------- converge

void add_series(CsvDocument& csv, const std::string& study, const std::string& series,
                const std::vector<int>& n, double length, const std::vector<double>& values) {
  const std::vector<double> rates = studies::successive_rates(values);
  for (std::size_t k = 0; k < values.size(); ++k)
    csv.add_row({study, series, std::to_string(k), std::to_string(n[k]), format_double(length / n[k]),
                 format_double(values[k]), k == 0 ? "" : format_double(rates[k - 1])});
}

double worst_ratio(const std::vector<double>& v) {
  double r = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) r = std::max(r, v[k] / v[k - 1]);
  return r;
}

json series_json(const std::vector<int>& n, const std::vector<double>& values) {
  return {{"n", n},
          {"values", values},
          {"rates", studies::successive_rates(values)},
          {"fitted_rate", studies::fitted_rate(values)}};
}

int cmd_converge(const Config& c, const fs::path& out, std::ostream& log) {
  const ConvergeConfig& cc = c.converge;
  CsvDocument csv({"study", "series", "level", "n", "h", "value", "rate"});
  CheckList checks;
  json tables = json::object();
  for (const std::string& study : cc.studies) {
    if (study == "poisson_l2") {
      const studies::L2Study s =
          studies::manufactured_poisson(cc.base, cc.refinements, c.problem.potential.coefficient,
                                        c.solver.quadrature_points);
      add_series(csv, study, "l2_error", s.n, 1.0, s.error);
      tables[study] = series_json(s.n, s.error);
      checks.at_least("poisson_l2_rate_min", *std::min_element(s.rates.begin(), s.rates.end()), 1.8);
      checks.at_most("poisson_l2_rate_max", *std::max_element(s.rates.begin(), s.rates.end()), 2.2);
    } else if (study == "noether_current") {
      const double eps = c.problem.epsilon;
      if (eps < 0 && cc.base % 8 != 0) throw ConfigError("noether_current on the wave needs converge.base % 8 == 0");
      const studies::CurrentStudy s = studies::noether_current(eps, cc.base, cc.refinements);
      add_series(csv, study, "l2", s.n, 1.0, s.l2);
      add_series(csv, study, "dual", s.n, 1.0, s.dual);
      tables[study] = {{"l2", series_json(s.n, s.l2)}, {"dual", series_json(s.n, s.dual)}};
      checks.at_most("noether_current_l2_step_ratio", worst_ratio(s.l2), 1.0 - 1e-12);
      checks.at_least("noether_current_l2_rate", studies::fitted_rate(s.l2), 1.0);
      checks.at_most("noether_current_dual_step_ratio", worst_ratio(s.dual), 1.0 - 1e-12);
      checks.at_least("noether_current_dual_rate", studies::fitted_rate(s.dual), 1.0);
    } else {
      const studies::RingStudy s = studies::cartan_ring(cc.base, cc.refinements);
      add_series(csv, study, "ring_ratio", s.n, 1.0, s.ratio);
      tables[study] = series_json(s.n, s.ratio);
      tables[study]["cross_validation"] = s.cross_validation;
      checks.at_most("cartan_ring_step_ratio", worst_ratio(s.ratio), 1.0 - 1e-12);
      checks.at_least("cartan_ring_rate", studies::fitted_rate(s.ratio), 1.0);
      checks.at_most("cartan_cross_validation",
                     *std::max_element(s.cross_validation.begin(), s.cross_validation.end()), 1e-8);
    }
  }
  write_file_atomic(out / "convergence.csv", csv.str());
  json report = {{"command", "converge"}, {"config", to_json(c)}, {"tables", tables}};
  return finish(out, std::move(report), checks, log);
}

}  // namespace

LagrangianDensity make_density(const Config& c) {
  const ProblemConfig& p = c.problem;
  const bool manufactured = p.potential.kind == "manufactured_cubic";
  if (manufactured && p.density != "nonlinear_wave_poisson")
    throw ConfigError("the manufactured_cubic potential needs density nonlinear_wave_poisson");
  if (p.density == "nonlinear_wave_poisson") return builtin_nonlinear_wave_poisson(p.epsilon, make_potential(p.potential));
  if (p.density == "shift_symmetric_wave") return builtin_shift_symmetric_wave(p.epsilon);
  if (p.density == "so2_pair") return builtin_so2_pair(p.epsilon, make_potential(p.potential));
  return builtin_so2_pair(p.epsilon, make_potential(p.potential), p.beta);
}

SymmetryGenerator make_generator(const std::string& name, int components) {
  if (name == "shift") return shift_generator(components);
  if (name == "rotation") {
    if (components != 2) throw ConfigError("the rotation generator needs a two-component density");
    return rotation_generator();
  }
  if (name == "cubic") {
    if (components != 1) throw ConfigError("the cubic generator needs a one-component density");
    return cubic_generator();
  }
  throw ConfigError("unknown generator '" + name + "'");
}

VectorSampler boundary_sampler(const Config& c, int m) {
  const BoundaryConfig b = c.boundary;
  if (b.kind == "rotating_pair" && m != 2) throw ConfigError("boundary rotating_pair needs a two-component density");
  if (b.kind == "manufactured" && m != 1) throw ConfigError("boundary manufactured needs a one-component density");
  const double k = kPi * b.wavenumber;
  return [b, k, m](const Point& p, std::span<double> v) {
    double value = 0.0;
    if (b.kind == "constant") value = b.value;
    else if (b.kind == "traveling_wave") value = b.amplitude * std::sin(k * (p.x - p.t));
    else if (b.kind == "standing_wave") value = b.amplitude * std::sin(k * p.x) * std::cos(k * p.t);
    else if (b.kind == "manufactured") value = studies::manufactured_solution(p);
    if (b.kind == "rotating_pair") {
      v[0] = b.amplitude * std::cos(k * (p.x - p.t));
      v[1] = b.amplitude * std::sin(k * (p.x - p.t));
      return;
    }
    for (int comp = 0; comp < m; ++comp) v[comp] = value;
  };
}

int run_command(const std::string& command, const Config& config, const fs::path& out_dir,
                std::ostream& log) {
  try {
    fs::create_directories(out_dir);
    if (command == "solve") return cmd_solve(config, out_dir, log);
    if (command == "verify") return cmd_verify(config, out_dir, log);
    if (command == "simulate") return cmd_simulate(config, out_dir, log);
    if (command == "converge") return cmd_converge(config, out_dir, log);
    log << "unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    const std::string& kind = e.kind();
    const bool solver = kind == "NoConvergence" || kind == "SingularJacobian" || kind == "SingularMass" ||
                        kind == "LegendreInversionFailed" || kind == "SingularInteriorBlock" ||
                        kind == "NotASolution";
    const bool check = kind == "NotEquivariant";
    log << (solver ? "solver failure: " : check ? "check failed: " : "config error: ") << kind << ": "
        << e.what() << '\n';
    const json report = {{"command", command}, {"config", to_json(config)}, {"error", {{"kind", kind}, {"message", e.what()}}},
                         {"passed", false}};
    write_file_atomic(out_dir / "report.json", report.dump(2) + "\n");
    return solver ? kSolverFailure : check ? kCheckFailed : kConfigError;
  }
}

}  // namespace structfem::cli
