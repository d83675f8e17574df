// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace structfem::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void one_of(const std::string& v, std::initializer_list<const char*> options, const std::string& where) {
  for (const char* o : options)
    if (v == o) return;
  throw ConfigError(where + " has unsupported value '" + v + "'");
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> checks = {
      "newton_converged",        "cartan_cross_validation", "multisymplectic",
      "multisymplectic_control", "noether",                 "noether_rearrangement",
      "equivariance",            "tensor_product",          "quadrature_ordering"};
  return checks;
}

Config parse_config(const json& j) {
  Config c;
  only_keys(j, "config",
            {"problem", "mesh", "boundary", "solver", "verify", "simulate", "converge", "seed"});
  if (j.contains("problem")) {
    const json& p = j["problem"];
    only_keys(p, "problem", {"density", "epsilon", "potential", "beta"});
    read(p, "density", c.problem.density, "problem");
    read(p, "epsilon", c.problem.epsilon, "problem");
    read(p, "beta", c.problem.beta, "problem");
    if (p.contains("potential")) {
      const json& q = p["potential"];
      only_keys(q, "problem.potential", {"kind", "coefficient"});
      read(q, "kind", c.problem.potential.kind, "problem.potential");
      read(q, "coefficient", c.problem.potential.coefficient, "problem.potential");
    }
  }
  if (j.contains("mesh")) {
    const json& m = j["mesh"];
    only_keys(m, "mesh", {"t_range", "x_range", "M", "N", "periodic_x"});
    read(m, "t_range", c.mesh.t_range, "mesh");
    read(m, "x_range", c.mesh.x_range, "mesh");
    read(m, "M", c.mesh.M, "mesh");
    read(m, "N", c.mesh.N, "mesh");
    read(m, "periodic_x", c.mesh.periodic_x, "mesh");
  }
  if (j.contains("boundary")) {
    const json& b = j["boundary"];
    only_keys(b, "boundary", {"kind", "value", "amplitude", "wavenumber"});
    read(b, "kind", c.boundary.kind, "boundary");
    read(b, "value", c.boundary.value, "boundary");
    read(b, "amplitude", c.boundary.amplitude, "boundary");
    read(b, "wavenumber", c.boundary.wavenumber, "boundary");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    only_keys(s, "solver", {"tol", "max_iter", "quadrature_points"});
    read(s, "tol", c.solver.tol, "solver");
    read(s, "max_iter", c.solver.max_iter, "solver");
    read(s, "quadrature_points", c.solver.quadrature_points, "solver");
  }
  if (j.contains("verify")) {
    const json& v = j["verify"];
    only_keys(v, "verify", {"regions", "generators", "checks", "random_vectors"});
    if (v.contains("regions")) {
      if (!v["regions"].is_array()) throw ConfigError("verify.regions must be an array");
      for (const json& r : v["regions"]) {
        std::array<int, 4> box{};
        try {
          box = r.get<std::array<int, 4>>();
        } catch (const json::exception&) {
          throw ConfigError("verify.regions entries must be [i0, i1, j0, j1]");
        }
        c.verify.regions.push_back({box[0], box[1], box[2], box[3]});
      }
    }
    read(v, "generators", c.verify.generators, "verify");
    read(v, "checks", c.verify.checks, "verify");
    read(v, "random_vectors", c.verify.random_vectors, "verify");
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    only_keys(s, "simulate", {"dt", "steps", "amplitude", "wavenumber", "momentum_offset",
                              "generators", "energy_tol", "momentum_tol", "output_every"});
    read(s, "dt", c.simulate.dt, "simulate");
    read(s, "steps", c.simulate.steps, "simulate");
    read(s, "amplitude", c.simulate.amplitude, "simulate");
    read(s, "wavenumber", c.simulate.wavenumber, "simulate");
    read(s, "momentum_offset", c.simulate.momentum_offset, "simulate");
    read(s, "generators", c.simulate.generators, "simulate");
    read(s, "energy_tol", c.simulate.energy_tol, "simulate");
    read(s, "momentum_tol", c.simulate.momentum_tol, "simulate");
    read(s, "output_every", c.simulate.output_every, "simulate");
  }
  if (j.contains("converge")) {
    const json& s = j["converge"];
    only_keys(s, "converge", {"studies", "base", "refinements"});
    read(s, "studies", c.converge.studies, "converge");
    read(s, "base", c.converge.base, "converge");
    read(s, "refinements", c.converge.refinements, "converge");
  }
  read(j, "seed", c.seed, "config");

  // Value checks.
  one_of(c.problem.density, {"nonlinear_wave_poisson", "shift_symmetric_wave", "so2_pair", "broken_pair"},
         "problem.density");
  require(c.problem.epsilon == 1.0 || c.problem.epsilon == -1.0, "problem.epsilon must be +1 or -1");
  one_of(c.problem.potential.kind, {"zero", "quadratic", "quartic", "manufactured_cubic"},
         "problem.potential.kind");
  require(c.mesh.M >= 1, "mesh.M must be at least 1");
  require(c.mesh.N >= 1, "mesh.N must be at least 1");
  require(!c.mesh.periodic_x || c.mesh.N >= 3, "a periodic mesh needs mesh.N >= 3");
  require(c.mesh.t_range[1] > c.mesh.t_range[0], "mesh.t_range must be increasing");
  require(c.mesh.x_range[1] > c.mesh.x_range[0], "mesh.x_range must be increasing");
  one_of(c.boundary.kind,
         {"zero", "constant", "traveling_wave", "standing_wave", "manufactured", "rotating_pair"},
         "boundary.kind");
  require(c.solver.tol > 0, "solver.tol must be positive");
  require(c.solver.max_iter >= 1, "solver.max_iter must be at least 1");
  require(c.solver.quadrature_points >= 1 && c.solver.quadrature_points <= 12,
          "solver.quadrature_points must be in 1..12");
  for (const RegionConfig& r : c.verify.regions)
    require(r.i0 >= 0 && r.i1 <= c.mesh.M && r.i0 < r.i1 && r.j0 >= 0 && r.j1 <= c.mesh.N && r.j0 < r.j1,
            "verify.regions entry lies outside the mesh");
  for (const std::string& g : c.verify.generators) one_of(g, {"shift", "rotation", "cubic"}, "verify.generators");
  for (const std::string& g : c.simulate.generators) one_of(g, {"shift", "rotation", "cubic"}, "simulate.generators");
  for (const std::string& k : c.verify.checks)
    require(std::find(known_checks().begin(), known_checks().end(), k) != known_checks().end(),
            "verify.checks has unknown check '" + k + "'");
  require(c.verify.random_vectors >= 1, "verify.random_vectors must be at least 1");
  require(c.simulate.dt > 0, "simulate.dt must be positive");
  require(c.simulate.steps >= 1, "simulate.steps must be at least 1");
  require(c.simulate.output_every >= 1, "simulate.output_every must be at least 1");
  for (const std::string& s : c.converge.studies)
    one_of(s, {"poisson_l2", "noether_current", "cartan_ring"}, "converge.studies");
  require(c.converge.base >= 4 && c.converge.base % 4 == 0, "converge.base must be a positive multiple of 4");
  require(c.converge.refinements >= 1 && c.converge.refinements <= 5, "converge.refinements must be in 1..5");
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const Config& c) {
  json regions = json::array();
  for (const RegionConfig& r : c.verify.regions) regions.push_back({r.i0, r.i1, r.j0, r.j1});
  return {
      {"problem",
       {{"density", c.problem.density},
        {"epsilon", c.problem.epsilon},
        {"potential", {{"kind", c.problem.potential.kind}, {"coefficient", c.problem.potential.coefficient}}},
        {"beta", c.problem.beta}}},
      {"mesh",
       {{"t_range", c.mesh.t_range}, {"x_range", c.mesh.x_range}, {"M", c.mesh.M}, {"N", c.mesh.N},
        {"periodic_x", c.mesh.periodic_x}}},
      {"boundary",
       {{"kind", c.boundary.kind}, {"value", c.boundary.value}, {"amplitude", c.boundary.amplitude},
        {"wavenumber", c.boundary.wavenumber}}},
      {"solver", {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter},
                  {"quadrature_points", c.solver.quadrature_points}}},
      {"verify", {{"regions", regions}, {"generators", c.verify.generators}, {"checks", c.verify.checks},
                  {"random_vectors", c.verify.random_vectors}}},
      {"simulate", {{"dt", c.simulate.dt}, {"steps", c.simulate.steps}, {"amplitude", c.simulate.amplitude},
                    {"wavenumber", c.simulate.wavenumber}, {"momentum_offset", c.simulate.momentum_offset},
                    {"generators", c.simulate.generators}, {"energy_tol", c.simulate.energy_tol},
                    {"momentum_tol", c.simulate.momentum_tol}, {"output_every", c.simulate.output_every}}},
      {"converge", {{"studies", c.converge.studies}, {"base", c.converge.base},
                    {"refinements", c.converge.refinements}}},
      {"seed", c.seed}};
}

}  // namespace structfem::cli
