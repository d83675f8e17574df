// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace structfem::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialConfig {
  std::string kind = "zero";  // zero | quadratic | quartic | manufactured_cubic
  double coefficient = 1.0;
};

struct ProblemConfig {
  // nonlinear_wave_poisson | shift_symmetric_wave | so2_pair | broken_pair
  std::string density = "shift_symmetric_wave";
  double epsilon = -1.0;
  PotentialConfig potential;
  double beta = 0.0;  // symmetry-breaking coefficient of broken_pair
};

struct MeshConfig {
  std::array<double, 2> t_range{0.0, 1.0};
  std::array<double, 2> x_range{0.0, 1.0};
  int M = 8;
  int N = 8;
  bool periodic_x = false;
};

struct BoundaryConfig {
  // zero | constant | traveling_wave | standing_wave | manufactured | rotating_pair
  std::string kind = "zero";
  double value = 0.0;
  double amplitude = 1.0;
  double wavenumber = 1.0;
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 50;
  int quadrature_points = 4;
};

struct RegionConfig {
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0;
};

struct VerifyConfig {
  std::vector<RegionConfig> regions;
  std::vector<std::string> generators{"shift"};
  std::vector<std::string> checks;  // empty selects every check
  int random_vectors = 5;
};

struct SimulateConfig {
  double dt = 1e-3;
  int steps = 100;
  double amplitude = 1.0;
  int wavenumber = 1;
  double momentum_offset = 0.5;
  std::vector<std::string> generators{"shift"};
  double energy_tol = 1e-10;
  double momentum_tol = 1e-10;
  int output_every = 1;
};

struct ConvergeConfig {
  std::vector<std::string> studies{"poisson_l2"};
  int base = 8;
  int refinements = 3;
};

struct Config {
  ProblemConfig problem;
  MeshConfig mesh;
  BoundaryConfig boundary;
  SolverConfig solver;
  VerifyConfig verify;
  SimulateConfig simulate;
  ConvergeConfig converge;
  std::uint64_t seed = 0;
};

// Every key is optional; unknown keys and out-of-range values raise ConfigError.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);
nlohmann::json to_json(const Config& c);

const std::vector<std::string>& known_checks();

}  // namespace structfem::cli
