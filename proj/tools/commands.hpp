// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"
#include "structfem/covariant.hpp"
#include "structfem/lagrangian.hpp"

namespace structfem::cli {

enum ExitCode : int { kPass = 0, kConfigError = 1, kCheckFailed = 2, kSolverFailure = 3 };

// One named check of a run report.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=" or ">="
  bool passed = false;
  std::string detail;
};

class CheckList {
 public:
  // measured <= tol
  void at_most(const std::string& name, double measured, double tol, std::string detail = {});
  // measured >= bound
  void at_least(const std::string& name, double measured, double bound, std::string detail = {});
  bool all_passed() const;
  const std::vector<CheckResult>& results() const { return results_; }
  nlohmann::json to_json() const;

 private:
  std::vector<CheckResult> results_;
};

LagrangianDensity make_density(const Config& c);
SymmetryGenerator make_generator(const std::string& name, int components);
// Dirichlet trace (and initial data) of the configured boundary kind.
VectorSampler boundary_sampler(const Config& c, int components);

// Runs solve | simulate | verify | converge, writing report.json and CSV
// files into out_dir. Returns an ExitCode.
int run_command(const std::string& command, const Config& config,
                const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace structfem::cli
