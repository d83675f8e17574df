// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "structfem/canonical.hpp"
#include "structfem/covariant.hpp"
#include "structfem/structures.hpp"

namespace structfem::studies {

// log2(a / b) for successive values on meshes refined by two.
std::vector<double> successive_rates(const std::vector<double>& values);

// Least-squares slope of -log2(value) against the refinement level.
double fitted_rate(const std::vector<double>& values);

// Strictly decreasing sequence.
bool monotone_decreasing(const std::vector<double>& values);

// Manufactured solution sin(pi t) sin(pi x) of -Lap phi + c phi^3 = f on the
// unit square with zero Dirichlet data.
Potential manufactured_cubic_potential(double c);
double manufactured_solution(const Point& p);

struct L2Study {
  std::vector<int> n;
  std::vector<double> error;
  std::vector<double> rates;
  std::vector<int> newton_iterations;
};
L2Study manufactured_poisson(int base, int refinements, double cubic = 1.0, int qp = 4);

// Linear wave (epsilon = -1) or Laplace (epsilon = +1) with an exact solution,
// Noether current of the shift measured against the exact current on a fine
// mesh one refinement beyond the finest solution.
struct CurrentStudy {
  std::vector<int> n;
  std::vector<double> l2;
  std::vector<double> dual;
  std::vector<double> l2_rates;
  std::vector<double> dual_rates;
};
CurrentStudy noether_current(double epsilon, int base, int refinements);

// Exact solution used by noether_current: a travelling wave for epsilon = -1,
// a harmonic function for epsilon = +1. Domain [0, T] x [0, 1].
double current_study_time_extent(double epsilon);
void current_study_exact(double epsilon, const Point& p, double& v, double& vt, double& vx);

// Boundary-ring to boundary-flux ratio of the Cartan form on the fixed region
// [1/4, 3/4]^2 for the manufactured Poisson solution and V the interpolant of
// 1 + t + x^2.
struct RingStudy {
  std::vector<int> n;
  std::vector<double> flux;
  std::vector<double> ring;
  std::vector<double> ratio;
  std::vector<double> rates;
  std::vector<double> cross_validation;  // relative gap of the two Cartan routes
};
RingStudy cartan_ring(int base, int refinements);

}  // namespace structfem::studies
