// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "structfem/feec.hpp"
#include "structfem/lagrangian.hpp"
#include "structfem/mesh.hpp"
#include "structfem/quadrature.hpp"

namespace structfem {

// Spacetime Galerkin discretisation of a first-order density on bilinear
// 0-forms. Coefficient vectors stack the components: entry c * num_nodes + n.
class CovariantProblem {
 public:
  CovariantProblem(MeshPtr mesh, LagrangianDensity density, QuadratureRule rule = gauss_rule(4));

  const MeshPtr& mesh() const { return mesh_; }
  const SpacePtr& space() const { return space_; }
  const LagrangianDensity& density() const { return density_; }
  const QuadratureRule& rule() const { return rule_; }
  int components() const { return density_.components; }
  int num_nodes() const { return mesh_->num_nodes(); }
  int num_dofs() const { return components() * num_nodes(); }

 private:
  MeshPtr mesh_;
  SpacePtr space_;
  LagrangianDensity density_;
  QuadratureRule rule_;
};

// Component-expanded dof sets of a region.
struct RegionDofs {
  std::vector<int> boundary;
  std::vector<int> interior;
  std::vector<int> boundary_elements;
};
RegionDofs region_dofs(const CovariantProblem& problem, const RegularRegion& region);

double assemble_action(const CovariantProblem& problem, const Vector& phi,
                       const RegularRegion& region);

// r_j = dS_U / dphi^j over the elements of the region. The vector has the full
// dof count; entries of dofs not touching the region are zero.
Vector assemble_residual(const CovariantProblem& problem, const Vector& phi,
                         const RegularRegion& region);

enum class JacobianMode { Auto, Analytic, FiniteDifference };

// Hessian of S_U. Auto uses the density's second partials when present and
// element-local central differences (step 1e-6 (1 + |phi|_inf)) otherwise.
SparseMatrix assemble_jacobian(const CovariantProblem& problem, const Vector& phi,
                               const RegularRegion& region,
                               JacobianMode mode = JacobianMode::Auto);

// Action and residual under an explicit element rule. The residual is the
// exact gradient of the quadrature action.
double quadrature_action(const CovariantProblem& problem, const Vector& phi,
                         const RegularRegion& region, const QuadratureRule& rule);
Vector quadrature_residual(const CovariantProblem& problem, const Vector& phi,
                           const RegularRegion& region, const QuadratureRule& rule);

// The opposite ordering: the field equations are formed first and the rule is
// applied afterwards. The field partial dL/dphi is replaced elementwise by its
// bilinear interpolant through the element vertices before being paired with
// the test functions under the rule; the jet part is paired under the rule as
// is. For the nodal-vertex rule this coincides with quadrature_residual.
Vector residual_quadrature_after_variation(const CovariantProblem& problem, const Vector& phi,
                                           const RegularRegion& region,
                                           const QuadratureRule& rule);

struct DirichletData {
  std::vector<int> dofs;
  Vector values;
};

using VectorSampler = std::function<void(const Point&, std::span<double>)>;

// Samples g at the boundary dofs of the region.
DirichletData dirichlet_from_function(const CovariantProblem& problem, const RegularRegion& region,
                                      const VectorSampler& g);

// Nodal interpolant of an m-component field.
Vector interpolate(const CovariantProblem& problem, const VectorSampler& g);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double min_step = 1e-4;
  JacobianMode jacobian = JacobianMode::Auto;
  // Interior systems up to this size are factorised densely, larger ones with
  // a sparse LU.
  int dense_limit = 500;
  bool estimate_condition = false;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> history;
  std::vector<double> step_lengths;
  std::string linear_solver;
  double condition_estimate = 0.0;  // 0 when not requested
};

struct SolveResult {
  Vector phi;
  SolveReport report;
};

// Solves the interior DEL of the region with the boundary dofs fixed by the
// Dirichlet data. The initial guess is the Dirichlet data extended by zero
// unless one is given. Throws NoConvergence, SingularJacobian.
SolveResult newton_solve(const CovariantProblem& problem, const RegularRegion& region,
                         const DirichletData& dirichlet, const NewtonOptions& options = {},
                         const Vector* initial = nullptr);

// Extracts rows/columns by index lists.
Eigen::MatrixXd dense_block(const SparseMatrix& A, const std::vector<int>& rows,
                            const std::vector<int>& cols);
SparseMatrix sparse_block(const SparseMatrix& A, const std::vector<int>& rows,
                          const std::vector<int>& cols);

// Jet of the discrete field at reference point (s, r) of element e.
struct Jet {
  Point x;
  std::vector<double> phi;   // m
  std::vector<double> dphi;  // 2 m
};
Jet element_jet(const CovariantProblem& problem, const Vector& phi, int e, double s, double r);

}  // namespace structfem
