// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "structfem/mesh.hpp"

namespace structfem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Diagonal metric diag(s_t, s_x) with s_t, s_x in {+1, -1}.
struct MetricSignature {
  double s_t = 1.0;
  double s_x = 1.0;

  static MetricSignature euclidean() { return {1.0, 1.0}; }
  static MetricSignature lorentzian() { return {1.0, -1.0}; }
  // diag(1, epsilon): +1 for the Poisson form, -1 for the wave form.
  static MetricSignature from_epsilon(double epsilon) { return {1.0, epsilon}; }
};

// Lowest-order tensor-product space of k-forms on a 2D mesh.
//   k = 0: bilinear nodal functions, one dof per node.
//   k = 1: edge forms, one dof per edge (the edge integral). Edges along t
//          ("dt-edges") come first, then edges along x ("dx-edges"). Edges are
//          oriented in the increasing coordinate direction.
//   k = 2: piecewise-constant cell forms, one dof per cell (the cell integral).
class FESpace {
 public:
  FESpace(MeshPtr mesh, int degree);

  const MeshPtr& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  int num_dofs() const;
  // Number of components of a point value: 1 for k = 0, 2; (t, x) for k = 1.
  int value_size() const { return degree_ == 1 ? 2 : 1; }
  int num_local_dofs() const { return degree_ == 2 ? 1 : 4; }

  int dt_edge(int a, int b) const;  // edge from node (a, b) to (a + 1, b)
  int dx_edge(int a, int j) const;  // edge from node (a, j) to (a, j + 1)
  int num_dt_edges() const;

  // Global dofs of element e in local order.
  //   k = 0: nodes (p, q) -> 2 p + q.
  //   k = 1: dt-edge at x_j, dt-edge at x_{j+1}, dx-edge at t_i, dx-edge at t_{i+1}.
  //   k = 2: the cell.
  std::vector<int> element_dofs(int e) const;

  // Values of the local basis at reference point (s, r) of element e. out has
  // num_local_dofs() * value_size() entries, basis-major.
  void basis(double s, double r, std::span<double> out) const;

  // Whether the basis function of dof d has a nonzero trace on side `side` of
  // element e; used to identify boundary dofs of regions.
  bool dof_on_side(int e, int side, int local_dof) const;

 private:
  MeshPtr mesh_;
  int degree_;
};

using SpacePtr = std::shared_ptr<const FESpace>;

struct FormField {
  SpacePtr space;
  Vector coeffs;
};

// The discrete de Rham complex on a tensor mesh with its metric mass matrices.
class CochainComplex {
 public:
  CochainComplex(MeshPtr mesh, MetricSignature metric);

  const MeshPtr& mesh() const { return mesh_; }
  const MetricSignature& metric() const { return metric_; }
  const SpacePtr& space(int k) const;
  int top_degree() const { return 2; }

 private:
  MeshPtr mesh_;
  MetricSignature metric_;
  std::array<SpacePtr, 3> spaces_;
};

// Signed incidence matrix D_k : dofs(k) -> dofs(k + 1). Throws MissingSpace for
// the top degree.
SparseMatrix assemble_derivative(const FESpace& space);
SparseMatrix assemble_derivative(const CochainComplex& complex, int k);

// Metric-weighted L2 Gram matrix of the space:
//   k = 0: int u v,  k = 1: int s_t a_t b_t + s_x a_x b_x,  k = 2: s_t s_x int a b.
SparseMatrix assemble_mass(const FESpace& space, const MetricSignature& metric);

// Pointwise form sampler. Writes value_size() components at the point.
using FormSampler = std::function<void(const Point&, std::span<double>)>;

struct ProjectOptions {
  int gauss_points = 6;  // per edge / per cell direction, at least 5
  // When set, the projection is cross-checked against the projection of the
  // exterior derivative and QuadratureInsufficient is raised if the commuting
  // relation fails by more than `commute_tol`.
  bool non_polynomial = false;
  FormSampler derivative;
  double commute_tol = 1e-10;
};

// Canonical degrees-of-freedom projection (nodal values, edge integrals and
// cell integrals).
FormField project(const SpacePtr& space, const FormSampler& u,
                  const ProjectOptions& options = {});

// Point evaluation. The element whose closed lower-left corner contains the
// point is used, so values on shared edges are taken from the element above
// and to the right. Throws PointOutsideMesh.
std::vector<double> evaluate(const FormField& field, const Point& point);

// Locates the element and reference coordinates of a point with the same
// tie-break as evaluate().
struct ElementPoint {
  int element;
  double s;
  double r;
};
ElementPoint locate_point(const TensorMesh2D& mesh, const Point& point);

// Dof sets of a regular region.
struct BoundaryDofs {
  std::vector<int> boundary;           // dofs with nonzero trace on the region boundary
  std::vector<int> interior;           // remaining dofs supported in the region
  std::vector<int> boundary_elements;  // region elements supporting boundary dofs
};

BoundaryDofs boundary_dof_sets(const RegularRegion& region, const FESpace& space);

// 1D complex on an interval: nodal hats, piecewise-constant edge forms.
struct IntervalComplex {
  explicit IntervalComplex(IntervalMesh mesh);

  IntervalMesh mesh;
  SparseMatrix D0;      // edges x nodes
  SparseMatrix mass0;   // hat Gram matrix
  SparseMatrix mass1;   // diagonal, 1 / h
  SparseMatrix stiff;   // D0^T mass1 D0
};

}  // namespace structfem
