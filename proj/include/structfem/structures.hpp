// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "structfem/covariant.hpp"
#include "structfem/lagrangian.hpp"

namespace structfem {

// Boundary pairing sum_{j in boundary} r_j V^j of the region residual with a
// vertical variation V (a coefficient vector). Throws NotASolution when the
// interior residual exceeds 10 tol.
double cartan_form(const CovariantProblem& problem, const RegularRegion& region, const Vector& phi,
                   const Vector& V, double tol = 1e-10);
double cartan_form_unchecked(const CovariantProblem& problem, const RegularRegion& region,
                             const Vector& phi, const Vector& V);

// Integral route for the same quantity, by elementwise integration by parts:
//   flux  = int over the region boundary of (dL/d(dphi) . n) V,
//   ring  = sum over boundary elements of the weak field-equation density
//           paired with the boundary part of V (element divergence terms and
//           inter-element flux jumps).
struct CartanTerms {
  double flux = 0.0;
  double ring = 0.0;
  double total() const { return flux + ring; }
};
CartanTerms cartan_form_integral(const CovariantProblem& problem, const RegularRegion& region,
                                 const Vector& phi, const Vector& V);

// Weak field equations paired with V over the given elements of the region:
// element terms (dL/dphi - div dL/d(dphi)) V plus outward fluxes across sides
// that are interior to the region.
double weak_el_pairing(const CovariantProblem& problem, const RegularRegion& region,
                       const Vector& phi, const Vector& V, const std::vector<int>& elements);
double boundary_flux(const CovariantProblem& problem, const RegularRegion& region, const Vector& phi,
                     const Vector& V);

// sum_{j interior} r_j V^j.
double el_one_form(const CovariantProblem& problem, const RegularRegion& region, const Vector& phi,
                   const Vector& V);

// Restriction of V to the boundary dofs (zero elsewhere).
Vector boundary_part(const RegionDofs& dofs, const Vector& V);

struct FirstVariations {
  RegionDofs dofs;
  SparseMatrix H;              // Hessian of the region action
  std::vector<Vector> basis;   // one per boundary dof, in dofs.boundary order
  double max_interior_defect = 0.0;  // max |(H V)_I|_inf / |H|_inf
};

// Linearised solutions with unit boundary data: V_b = e_b on the boundary and
// H_II V_I = -H_IB e_b. Throws SingularInteriorBlock.
FirstVariations first_variation_basis(const CovariantProblem& problem, const RegularRegion& region,
                                      const Vector& phi);

// sum_{j in boundary} sum_k H_jk (V^k W^j - W^k V^j).
double multisymplectic_residual(const SparseMatrix& H, const RegionDofs& dofs, const Vector& V,
                                const Vector& W);
double infinity_norm(const SparseMatrix& H);

struct NoetherReport {
  std::string generator;
  double cartan_pairing = 0.0;   // sum_{boundary} r_j xi^j
  double invariance_term = 0.0;  // dS_U . xi by direct quadrature
  double interior_term = 0.0;    // weak equations paired with xi over U
  double ring_term = 0.0;        // weak equations paired with the boundary part of xi
  double boundary_flux = 0.0;    // flux of dL/d(dphi) against xi on the region boundary
  double el_pairing = 0.0;       // sum_{interior} r_j xi^j
  double scale = 0.0;            // sum |r_j xi^j| over the region dofs
  // |interior - ring - el_pairing| / scale; an algebraic identity for any field.
  double rearrangement_defect = 0.0;
  // |cartan - (invariance - (interior - ring))| / scale.
  double consistency_defect = 0.0;
  double equivariance_residual = 0.0;
};

// Throws NotEquivariant when the generator is not flagged or fails the
// projection commutation check.
NoetherReport noether_check(const CovariantProblem& problem, const RegularRegion& region,
                            const Vector& phi, const SymmetryGenerator& generator);

// max over s and sample points of |pi_h(flow_s u) - flow_s(pi_h u)| / s, where
// pi_h is nodal interpolation and both sides are evaluated pointwise away from
// the nodes.
double equivariance_check(const TensorMesh2D& mesh, const SymmetryGenerator& generator,
                          const std::vector<VectorSampler>& samples,
                          const std::vector<double>& s_values = {1e-3, 1e-4});
double equivariance_check(const IntervalMesh& mesh, const SymmetryGenerator& generator,
                          const std::vector<std::function<void(double, std::span<double>)>>& samples,
                          const std::vector<double>& s_values = {1e-3, 1e-4});
// Smooth default sample fields with the given number of components.
std::vector<VectorSampler> default_samples(int components);

// Reference jet: field values (m) and derivatives (2 m, layout c * 2 + mu).
using JetSampler = std::function<void(const Point&, std::span<double>, std::span<double>)>;

struct CurrentNorms {
  double l2_distance = 0.0;     // |J(phi_h) - J(phi)|_L2 on the fine mesh
  double dual_surrogate = 0.0;  // sqrt(rho^T G^{-1} rho) with the fine H1 Gram G
};

// Noether current J^mu = sum_c xi_c(phi) dL/d(dphi_{c,mu}) of coarse solutions
// measured against a reference on a fine evaluation mesh into which all coarse
// meshes nest (MeshNotNested otherwise). The dual surrogate tests div J against
// fine interior hats. Euclidean L2 structure in both norms.
std::vector<CurrentNorms> noether_current_norms(
    const JetSampler& reference, const std::vector<const CovariantProblem*>& problems,
    const std::vector<Vector>& solutions, const SymmetryGenerator& generator,
    const MeshPtr& fine_mesh, int quadrature_points = 4);

}  // namespace structfem
