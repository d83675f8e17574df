// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "structfem/covariant.hpp"
#include "structfem/feec.hpp"
#include "structfem/lagrangian.hpp"

namespace structfem {

// Spatial nodal space on a 1D mesh for an m-component field. Coefficient
// vectors are component-major (c * num_nodes + i).
class SpatialSpace {
 public:
  SpatialSpace(IntervalMesh mesh, int components, int quadrature_points = 4);

  const IntervalMesh& mesh() const { return complex_.mesh; }
  const IntervalComplex& complex() const { return complex_; }
  int components() const { return components_; }
  int num_nodes() const { return complex_.mesh.num_nodes(); }
  int num_dofs() const { return components_ * num_nodes(); }
  int quadrature_points() const { return qp_; }
  // Block-diagonal nodal mass matrix.
  const Eigen::MatrixXd& mass() const { return mass_; }
  const Eigen::LLT<Eigen::MatrixXd>& mass_factor() const { return llt_; }

 private:
  IntervalComplex complex_;
  int components_;
  int qp_;
  Eigen::MatrixXd mass_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct PhaseState {
  double t = 0.0;
  Vector phi;
  Vector pi;
};

// Semi-discrete Lagrangian system of a spacetime density. The density is read
// with jet (phidot, phi_x), so its t-slot partial is the velocity partial and
// its x-slot partial the spatial one.
class HamiltonianSystem {
 public:
  HamiltonianSystem(SpatialSpace space, LagrangianDensity density);

  const SpatialSpace& space() const { return space_; }
  const LagrangianDensity& density() const { return density_; }
  int num_dofs() const { return space_.num_dofs(); }

  // Registers a symmetry for momentum evaluation after checking that it
  // commutes with the spatial projection. Throws NotEquivariant.
  int add_generator(const SymmetryGenerator& generator);
  const SymmetryGenerator& generator(int index) const { return generators_.at(index); }
  int num_generators() const { return static_cast<int>(generators_.size()); }

 private:
  SpatialSpace space_;
  LagrangianDensity density_;
  std::vector<SymmetryGenerator> generators_;
};

double instantaneous_lagrangian(const HamiltonianSystem& sys, double t, const Vector& phi,
                                const Vector& phidot);

struct LagrangianGradients {
  Vector d_phi;     // dL_h / dphi^j
  Vector d_phidot;  // dL_h / dphidot^j
};
LagrangianGradients lagrangian_gradients(const HamiltonianSystem& sys, double t, const Vector& phi,
                                         const Vector& phidot);

// Solves M pi = dL_h/dphidot. Throws SingularMass.
Vector legendre_transform(const HamiltonianSystem& sys, double t, const Vector& phi,
                          const Vector& phidot);
// Velocity from momentum; closed form for unit kinetic densities, Newton
// otherwise. Throws LegendreInversionFailed.
Vector inverse_legendre(const HamiltonianSystem& sys, double t, const Vector& phi, const Vector& pi);

// H_h = pi^T M phidot - L_h.
double hamiltonian(const HamiltonianSystem& sys, const PhaseState& state);

struct PhaseVector {
  Vector dphi;
  Vector dpi;
};
// M dphi/dt = dH/dpi, M dpi/dt = -dH/dphi.
PhaseVector hamiltonian_vector_field(const HamiltonianSystem& sys, const PhaseState& state);

PhaseState step_implicit_midpoint(const HamiltonianSystem& sys, const PhaseState& state, double dt,
                                  double tol = 1e-12, int max_iter = 50);
PhaseState step_explicit_euler(const HamiltonianSystem& sys, const PhaseState& state, double dt);

// <J_h, xi> = xi(phi)^T M pi for a registered generator.
double momentum_map(const HamiltonianSystem& sys, const PhaseState& state, int generator_index);

// Tangent vector on extended phase space (time component first).
struct ExtendedVector {
  double Vt = 0.0;
  Vector Vphi;
  Vector Vpi;
};
// V contracted with the Cartan form of L_h: Vphi^T M pi - Vt L_h.
double energy_momentum_pairing(const HamiltonianSystem& sys, const PhaseState& state,
                               const ExtendedVector& V);
ExtendedVector hamiltonian_extended_field(const HamiltonianSystem& sys, const PhaseState& state);

enum class Stepper { ImplicitMidpoint, ExplicitEuler };

// max |DPhi^T Omega DPhi - Omega| for the steps-fold map, Omega = [[0, M], [-M, 0]],
// with DPhi by central differences of step 1e-5 scale.
double symplecticity_check(const HamiltonianSystem& sys, const PhaseState& state, double dt,
                           int steps, Stepper stepper = Stepper::ImplicitMidpoint,
                           double scale = 1.0);

// d/dt (dL_h/dphidot) - dL_h/dphi at samples 1..K-2 of a uniformly sampled
// curve, time derivative by central differences. Throws InsufficientSamples.
std::vector<Vector> semidiscrete_residual(const HamiltonianSystem& sys,
                                          const std::vector<double>& times,
                                          const std::vector<Vector>& phis,
                                          const std::vector<Vector>& phidots);

struct EquivalenceResult {
  double max_difference = 0.0;
  double scale = 0.0;
  Vector temporal;   // temporal Galerkin residual, spacetime layout
  Vector covariant;  // spacetime residual
};

// Temporal Galerkin discretisation of the semi-discrete equations with hat
// functions on time_mesh, compared with the covariant residual on the tensor
// basis. coeffs is in the spacetime layout of `spacetime`. Throws BasisMismatch
// when the spacetime mesh is not time_mesh x the spatial mesh or the rules
// differ.
EquivalenceResult tensor_product_equivalence(const HamiltonianSystem& sys,
                                             const IntervalMesh& time_mesh,
                                             const CovariantProblem& spacetime, const Vector& coeffs);

}  // namespace structfem
