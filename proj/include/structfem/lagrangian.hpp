// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>

#include "structfem/feec.hpp"
#include "structfem/mesh.hpp"

namespace structfem {

// First-order Lagrangian density L(x, phi, dphi) for an m-component scalar
// field on 1+1 spacetime. The jet dphi has layout [c * 2 + mu], mu = 0 for t
// and mu = 1 for x.
//
// The partial with respect to the jet is the plain coordinate partial
// dL/d(dphi_{c,mu}); it is the metric-raised form of the covariant partial, so
// pairing it with dv by a Euclidean contraction gives the metric pairing.
class LagrangianDensity {
 public:
  using Scalar = std::function<double(const Point&, std::span<const double>,
                                      std::span<const double>)>;
  using Vectorial = std::function<void(const Point&, std::span<const double>,
                                       std::span<const double>, std::span<double>)>;

  std::string name;
  int components = 1;
  MetricSignature metric;

  Scalar value;
  Vectorial d_field;  // dL/dphi, m entries
  Vectorial d_jet;    // dL/d(dphi), 2m entries
  // Optional second partials. Row-major blocks:
  //   d_field_field m x m, d_field_jet m x 2m, d_jet_jet 2m x 2m.
  Vectorial d_field_field;
  Vectorial d_field_jet;
  Vectorial d_jet_jet;
  // True when dL/d(dphi_t) = dphi_t, so the Legendre map is the identity.
  bool unit_kinetic = false;

  bool has_second_partials() const {
    return bool(d_field_field) && bool(d_field_jet) && bool(d_jet_jet);
  }
};

// Pointwise potential term N(x, phi) with first and second phi-derivatives.
struct Potential {
  std::function<double(const Point&, double)> value;
  std::function<double(const Point&, double)> d1;
  std::function<double(const Point&, double)> d2;
};

Potential zero_potential();
// N(phi) = c phi^4 / 4.
Potential quartic_potential(double c);
// N(phi) = c phi^2 / 2.
Potential quadratic_potential(double c);

// L = 1/2 (phi_t^2 + epsilon phi_x^2) - N(x, phi). Derivatives of N are
// finite-difference checked at construction (InconsistentDerivatives).
LagrangianDensity builtin_nonlinear_wave_poisson(double epsilon, const Potential& N);

// Massless shift-symmetric density, N = 0.
LagrangianDensity builtin_shift_symmetric_wave(double epsilon);

// Two-component density with SO(2)-invariant potential N(phi_1^2 + phi_2^2)
// plus an optional breaking term beta phi_1^4 / 4 (beta = 0 keeps the symmetry).
LagrangianDensity builtin_so2_pair(double epsilon, const Potential& radial, double beta = 0.0);

// Finite-difference consistency of the declared partials at random jets.
struct DerivativeCheck {
  double first_order_error = 0.0;   // max relative error of d_field / d_jet
  double second_order_error = 0.0;  // max relative error of the Hessian blocks
  double symmetry_error = 0.0;      // asymmetry of the assembled Hessian
};
DerivativeCheck check_density_derivatives(const LagrangianDensity& density, unsigned seed,
                                          int samples = 8, double amplitude = 1.0);

// Vertical symmetry generator acting pointwise on field values, y' = xi(y).
// Affine generators xi(y) = A y + b are flagged and expose A and b.
struct SymmetryGenerator {
  std::string name;
  int components = 1;
  bool affine = false;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  // Whether the generator is claimed to commute with nodal projection.
  bool claimed_equivariant = true;

  std::function<void(std::span<const double>, std::span<double>)> field;
  std::function<void(double, std::span<const double>, std::span<double>)> flow;

  // Generator applied to a stacked coefficient vector (component-major,
  // num_nodes entries per component).
  Eigen::VectorXd apply(const Eigen::VectorXd& coeffs, int num_nodes) const;
  // Flow of the stacked coefficient vector, nodewise.
  Eigen::VectorXd flow_coeffs(double s, const Eigen::VectorXd& coeffs, int num_nodes) const;
};

SymmetryGenerator affine_generator(std::string name, Eigen::MatrixXd A, Eigen::VectorXd b);
// Translation phi -> phi + s in every component.
SymmetryGenerator shift_generator(int components = 1);
// Rotation (phi_1, phi_2) -> (-phi_2, phi_1).
SymmetryGenerator rotation_generator();
// Nonlinear pointwise generator xi(y) = y^3, a negative control for
// equivariance.
SymmetryGenerator cubic_generator();

}  // namespace structfem
