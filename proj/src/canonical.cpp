// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "structfem/errors.hpp"
#include "structfem/quadrature.hpp"
#include "structfem/structures.hpp"

namespace structfem {

SpatialSpace::SpatialSpace(IntervalMesh mesh, int components, int qp)
    : complex_(std::move(mesh)), components_(components), qp_(qp) {
  if (components < 1) throw InvalidArgument("component count must be positive");
  if (qp < 1) throw InvalidArgument("quadrature needs at least one point");
  const int n = complex_.mesh.num_nodes();
  mass_ = Eigen::MatrixXd::Zero(components * n, components * n);
  const Eigen::MatrixXd M0(complex_.mass0);
  for (int c = 0; c < components; ++c) mass_.block(c * n, c * n, n, n) = M0;
  llt_.compute(mass_);
  if (llt_.info() != Eigen::Success) throw SingularMass("spatial mass matrix is not positive definite");
}

HamiltonianSystem::HamiltonianSystem(SpatialSpace space, LagrangianDensity density)
    : space_(std::move(space)), density_(std::move(density)) {
  if (density_.components != space_.components())
    throw InvalidArgument("density and space have different component counts");
}

int HamiltonianSystem::add_generator(const SymmetryGenerator& g) {
  if (g.components != space_.components())
    throw InvalidArgument("generator and space have different component counts");
  if (!g.claimed_equivariant) throw NotEquivariant("generator " + g.name + " is not flagged as equivariant");
  const double L = space_.mesh().length();
  const int m = g.components;
  std::vector<std::function<void(double, std::span<double>)>> samples;
  for (int k = 1; k <= 2; ++k)
    samples.push_back([m, k, L](double x, std::span<double> v) {
      for (int c = 0; c < m; ++c)
        v[c] = std::sin(2 * std::numbers::pi * k * x / L + 0.6 * c) + 0.3 * std::cos(0.4 * c + k);
    });
  const double res = equivariance_check(space_.mesh(), g, samples);
  if (res > 1e-8) {
    throw NotEquivariant("generator " + g.name + " fails the projection commutation check (" +
                         std::to_string(res) + ")");
  }
  generators_.push_back(g);
  return static_cast<int>(generators_.size()) - 1;
}

namespace {

// Loops over spatial quadrature points, handing the callback the point, the
// two nodes with their shape values and derivatives, the weight and the jet.
template <class F>
void for_each_point(const HamiltonianSystem& sys, double t, const Vector& phi, const Vector& phidot,
                    F&& fn) {
  const SpatialSpace& S = sys.space();
  const IntervalMesh& mesh = S.mesh();
  const int m = S.components(), n = S.num_nodes();
  if (phi.size() != S.num_dofs() || phidot.size() != S.num_dofs())
    throw InvalidArgument("state vector has the wrong size");
  const Rule1D g = gauss_legendre_01(S.quadrature_points());
  const double h = mesh.h();
  std::vector<double> f(m), j(2 * m);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto nd = mesh.element_nodes(e);
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double r = g.nodes[q];
      const double v[2] = {1 - r, r};
      const double dv[2] = {-1 / h, 1 / h};
      for (int c = 0; c < m; ++c) {
        const double a0 = phi[c * n + nd[0]], a1 = phi[c * n + nd[1]];
        f[c] = v[0] * a0 + v[1] * a1;
        j[2 * c] = v[0] * phidot[c * n + nd[0]] + v[1] * phidot[c * n + nd[1]];
        j[2 * c + 1] = dv[0] * a0 + dv[1] * a1;
      }
      const Point x{t, mesh.lo() + (e + r) * h};
      fn(x, nd, v, dv, g.weights[q] * h, f, j);
    }
  }
}

struct SpatialHessian {
  Eigen::MatrixXd A;  // d2 L_h / dphi dphi
  Eigen::MatrixXd B;  // d2 L_h / dphi dphidot
  Eigen::MatrixXd C;  // d2 L_h / dphidot dphidot
};

SpatialHessian spatial_hessian(const HamiltonianSystem& sys, double t, const Vector& phi,
                               const Vector& phidot) {
  const LagrangianDensity& D = sys.density();
  const int m = sys.space().components(), n = sys.space().num_nodes(), N = m * n;
  SpatialHessian H{Eigen::MatrixXd::Zero(N, N), Eigen::MatrixXd::Zero(N, N), Eigen::MatrixXd::Zero(N, N)};
  std::vector<double> ff(m * m), fj(2 * m * m), jj(4 * m * m);
  for_each_point(sys, t, phi, phidot,
                 [&](const Point& x, const std::array<int, 2>& nd, const double* v, const double* dv,
                     double w, const std::vector<double>& f, const std::vector<double>& j) {
                   D.d_field_field(x, f, j, ff);
                   D.d_field_jet(x, f, j, fj);
                   D.d_jet_jet(x, f, j, jj);
                   for (int c = 0; c < m; ++c)
                     for (int a = 0; a < 2; ++a)
                       for (int d = 0; d < m; ++d)
                         for (int b = 0; b < 2; ++b) {
                           const int I = c * n + nd[a], K = d * n + nd[b];
                           H.A(I, K) += w * (v[a] * ff[c * m + d] * v[b] +
                                             v[a] * fj[c * 2 * m + 2 * d + 1] * dv[b] +
                                             dv[a] * fj[d * 2 * m + 2 * c + 1] * v[b] +
                                             dv[a] * jj[(2 * c + 1) * 2 * m + 2 * d + 1] * dv[b]);
                           H.B(I, K) += w * (v[a] * fj[c * 2 * m + 2 * d] * v[b] +
                                             dv[a] * jj[(2 * c + 1) * 2 * m + 2 * d] * v[b]);
                           H.C(I, K) += w * v[a] * jj[(2 * c) * 2 * m + 2 * d] * v[b];
                         }
                 });
  return H;
}

Vector stack(const Vector& a, const Vector& b) {
  Vector z(a.size() + b.size());
  z << a, b;
  return z;
}

Vector phase_field(const HamiltonianSystem& sys, double t, const Vector& z) {
  const int N = sys.num_dofs();
  const PhaseState s{t, z.head(N), z.tail(N)};
  const PhaseVector f = hamiltonian_vector_field(sys, s);
  return stack(f.dphi, f.dpi);
}

// Jacobian of the phase-space vector field.
Eigen::MatrixXd phase_jacobian(const HamiltonianSystem& sys, double t, const Vector& z) {
  const int N = sys.num_dofs();
  if (sys.density().has_second_partials()) {
    const Vector phi = z.head(N), pi = z.tail(N);
    const Vector phidot = inverse_legendre(sys, t, phi, pi);
    const SpatialHessian H = spatial_hessian(sys, t, phi, phidot);
    const Eigen::PartialPivLU<Eigen::MatrixXd> Clu(H.C);
    const Eigen::MatrixXd& M = sys.space().mass();
    const Eigen::MatrixXd dv_dphi = -Clu.solve(Eigen::MatrixXd(H.B.transpose()));
    const Eigen::MatrixXd dv_dpi = Clu.solve(M);
    Eigen::MatrixXd J(2 * N, 2 * N);
    J.topLeftCorner(N, N) = dv_dphi;
    J.topRightCorner(N, N) = dv_dpi;
    J.bottomLeftCorner(N, N) = sys.space().mass_factor().solve(Eigen::MatrixXd(H.A + H.B * dv_dphi));
    J.bottomRightCorner(N, N) = sys.space().mass_factor().solve(Eigen::MatrixXd(H.B * dv_dpi));
    return J;
  }
  Eigen::MatrixXd J(2 * N, 2 * N);
  const double h = 1e-6 * (1.0 + z.lpNorm<Eigen::Infinity>());
  Vector zp = z;
  for (int k = 0; k < 2 * N; ++k) {
    zp[k] = z[k] + h;
    const Vector fp = phase_field(sys, t, zp);
    zp[k] = z[k] - h;
    const Vector fm = phase_field(sys, t, zp);
    zp[k] = z[k];
    J.col(k) = (fp - fm) / (2 * h);
  }
  return J;
}

}  // namespace

double instantaneous_lagrangian(const HamiltonianSystem& sys, double t, const Vector& phi,
                                const Vector& phidot) {
  double L = 0.0;
  for_each_point(sys, t, phi, phidot,
                 [&](const Point& x, const std::array<int, 2>&, const double*, const double*, double w,
                     const std::vector<double>& f, const std::vector<double>& j) {
                   L += w * sys.density().value(x, f, j);
                 });
  return L;
}

LagrangianGradients lagrangian_gradients(const HamiltonianSystem& sys, double t, const Vector& phi,
                                         const Vector& phidot) {
  const int m = sys.space().components(), n = sys.space().num_nodes();
  LagrangianGradients G{Vector::Zero(m * n), Vector::Zero(m * n)};
  std::vector<double> g1(m), g2(2 * m);
  for_each_point(sys, t, phi, phidot,
                 [&](const Point& x, const std::array<int, 2>& nd, const double* v, const double* dv,
                     double w, const std::vector<double>& f, const std::vector<double>& j) {
                   sys.density().d_field(x, f, j, g1);
                   sys.density().d_jet(x, f, j, g2);
                   for (int c = 0; c < m; ++c)
                     for (int a = 0; a < 2; ++a) {
                       G.d_phi[c * n + nd[a]] += w * (g1[c] * v[a] + g2[2 * c + 1] * dv[a]);
                       G.d_phidot[c * n + nd[a]] += w * g2[2 * c] * v[a];
                     }
                 });
  return G;
}

Vector legendre_transform(const HamiltonianSystem& sys, double t, const Vector& phi,
                          const Vector& phidot) {
  const LagrangianGradients G = lagrangian_gradients(sys, t, phi, phidot);
  const Vector pi = sys.space().mass_factor().solve(G.d_phidot);
  if (!pi.allFinite()) throw SingularMass("mass solve produced non-finite values");
  return pi;
}

Vector inverse_legendre(const HamiltonianSystem& sys, double t, const Vector& phi, const Vector& pi) {
  if (sys.density().unit_kinetic) return pi;
  const Eigen::MatrixXd& M = sys.space().mass();
  const Vector target = M * pi;
  Vector v = pi;
  const int N = sys.num_dofs();
  for (int it = 0; it < 50; ++it) {
    const Vector res = lagrangian_gradients(sys, t, phi, v).d_phidot - target;
    const double scale = 1.0 + target.lpNorm<Eigen::Infinity>();
    if (res.lpNorm<Eigen::Infinity>() <= 1e-14 * scale) return v;
    Eigen::MatrixXd C(N, N);
    if (sys.density().has_second_partials()) {
      C = spatial_hessian(sys, t, phi, v).C;
    } else {
      const double h = 1e-6 * (1.0 + v.lpNorm<Eigen::Infinity>());
      Vector vp = v;
      for (int k = 0; k < N; ++k) {
        vp[k] = v[k] + h;
        const Vector gp = lagrangian_gradients(sys, t, phi, vp).d_phidot;
        vp[k] = v[k] - h;
        const Vector gm = lagrangian_gradients(sys, t, phi, vp).d_phidot;
        vp[k] = v[k];
        C.col(k) = (gp - gm) / (2 * h);
      }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    if (!lu.isInvertible()) throw LegendreInversionFailed("velocity Hessian is singular");
    const Vector dv = lu.solve(-res);
    v += dv;
    if (!v.allFinite()) throw LegendreInversionFailed("Legendre inversion diverged");
    if (dv.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + v.lpNorm<Eigen::Infinity>())) return v;
  }
  throw LegendreInversionFailed("Legendre inversion did not converge");
}

double hamiltonian(const HamiltonianSystem& sys, const PhaseState& s) {
  const Vector v = inverse_legendre(sys, s.t, s.phi, s.pi);
  return s.pi.dot(sys.space().mass() * v) - instantaneous_lagrangian(sys, s.t, s.phi, v);
}

PhaseVector hamiltonian_vector_field(const HamiltonianSystem& sys, const PhaseState& s) {
  PhaseVector out;
  out.dphi = inverse_legendre(sys, s.t, s.phi, s.pi);
  const LagrangianGradients G = lagrangian_gradients(sys, s.t, s.phi, out.dphi);
  out.dpi = sys.space().mass_factor().solve(G.d_phi);
  return out;
}

PhaseState step_explicit_euler(const HamiltonianSystem& sys, const PhaseState& s, double dt) {
  const PhaseVector f = hamiltonian_vector_field(sys, s);
  return {s.t + dt, s.phi + dt * f.dphi, s.pi + dt * f.dpi};
}

PhaseState step_implicit_midpoint(const HamiltonianSystem& sys, const PhaseState& s, double dt,
                                  double tol, int max_iter) {
  const int N = sys.num_dofs();
  const double tm = s.t + 0.5 * dt;
  const Vector z0 = stack(s.phi, s.pi);
  Vector z1 = z0 + dt * phase_field(sys, s.t, z0);
  const bool analytic = sys.density().has_second_partials();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  auto factor = [&](const Vector& mid) {
    const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(2 * N, 2 * N) - 0.5 * dt * phase_jacobian(sys, tm, mid);
    lu.compute(J);
  };
  factor(0.5 * (z0 + z1));
  for (int it = 0; it < max_iter; ++it) {
    const Vector mid = 0.5 * (z0 + z1);
    const Vector G = z1 - z0 - dt * phase_field(sys, tm, mid);
    if (analytic && it > 0) factor(mid);
    const Vector dz = lu.solve(-G);
    z1 += dz;
    if (!z1.allFinite()) throw NoConvergence("implicit midpoint iteration diverged");
    if (dz.lpNorm<Eigen::Infinity>() <= tol * (1.0 + z1.lpNorm<Eigen::Infinity>())) {
      return {s.t + dt, z1.head(N), z1.tail(N)};
    }
  }
  throw NoConvergence("implicit midpoint did not converge in " + std::to_string(max_iter) + " iterations");
}

double momentum_map(const HamiltonianSystem& sys, const PhaseState& s, int index) {
  const SymmetryGenerator& g = sys.generator(index);
  const Vector xi = g.apply(s.phi, sys.space().num_nodes());
  return xi.dot(sys.space().mass() * s.pi);
}

double energy_momentum_pairing(const HamiltonianSystem& sys, const PhaseState& s,
                               const ExtendedVector& V) {
  double out = V.Vphi.dot(sys.space().mass() * s.pi);
  if (V.Vt != 0.0) {
    const Vector v = inverse_legendre(sys, s.t, s.phi, s.pi);
    out -= V.Vt * instantaneous_lagrangian(sys, s.t, s.phi, v);
  }
  return out;
}

ExtendedVector hamiltonian_extended_field(const HamiltonianSystem& sys, const PhaseState& s) {
  const PhaseVector f = hamiltonian_vector_field(sys, s);
  return {1.0, f.dphi, f.dpi};
}

double symplecticity_check(const HamiltonianSystem& sys, const PhaseState& s, double dt, int steps,
                           Stepper stepper, double scale) {
  const int N = sys.num_dofs();
  auto flow = [&](const Vector& z) {
    PhaseState st{s.t, z.head(N), z.tail(N)};
    for (int k = 0; k < steps; ++k)
      st = stepper == Stepper::ImplicitMidpoint ? step_implicit_midpoint(sys, st, dt)
                                                : step_explicit_euler(sys, st, dt);
    return stack(st.phi, st.pi);
  };
  const Vector z = stack(s.phi, s.pi);
  const double h = 1e-5 * scale;
  Eigen::MatrixXd D(2 * N, 2 * N);
  Vector zp = z;
  for (int k = 0; k < 2 * N; ++k) {
    zp[k] = z[k] + h;
    const Vector fp = flow(zp);
    zp[k] = z[k] - h;
    const Vector fm = flow(zp);
    zp[k] = z[k];
    D.col(k) = (fp - fm) / (2 * h);
  }
  const Eigen::MatrixXd& M = sys.space().mass();
  Eigen::MatrixXd Omega = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Omega.topRightCorner(N, N) = M;
  Omega.bottomLeftCorner(N, N) = -M;
  const Eigen::MatrixXd dev = D.transpose() * Omega * D - Omega;
  return dev.cwiseAbs().maxCoeff() / Omega.cwiseAbs().maxCoeff();
}

std::vector<Vector> semidiscrete_residual(const HamiltonianSystem& sys, const std::vector<double>& times,
                                          const std::vector<Vector>& phis,
                                          const std::vector<Vector>& phidots) {
  const std::size_t K = times.size();
  if (K < 3 || phis.size() != K || phidots.size() != K)
    throw InsufficientSamples("need at least three samples of (phi, phidot)");
  const double dt = times[1] - times[0];
  for (std::size_t k = 1; k < K; ++k)
    if (std::abs(times[k] - times[k - 1] - dt) > 1e-9 * std::abs(dt))
      throw InvalidArgument("samples must be uniformly spaced in time");
  std::vector<LagrangianGradients> G;
  for (std::size_t k = 0; k < K; ++k) G.push_back(lagrangian_gradients(sys, times[k], phis[k], phidots[k]));
  std::vector<Vector> out;
  for (std::size_t k = 1; k + 1 < K; ++k)
    out.push_back((G[k + 1].d_phidot - G[k - 1].d_phidot) / (2 * dt) - G[k].d_phi);
  return out;
}

EquivalenceResult tensor_product_equivalence(const HamiltonianSystem& sys, const IntervalMesh& T,
                                             const CovariantProblem& P, const Vector& coeffs) {
  const TensorMesh2D& mesh = *P.mesh();
  const IntervalMesh& X = sys.space().mesh();
  auto same_mesh = [](const IntervalMesh& a, const IntervalMesh& b) {
    return a.num_elements() == b.num_elements() && a.periodic() == b.periodic() &&
           std::abs(a.lo() - b.lo()) <= 1e-12 * (1 + std::abs(a.lo())) &&
           std::abs(a.hi() - b.hi()) <= 1e-12 * (1 + std::abs(a.hi()));
  };
  if (!same_mesh(mesh.time(), T) || !same_mesh(mesh.space(), X))
    throw BasisMismatch("spacetime mesh is not the product of the temporal and spatial meshes");
  if (P.components() != sys.space().components())
    throw BasisMismatch("component counts differ");
  if (P.rule().kind != QuadratureKind::Gauss || P.rule().order != sys.space().quadrature_points())
    throw BasisMismatch("spacetime rule is not the product of the temporal and spatial rules");
  if (coeffs.size() != P.num_dofs()) throw BasisMismatch("coefficient vector has the wrong size");

  const int m = P.components(), nx = X.num_nodes(), nt = T.num_nodes(), nst = P.num_nodes();
  auto slice = [&](int a) {
    Vector v(m * nx);
    for (int c = 0; c < m; ++c)
      for (int b = 0; b < nx; ++b) v[c * nx + b] = coeffs[c * nst + a * nx + b];
    return v;
  };
  EquivalenceResult R;
  R.temporal = Vector::Zero(P.num_dofs());
  const Rule1D g = gauss_legendre_01(sys.space().quadrature_points());
  const double dt = T.h();
  for (int a = 0; a < T.num_elements(); ++a) {
    const Vector p0 = slice(a), p1 = slice(a + 1);
    const Vector vel = (p1 - p0) / dt;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double s = g.nodes[q];
      const double t = T.lo() + (a + s) * dt;
      const LagrangianGradients G = lagrangian_gradients(sys, t, (1 - s) * p0 + s * p1, vel);
      const double w = g.weights[q] * dt;
      const Vector r0 = w * ((1 - s) * G.d_phi - G.d_phidot / dt);
      const Vector r1 = w * (s * G.d_phi + G.d_phidot / dt);
      for (int c = 0; c < m; ++c)
        for (int b = 0; b < nx; ++b) {
          R.temporal[c * nst + a * nx + b] += r0[c * nx + b];
          R.temporal[c * nst + (a + 1) * nx + b] += r1[c * nx + b];
        }
    }
  }
  (void)nt;
  R.covariant = assemble_residual(P, coeffs, full_region(P.mesh()));
  R.scale = std::max(R.covariant.lpNorm<Eigen::Infinity>(), 1e-300);
  R.max_difference = (R.temporal - R.covariant).lpNorm<Eigen::Infinity>();
  return R;
}

}  // namespace structfem
