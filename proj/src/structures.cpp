// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/structures.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "structfem/errors.hpp"
#include "structfem/quadrature.hpp"

namespace structfem {

namespace {

// Bilinear element data for a stacked coefficient vector.
struct ElementPoly {
  int m = 1;
  double dt = 1, dx = 1;
  std::array<int, 4> nodes{};
  std::vector<double> c;  // c[comp * 4 + l]

  ElementPoly(const CovariantProblem& P, const Vector& v, int e) {
    const TensorMesh2D& mesh = *P.mesh();
    m = P.components();
    dt = mesh.dt();
    dx = mesh.dx();
    nodes = mesh.element_nodes(e);
    c.resize(4 * m);
    const int n = P.num_nodes();
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < 4; ++l) c[k * 4 + l] = v[k * n + nodes[l]];
  }

  // Value, t- and x-derivative and the mixed derivative of component k.
  void eval(int k, double s, double r, double& v, double& vt, double& vx, double& vtx) const {
    const double* a = &c[k * 4];
    v = (1 - s) * (1 - r) * a[0] + (1 - s) * r * a[1] + s * (1 - r) * a[2] + s * r * a[3];
    vt = ((1 - r) * (a[2] - a[0]) + r * (a[3] - a[1])) / dt;
    vx = ((1 - s) * (a[1] - a[0]) + s * (a[3] - a[2])) / dx;
    vtx = (a[0] - a[1] - a[2] + a[3]) / (dt * dx);
  }
};

struct PointJet {
  Point x;
  std::vector<double> f, j, hess;  // hess[c * 4 + mu * 2 + nu]
};

PointJet jet(const CovariantProblem& P, const ElementPoly& E, int e, double s, double r) {
  const TensorMesh2D& mesh = *P.mesh();
  const Point o = mesh.element_origin(e);
  PointJet J;
  J.x = {o.t + s * mesh.dt(), o.x + r * mesh.dx()};
  J.f.resize(E.m);
  J.j.resize(2 * E.m);
  J.hess.assign(4 * E.m, 0.0);
  for (int c = 0; c < E.m; ++c) {
    double v, vt, vx, vtx;
    E.eval(c, s, r, v, vt, vx, vtx);
    J.f[c] = v;
    J.j[2 * c] = vt;
    J.j[2 * c + 1] = vx;
    J.hess[c * 4 + 1] = J.hess[c * 4 + 2] = vtx;
  }
  return J;
}

// div of dL/d(dphi) inside element e, per component.
void jet_divergence(const CovariantProblem& P, const ElementPoly& E, int e, double s, double r,
                    std::vector<double>& out) {
  const LagrangianDensity& D = P.density();
  const int m = E.m;
  out.assign(m, 0.0);
  if (D.has_second_partials()) {
    const PointJet J = jet(P, E, e, s, r);
    std::vector<double> fj(2 * m * m), jj(4 * m * m);
    D.d_field_jet(J.x, J.f, J.j, fj);
    D.d_jet_jet(J.x, J.f, J.j, jj);
    for (int c = 0; c < m; ++c)
      for (int mu = 0; mu < 2; ++mu)
        for (int d = 0; d < m; ++d) {
          out[c] += fj[d * 2 * m + 2 * c + mu] * J.j[2 * d + mu];
          for (int nu = 0; nu < 2; ++nu)
            out[c] += jj[(2 * c + mu) * 2 * m + 2 * d + nu] * J.hess[d * 4 + mu * 2 + nu];
        }
    return;
  }
  // Central differences of the jet partial along each coordinate, using the
  // polynomial extension of the element field.
  const double h = 1e-4;
  std::vector<double> gp(2 * m), gm(2 * m);
  for (int mu = 0; mu < 2; ++mu) {
    const double sp = s + (mu == 0 ? h : 0), rp = r + (mu == 1 ? h : 0);
    const double sm = s - (mu == 0 ? h : 0), rm = r - (mu == 1 ? h : 0);
    const PointJet Jp = jet(P, E, e, sp, rp), Jm = jet(P, E, e, sm, rm);
    D.d_jet(Jp.x, Jp.f, Jp.j, gp);
    D.d_jet(Jm.x, Jm.f, Jm.j, gm);
    const double len = mu == 0 ? E.dt : E.dx;
    for (int c = 0; c < m; ++c) out[c] += (gp[2 * c + mu] - gm[2 * c + mu]) / (2 * h * len);
  }
}

// Integral over side `side` of element e of (dL/d(dphi) . n) V.
double side_flux(const CovariantProblem& P, const ElementPoly& E, const ElementPoly& V, int e,
                 int side, const Rule1D& g) {
  const int m = E.m;
  std::vector<double> g2(2 * m);
  double acc = 0.0;
  const double len = side < 2 ? E.dx : E.dt;
  const int mu = side < 2 ? 0 : 1;
  const double sign = (side % 2 == 0) ? -1.0 : 1.0;
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    double s, r;
    if (side < 2) { s = double(side); r = g.nodes[q]; }
    else { s = g.nodes[q]; r = double(side - 2); }
    const PointJet J = jet(P, E, e, s, r);
    P.density().d_jet(J.x, J.f, J.j, g2);
    double val = 0.0;
    for (int c = 0; c < m; ++c) {
      double v, vt, vx, vtx;
      V.eval(c, s, r, v, vt, vx, vtx);
      val += sign * g2[2 * c + mu] * v;
    }
    acc += g.weights[q] * len * val;
  }
  return acc;
}

double element_field_term(const CovariantProblem& P, const ElementPoly& E, const ElementPoly& V,
                          int e, const Rule1D& g) {
  const int m = E.m;
  std::vector<double> g1(m), div(m);
  const double area = E.dt * E.dx;
  double acc = 0.0;
  for (std::size_t a = 0; a < g.nodes.size(); ++a)
    for (std::size_t b = 0; b < g.nodes.size(); ++b) {
      const double s = g.nodes[a], r = g.nodes[b];
      const PointJet J = jet(P, E, e, s, r);
      P.density().d_field(J.x, J.f, J.j, g1);
      jet_divergence(P, E, e, s, r, div);
      double val = 0.0;
      for (int c = 0; c < m; ++c) {
        double v, vt, vx, vtx;
        V.eval(c, s, r, v, vt, vx, vtx);
        val += (g1[c] - div[c]) * v;
      }
      acc += g.weights[a] * g.weights[b] * area * val;
    }
  return acc;
}

int rule_points(const CovariantProblem& P) {
  return std::max(P.rule().kind == QuadratureKind::Gauss ? P.rule().order : 2, 2);
}

double interior_residual_norm(const CovariantProblem& P, const RegularRegion& region,
                              const Vector& r) {
  double norm = 0.0;
  for (int d : region_dofs(P, region).interior) norm = std::max(norm, std::abs(r[d]));
  return norm;
}

}  // namespace

Vector boundary_part(const RegionDofs& dofs, const Vector& V) {
  Vector out = Vector::Zero(V.size());
  for (int d : dofs.boundary) out[d] = V[d];
  return out;
}

double cartan_form_unchecked(const CovariantProblem& P, const RegularRegion& region,
                             const Vector& phi, const Vector& V) {
  const Vector r = assemble_residual(P, phi, region);
  double acc = 0.0;
  for (int d : region_dofs(P, region).boundary) acc += r[d] * V[d];
  return acc;
}

double cartan_form(const CovariantProblem& P, const RegularRegion& region, const Vector& phi,
                   const Vector& V, double tol) {
  const Vector r = assemble_residual(P, phi, region);
  const double norm = interior_residual_norm(P, region, r);
  if (norm > 10.0 * tol) {
    throw NotASolution("interior residual " + std::to_string(norm) + " exceeds 10 tol");
  }
  double acc = 0.0;
  for (int d : region_dofs(P, region).boundary) acc += r[d] * V[d];
  return acc;
}

double weak_el_pairing(const CovariantProblem& P, const RegularRegion& region, const Vector& phi,
                       const Vector& V, const std::vector<int>& elements) {
  const Rule1D g = gauss_legendre_01(rule_points(P));
  double acc = 0.0;
  for (int e : elements) {
    if (!region.contains(e)) throw InvalidArgument("element outside the region");
    const ElementPoly E(P, phi, e), W(P, V, e);
    acc += element_field_term(P, E, W, e, g);
    for (int side = 0; side < 4; ++side)
      if (!side_on_region_boundary(region, e, side)) acc += side_flux(P, E, W, e, side, g);
  }
  return acc;
}

double boundary_flux(const CovariantProblem& P, const RegularRegion& region, const Vector& phi,
                     const Vector& V) {
  const Rule1D g = gauss_legendre_01(rule_points(P));
  double acc = 0.0;
  for (int e : region.elements()) {
    bool any = false;
    for (int side = 0; side < 4; ++side) any = any || side_on_region_boundary(region, e, side);
    if (!any) continue;
    const ElementPoly E(P, phi, e), W(P, V, e);
    for (int side = 0; side < 4; ++side)
      if (side_on_region_boundary(region, e, side)) acc += side_flux(P, E, W, e, side, g);
  }
  return acc;
}

CartanTerms cartan_form_integral(const CovariantProblem& P, const RegularRegion& region,
                                 const Vector& phi, const Vector& V) {
  const RegionDofs dofs = region_dofs(P, region);
  CartanTerms t;
  t.flux = boundary_flux(P, region, phi, V);
  t.ring = weak_el_pairing(P, region, phi, boundary_part(dofs, V), dofs.boundary_elements);
  return t;
}

double el_one_form(const CovariantProblem& P, const RegularRegion& region, const Vector& phi,
                   const Vector& V) {
  const Vector r = assemble_residual(P, phi, region);
  double acc = 0.0;
  for (int d : region_dofs(P, region).interior) acc += r[d] * V[d];
  return acc;
}

double infinity_norm(const SparseMatrix& H) {
  double best = 0.0;
  for (int i = 0; i < H.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(H, i); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

FirstVariations first_variation_basis(const CovariantProblem& P, const RegularRegion& region,
                                      const Vector& phi) {
  FirstVariations out;
  out.dofs = region_dofs(P, region);
  out.H = assemble_jacobian(P, phi, region);
  const std::vector<int>& I = out.dofs.interior;
  const std::vector<int>& B = out.dofs.boundary;
  Eigen::SparseMatrix<double> HII(sparse_block(out.H, I, I));
  HII.makeCompressed();
  const SparseMatrix HIB = sparse_block(out.H, I, B);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  if (!I.empty()) {
    lu.analyzePattern(HII);
    lu.factorize(HII);
    if (lu.info() != Eigen::Success)
      throw SingularInteriorBlock("interior block factorisation failed: " + lu.lastErrorMessage());
  }
  const double Hn = infinity_norm(out.H);
  const Eigen::MatrixXd HIBd(HIB);
  for (std::size_t b = 0; b < B.size(); ++b) {
    Vector V = Vector::Zero(P.num_dofs());
    V[B[b]] = 1.0;
    if (!I.empty()) {
      const Vector sol = lu.solve(Vector(-HIBd.col(b)));
      if (!sol.allFinite()) throw SingularInteriorBlock("interior solve produced non-finite values");
      for (std::size_t k = 0; k < I.size(); ++k) V[I[k]] = sol[k];
    }
    const Vector HV = out.H * V;
    double defect = 0.0;
    for (int d : I) defect = std::max(defect, std::abs(HV[d]));
    out.max_interior_defect = std::max(out.max_interior_defect, Hn > 0 ? defect / Hn : defect);
    out.basis.push_back(std::move(V));
  }
  if (out.max_interior_defect > 1e-8) {
    throw SingularInteriorBlock("first variations violate the linearised equations by " +
                                std::to_string(out.max_interior_defect));
  }
  return out;
}

double multisymplectic_residual(const SparseMatrix& H, const RegionDofs& dofs, const Vector& V,
                                const Vector& W) {
  const Vector HV = H * V, HW = H * W;
  double acc = 0.0;
  for (int j : dofs.boundary) acc += HV[j] * W[j] - HW[j] * V[j];
  return acc;
}

std::vector<VectorSampler> default_samples(int m) {
  std::vector<VectorSampler> out;
  for (int k = 0; k < 3; ++k) {
    out.push_back([m, k](const Point& p, std::span<double> v) {
      for (int c = 0; c < m; ++c)
        v[c] = std::sin((1.1 + 0.4 * k) * p.t + (2.3 - 0.5 * k) * p.x + 0.7 * c) +
               0.5 * std::cos(0.9 * p.t - 1.7 * p.x + 0.3 * c + k);
    });
  }
  return out;
}

double equivariance_check(const TensorMesh2D& mesh, const SymmetryGenerator& gen,
                          const std::vector<VectorSampler>& samples,
                          const std::vector<double>& s_values) {
  static constexpr double probes[3][2] = {{0.5, 0.5}, {0.21, 0.79}, {0.79, 0.33}};
  const int m = gen.components;
  std::vector<double> nodal(4 * m), y(m), a(m), b(m), tmp(m);
  double worst = 0.0;
  for (const VectorSampler& u : samples) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto nodes = mesh.element_nodes(e);
      for (int l = 0; l < 4; ++l) {
        u(mesh.node_point(nodes[l]), std::span<double>(&nodal[l * m], m));
      }
      for (double s : s_values) {
        for (const auto& pr : probes) {
          const double ps = pr[0], rr = pr[1];
          const double N[4] = {(1 - ps) * (1 - rr), (1 - ps) * rr, ps * (1 - rr), ps * rr};
          std::fill(a.begin(), a.end(), 0.0);
          std::fill(y.begin(), y.end(), 0.0);
          for (int l = 0; l < 4; ++l) {
            gen.flow(s, std::span<const double>(&nodal[l * m], m), tmp);
            for (int c = 0; c < m; ++c) {
              a[c] += N[l] * tmp[c];
              y[c] += N[l] * nodal[l * m + c];
            }
          }
          gen.flow(s, y, b);
          for (int c = 0; c < m; ++c) worst = std::max(worst, std::abs(a[c] - b[c]) / s);
        }
      }
    }
  }
  return worst;
}

double equivariance_check(const IntervalMesh& mesh, const SymmetryGenerator& gen,
                          const std::vector<std::function<void(double, std::span<double>)>>& samples,
                          const std::vector<double>& s_values) {
  static constexpr double probes[3] = {0.5, 0.21, 0.83};
  const int m = gen.components;
  std::vector<double> n0(m), n1(m), f0(m), f1(m), y(m), b(m);
  double worst = 0.0;
  for (const auto& u : samples) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto nodes = mesh.element_nodes(e);
      u(mesh.node(nodes[0]), n0);
      u(mesh.node(nodes[1]), n1);
      for (double s : s_values) {
        gen.flow(s, n0, f0);
        gen.flow(s, n1, f1);
        for (double r : probes) {
          for (int c = 0; c < m; ++c) y[c] = (1 - r) * n0[c] + r * n1[c];
          gen.flow(s, y, b);
          for (int c = 0; c < m; ++c)
            worst = std::max(worst, std::abs((1 - r) * f0[c] + r * f1[c] - b[c]) / s);
        }
      }
    }
  }
  return worst;
}

NoetherReport noether_check(const CovariantProblem& P, const RegularRegion& region,
                            const Vector& phi, const SymmetryGenerator& gen) {
  if (gen.components != P.components())
    throw InvalidArgument("generator and density have different component counts");
  if (!gen.claimed_equivariant)
    throw NotEquivariant("generator " + gen.name + " is not flagged as equivariant");
  NoetherReport rep;
  rep.generator = gen.name;
  rep.equivariance_residual =
      equivariance_check(*P.mesh(), gen, default_samples(P.components()));
  if (rep.equivariance_residual > 1e-8) {
    throw NotEquivariant("generator " + gen.name + " fails the projection commutation check (" +
                         std::to_string(rep.equivariance_residual) + ")");
  }
  const RegionDofs dofs = region_dofs(P, region);
  const Vector xi = gen.apply(phi, P.num_nodes());
  const Vector r = assemble_residual(P, phi, region);
  for (int d : dofs.boundary) {
    rep.cartan_pairing += r[d] * xi[d];
    rep.scale += std::abs(r[d] * xi[d]);
  }
  for (int d : dofs.interior) {
    rep.el_pairing += r[d] * xi[d];
    rep.scale += std::abs(r[d] * xi[d]);
  }

  // Direct quadrature of dL . xi over the region.
  {
    const Rule1D g = gauss_legendre_01(rule_points(P));
    const int m = P.components();
    std::vector<double> g1(m), g2(2 * m);
    const double area = P.mesh()->element_area();
    for (int e : region.elements()) {
      const ElementPoly E(P, phi, e), X(P, xi, e);
      for (std::size_t a = 0; a < g.nodes.size(); ++a)
        for (std::size_t b = 0; b < g.nodes.size(); ++b) {
          const PointJet J = jet(P, E, e, g.nodes[a], g.nodes[b]);
          P.density().d_field(J.x, J.f, J.j, g1);
          P.density().d_jet(J.x, J.f, J.j, g2);
          double val = 0.0;
          for (int c = 0; c < m; ++c) {
            double v, vt, vx, vtx;
            X.eval(c, g.nodes[a], g.nodes[b], v, vt, vx, vtx);
            val += g1[c] * v + g2[2 * c] * vt + g2[2 * c + 1] * vx;
          }
          rep.invariance_term += g.weights[a] * g.weights[b] * area * val;
        }
    }
  }
  rep.interior_term = weak_el_pairing(P, region, phi, xi, region.elements());
  rep.ring_term = weak_el_pairing(P, region, phi, boundary_part(dofs, xi), dofs.boundary_elements);
  rep.boundary_flux = boundary_flux(P, region, phi, xi);
  const double scale = rep.scale + std::abs(rep.interior_term) + std::abs(rep.ring_term) + 1e-300;
  rep.rearrangement_defect =
      std::abs(rep.interior_term - rep.ring_term - rep.el_pairing) / scale;
  rep.consistency_defect =
      std::abs(rep.cartan_pairing - (rep.invariance_term - (rep.interior_term - rep.ring_term))) /
      scale;
  return rep;
}

std::vector<CurrentNorms> noether_current_norms(const JetSampler& reference,
                                                const std::vector<const CovariantProblem*>& problems,
                                                const std::vector<Vector>& solutions,
                                                const SymmetryGenerator& gen,
                                                const MeshPtr& fine, int qp) {
  if (problems.size() != solutions.size()) throw InvalidArgument("one solution per problem");
  const TensorMesh2D& F = *fine;
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1 + std::abs(a)); };
  for (const CovariantProblem* P : problems) {
    const TensorMesh2D& C = *P->mesh();
    if (!same(C.time().lo(), F.time().lo()) || !same(C.time().hi(), F.time().hi()) ||
        !same(C.space().lo(), F.space().lo()) || !same(C.space().hi(), F.space().hi()) ||
        C.periodic_x() != F.periodic_x() || F.M() % C.M() != 0 || F.N() % C.N() != 0) {
      throw MeshNotNested("coarse mesh does not nest into the fine evaluation mesh");
    }
  }
  const int m = gen.components;
  const Rule1D g = gauss_legendre_01(qp);

  // Fine interior hats and the H1 Gram matrix on them.
  const FESpace fine_space(fine, 0);
  SparseMatrix G = assemble_mass(fine_space, MetricSignature::euclidean());
  {
    const FESpace edges(fine, 1);
    const SparseMatrix D = assemble_derivative(fine_space);
    const SparseMatrix M1 = assemble_mass(edges, MetricSignature::euclidean());
    G = SparseMatrix(G + SparseMatrix(D.transpose() * M1 * D));
  }
  std::vector<int> interior;
  std::vector<int> index(F.num_nodes(), -1);
  for (int n = 0; n < F.num_nodes(); ++n)
    if (!F.node_on_global_boundary(n)) {
      index[n] = static_cast<int>(interior.size());
      interior.push_back(n);
    }
  Eigen::SparseMatrix<double> GI(sparse_block(G, interior, interior));
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(GI);
  if (chol.info() != Eigen::Success) throw InvalidArgument("fine Gram matrix is not positive definite");

  std::vector<CurrentNorms> out;
  std::vector<double> rf(m), rj(2 * m), g2(2 * m), xi(m), xr(m), gref(2 * m);
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const CovariantProblem& P = *problems[k];
    const TensorMesh2D& C = *P.mesh();
    const int rt = F.M() / C.M(), rx = F.N() / C.N();
    Vector rho = Vector::Zero(interior.size());
    double l2 = 0.0;
    for (int ef = 0; ef < F.num_elements(); ++ef) {
      const auto [i, j] = F.element_ij(ef);
      const int ec = C.element_index(i / rt, j / rx);
      const ElementPoly E(P, solutions[k], ec);
      const auto fnodes = F.element_nodes(ef);
      const Point of = F.element_origin(ef);
      const Point oc = C.element_origin(ec);
      for (std::size_t a = 0; a < g.nodes.size(); ++a)
        for (std::size_t b = 0; b < g.nodes.size(); ++b) {
          const double s = g.nodes[a], r = g.nodes[b];
          const Point x{of.t + s * F.dt(), of.x + r * F.dx()};
          const double sc = (x.t - oc.t) / C.dt(), rc = (x.x - oc.x) / C.dx();
          const PointJet J = jet(P, E, ec, sc, rc);
          P.density().d_jet(J.x, J.f, J.j, g2);
          gen.field(J.f, xi);
          reference(x, rf, rj);
          P.density().d_jet(x, rf, rj, gref);
          gen.field(rf, xr);
          double cur[2] = {0, 0}, dref[2] = {0, 0};
          for (int c = 0; c < m; ++c)
            for (int mu = 0; mu < 2; ++mu) {
              cur[mu] += xi[c] * g2[2 * c + mu];
              dref[mu] += xr[c] * gref[2 * c + mu];
            }
          const double w = g.weights[a] * g.weights[b] * F.element_area();
          l2 += w * ((cur[0] - dref[0]) * (cur[0] - dref[0]) + (cur[1] - dref[1]) * (cur[1] - dref[1]));
          const double Nt[4] = {-(1 - r) / F.dt(), -r / F.dt(), (1 - r) / F.dt(), r / F.dt()};
          const double Nx[4] = {-(1 - s) / F.dx(), (1 - s) / F.dx(), -s / F.dx(), s / F.dx()};
          for (int l = 0; l < 4; ++l) {
            const int id = index[fnodes[l]];
            if (id >= 0) rho[id] += w * (cur[0] * Nt[l] + cur[1] * Nx[l]);
          }
        }
    }
    const Vector y = chol.solve(rho);
    out.push_back({std::sqrt(l2), std::sqrt(std::max(0.0, rho.dot(y)))});
  }
  return out;
}

}  // namespace structfem
