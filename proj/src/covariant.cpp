// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/covariant.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "structfem/errors.hpp"

namespace structfem {

using Triplet = Eigen::Triplet<double>;

CovariantProblem::CovariantProblem(MeshPtr mesh, LagrangianDensity density, QuadratureRule rule)
    : mesh_(std::move(mesh)), density_(std::move(density)), rule_(std::move(rule)) {
  if (!mesh_) throw InvalidArgument("null mesh");
  if (!density_.value || !density_.d_field || !density_.d_jet) {
    throw InvalidArgument("density must provide its value and first partials");
  }
  space_ = std::make_shared<const FESpace>(mesh_, 0);
}

namespace {

// Bilinear shape functions and physical gradients at the rule points.
struct ShapeTable {
  std::vector<std::array<double, 4>> N, Nt, Nx;
  std::vector<double> w;  // physical weights
  std::vector<std::array<double, 2>> ref;
};

ShapeTable shape_table(const TensorMesh2D& mesh, const QuadratureRule& rule) {
  ShapeTable T;
  const double it = 1.0 / mesh.dt(), ix = 1.0 / mesh.dx(), area = mesh.element_area();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q][0], r = rule.points[q][1];
    T.N.push_back({(1 - s) * (1 - r), (1 - s) * r, s * (1 - r), s * r});
    T.Nt.push_back({-(1 - r) * it, -r * it, (1 - r) * it, r * it});
    T.Nx.push_back({-(1 - s) * ix, (1 - s) * ix, -s * ix, s * ix});
    T.w.push_back(rule.weights[q] * area);
    T.ref.push_back(rule.points[q]);
  }
  return T;
}

struct LocalField {
  int m;
  std::array<int, 4> nodes;
  std::vector<double> c;  // c[comp * 4 + l]
};

LocalField gather(const CovariantProblem& P, const Vector& phi, int e) {
  LocalField L;
  L.m = P.components();
  L.nodes = P.mesh()->element_nodes(e);
  L.c.resize(L.m * 4);
  const int n = P.num_nodes();
  for (int c = 0; c < L.m; ++c)
    for (int l = 0; l < 4; ++l) L.c[c * 4 + l] = phi[c * n + L.nodes[l]];
  return L;
}

void jet_at(const ShapeTable& T, std::size_t q, const LocalField& L, std::vector<double>& f,
            std::vector<double>& j) {
  for (int c = 0; c < L.m; ++c) {
    double v = 0, vt = 0, vx = 0;
    for (int l = 0; l < 4; ++l) {
      const double a = L.c[c * 4 + l];
      v += T.N[q][l] * a;
      vt += T.Nt[q][l] * a;
      vx += T.Nx[q][l] * a;
    }
    f[c] = v;
    j[2 * c] = vt;
    j[2 * c + 1] = vx;
  }
}

Point physical(const TensorMesh2D& mesh, int e, const std::array<double, 2>& ref) {
  const Point o = mesh.element_origin(e);
  return {o.t + ref[0] * mesh.dt(), o.x + ref[1] * mesh.dx()};
}

void check_size(const CovariantProblem& P, const Vector& phi, const RegularRegion& region) {
  if (phi.size() != P.num_dofs()) throw InvalidArgument("coefficient vector has the wrong size");
  if (region.mesh() != P.mesh()) throw SpaceMismatch("region and problem use different meshes");
}

// Local residual of one element, 4 m entries ordered comp * 4 + l.
void element_residual(const CovariantProblem& P, const ShapeTable& T, int e, const LocalField& L,
                      std::vector<double>& out) {
  const int m = L.m;
  std::vector<double> f(m), j(2 * m), g1(m), g2(2 * m);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t q = 0; q < T.w.size(); ++q) {
    jet_at(T, q, L, f, j);
    const Point x = physical(*P.mesh(), e, T.ref[q]);
    P.density().d_field(x, f, j, g1);
    P.density().d_jet(x, f, j, g2);
    for (int c = 0; c < m; ++c)
      for (int l = 0; l < 4; ++l)
        out[c * 4 + l] += T.w[q] * (g1[c] * T.N[q][l] + g2[2 * c] * T.Nt[q][l] +
                                    g2[2 * c + 1] * T.Nx[q][l]);
  }
}

double action_with(const CovariantProblem& P, const Vector& phi, const RegularRegion& region,
                   const QuadratureRule& rule) {
  check_size(P, phi, region);
  const ShapeTable T = shape_table(*P.mesh(), rule);
  const int m = P.components();
  std::vector<double> f(m), j(2 * m);
  double S = 0.0;
  for (int e : region.elements()) {
    const LocalField L = gather(P, phi, e);
    for (std::size_t q = 0; q < T.w.size(); ++q) {
      jet_at(T, q, L, f, j);
      S += T.w[q] * P.density().value(physical(*P.mesh(), e, T.ref[q]), f, j);
    }
  }
  return S;
}

Vector residual_with(const CovariantProblem& P, const Vector& phi, const RegularRegion& region,
                     const QuadratureRule& rule) {
  check_size(P, phi, region);
  const ShapeTable T = shape_table(*P.mesh(), rule);
  const int m = P.components(), n = P.num_nodes();
  Vector r = Vector::Zero(P.num_dofs());
  std::vector<double> loc(4 * m);
  for (int e : region.elements()) {
    const LocalField L = gather(P, phi, e);
    element_residual(P, T, e, L, loc);
    for (int c = 0; c < m; ++c)
      for (int l = 0; l < 4; ++l) r[c * n + L.nodes[l]] += loc[c * 4 + l];
  }
  return r;
}

}  // namespace

RegionDofs region_dofs(const CovariantProblem& P, const RegularRegion& region) {
  const BoundaryDofs b = boundary_dof_sets(region, *P.space());
  RegionDofs out;
  const int n = P.num_nodes();
  for (int c = 0; c < P.components(); ++c) {
    for (int d : b.boundary) out.boundary.push_back(c * n + d);
    for (int d : b.interior) out.interior.push_back(c * n + d);
  }
  out.boundary_elements = b.boundary_elements;
  return out;
}

double assemble_action(const CovariantProblem& P, const Vector& phi, const RegularRegion& region) {
  return action_with(P, phi, region, P.rule());
}

Vector assemble_residual(const CovariantProblem& P, const Vector& phi, const RegularRegion& region) {
  return residual_with(P, phi, region, P.rule());
}

double quadrature_action(const CovariantProblem& P, const Vector& phi, const RegularRegion& region,
                         const QuadratureRule& rule) {
  return action_with(P, phi, region, rule);
}

Vector quadrature_residual(const CovariantProblem& P, const Vector& phi, const RegularRegion& region,
                           const QuadratureRule& rule) {
  return residual_with(P, phi, region, rule);
}

Vector residual_quadrature_after_variation(const CovariantProblem& P, const Vector& phi,
                                           const RegularRegion& region, const QuadratureRule& rule) {
  check_size(P, phi, region);
  const TensorMesh2D& mesh = *P.mesh();
  const ShapeTable T = shape_table(mesh, rule);
  const ShapeTable V = shape_table(mesh, nodal_vertex_rule());
  const int m = P.components(), n = P.num_nodes();
  Vector r = Vector::Zero(P.num_dofs());
  std::vector<double> f(m), j(2 * m), g1(m), g2(2 * m);
  std::vector<double> vertex_field(4 * m), loc(4 * m);
  for (int e : region.elements()) {
    const LocalField L = gather(P, phi, e);
    std::fill(loc.begin(), loc.end(), 0.0);
    // dL/dphi at the element vertices, using this element's jet.
    for (int l = 0; l < 4; ++l) {
      jet_at(V, l, L, f, j);
      P.density().d_field(physical(mesh, e, V.ref[l]), f, j, g1);
      for (int c = 0; c < m; ++c) vertex_field[c * 4 + l] = g1[c];
    }
    for (std::size_t q = 0; q < T.w.size(); ++q) {
      jet_at(T, q, L, f, j);
      P.density().d_jet(physical(mesh, e, T.ref[q]), f, j, g2);
      for (int c = 0; c < m; ++c) {
        double interp = 0.0;
        for (int l = 0; l < 4; ++l) interp += T.N[q][l] * vertex_field[c * 4 + l];
        for (int l = 0; l < 4; ++l)
          loc[c * 4 + l] += T.w[q] * (interp * T.N[q][l] + g2[2 * c] * T.Nt[q][l] +
                                      g2[2 * c + 1] * T.Nx[q][l]);
      }
    }
    // Same accumulation order as the direct residual.
    for (int c = 0; c < m; ++c)
      for (int l = 0; l < 4; ++l) r[c * n + L.nodes[l]] += loc[c * 4 + l];
  }
  return r;
}

SparseMatrix assemble_jacobian(const CovariantProblem& P, const Vector& phi,
                               const RegularRegion& region, JacobianMode mode) {
  check_size(P, phi, region);
  const LagrangianDensity& D = P.density();
  if (mode == JacobianMode::Auto)
    mode = D.has_second_partials() ? JacobianMode::Analytic : JacobianMode::FiniteDifference;
  if (mode == JacobianMode::Analytic && !D.has_second_partials())
    throw InvalidArgument("density has no second partials");

  const ShapeTable T = shape_table(*P.mesh(), P.rule());
  const int m = P.components(), n = P.num_nodes(), nl = 4 * m;
  std::vector<Triplet> trip;
  trip.reserve(region.elements().size() * nl * nl);
  Eigen::MatrixXd K(nl, nl);
  std::vector<double> f(m), j(2 * m), ff(m * m), fj(2 * m * m), jj(4 * m * m);
  const double step = 1e-6 * (1.0 + phi.lpNorm<Eigen::Infinity>());
  std::vector<double> rp(nl), rm(nl);

  for (int e : region.elements()) {
    LocalField L = gather(P, phi, e);
    K.setZero();
    if (mode == JacobianMode::Analytic) {
      for (std::size_t q = 0; q < T.w.size(); ++q) {
        jet_at(T, q, L, f, j);
        const Point x = physical(*P.mesh(), e, T.ref[q]);
        D.d_field_field(x, f, j, ff);
        D.d_field_jet(x, f, j, fj);
        D.d_jet_jet(x, f, j, jj);
        const auto grad = [&](int l, int mu) { return mu == 0 ? T.Nt[q][l] : T.Nx[q][l]; };
        for (int c = 0; c < m; ++c)
          for (int a = 0; a < 4; ++a)
            for (int d = 0; d < m; ++d)
              for (int b = 0; b < 4; ++b) {
                double v = T.N[q][a] * ff[c * m + d] * T.N[q][b];
                for (int nu = 0; nu < 2; ++nu) {
                  v += T.N[q][a] * fj[c * 2 * m + 2 * d + nu] * grad(b, nu);
                  v += grad(a, nu) * fj[d * 2 * m + 2 * c + nu] * T.N[q][b];
                }
                for (int mu = 0; mu < 2; ++mu)
                  for (int nu = 0; nu < 2; ++nu)
                    v += grad(a, mu) * jj[(2 * c + mu) * 2 * m + 2 * d + nu] * grad(b, nu);
                K(c * 4 + a, d * 4 + b) += T.w[q] * v;
              }
      }
    } else {
      for (int k = 0; k < nl; ++k) {
        const double keep = L.c[k];
        L.c[k] = keep + step;
        element_residual(P, T, e, L, rp);
        L.c[k] = keep - step;
        element_residual(P, T, e, L, rm);
        L.c[k] = keep;
        for (int i = 0; i < nl; ++i) K(i, k) = (rp[i] - rm[i]) / (2 * step);
      }
    }
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b)
        trip.emplace_back((a / 4) * n + L.nodes[a % 4], (b / 4) * n + L.nodes[b % 4], K(a, b));
  }
  SparseMatrix H(P.num_dofs(), P.num_dofs());
  H.setFromTriplets(trip.begin(), trip.end());
  H.prune(0.0);
  return H;
}

Jet element_jet(const CovariantProblem& P, const Vector& phi, int e, double s, double r) {
  QuadratureRule one;
  one.points = {{s, r}};
  one.weights = {1.0};
  const ShapeTable T = shape_table(*P.mesh(), one);
  const LocalField L = gather(P, phi, e);
  Jet J;
  J.x = physical(*P.mesh(), e, {s, r});
  J.phi.resize(P.components());
  J.dphi.resize(2 * P.components());
  jet_at(T, 0, L, J.phi, J.dphi);
  return J;
}

DirichletData dirichlet_from_function(const CovariantProblem& P, const RegularRegion& region,
                                      const VectorSampler& g) {
  const BoundaryDofs b = boundary_dof_sets(region, *P.space());
  const int m = P.components(), n = P.num_nodes();
  DirichletData out;
  out.values.resize(m * b.boundary.size());
  std::vector<double> v(m);
  std::size_t k = 0;
  for (int c = 0; c < m; ++c) {
    for (int node : b.boundary) {
      g(P.mesh()->node_point(node), v);
      out.dofs.push_back(c * n + node);
      out.values[k++] = v[c];
    }
  }
  return out;
}

Vector interpolate(const CovariantProblem& P, const VectorSampler& g) {
  const int m = P.components(), n = P.num_nodes();
  Vector out(P.num_dofs());
  std::vector<double> v(m);
  for (int node = 0; node < n; ++node) {
    g(P.mesh()->node_point(node), v);
    for (int c = 0; c < m; ++c) out[c * n + node] = v[c];
  }
  return out;
}

Eigen::MatrixXd dense_block(const SparseMatrix& A, const std::vector<int>& rows,
                            const std::vector<int>& cols) {
  std::vector<int> cmap(A.cols(), -1);
  for (std::size_t k = 0; k < cols.size(); ++k) cmap[cols[k]] = static_cast<int>(k);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (SparseMatrix::InnerIterator it(A, rows[i]); it; ++it)
      if (cmap[it.col()] >= 0) B(i, cmap[it.col()]) = it.value();
  return B;
}

SparseMatrix sparse_block(const SparseMatrix& A, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  std::vector<int> cmap(A.cols(), -1);
  for (std::size_t k = 0; k < cols.size(); ++k) cmap[cols[k]] = static_cast<int>(k);
  std::vector<Triplet> trip;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (SparseMatrix::InnerIterator it(A, rows[i]); it; ++it)
      if (cmap[it.col()] >= 0) trip.emplace_back(static_cast<int>(i), cmap[it.col()], it.value());
  SparseMatrix B(rows.size(), cols.size());
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

namespace {

// Factorisation of the interior block, dense or sparse depending on size.
class InteriorSolver {
 public:
  InteriorSolver(const SparseMatrix& HII, int dense_limit) : n_(HII.rows()) {
    if (n_ <= dense_limit) {
      dense_ = true;
      lu_.compute(Eigen::MatrixXd(HII));
      if (!(lu_.rcond() > 1e-14)) throw SingularJacobian("interior Jacobian block is singular");
    } else {
      Eigen::SparseMatrix<double> A(HII);
      A.makeCompressed();
      slu_.analyzePattern(A);
      slu_.factorize(A);
      if (slu_.info() != Eigen::Success)
        throw SingularJacobian("sparse LU of the interior Jacobian failed: " + slu_.lastErrorMessage());
    }
  }
  Vector solve(const Vector& b) const {
    Vector x = dense_ ? Vector(lu_.solve(b)) : Vector(slu_.solve(b));
    if (!x.allFinite()) throw SingularJacobian("interior Jacobian solve produced non-finite values");
    return x;
  }
  std::string label() const { return dense_ ? "dense LU" : "sparse LU"; }

 private:
  Eigen::Index n_;
  bool dense_ = false;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> slu_;
};

// 2-norm condition estimate of a symmetric matrix from power iterations on H
// and its inverse.
double condition_estimate(const SparseMatrix& H, const InteriorSolver& S) {
  const Eigen::Index n = H.rows();
  if (n == 0) return 1.0;
  Vector v = Vector::LinSpaced(n, 1.0, 2.0).normalized();
  double big = 0.0, small = 0.0;
  for (int it = 0; it < 40; ++it) {
    Vector w = H * v;
    big = w.norm();
    if (big == 0.0) return std::numeric_limits<double>::infinity();
    v = w / big;
  }
  v = Vector::LinSpaced(n, 2.0, 1.0).normalized();
  for (int it = 0; it < 40; ++it) {
    Vector w = S.solve(v);
    small = w.norm();
    v = w / small;
  }
  return big * small;
}

}  // namespace

SolveResult newton_solve(const CovariantProblem& P, const RegularRegion& region,
                         const DirichletData& dirichlet, const NewtonOptions& opt,
                         const Vector* initial) {
  if (region.mesh() != P.mesh()) throw SpaceMismatch("region and problem use different meshes");
  const RegionDofs dofs = region_dofs(P, region);
  {
    std::vector<int> given = dirichlet.dofs, expect = dofs.boundary;
    std::sort(given.begin(), given.end());
    std::sort(expect.begin(), expect.end());
    if (given != expect || dirichlet.values.size() != static_cast<Eigen::Index>(dirichlet.dofs.size()))
      throw InvalidArgument("Dirichlet data must prescribe exactly the boundary dofs of the region");
  }
  SolveResult out;
  out.phi = initial ? *initial : Vector::Zero(P.num_dofs());
  if (out.phi.size() != P.num_dofs()) throw InvalidArgument("initial guess has the wrong size");
  for (std::size_t k = 0; k < dirichlet.dofs.size(); ++k) out.phi[dirichlet.dofs[k]] = dirichlet.values[k];

  const std::vector<int>& I = dofs.interior;
  auto interior_residual = [&](const Vector& phi) {
    const Vector r = assemble_residual(P, phi, region);
    Vector rI(I.size());
    for (std::size_t k = 0; k < I.size(); ++k) rI[k] = r[I[k]];
    return rI;
  };

  SolveReport& rep = out.report;
  Vector rI = interior_residual(out.phi);
  double norm = I.empty() ? 0.0 : rI.lpNorm<Eigen::Infinity>();
  rep.history.push_back(norm);
  while (true) {
    if (norm <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opt.max_iter) {
      rep.residual_norm = norm;
      throw NoConvergence("Newton stopped after " + std::to_string(rep.iterations) +
                          " iterations with residual " + std::to_string(norm));
    }
    const SparseMatrix H = assemble_jacobian(P, out.phi, region, opt.jacobian);
    const SparseMatrix HII = sparse_block(H, I, I);
    const InteriorSolver solver(HII, opt.dense_limit);
    rep.linear_solver = solver.label();
    if (opt.estimate_condition) rep.condition_estimate = condition_estimate(HII, solver);
    const Vector delta = solver.solve(-rI);

    double alpha = 1.0;
    Vector trial;
    Vector rt;
    double nt = 0.0;
    while (true) {
      trial = out.phi;
      for (std::size_t k = 0; k < I.size(); ++k) trial[I[k]] += alpha * delta[k];
      rt = interior_residual(trial);
      nt = rt.lpNorm<Eigen::Infinity>();
      if (nt < norm || alpha * 0.5 < opt.min_step) break;
      alpha *= 0.5;
    }
    out.phi = trial;
    rI = rt;
    norm = nt;
    ++rep.iterations;
    rep.history.push_back(norm);
    rep.step_lengths.push_back(alpha);
  }
  rep.residual_norm = norm;
  return out;
}

}  // namespace structfem
