// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/feec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "structfem/errors.hpp"
#include "structfem/quadrature.hpp"

namespace structfem {

using Triplet = Eigen::Triplet<double>;

FESpace::FESpace(MeshPtr mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw InvalidArgument("null mesh");
  if (degree < 0 || degree > 2) throw MissingSpace("form degree must be 0, 1 or 2");
}

int FESpace::num_dt_edges() const { return mesh_->M() * mesh_->num_space_nodes(); }

int FESpace::num_dofs() const {
  switch (degree_) {
    case 0: return mesh_->num_nodes();
    case 1: return num_dt_edges() + mesh_->num_time_nodes() * mesh_->N();
    default: return mesh_->num_elements();
  }
}

int FESpace::dt_edge(int a, int b) const { return a * mesh_->num_space_nodes() + b; }

int FESpace::dx_edge(int a, int j) const { return num_dt_edges() + a * mesh_->N() + j; }

std::vector<int> FESpace::element_dofs(int e) const {
  const TensorMesh2D& m = *mesh_;
  switch (degree_) {
    case 0: {
      const auto n = m.element_nodes(e);
      return {n[0], n[1], n[2], n[3]};
    }
    case 1: {
      const auto [i, j] = m.element_ij(e);
      const int jr = m.space().element_nodes(j)[1];
      return {dt_edge(i, j), dt_edge(i, jr), dx_edge(i, j), dx_edge(i + 1, j)};
    }
    default: return {e};
  }
}

void FESpace::basis(double s, double r, std::span<double> out) const {
  const TensorMesh2D& m = *mesh_;
  switch (degree_) {
    case 0:
      out[0] = (1 - s) * (1 - r);
      out[1] = (1 - s) * r;
      out[2] = s * (1 - r);
      out[3] = s * r;
      return;
    case 1: {
      const double it = 1.0 / m.dt(), ix = 1.0 / m.dx();
      // (t, x) components per basis function.
      out[0] = (1 - r) * it; out[1] = 0.0;
      out[2] = r * it;       out[3] = 0.0;
      out[4] = 0.0;          out[5] = (1 - s) * ix;
      out[6] = 0.0;          out[7] = s * ix;
      return;
    }
    default:
      out[0] = 1.0 / m.element_area();
      return;
  }
}

bool FESpace::dof_on_side(int /*e*/, int side, int l) const {
  switch (degree_) {
    case 0: {
      const int p = l / 2, q = l % 2;
      return (side == 0 && p == 0) || (side == 1 && p == 1) || (side == 2 && q == 0) ||
             (side == 3 && q == 1);
    }
    case 1: {
      static constexpr int owner[4] = {2, 3, 0, 1};
      return owner[l] == side;
    }
    default: return false;  // 2-forms have no trace on curves
  }
}

CochainComplex::CochainComplex(MeshPtr mesh, MetricSignature metric)
    : mesh_(std::move(mesh)), metric_(metric) {
  for (int k = 0; k < 3; ++k) spaces_[k] = std::make_shared<const FESpace>(mesh_, k);
}

const SpacePtr& CochainComplex::space(int k) const {
  if (k < 0 || k > 2) throw MissingSpace("no space of degree " + std::to_string(k));
  return spaces_[k];
}

SparseMatrix assemble_derivative(const FESpace& space) {
  const TensorMesh2D& m = *space.mesh();
  std::vector<Triplet> trip;
  SparseMatrix D;
  if (space.degree() == 0) {
    const FESpace edges(space.mesh(), 1);
    D.resize(edges.num_dofs(), space.num_dofs());
    for (int a = 0; a < m.M(); ++a) {
      for (int b = 0; b < m.num_space_nodes(); ++b) {
        const int row = edges.dt_edge(a, b);
        trip.emplace_back(row, m.node_index(a + 1, b), 1.0);
        trip.emplace_back(row, m.node_index(a, b), -1.0);
      }
    }
    for (int a = 0; a < m.num_time_nodes(); ++a) {
      for (int j = 0; j < m.N(); ++j) {
        const auto sx = m.space().element_nodes(j);
        const int row = edges.dx_edge(a, j);
        trip.emplace_back(row, m.node_index(a, sx[1]), 1.0);
        trip.emplace_back(row, m.node_index(a, sx[0]), -1.0);
      }
    }
  } else if (space.degree() == 1) {
    D.resize(m.num_elements(), space.num_dofs());
    for (int e = 0; e < m.num_elements(); ++e) {
      // Boundary of the cell traversed positively for dt ^ dx.
      const auto d = space.element_dofs(e);
      trip.emplace_back(e, d[0], 1.0);
      trip.emplace_back(e, d[3], 1.0);
      trip.emplace_back(e, d[1], -1.0);
      trip.emplace_back(e, d[2], -1.0);
    }
  } else {
    throw MissingSpace("no space above the top degree");
  }
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

SparseMatrix assemble_derivative(const CochainComplex& complex, int k) {
  if (k < 0 || k >= complex.top_degree()) {
    throw MissingSpace("no derivative from degree " + std::to_string(k));
  }
  return assemble_derivative(*complex.space(k));
}

SparseMatrix assemble_mass(const FESpace& space, const MetricSignature& metric) {
  const TensorMesh2D& m = *space.mesh();
  const QuadratureRule rule = gauss_rule(3);
  const int nl = space.num_local_dofs(), vs = space.value_size();
  std::vector<double> w(nl * vs);
  std::vector<double> g(vs);
  if (space.degree() == 0) g = {1.0};
  else if (space.degree() == 1) g = {metric.s_t, metric.s_x};
  else g = {metric.s_t * metric.s_x};

  std::vector<Triplet> trip;
  const double area = m.element_area();
  Eigen::MatrixXd local(nl, nl);
  for (int e = 0; e < m.num_elements(); ++e) {
    local.setZero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      space.basis(rule.points[q][0], rule.points[q][1], w);
      const double wq = rule.weights[q] * area;
      for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b)
          for (int c = 0; c < vs; ++c) local(a, b) += wq * g[c] * w[a * vs + c] * w[b * vs + c];
    }
    const auto dofs = space.element_dofs(e);
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b)
        if (local(a, b) != 0.0) trip.emplace_back(dofs[a], dofs[b], local(a, b));
  }
  SparseMatrix M(space.num_dofs(), space.num_dofs());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

ElementPoint locate_point(const TensorMesh2D& mesh, const Point& p) {
  const int i = mesh.time().locate(p.t);
  const int j = mesh.space().locate(p.x);
  if (i < 0 || j < 0) {
    throw PointOutsideMesh("point (" + std::to_string(p.t) + ", " + std::to_string(p.x) +
                           ") is outside the mesh");
  }
  const double x = mesh.space().wrap(p.x);
  const double s = (p.t - mesh.time().node(i)) / mesh.dt();
  const double r = (x - mesh.space().node(j)) / mesh.dx();
  return {mesh.element_index(i, j), s, r};
}

std::vector<double> evaluate(const FormField& field, const Point& point) {
  const FESpace& space = *field.space;
  const ElementPoint ep = locate_point(*space.mesh(), point);
  const int nl = space.num_local_dofs(), vs = space.value_size();
  std::vector<double> w(nl * vs);
  space.basis(ep.s, ep.r, w);
  std::vector<double> out(vs, 0.0);
  const auto dofs = space.element_dofs(ep.element);
  for (int a = 0; a < nl; ++a)
    for (int c = 0; c < vs; ++c) out[c] += field.coeffs[dofs[a]] * w[a * vs + c];
  return out;
}

namespace {

Vector project_raw(const FESpace& space, const FormSampler& u, int gp) {
  const TensorMesh2D& m = *space.mesh();
  Vector c(space.num_dofs());
  std::array<double, 2> val{};
  if (space.degree() == 0) {
    for (int n = 0; n < m.num_nodes(); ++n) {
      u(m.node_point(n), std::span<double>(val.data(), 1));
      c[n] = val[0];
    }
    return c;
  }
  const Rule1D g = gauss_legendre_01(gp);
  if (space.degree() == 1) {
    for (int a = 0; a < m.M(); ++a) {
      for (int b = 0; b < m.num_space_nodes(); ++b) {
        double acc = 0.0;
        for (int q = 0; q < gp; ++q) {
          u({m.time().node(a) + g.nodes[q] * m.dt(), m.space().node(b)}, val);
          acc += g.weights[q] * val[0];
        }
        c[space.dt_edge(a, b)] = acc * m.dt();
      }
    }
    for (int a = 0; a < m.num_time_nodes(); ++a) {
      for (int j = 0; j < m.N(); ++j) {
        double acc = 0.0;
        for (int q = 0; q < gp; ++q) {
          u({m.time().node(a), m.space().node(j) + g.nodes[q] * m.dx()}, val);
          acc += g.weights[q] * val[1];
        }
        c[space.dx_edge(a, j)] = acc * m.dx();
      }
    }
    return c;
  }
  for (int e = 0; e < m.num_elements(); ++e) {
    const Point o = m.element_origin(e);
    double acc = 0.0;
    for (int qa = 0; qa < gp; ++qa)
      for (int qb = 0; qb < gp; ++qb) {
        u({o.t + g.nodes[qa] * m.dt(), o.x + g.nodes[qb] * m.dx()},
          std::span<double>(val.data(), 1));
        acc += g.weights[qa] * g.weights[qb] * val[0];
      }
    c[e] = acc * m.element_area();
  }
  return c;
}

}  // namespace

FormField project(const SpacePtr& space, const FormSampler& u, const ProjectOptions& options) {
  if (options.gauss_points < 5) {
    throw QuadratureInsufficient("projection needs at least 5 Gauss points per direction");
  }
  FormField f{space, project_raw(*space, u, options.gauss_points)};
  if (options.non_polynomial && options.derivative && space->degree() < 2) {
    const FESpace next(space->mesh(), space->degree() + 1);
    const Vector dproj = project_raw(next, options.derivative, options.gauss_points);
    const Vector diff = assemble_derivative(*space) * f.coeffs - dproj;
    const double defect = diff.lpNorm<Eigen::Infinity>();
    if (defect > options.commute_tol) {
      throw QuadratureInsufficient("commuting projection defect " + std::to_string(defect) +
                                   " exceeds tolerance");
    }
  }
  return f;
}

BoundaryDofs boundary_dof_sets(const RegularRegion& region, const FESpace& space) {
  if (region.mesh() != space.mesh()) {
    throw SpaceMismatch("the space is defined on a different mesh than the region");
  }
  const int nd = space.num_dofs();
  std::vector<char> in_closure(nd, 0), on_boundary(nd, 0);
  for (int e : region.elements()) {
    const auto dofs = space.element_dofs(e);
    for (std::size_t l = 0; l < dofs.size(); ++l) in_closure[dofs[l]] = 1;
    for (int side = 0; side < 4; ++side) {
      if (!side_on_region_boundary(region, e, side)) continue;
      for (std::size_t l = 0; l < dofs.size(); ++l)
        if (space.dof_on_side(e, side, static_cast<int>(l))) on_boundary[dofs[l]] = 1;
    }
  }
  BoundaryDofs out;
  for (int d = 0; d < nd; ++d) {
    if (on_boundary[d]) out.boundary.push_back(d);
    else if (in_closure[d]) out.interior.push_back(d);
  }
  for (int e : region.elements()) {
    for (int d : space.element_dofs(e)) {
      if (on_boundary[d]) {
        out.boundary_elements.push_back(e);
        break;
      }
    }
  }
  return out;
}

IntervalComplex::IntervalComplex(IntervalMesh m) : mesh(std::move(m)) {
  const int ne = mesh.num_elements(), nn = mesh.num_nodes();
  const double h = mesh.h();
  std::vector<Triplet> td, tm0, tm1;
  for (int e = 0; e < ne; ++e) {
    const auto n = mesh.element_nodes(e);
    td.emplace_back(e, n[1], 1.0);
    td.emplace_back(e, n[0], -1.0);
    tm0.emplace_back(n[0], n[0], h / 3.0);
    tm0.emplace_back(n[1], n[1], h / 3.0);
    tm0.emplace_back(n[0], n[1], h / 6.0);
    tm0.emplace_back(n[1], n[0], h / 6.0);
    tm1.emplace_back(e, e, 1.0 / h);
  }
  D0.resize(ne, nn);
  D0.setFromTriplets(td.begin(), td.end());
  mass0.resize(nn, nn);
  mass0.setFromTriplets(tm0.begin(), tm0.end());
  mass1.resize(ne, ne);
  mass1.setFromTriplets(tm1.begin(), tm1.end());
  stiff = SparseMatrix(D0.transpose() * mass1 * D0);
}

}  // namespace structfem
