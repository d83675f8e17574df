// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "doctest.h"
#include "helpers.hpp"
#include "structfem/errors.hpp"
#include "structfem/feec.hpp"

using namespace structfem;
using structfem::test::max_abs;

namespace {

// 1D hat mass matrix by the closed-form element integrals.
Eigen::MatrixXd hat_mass(int n, double h, bool periodic) {
  const int nn = periodic ? n : n + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nn, nn);
  for (int e = 0; e < n; ++e) {
    const int a = e, b = (e + 1) % nn;
    M(a, a) += h / 3;
    M(b, b) += h / 3;
    M(a, b) += h / 6;
    M(b, a) += h / 6;
  }
  return M;
}

// Random polynomial sum c_pq t^p x^q with p, q <= deg and its partials.
struct Poly {
  Eigen::MatrixXd c;
  double value(double t, double x) const {
    double v = 0;
    for (int p = 0; p < c.rows(); ++p)
      for (int q = 0; q < c.cols(); ++q) v += c(p, q) * std::pow(t, p) * std::pow(x, q);
    return v;
  }
  double dt(double t, double x) const {
    double v = 0;
    for (int p = 1; p < c.rows(); ++p)
      for (int q = 0; q < c.cols(); ++q) v += p * c(p, q) * std::pow(t, p - 1) * std::pow(x, q);
    return v;
  }
  double dx(double t, double x) const {
    double v = 0;
    for (int p = 0; p < c.rows(); ++p)
      for (int q = 1; q < c.cols(); ++q) v += q * c(p, q) * std::pow(t, p) * std::pow(x, q - 1);
    return v;
  }
};

Poly random_poly(std::mt19937_64& rng, int deg) {
  std::uniform_real_distribution<double> u(-1, 1);
  Poly p{Eigen::MatrixXd(deg + 1, deg + 1)};
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; j <= deg; ++j) p.c(i, j) = u(rng);
  return p;
}

}  // namespace

TEST_CASE("incidence matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int M = 1 + int(rng() % 6), N = 3 + int(rng() % 6);
    auto m = build_tensor_mesh({0, 1}, {-1, 2}, M, N, trial % 2 == 1);
    CochainComplex cx(m, MetricSignature::euclidean());
    const SparseMatrix D0 = assemble_derivative(cx, 0), D1 = assemble_derivative(cx, 1);
    const SparseMatrix DD = D1 * D0;
    CHECK(max_abs(DD) == 0.0);
    CHECK(max_abs(Vector(D0 * Vector::Ones(D0.cols()))) == 0.0);
  }
  auto m = build_tensor_mesh({0, 1}, {0, 1}, 2, 2, false);
  CochainComplex cx(m, MetricSignature::euclidean());
  CHECK_THROWS_AS(assemble_derivative(cx, 2), MissingSpace);
  CHECK_THROWS_AS(assemble_derivative(*cx.space(2)), MissingSpace);
  CHECK_THROWS_AS(cx.space(3), MissingSpace);
}

TEST_CASE("interval complex") {
  IntervalComplex c(IntervalMesh(0.0, 2.0, 2, false));
  const Vector hat = (Vector(3) << 0, 1, 0).finished();
  const Vector d = c.D0 * hat;
  CHECK(d[0] == 1.0);
  CHECK(d[1] == -1.0);

  IntervalComplex f(IntervalMesh(0.0, 1.0, 8, false));
  const double h = 1.0 / 8;
  const Eigen::MatrixXd M(f.mass0);
  CHECK(M(3, 3) == doctest::Approx(2 * h / 3));
  CHECK(M(3, 4) == doctest::Approx(h / 6));
  CHECK(M(0, 0) == doctest::Approx(h / 3));
  CHECK(Eigen::MatrixXd(f.stiff)(3, 3) == doctest::Approx(2 / h));
  CHECK(Eigen::MatrixXd(f.stiff)(3, 2) == doctest::Approx(-1 / h));
}

TEST_CASE("mass matrices match tensor products of 1D integrals") {
  const int M = 3, N = 4;
  const double T = 0.6, L = 2.0;
  for (bool periodic : {false, true}) {
    for (MetricSignature g : {MetricSignature::euclidean(), MetricSignature::lorentzian()}) {
      auto m = build_tensor_mesh({0, T}, {0, L}, M, N, periodic);
      const double dt = T / M, dx = L / N;
      const Eigen::MatrixXd Mt = hat_mass(M, dt, false), Mx = hat_mass(N, dx, periodic);
      const int nt = int(Mt.rows()), nx = int(Mx.rows());
      CochainComplex cx(m, g);

      const Eigen::MatrixXd M0(assemble_mass(*cx.space(0), g));
      for (int a = 0; a < nt; ++a)
        for (int b = 0; b < nx; ++b)
          for (int a2 = 0; a2 < nt; ++a2)
            for (int b2 = 0; b2 < nx; ++b2)
              CHECK(M0(a * nx + b, a2 * nx + b2) == doctest::Approx(Mt(a, a2) * Mx(b, b2)).epsilon(1e-13));

      // dt-edge basis (1/dt) chi_a(t) hat_b(x), dx-edge basis hat_a(t) (1/dx) chi_j(x).
      const FESpace& V1 = *cx.space(1);
      const Eigen::MatrixXd M1(assemble_mass(V1, g));
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < nx; ++b)
          for (int b2 = 0; b2 < nx; ++b2)
            CHECK(M1(V1.dt_edge(a, b), V1.dt_edge(a, b2)) == doctest::Approx(g.s_t * Mx(b, b2) / dt));
      for (int a = 0; a < nt; ++a)
        for (int a2 = 0; a2 < nt; ++a2)
          for (int j = 0; j < N; ++j)
            CHECK(M1(V1.dx_edge(a, j), V1.dx_edge(a2, j)) == doctest::Approx(g.s_x * Mt(a, a2) / dx));
      CHECK(M1(V1.dt_edge(0, 0), V1.dx_edge(0, 0)) == 0.0);

      const Eigen::MatrixXd M2(assemble_mass(*cx.space(2), g));
      CHECK(M2(1, 1) == doctest::Approx(g.s_t * g.s_x / (dt * dx)));
      CHECK(M2(0, 1) == 0.0);

      CHECK((M0 - M0.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK((M1 - M1.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK(Eigen::LLT<Eigen::MatrixXd>(M0).info() == Eigen::Success);
      if (g.s_x > 0) {
        CHECK(Eigen::LLT<Eigen::MatrixXd>(M1).info() == Eigen::Success);
        CHECK(Eigen::LLT<Eigen::MatrixXd>(M2).info() == Eigen::Success);
      }
    }
  }
}

TEST_CASE("projection of polynomials commutes with the derivative") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double worst0 = 0.0, worst1 = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int M = 2 + int(rng() % 5), N = 3 + int(rng() % 5);
    const double t0 = -u(rng), x0 = -u(rng);
    auto m = build_tensor_mesh({t0, t0 + u(rng)}, {x0, x0 + u(rng)}, M, N, false);
    CochainComplex cx(m, MetricSignature::euclidean());
    const Poly p = random_poly(rng, 5);
    const FormField f0 = project(cx.space(0), [&](const Point& q, std::span<double> v) { v[0] = p.value(q.t, q.x); });
    const FormField df = project(cx.space(1), [&](const Point& q, std::span<double> v) {
      v[0] = p.dt(q.t, q.x);
      v[1] = p.dx(q.t, q.x);
    });
    const Vector d0 = assemble_derivative(cx, 0) * f0.coeffs - df.coeffs;
    worst0 = std::max(worst0, max_abs(d0) / std::max(1.0, max_abs(df.coeffs)));

    // 1-form w = (a, b); dw = (db/dt - da/dx) dt ^ dx.
    const Poly a = random_poly(rng, 4), b = random_poly(rng, 4);
    const FormField w = project(cx.space(1), [&](const Point& q, std::span<double> v) {
      v[0] = a.value(q.t, q.x);
      v[1] = b.value(q.t, q.x);
    });
    const FormField dw = project(cx.space(2), [&](const Point& q, std::span<double> v) {
      v[0] = b.dt(q.t, q.x) - a.dx(q.t, q.x);
    });
    const Vector d1 = assemble_derivative(cx, 1) * w.coeffs - dw.coeffs;
    worst1 = std::max(worst1, max_abs(d1) / std::max(1.0, max_abs(dw.coeffs)));
  }
  CHECK(worst0 <= 1e-12);
  CHECK(worst1 <= 1e-12);
}

TEST_CASE("projection examples") {
  auto m = build_tensor_mesh({0, 1}, {0, 1}, 3, 4, false);
  CochainComplex cx(m, MetricSignature::euclidean());
  // t^2 x: D0 pi0 u = pi1 du.
  const FormField u = project(cx.space(0), [](const Point& p, std::span<double> v) { v[0] = p.t * p.t * p.x; });
  const FormField du = project(cx.space(1), [](const Point& p, std::span<double> v) {
    v[0] = 2 * p.t * p.x;
    v[1] = p.t * p.t;
  });
  CHECK(max_abs(Vector(assemble_derivative(cx, 0) * u.coeffs - du.coeffs)) <= 1e-15);

  const FormField c = project(cx.space(0), [](const Point&, std::span<double> v) { v[0] = 3.0; });
  CHECK(max_abs(Vector(c.coeffs.array() - 3.0)) == 0.0);
  CHECK(max_abs(Vector(assemble_derivative(cx, 0) * c.coeffs)) == 0.0);

  // Bilinear functions are reproduced pointwise.
  auto bil = [](const Point& p) { return 1 + 2 * p.t - 3 * p.x + 4 * p.t * p.x; };
  const FormField b = project(cx.space(0), [&](const Point& p, std::span<double> v) { v[0] = bil(p); });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r01(0, 1);
  for (int k = 0; k < 20; ++k) {
    const Point p{r01(rng), r01(rng)};
    CHECK(evaluate(b, p)[0] == doctest::Approx(bil(p)).epsilon(1e-14));
  }

  ProjectOptions few;
  few.gauss_points = 4;
  CHECK_THROWS_AS(project(cx.space(1), [](const Point&, std::span<double> v) { v[0] = v[1] = 0; }, few),
                  QuadratureInsufficient);

  // Declared non-polynomial input with a wrong derivative fails the commuting check.
  ProjectOptions checked;
  checked.non_polynomial = true;
  checked.derivative = [](const Point& p, std::span<double> v) {
    v[0] = std::cos(p.t);
    v[1] = 0.0;
  };
  CHECK_NOTHROW(project(cx.space(0), [](const Point& p, std::span<double> v) { v[0] = std::sin(p.t); }, checked));
  checked.derivative = [](const Point& p, std::span<double> v) {
    v[0] = 2 * std::cos(p.t);
    v[1] = 0.0;
  };
  CHECK_THROWS_AS(project(cx.space(0), [](const Point& p, std::span<double> v) { v[0] = std::sin(p.t); }, checked),
                  QuadratureInsufficient);
}

TEST_CASE("point evaluation") {
  // One time element, spatial hats on [0, 2] with h = 1; coefficients (0, 1, 0) in x.
  auto m = build_tensor_mesh({0, 1}, {0, 2}, 1, 2, false);
  auto V0 = std::make_shared<const FESpace>(m, 0);
  FormField f{V0, Vector::Zero(V0->num_dofs())};
  f.coeffs[m->node_index(0, 1)] = 1.0;
  f.coeffs[m->node_index(1, 1)] = 1.0;
  CHECK(evaluate(f, {0.5, 0.25})[0] == doctest::Approx(0.25));
  CHECK(evaluate(f, {0.5, 0.5})[0] == doctest::Approx(0.5));
  CHECK(evaluate(f, {0.5, 1.0})[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(evaluate(f, {1.5, 0.5}), PointOutsideMesh);

  // A single basis function is one at its own node and zero at the others.
  auto g = build_tensor_mesh({0, 1}, {0, 1}, 3, 3, false);
  auto G0 = std::make_shared<const FESpace>(g, 0);
  for (int n = 0; n < g->num_nodes(); n += 5) {
    FormField e{G0, Vector::Zero(G0->num_dofs())};
    e.coeffs[n] = 1.0;
    for (int k = 0; k < g->num_nodes(); ++k)
      CHECK(evaluate(e, g->node_point(k))[0] == doctest::Approx(k == n ? 1.0 : 0.0));
  }

  // Tie-break on a t interface: a dt-edge above the interface is seen there,
  // the one below is not.
  auto G1 = std::make_shared<const FESpace>(g, 1);
  FormField above{G1, Vector::Zero(G1->num_dofs())}, below{G1, Vector::Zero(G1->num_dofs())};
  above.coeffs[G1->dt_edge(1, 1)] = 1.0;
  below.coeffs[G1->dt_edge(0, 1)] = 1.0;
  const Point interface{g->time().node(1), g->space().node(1)};
  CHECK(evaluate(above, interface)[0] == doctest::Approx(1.0 / g->dt()));
  CHECK(evaluate(below, interface)[0] == 0.0);
  const ElementPoint ep = locate_point(*g, interface);
  CHECK(ep.element == g->element_index(1, 1));
  CHECK(ep.s == 0.0);
  CHECK(ep.r == 0.0);
}

TEST_CASE("partition of unity and idempotence") {
  auto m = build_tensor_mesh({0, 1}, {0, 1}, 4, 5, true);
  CochainComplex cx(m, MetricSignature::lorentzian());
  double w[4];
  for (double s : {0.0, 0.2, 0.9})
    for (double r : {0.1, 0.5, 1.0}) {
      cx.space(0)->basis(s, r, w);
      CHECK(w[0] + w[1] + w[2] + w[3] == doctest::Approx(1.0).epsilon(1e-15));
    }
  std::mt19937_64 rng(9);
  for (int k = 0; k < 3; ++k) {
    const SpacePtr& V = cx.space(k);
    const FormField f{V, test::random_vector(rng, V->num_dofs())};
    const FormField g =
        project(V, [&](const Point& p, std::span<double> v) {
          const auto e = evaluate(f, p);
          for (std::size_t c = 0; c < e.size(); ++c) v[c] = e[c];
        });
    CHECK(max_abs(Vector(g.coeffs - f.coeffs)) <= 1e-12);
  }
}
