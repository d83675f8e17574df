// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "structfem/errors.hpp"
#include "structfem/structures.hpp"

using namespace structfem;
using structfem::test::max_abs;
using structfem::test::random_vector;

namespace {

constexpr double kPi = std::numbers::pi;

struct Solved {
  std::shared_ptr<CovariantProblem> P;
  Vector phi;
};

Solved solve(LagrangianDensity L, int M, int N, double T, const VectorSampler& g) {
  auto P = std::make_shared<CovariantProblem>(build_tensor_mesh({0, T}, {0, 1}, M, N, false), std::move(L));
  const RegularRegion U = full_region(P->mesh());
  const SolveResult r = newton_solve(*P, U, dirichlet_from_function(*P, U, g));
  REQUIRE(r.report.converged);
  return {P, r.phi};
}

Solved shift_wave() {
  return solve(builtin_shift_symmetric_wave(-1.0), 6, 10, 0.37,
               [](const Point& p, std::span<double> v) { v[0] = std::sin(2 * kPi * (p.x - p.t)) + 0.3; });
}

Solved so2_pair() {
  return solve(builtin_so2_pair(-1.0, quadratic_potential(0.5)), 6, 8, 0.37,
               [](const Point& p, std::span<double> v) {
                 v[0] = 0.5 * std::cos(2 * kPi * (p.x - p.t));
                 v[1] = 0.5 * std::sin(2 * kPi * (p.x - p.t));
               });
}

std::vector<RegularRegion> regions(const MeshPtr& m) {
  return {full_region(m), classify_region(m, rectangle_elements(*m, 1, m->M() - 1, 1, m->N() - 1)),
          classify_region(m, rectangle_elements(*m, 0, m->M() / 2, 0, m->N() / 2))};
}

}  // namespace

TEST_CASE("Cartan form vanishes on variations without boundary part") {
  const Solved s = shift_wave();
  std::mt19937_64 rng(3);
  for (const RegularRegion& U : regions(s.P->mesh())) {
    const RegionDofs d = region_dofs(*s.P, U);
    Vector V = random_vector(rng, s.P->num_dofs());
    for (int b : d.boundary) V[b] = 0.0;
    CHECK(cartan_form(*s.P, U, s.phi, V) == 0.0);
  }
  // A constant field of a massless density has zero residual.
  const CovariantProblem Q(build_tensor_mesh({0, 1}, {0, 1}, 4, 4, false), builtin_shift_symmetric_wave(-1.0));
  const Vector c = Vector::Constant(Q.num_dofs(), 2.5);
  CHECK(std::abs(cartan_form(Q, full_region(Q.mesh()), c, random_vector(rng, Q.num_dofs()))) <= 1e-14);
}

TEST_CASE("single-node variation on a bump field") {
  const int M = 4, N = 4;
  const double T = 0.5, X = 1.0, dt = T / M, dx = X / N;
  for (double eps : {-1.0, 1.0}) {
    const CovariantProblem P(build_tensor_mesh({0, T}, {0, X}, M, N, false),
                             builtin_nonlinear_wave_poisson(eps, zero_potential()));
    const TensorMesh2D& m = *P.mesh();
    const RegularRegion U = classify_region(P.mesh(), rectangle_elements(m, 1, 3, 1, 3));
    const int corner = m.node_index(1, 1);
    Vector phi = Vector::Zero(P.num_dofs());
    phi[corner] = 1.0;
    Vector V = Vector::Zero(P.num_dofs());
    V[corner] = 1.0;
    // Only element (1, 1) of U touches the corner node.
    const double expect = dx / (3 * dt) + eps * dt / (3 * dx);
    CHECK(cartan_form_unchecked(P, U, phi, V) == doctest::Approx(expect).epsilon(1e-13));
    CHECK_THROWS_AS(cartan_form(P, U, phi, V), NotASolution);
    // Integration by parts holds for any field when the rule is exact.
    CHECK(cartan_form_integral(P, U, phi, V).total() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("Cartan form partition and cross-validation") {
  std::mt19937_64 rng(11);
  for (const Solved& s : {shift_wave(), so2_pair()}) {
    const CovariantProblem& P = *s.P;
    for (const RegularRegion& U : regions(P.mesh())) {
      const Vector r = assemble_residual(P, s.phi, U);
      for (int k = 0; k < 4; ++k) {
        const Vector V = random_vector(rng, P.num_dofs());
        const double direct = cartan_form(P, U, s.phi, V);
        const double el = el_one_form(P, U, s.phi, V);
        CHECK(std::abs(el + direct - r.dot(V)) <= 1e-12 * (1 + r.cwiseAbs().dot(V.cwiseAbs())));
        CHECK(std::abs(el) <= 1e-9);
        const CartanTerms t = cartan_form_integral(P, U, s.phi, V);
        const double scale = std::max({std::abs(direct), std::abs(t.flux), std::abs(t.ring)});
        CHECK(std::abs(t.total() - direct) <= 1e-8 * scale);
      }
      // Linearity in V.
      const Vector A = random_vector(rng, P.num_dofs()), B = random_vector(rng, P.num_dofs());
      const double lin = cartan_form(P, U, s.phi, 2.0 * A - B) -
                         (2.0 * cartan_form(P, U, s.phi, A) - cartan_form(P, U, s.phi, B));
      CHECK(std::abs(lin) <= 1e-12);
    }
  }
  const Solved s = shift_wave();
  std::mt19937_64 r2(5);
  CHECK_THROWS_AS(cartan_form(*s.P, full_region(s.P->mesh()), random_vector(r2, s.P->num_dofs()),
                              random_vector(r2, s.P->num_dofs())),
                  NotASolution);
}

TEST_CASE("first variations") {
  const Solved s = so2_pair();
  const CovariantProblem& P = *s.P;
  for (const RegularRegion& U : regions(P.mesh())) {
    const FirstVariations fv = first_variation_basis(P, U, s.phi);
    CHECK(fv.basis.size() == fv.dofs.boundary.size());
    CHECK(fv.max_interior_defect <= 1e-12);
    for (std::size_t b = 0; b < fv.basis.size(); ++b) {
      const Vector& V = fv.basis[b];
      for (std::size_t k = 0; k < fv.dofs.boundary.size(); ++k)
        CHECK(V[fv.dofs.boundary[k]] == (k == b ? 1.0 : 0.0));
    }
  }

  // Full domain of a linear problem: each basis vector is the linear solve
  // with unit boundary data.
  const CovariantProblem L(build_tensor_mesh({0, 0.4}, {0, 1}, 4, 6, false),
                           builtin_nonlinear_wave_poisson(-1.0, zero_potential()));
  const RegularRegion U = full_region(L.mesh());
  const FirstVariations fv = first_variation_basis(L, U, Vector::Zero(L.num_dofs()));
  for (std::size_t b = 0; b < fv.basis.size(); b += 3) {
    DirichletData d{fv.dofs.boundary, Vector::Zero(fv.dofs.boundary.size())};
    d.values[b] = 1.0;
    const SolveResult r = newton_solve(L, U, d);
    CHECK(max_abs(Vector(r.phi - fv.basis[b])) <= 1e-10);
  }
}

TEST_CASE("multisymplectic identity on pairs of first variations") {
  std::mt19937_64 rng(17);
  for (const Solved& s : {shift_wave(), so2_pair()}) {
    const CovariantProblem& P = *s.P;
    for (const RegularRegion& U : regions(P.mesh())) {
      const FirstVariations fv = first_variation_basis(P, U, s.phi);
      const double Hn = infinity_norm(fv.H);
      double worst = 0.0;
      for (std::size_t a = 0; a < fv.basis.size(); ++a)
        for (std::size_t b = a + 1; b < fv.basis.size(); b += 2)
          worst = std::max(worst, std::abs(multisymplectic_residual(fv.H, fv.dofs, fv.basis[a], fv.basis[b])) /
                                      (Hn * max_abs(fv.basis[a]) * max_abs(fv.basis[b])));
      CHECK(worst <= 1e-8);

      Vector V = Vector::Zero(P.num_dofs());
      for (const Vector& v : fv.basis) V += std::uniform_real_distribution<double>(-1, 1)(rng) * v;
      const Vector W = random_vector(rng, P.num_dofs());
      const double control = multisymplectic_residual(fv.H, fv.dofs, V, W);
      CHECK(std::abs(control) / (Hn * max_abs(V) * max_abs(W)) >= 1e-4);
      CHECK(multisymplectic_residual(fv.H, fv.dofs, W, V) == doctest::Approx(-control).epsilon(1e-12));
      CHECK(multisymplectic_residual(fv.H, fv.dofs, W, W) == 0.0);
    }
  }
}

TEST_CASE("discrete Noether theorem") {
  {
    const Solved s = shift_wave();
    for (const RegularRegion& U : regions(s.P->mesh())) {
      const NoetherReport r = noether_check(*s.P, U, s.phi, shift_generator(1));
      CHECK(r.generator == "shift");
      CHECK(std::abs(r.cartan_pairing) <= 1e-8 * r.scale);
      CHECK(std::abs(r.invariance_term) <= 1e-12);
      CHECK(r.rearrangement_defect <= 1e-12);
      CHECK(r.consistency_defect <= 1e-10);
    }
  }
  {
    const Solved s = so2_pair();
    for (const RegularRegion& U : regions(s.P->mesh())) {
      const NoetherReport r = noether_check(*s.P, U, s.phi, rotation_generator());
      CHECK(std::abs(r.cartan_pairing) <= 1e-8 * r.scale);
      CHECK(r.rearrangement_defect <= 1e-12);
    }
  }
  {
    // Broken symmetry: the same generator leaves a boundary defect.
    const Solved s = solve(builtin_so2_pair(-1.0, quadratic_potential(0.5), 0.5), 6, 8, 0.37,
                           [](const Point& p, std::span<double> v) {
                             v[0] = 0.5 * std::cos(2 * kPi * (p.x - p.t));
                             v[1] = 0.5 * std::sin(2 * kPi * (p.x - p.t));
                           });
    const NoetherReport r = noether_check(*s.P, full_region(s.P->mesh()), s.phi, rotation_generator());
    CHECK(std::abs(r.cartan_pairing) > 1e-6 * r.scale);
    CHECK(r.consistency_defect <= 1e-10);
  }
  {
    // The rearrangement is algebraic: it holds for arbitrary fields.
    std::mt19937_64 rng(23);
    const Solved s = so2_pair();
    for (const RegularRegion& U : regions(s.P->mesh())) {
      const Vector phi = random_vector(rng, s.P->num_dofs(), 0.7);
      const NoetherReport r = noether_check(*s.P, U, phi, rotation_generator());
      CHECK(r.rearrangement_defect <= 1e-12);
      CHECK(r.consistency_defect <= 1e-10);
    }
  }
  const CovariantProblem C(build_tensor_mesh({0, 1}, {0, 1}, 3, 3, false),
                           builtin_nonlinear_wave_poisson(-1.0, quartic_potential(1.0)));
  const Vector z = Vector::Zero(C.num_dofs());
  CHECK_THROWS_AS(noether_check(C, full_region(C.mesh()), z, cubic_generator()), NotEquivariant);
  SymmetryGenerator unflagged = shift_generator(1);
  unflagged.claimed_equivariant = false;
  CHECK_THROWS_AS(noether_check(C, full_region(C.mesh()), z, unflagged), NotEquivariant);
  CHECK_THROWS_AS(noether_check(C, full_region(C.mesh()), z, rotation_generator()), InvalidArgument);
}

TEST_CASE("projection equivariance") {
  auto m = build_tensor_mesh({0, 1}, {0, 2}, 4, 5, false);
  CHECK(equivariance_check(*m, shift_generator(1), default_samples(1)) <= 1e-10);
  CHECK(equivariance_check(*m, shift_generator(2), default_samples(2)) <= 1e-10);
  CHECK(equivariance_check(*m, rotation_generator(), default_samples(2)) <= 1e-10);
  CHECK(equivariance_check(*m, cubic_generator(), default_samples(1)) > 1e-3);

  IntervalMesh I(0.0, 1.0, 6, true);
  std::vector<std::function<void(double, std::span<double>)>> one = {
      [](double x, std::span<double> v) { v[0] = std::sin(2 * kPi * x) + 0.2; }};
  std::vector<std::function<void(double, std::span<double>)>> two = {[](double x, std::span<double> v) {
    v[0] = std::cos(2 * kPi * x);
    v[1] = 0.5 * std::sin(4 * kPi * x);
  }};
  CHECK(equivariance_check(I, shift_generator(1), one) <= 1e-10);
  CHECK(equivariance_check(I, rotation_generator(), two) <= 1e-10);
  CHECK(equivariance_check(I, cubic_generator(), one) > 1e-3);
}

TEST_CASE("Noether current norms") {
  // A globally bilinear field is reproduced exactly on every mesh.
  const auto bilinear = [](const Point& p, std::span<double> v) { v[0] = 0.3 + 0.5 * p.t - 0.8 * p.x + 1.1 * p.t * p.x; };
  const JetSampler exact = [&](const Point& p, std::span<double> f, std::span<double> j) {
    bilinear(p, f);
    j[0] = 0.5 + 1.1 * p.x;
    j[1] = -0.8 + 1.1 * p.t;
  };
  const MeshPtr fine = build_tensor_mesh({0, 1}, {0, 1}, 8, 8, false);
  const CovariantProblem C(build_tensor_mesh({0, 1}, {0, 1}, 4, 2, false), builtin_shift_symmetric_wave(-1.0));
  const Vector phi = interpolate(C, bilinear);
  const auto n = noether_current_norms(exact, {&C}, {phi}, shift_generator(1), fine);
  REQUIRE(n.size() == 1);
  CHECK(n[0].l2_distance <= 1e-12);
  CHECK(n[0].dual_surrogate <= 1e-12);

  const SymmetryGenerator zero = affine_generator("zero", Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1));
  std::mt19937_64 rng(2);
  const auto z = noether_current_norms(exact, {&C}, {random_vector(rng, C.num_dofs())}, zero, fine);
  CHECK(z[0].l2_distance == 0.0);
  CHECK(z[0].dual_surrogate == 0.0);

  const CovariantProblem bad(build_tensor_mesh({0, 1}, {0, 1}, 3, 3, false), builtin_shift_symmetric_wave(-1.0));
  CHECK_THROWS_AS(noether_current_norms(exact, {&bad}, {Vector::Zero(bad.num_dofs())}, shift_generator(1), fine),
                  MeshNotNested);
  CHECK_THROWS_AS(noether_current_norms(exact, {&C}, {}, shift_generator(1), fine), InvalidArgument);

  // Harmonic field e^t sin x: both norms decrease under refinement.
  const auto harmonic = [](const Point& p, std::span<double> v) { v[0] = std::exp(p.t) * std::sin(p.x); };
  const JetSampler ref = [](const Point& p, std::span<double> f, std::span<double> j) {
    f[0] = std::exp(p.t) * std::sin(p.x);
    j[0] = f[0];
    j[1] = std::exp(p.t) * std::cos(p.x);
  };
  std::vector<Solved> levels;
  std::vector<const CovariantProblem*> ptrs;
  std::vector<Vector> sols;
  for (int k : {4, 8, 16}) {
    levels.push_back(solve(builtin_shift_symmetric_wave(1.0), k, k, 1.0, harmonic));
    ptrs.push_back(levels.back().P.get());
    sols.push_back(levels.back().phi);
  }
  const auto seq = noether_current_norms(ref, ptrs, sols, shift_generator(1), build_tensor_mesh({0, 1}, {0, 1}, 32, 32, false));
  for (std::size_t k = 1; k < seq.size(); ++k) {
    CHECK(seq[k].l2_distance < seq[k - 1].l2_distance);
    CHECK(seq[k].dual_surrogate < seq[k - 1].dual_surrogate);
  }
}
