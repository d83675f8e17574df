// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "studies.hpp"

#include <cmath>
#include <numbers>

#include "structfem/quadrature.hpp"

namespace structfem::studies {

using std::numbers::pi;

std::vector<double> successive_rates(const std::vector<double>& v) {
  std::vector<double> r;
  for (std::size_t k = 1; k < v.size(); ++k) r.push_back(std::log2(v[k - 1] / v[k]));
  return r;
}

double fitted_rate(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return 0.0;
  double sk = 0, sy = 0, skk = 0, sky = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double y = -std::log2(v[k]);
    sk += k;
    sy += y;
    skk += double(k) * k;
    sky += k * y;
  }
  return (n * sky - sk * sy) / (n * skk - sk * sk);
}

bool monotone_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

double manufactured_solution(const Point& p) { return std::sin(pi * p.t) * std::sin(pi * p.x); }

Potential manufactured_cubic_potential(double c) {
  auto f = [c](const Point& p) {
    const double u = manufactured_solution(p);
    return 2 * pi * pi * u + c * u * u * u;
  };
  return {[f, c](const Point& p, double y) { return f(p) * y - c * y * y * y * y / 4; },
          [f, c](const Point& p, double y) { return f(p) - c * y * y * y; },
          [c](const Point&, double y) { return -3 * c * y * y; }};
}

namespace {

double l2_error(const CovariantProblem& P, const Vector& phi) {
  const TensorMesh2D& mesh = *P.mesh();
  const Rule1D g = gauss_legendre_01(6);
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t a = 0; a < g.nodes.size(); ++a)
      for (std::size_t b = 0; b < g.nodes.size(); ++b) {
        const Jet J = element_jet(P, phi, e, g.nodes[a], g.nodes[b]);
        const double d = J.phi[0] - manufactured_solution(J.x);
        acc += g.weights[a] * g.weights[b] * mesh.element_area() * d * d;
      }
  return std::sqrt(acc);
}

struct Solved {
  std::unique_ptr<CovariantProblem> problem;
  Vector phi;
  int iterations = 0;
};

Solved solve_manufactured(int n, double cubic, int qp) {
  Solved s;
  auto mesh = build_tensor_mesh({0, 1}, {0, 1}, n, n, false);
  s.problem = std::make_unique<CovariantProblem>(
      mesh, builtin_nonlinear_wave_poisson(1.0, manufactured_cubic_potential(cubic)), gauss_rule(qp));
  const RegularRegion X = full_region(mesh);
  const DirichletData bc = dirichlet_from_function(
      *s.problem, X, [](const Point& p, std::span<double> v) { v[0] = manufactured_solution(p); });
  SolveResult r = newton_solve(*s.problem, X, bc);
  s.phi = std::move(r.phi);
  s.iterations = r.report.iterations;
  return s;
}

}  // namespace

L2Study manufactured_poisson(int base, int refinements, double cubic, int qp) {
  L2Study out;
  for (int k = 0; k <= refinements; ++k) {
    const int n = base << k;
    const Solved s = solve_manufactured(n, cubic, qp);
    out.n.push_back(n);
    out.error.push_back(l2_error(*s.problem, s.phi));
    out.newton_iterations.push_back(s.iterations);
  }
  out.rates = successive_rates(out.error);
  return out;
}

// The wave extent avoids continuum resonances k / T = l for small mode numbers;
// T = 1/2 admits a homogeneous solution and the Dirichlet problem stops
// converging.
double current_study_time_extent(double epsilon) { return epsilon < 0 ? 0.37 : 1.0; }

void current_study_exact(double epsilon, const Point& p, double& v, double& vt, double& vx) {
  if (epsilon < 0) {
    // phi = sin(pi (x - t)) + 0.5 cos(pi (x + t)), solves phi_tt = phi_xx.
    const double a = pi * (p.x - p.t), b = pi * (p.x + p.t);
    v = std::sin(a) + 0.5 * std::cos(b);
    vt = -pi * std::cos(a) - 0.5 * pi * std::sin(b);
    vx = pi * std::cos(a) - 0.5 * pi * std::sin(b);
  } else {
    // phi = exp(t) sin(x) is harmonic.
    v = std::exp(p.t) * std::sin(p.x);
    vt = v;
    vx = std::exp(p.t) * std::cos(p.x);
  }
}

CurrentStudy noether_current(double epsilon, int base, int refinements) {
  const double T = current_study_time_extent(epsilon);
  // dt / dx = 0.987 for the wave; nested across levels for multiples of 8.
  auto Mof = [&](int n) { return epsilon < 0 ? (3 * n) / 8 : n; };
  CurrentStudy out;
  std::vector<std::unique_ptr<CovariantProblem>> problems;
  std::vector<Vector> sols;
  const VectorSampler exact = [epsilon](const Point& p, std::span<double> v) {
    double a, b, c;
    current_study_exact(epsilon, p, a, b, c);
    v[0] = a;
  };
  for (int k = 0; k <= refinements; ++k) {
    const int n = base << k;
    auto mesh = build_tensor_mesh({0, T}, {0, 1}, Mof(n), n, false);
    problems.push_back(std::make_unique<CovariantProblem>(mesh, builtin_shift_symmetric_wave(epsilon)));
    const RegularRegion X = full_region(mesh);
    const DirichletData bc = dirichlet_from_function(*problems.back(), X, exact);
    sols.push_back(newton_solve(*problems.back(), X, bc).phi);
    out.n.push_back(n);
  }
  const int nf = base << (refinements + 1);
  auto fine = build_tensor_mesh({0, T}, {0, 1}, Mof(nf), nf, false);
  std::vector<const CovariantProblem*> ptrs;
  for (auto& p : problems) ptrs.push_back(p.get());
  const JetSampler ref = [epsilon](const Point& p, std::span<double> f, std::span<double> j) {
    current_study_exact(epsilon, p, f[0], j[0], j[1]);
  };
  const auto norms = noether_current_norms(ref, ptrs, sols, shift_generator(1), fine);
  for (const auto& c : norms) {
    out.l2.push_back(c.l2_distance);
    out.dual.push_back(c.dual_surrogate);
  }
  out.l2_rates = successive_rates(out.l2);
  out.dual_rates = successive_rates(out.dual);
  return out;
}

RingStudy cartan_ring(int base, int refinements) {
  RingStudy out;
  for (int k = 0; k <= refinements; ++k) {
    const int n = base << k;
    const Solved s = solve_manufactured(n, 1.0, 4);
    const MeshPtr& mesh = s.problem->mesh();
    const RegularRegion U = classify_region(mesh, rectangle_elements(*mesh, n / 4, 3 * n / 4, n / 4, 3 * n / 4));
    const Vector V = interpolate(*s.problem, [](const Point& p, std::span<double> v) { v[0] = 1 + p.t + p.x * p.x; });
    const CartanTerms terms = cartan_form_integral(*s.problem, U, s.phi, V);
    const double direct = cartan_form_unchecked(*s.problem, U, s.phi, V);
    out.n.push_back(n);
    out.flux.push_back(terms.flux);
    out.ring.push_back(terms.ring);
    out.ratio.push_back(std::abs(terms.ring) / std::abs(terms.flux));
    out.cross_validation.push_back(std::abs(terms.total() - direct) /
                                   std::max({std::abs(direct), std::abs(terms.flux), 1e-300}));
  }
  out.rates = successive_rates(out.ratio);
  return out;
}

}  // namespace structfem::studies
