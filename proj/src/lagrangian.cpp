// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "structfem/errors.hpp"

namespace structfem {

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

void check_potential(const Potential& N, const std::string& label) {
  static constexpr double probes[] = {-1.3, -0.4, 0.0, 0.25, 0.9, 1.7};
  static constexpr Point points[] = {{0.1, 0.2}, {0.7, 0.35}, {0.45, 0.9}};
  for (const Point& x : points) {
    for (double y : probes) {
      const double h = 1e-5 * (1.0 + std::abs(y));
      const double fd1 = (N.value(x, y + h) - N.value(x, y - h)) / (2 * h);
      const double fd2 = (N.d1(x, y + h) - N.d1(x, y - h)) / (2 * h);
      if (rel_err(fd1, N.d1(x, y)) > 1e-6 || rel_err(fd2, N.d2(x, y)) > 1e-6) {
        throw InconsistentDerivatives(label + ": declared derivatives disagree with "
                                      "finite differences at phi = " + std::to_string(y));
      }
    }
  }
}

// exp of an augmented affine generator [[A, b], [0, 0]] times s.
Eigen::MatrixXd expm(const Eigen::MatrixXd& X) {
  const double norm = X.lpNorm<Eigen::Infinity>();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd Y = X / std::ldexp(1.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(X.rows(), X.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * Y / double(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

Potential zero_potential() {
  return {[](const Point&, double) { return 0.0; }, [](const Point&, double) { return 0.0; },
          [](const Point&, double) { return 0.0; }};
}

Potential quartic_potential(double c) {
  return {[c](const Point&, double y) { return c * y * y * y * y / 4.0; },
          [c](const Point&, double y) { return c * y * y * y; },
          [c](const Point&, double y) { return 3.0 * c * y * y; }};
}

Potential quadratic_potential(double c) {
  return {[c](const Point&, double y) { return c * y * y / 2.0; },
          [c](const Point&, double y) { return c * y; },
          [c](const Point&, double) { return c; }};
}

LagrangianDensity builtin_nonlinear_wave_poisson(double epsilon, const Potential& N) {
  if (epsilon != 1.0 && epsilon != -1.0) throw InvalidArgument("epsilon must be +1 or -1");
  check_potential(N, "nonlinear_wave_poisson");
  LagrangianDensity L;
  L.name = "nonlinear_wave_poisson";
  L.components = 1;
  L.metric = MetricSignature::from_epsilon(epsilon);
  L.unit_kinetic = true;
  const double eps = epsilon;
  L.value = [eps, N](const Point& x, std::span<const double> f, std::span<const double> j) {
    return 0.5 * (j[0] * j[0] + eps * j[1] * j[1]) - N.value(x, f[0]);
  };
  L.d_field = [N](const Point& x, std::span<const double> f, std::span<const double>,
                  std::span<double> out) { out[0] = -N.d1(x, f[0]); };
  L.d_jet = [eps](const Point&, std::span<const double>, std::span<const double> j,
                  std::span<double> out) {
    out[0] = j[0];
    out[1] = eps * j[1];
  };
  L.d_field_field = [N](const Point& x, std::span<const double> f, std::span<const double>,
                        std::span<double> out) { out[0] = -N.d2(x, f[0]); };
  L.d_field_jet = [](const Point&, std::span<const double>, std::span<const double>,
                     std::span<double> out) { out[0] = out[1] = 0.0; };
  L.d_jet_jet = [eps](const Point&, std::span<const double>, std::span<const double>,
                      std::span<double> out) {
    out[0] = 1.0; out[1] = 0.0;
    out[2] = 0.0; out[3] = eps;
  };
  return L;
}

LagrangianDensity builtin_shift_symmetric_wave(double epsilon) {
  LagrangianDensity L = builtin_nonlinear_wave_poisson(epsilon, zero_potential());
  L.name = "shift_symmetric_wave";
  return L;
}

LagrangianDensity builtin_so2_pair(double epsilon, const Potential& radial, double beta) {
  if (epsilon != 1.0 && epsilon != -1.0) throw InvalidArgument("epsilon must be +1 or -1");
  check_potential(radial, "so2_pair");
  LagrangianDensity L;
  L.name = beta == 0.0 ? "so2_pair" : "broken_pair";
  L.components = 2;
  L.metric = MetricSignature::from_epsilon(epsilon);
  L.unit_kinetic = true;
  const double eps = epsilon;
  L.value = [eps, radial, beta](const Point& x, std::span<const double> f,
                                std::span<const double> j) {
    double kin = 0.0;
    for (int c = 0; c < 2; ++c) kin += 0.5 * (j[2 * c] * j[2 * c] + eps * j[2 * c + 1] * j[2 * c + 1]);
    const double s = f[0] * f[0] + f[1] * f[1];
    return kin - radial.value(x, s) - beta * std::pow(f[0], 4) / 4.0;
  };
  L.d_field = [radial, beta](const Point& x, std::span<const double> f, std::span<const double>,
                             std::span<double> out) {
    const double s = f[0] * f[0] + f[1] * f[1];
    const double n1 = radial.d1(x, s);
    out[0] = -2.0 * f[0] * n1 - beta * f[0] * f[0] * f[0];
    out[1] = -2.0 * f[1] * n1;
  };
  L.d_jet = [eps](const Point&, std::span<const double>, std::span<const double> j,
                  std::span<double> out) {
    for (int c = 0; c < 2; ++c) {
      out[2 * c] = j[2 * c];
      out[2 * c + 1] = eps * j[2 * c + 1];
    }
  };
  L.d_field_field = [radial, beta](const Point& x, std::span<const double> f,
                                   std::span<const double>, std::span<double> out) {
    const double s = f[0] * f[0] + f[1] * f[1];
    const double n1 = radial.d1(x, s), n2 = radial.d2(x, s);
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        out[2 * c + d] = -(c == d ? 2.0 * n1 : 0.0) - 4.0 * f[c] * f[d] * n2;
    out[0] -= 3.0 * beta * f[0] * f[0];
  };
  L.d_field_jet = [](const Point&, std::span<const double>, std::span<const double>,
                     std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  L.d_jet_jet = [eps](const Point&, std::span<const double>, std::span<const double>,
                      std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int c = 0; c < 2; ++c) {
      out[(2 * c) * 4 + 2 * c] = 1.0;
      out[(2 * c + 1) * 4 + 2 * c + 1] = eps;
    }
  };
  return L;
}

DerivativeCheck check_density_derivatives(const LagrangianDensity& L, unsigned seed,
                                          int samples, double amplitude) {
  const int m = L.components;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-amplitude, amplitude);
  DerivativeCheck out;
  std::vector<double> f(m), j(2 * m), g1(m), g2(2 * m), gp(m), gm(m), hp(2 * m), hm(2 * m);
  std::vector<double> ff(m * m), fj(m * 2 * m), jj(4 * m * m);
  for (int s = 0; s < samples; ++s) {
    const Point x{0.5 + 0.4 * U(rng) / amplitude, 0.5 + 0.4 * U(rng) / amplitude};
    for (auto& v : f) v = U(rng);
    for (auto& v : j) v = U(rng);
    L.d_field(x, f, j, g1);
    L.d_jet(x, f, j, g2);
    const double h = 1e-5 * amplitude;
    auto fd_value = [&](std::vector<double>& arr, int k) {
      const double keep = arr[k];
      arr[k] = keep + h;
      const double vp = L.value(x, f, j);
      arr[k] = keep - h;
      const double vm = L.value(x, f, j);
      arr[k] = keep;
      return (vp - vm) / (2 * h);
    };
    for (int c = 0; c < m; ++c) out.first_order_error = std::max(out.first_order_error, rel_err(fd_value(f, c), g1[c]));
    for (int k = 0; k < 2 * m; ++k) out.first_order_error = std::max(out.first_order_error, rel_err(fd_value(j, k), g2[k]));
    if (!L.has_second_partials()) continue;
    L.d_field_field(x, f, j, ff);
    L.d_field_jet(x, f, j, fj);
    L.d_jet_jet(x, f, j, jj);
    for (int c = 0; c < m; ++c) {
      const double keep = f[c];
      f[c] = keep + h; L.d_field(x, f, j, gp); L.d_jet(x, f, j, hp);
      f[c] = keep - h; L.d_field(x, f, j, gm); L.d_jet(x, f, j, hm);
      f[c] = keep;
      for (int d = 0; d < m; ++d)
        out.second_order_error = std::max(out.second_order_error, rel_err((gp[d] - gm[d]) / (2 * h), ff[d * m + c]));
      // Mixed partial from the jet side; compare with the declared field-jet block.
      for (int k = 0; k < 2 * m; ++k)
        out.symmetry_error = std::max(out.symmetry_error, rel_err((hp[k] - hm[k]) / (2 * h), fj[c * 2 * m + k]));
    }
    for (int k = 0; k < 2 * m; ++k) {
      const double keep = j[k];
      j[k] = keep + h; L.d_field(x, f, j, gp); L.d_jet(x, f, j, hp);
      j[k] = keep - h; L.d_field(x, f, j, gm); L.d_jet(x, f, j, hm);
      j[k] = keep;
      for (int c = 0; c < m; ++c)
        out.second_order_error = std::max(out.second_order_error, rel_err((gp[c] - gm[c]) / (2 * h), fj[c * 2 * m + k]));
      for (int l = 0; l < 2 * m; ++l)
        out.second_order_error = std::max(out.second_order_error, rel_err((hp[l] - hm[l]) / (2 * h), jj[l * 2 * m + k]));
    }
    for (int k = 0; k < 2 * m; ++k)
      for (int l = 0; l < 2 * m; ++l)
        out.symmetry_error = std::max(out.symmetry_error, std::abs(jj[k * 2 * m + l] - jj[l * 2 * m + k]));
    for (int c = 0; c < m; ++c)
      for (int d = 0; d < m; ++d)
        out.symmetry_error = std::max(out.symmetry_error, std::abs(ff[c * m + d] - ff[d * m + c]));
  }
  return out;
}

Eigen::VectorXd SymmetryGenerator::apply(const Eigen::VectorXd& coeffs, int n) const {
  Eigen::VectorXd out(coeffs.size());
  std::vector<double> y(components), v(components);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < components; ++c) y[c] = coeffs[c * n + i];
    field(y, v);
    for (int c = 0; c < components; ++c) out[c * n + i] = v[c];
  }
  return out;
}

Eigen::VectorXd SymmetryGenerator::flow_coeffs(double s, const Eigen::VectorXd& coeffs, int n) const {
  Eigen::VectorXd out(coeffs.size());
  std::vector<double> y(components), v(components);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < components; ++c) y[c] = coeffs[c * n + i];
    flow(s, y, v);
    for (int c = 0; c < components; ++c) out[c * n + i] = v[c];
  }
  return out;
}

SymmetryGenerator affine_generator(std::string name, Eigen::MatrixXd A, Eigen::VectorXd b) {
  const int m = static_cast<int>(A.rows());
  if (A.cols() != m || b.size() != m) throw InvalidArgument("generator shapes disagree");
  SymmetryGenerator g;
  g.name = std::move(name);
  g.components = m;
  g.affine = true;
  g.A = A;
  g.b = b;
  g.field = [A, b, m](std::span<const double> y, std::span<double> out) {
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), m);
    Eigen::Map<Eigen::VectorXd>(out.data(), m) = A * yv + b;
  };
  g.flow = [A, b, m](double s, std::span<const double> y, std::span<double> out) {
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(m + 1, m + 1);
    aug.topLeftCorner(m, m) = s * A;
    aug.topRightCorner(m, 1) = s * b;
    const Eigen::MatrixXd E = expm(aug);
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), m);
    Eigen::Map<Eigen::VectorXd>(out.data(), m) = E.topLeftCorner(m, m) * yv + E.topRightCorner(m, 1);
  };
  return g;
}

SymmetryGenerator shift_generator(int components) {
  return affine_generator("shift", Eigen::MatrixXd::Zero(components, components),
                          Eigen::VectorXd::Ones(components));
}

SymmetryGenerator rotation_generator() {
  Eigen::MatrixXd A(2, 2);
  A << 0.0, -1.0, 1.0, 0.0;
  return affine_generator("rotation", A, Eigen::VectorXd::Zero(2));
}

SymmetryGenerator cubic_generator() {
  SymmetryGenerator g;
  g.name = "cubic";
  g.components = 1;
  g.affine = false;
  g.field = [](std::span<const double> y, std::span<double> out) { out[0] = y[0] * y[0] * y[0]; };
  g.flow = [](double s, std::span<const double> y, std::span<double> out) {
    out[0] = y[0] / std::sqrt(1.0 - 2.0 * s * y[0] * y[0]);
  };
  return g;
}

}  // namespace structfem
