// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "structfem/errors.hpp"

namespace structfem {

Rule1D gauss_legendre_01(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one point");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadratureRule gauss_rule(int p) {
  const Rule1D g = gauss_legendre_01(p);
  QuadratureRule q;
  q.kind = QuadratureKind::Gauss;
  q.order = p;
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      q.points.push_back({g.nodes[a], g.nodes[b]});
      q.weights.push_back(g.weights[a] * g.weights[b]);
    }
  }
  return q;
}

QuadratureRule nodal_vertex_rule() {
  QuadratureRule q;
  q.kind = QuadratureKind::NodalVertex;
  q.order = 0;
  for (int ps = 0; ps < 2; ++ps) {
    for (int pr = 0; pr < 2; ++pr) {
      q.points.push_back({double(ps), double(pr)});
      q.weights.push_back(0.25);
    }
  }
  return q;
}

std::string QuadratureRule::label() const {
  if (kind == QuadratureKind::NodalVertex) return "nodal-vertex";
  return "gauss-" + std::to_string(order);
}

}  // namespace structfem
