// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

namespace structfem {

// Gauss-Legendre rule with n points on [0, 1]; weights sum to 1.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule1D gauss_legendre_01(int n);

enum class QuadratureKind { Gauss, NodalVertex };

// Element rule on the reference square [0,1]^2 with coordinates (s, r), s the
// temporal and r the spatial reference coordinate. Weights sum to 1 and are
// scaled by the element area at assembly time.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::Gauss;
  int order = 4;  // points per direction for Gauss, ignored for NodalVertex
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  std::string label() const;
};

QuadratureRule gauss_rule(int points_per_direction);
QuadratureRule nodal_vertex_rule();

}  // namespace structfem
