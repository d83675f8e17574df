// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "structfem/errors.hpp"

namespace structfem {

IntervalMesh::IntervalMesh(double lo, double hi, int num_elements, bool periodic)
    : lo_(lo), hi_(hi), h_(0.0), n_(num_elements), periodic_(periodic) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw DegenerateRange("interval [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] is empty or not finite");
  }
  if (num_elements < 1) {
    throw DegenerateRange("element count must be positive, got " +
                          std::to_string(num_elements));
  }
  if (periodic && num_elements < 3) {
    throw DegenerateRange("a periodic interval needs at least 3 elements");
  }
  h_ = (hi - lo) / num_elements;
}

std::array<int, 2> IntervalMesh::element_nodes(int e) const {
  const int right = (periodic_ && e == n_ - 1) ? 0 : e + 1;
  return {e, right};
}

double IntervalMesh::wrap(double y) const {
  if (!periodic_) return y;
  const double L = hi_ - lo_;
  double r = std::fmod(y - lo_, L);
  if (r < 0) r += L;
  if (r >= L) r = 0.0;
  return lo_ + r;
}

int IntervalMesh::locate(double y) const {
  const double z = wrap(y);
  // Small tolerance so that points produced by round-off at the ends resolve.
  const double tol = 1e-12 * (hi_ - lo_);
  if (z < lo_ - tol || z > hi_ + tol) return -1;
  int e = static_cast<int>(std::floor((z - lo_) / h_));
  e = std::clamp(e, 0, n_ - 1);
  return e;
}

TensorMesh2D::TensorMesh2D(IntervalMesh time, IntervalMesh space)
    : time_(std::move(time)), space_(std::move(space)) {
  if (time_.periodic()) throw InvalidArgument("the time direction cannot be periodic");
}

std::array<int, 4> TensorMesh2D::element_nodes(int e) const {
  const auto [i, j] = element_ij(e);
  const auto sx = space_.element_nodes(j);
  return {node_index(i, sx[0]), node_index(i, sx[1]), node_index(i + 1, sx[0]),
          node_index(i + 1, sx[1])};
}

Point TensorMesh2D::node_point(int n) const {
  const auto [a, b] = node_ab(n);
  return {time_.node(a), space_.node(b)};
}

Point TensorMesh2D::element_origin(int e) const {
  const auto [i, j] = element_ij(e);
  return {time_.node(i), space_.node(j)};
}

std::vector<int> TensorMesh2D::node_elements(int n) const {
  const auto [a, b] = node_ab(n);
  std::vector<int> out;
  for (int i : {a - 1, a}) {
    if (i < 0 || i >= M()) continue;
    for (int jj : {b - 1, b}) {
      int j = jj;
      if (periodic_x()) {
        j = (j + N()) % N();
      } else if (j < 0 || j >= N()) {
        continue;
      }
      out.push_back(element_index(i, j));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TensorMesh2D::node_on_global_boundary(int n) const {
  const auto [a, b] = node_ab(n);
  if (a == 0 || a == M()) return true;
  if (!periodic_x() && (b == 0 || b == N())) return true;
  return false;
}

int TensorMesh2D::element_neighbor(int e, int side) const {
  auto [i, j] = element_ij(e);
  switch (side) {
    case 0: return i > 0 ? element_index(i - 1, j) : -1;
    case 1: return i + 1 < M() ? element_index(i + 1, j) : -1;
    case 2:
      if (j > 0) return element_index(i, j - 1);
      return periodic_x() ? element_index(i, N() - 1) : -1;
    case 3:
      if (j + 1 < N()) return element_index(i, j + 1);
      return periodic_x() ? element_index(i, 0) : -1;
    default: throw InvalidArgument("element side must be in 0..3");
  }
}

MeshPtr build_tensor_mesh(std::array<double, 2> t_range, std::array<double, 2> x_range,
                          int M, int N, bool periodic_x) {
  return std::make_shared<const TensorMesh2D>(
      IntervalMesh(t_range[0], t_range[1], M, false),
      IntervalMesh(x_range[0], x_range[1], N, periodic_x));
}

std::vector<int> rectangle_elements(const TensorMesh2D& mesh, int i0, int i1, int j0,
                                    int j1) {
  if (i0 < 0 || j0 < 0 || i1 > mesh.M() || j1 > mesh.N() || i0 >= i1 || j0 >= j1) {
    throw InvalidArgument("element block lies outside the mesh or is empty");
  }
  std::vector<int> out;
  for (int i = i0; i < i1; ++i)
    for (int j = j0; j < j1; ++j) out.push_back(mesh.element_index(i, j));
  return out;
}

namespace {

std::vector<char> element_mask(const TensorMesh2D& mesh, const std::vector<int>& elements) {
  std::vector<char> mask(mesh.num_elements(), 0);
  for (int e : elements) {
    if (e < 0 || e >= mesh.num_elements()) {
      throw InvalidArgument("element index " + std::to_string(e) + " is out of range");
    }
    mask[e] = 1;
  }
  return mask;
}

std::vector<int> interior_nodes_of(const TensorMesh2D& mesh, const std::vector<char>& mask) {
  std::vector<int> out;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const auto touching = mesh.node_elements(n);
    bool all_in = !touching.empty();
    for (int e : touching) all_in = all_in && mask[e];
    if (all_in) out.push_back(n);
  }
  return out;
}

}  // namespace

std::vector<int> regularize(const TensorMesh2D& mesh, const std::vector<int>& elements) {
  const auto mask = element_mask(mesh, elements);
  std::vector<char> keep(mesh.num_elements(), 0);
  for (int n : interior_nodes_of(mesh, mask))
    for (int e : mesh.node_elements(n)) keep[e] = 1;
  std::vector<int> out;
  for (int e = 0; e < mesh.num_elements(); ++e)
    if (keep[e]) out.push_back(e);
  return out;
}

RegularRegion classify_region(const MeshPtr& mesh, const std::vector<int>& elements) {
  if (!mesh) throw InvalidArgument("null mesh");
  RegularRegion region;
  region.mesh_ = mesh;
  region.mask_ = element_mask(*mesh, elements);
  for (int e = 0; e < mesh->num_elements(); ++e)
    if (region.mask_[e]) region.elements_.push_back(e);
  if (region.elements_.empty()) throw NotRegular("the element set is empty");

  region.interior_nodes_ = interior_nodes_of(*mesh, region.mask_);
  std::vector<char> covered(mesh->num_elements(), 0);
  for (int n : region.interior_nodes_)
    for (int e : mesh->node_elements(n)) covered[e] = 1;
  for (int e : region.elements_) {
    if (!covered[e]) {
      const auto [i, j] = mesh->element_ij(e);
      throw NotRegular("element " + std::to_string(e) + " (" + std::to_string(i) + ", " +
                       std::to_string(j) + ") touches no interior node");
    }
  }
  std::vector<char> node_mask(mesh->num_nodes(), 0);
  for (int e : region.elements_)
    for (int n : mesh->element_nodes(e)) node_mask[n] = 1;
  for (int n = 0; n < mesh->num_nodes(); ++n)
    if (node_mask[n]) region.nodes_.push_back(n);
  return region;
}

RegularRegion full_region(const MeshPtr& mesh) {
  std::vector<int> all(mesh->num_elements());
  for (int e = 0; e < mesh->num_elements(); ++e) all[e] = e;
  return classify_region(mesh, all);
}

bool node_on_region_boundary(const RegularRegion& region, int node) {
  const TensorMesh2D& mesh = *region.mesh();
  bool touches = false, leaves = false;
  for (int e : mesh.node_elements(node)) {
    if (region.contains(e)) touches = true;
    else leaves = true;
  }
  if (!touches) return false;
  return leaves || mesh.node_on_global_boundary(node);
}

bool side_on_region_boundary(const RegularRegion& region, int e, int side) {
  const int nb = region.mesh()->element_neighbor(e, side);
  return nb < 0 || !region.contains(nb);
}

}  // namespace structfem
