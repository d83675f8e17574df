// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

namespace structfem {

// Spacetime point. Time is the first coordinate.
struct Point {
  double t = 0.0;
  double x = 0.0;
};

// Uniform 1D mesh. A periodic mesh identifies the two end nodes, so it has as
// many nodes as elements.
class IntervalMesh {
 public:
  IntervalMesh(double lo, double hi, int num_elements, bool periodic);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double h() const { return h_; }
  double length() const { return hi_ - lo_; }
  bool periodic() const { return periodic_; }
  int num_elements() const { return n_; }
  int num_nodes() const { return periodic_ ? n_ : n_ + 1; }

  // Coordinate of node i, 0 <= i < num_nodes().
  double node(int i) const { return lo_ + h_ * i; }
  // Node indices of element e in increasing coordinate order. The second node
  // wraps to 0 for the last element of a periodic mesh.
  std::array<int, 2> element_nodes(int e) const;
  // Element containing coordinate y; the element whose closed left end
  // contains y wins ties. Periodic meshes wrap y first. Returns -1 outside.
  int locate(double y) const;
  // Wraps into [lo, hi) for periodic meshes, identity otherwise.
  double wrap(double y) const;

 private:
  double lo_, hi_, h_;
  int n_;
  bool periodic_;
};

// Tensor-product mesh T x S of axis-aligned rectangles with bilinear geometry.
// Element (i, j) spans [t_i, t_{i+1}] x [x_j, x_{j+1}] and has flat index
// i * N + j. Node (a, b) has flat index a * Nx + b, Nx the spatial node count.
class TensorMesh2D {
 public:
  TensorMesh2D(IntervalMesh time, IntervalMesh space);

  const IntervalMesh& time() const { return time_; }
  const IntervalMesh& space() const { return space_; }
  int M() const { return time_.num_elements(); }
  int N() const { return space_.num_elements(); }
  double dt() const { return time_.h(); }
  double dx() const { return space_.h(); }
  bool periodic_x() const { return space_.periodic(); }

  int num_elements() const { return M() * N(); }
  int num_time_nodes() const { return time_.num_nodes(); }
  int num_space_nodes() const { return space_.num_nodes(); }
  int num_nodes() const { return num_time_nodes() * num_space_nodes(); }

  int element_index(int i, int j) const { return i * N() + j; }
  std::pair<int, int> element_ij(int e) const { return {e / N(), e % N()}; }
  int node_index(int a, int b) const { return a * num_space_nodes() + b; }
  std::pair<int, int> node_ab(int n) const {
    return {n / num_space_nodes(), n % num_space_nodes()};
  }

  // Local node l = 2 p + q sits at temporal offset p and spatial offset q.
  std::array<int, 4> element_nodes(int e) const;
  Point node_point(int n) const;
  // Lower-left corner of element e.
  Point element_origin(int e) const;
  // Elements sharing node n, in increasing order.
  std::vector<int> node_elements(int n) const;
  bool node_on_global_boundary(int n) const;
  // Neighbour across a side: side 0 = t low, 1 = t high, 2 = x low,
  // 3 = x high. Returns -1 at the global boundary.
  int element_neighbor(int e, int side) const;

  double element_area() const { return dt() * dx(); }
  double measure() const { return time_.length() * space_.length(); }

 private:
  IntervalMesh time_;
  IntervalMesh space_;
};

using MeshPtr = std::shared_ptr<const TensorMesh2D>;

MeshPtr build_tensor_mesh(std::array<double, 2> t_range,
                          std::array<double, 2> x_range, int M, int N,
                          bool periodic_x);

// Flat element indices of the block [i0, i1) x [j0, j1).
std::vector<int> rectangle_elements(const TensorMesh2D& mesh, int i0, int i1,
                                    int j0, int j1);

// A union of closed elements that equals its own regularisation: every element
// touches a node all of whose neighbouring elements belong to the set.
class RegularRegion {
 public:
  const MeshPtr& mesh() const { return mesh_; }
  const std::vector<int>& elements() const { return elements_; }
  bool contains(int e) const { return mask_[e] != 0; }
  // Nodes all of whose touching elements lie in the region.
  const std::vector<int>& structural_interior_nodes() const { return interior_nodes_; }
  // Nodes of the closed region.
  const std::vector<int>& nodes() const { return nodes_; }
  bool is_full_domain() const {
    return static_cast<int>(elements_.size()) == mesh_->num_elements();
  }

 private:
  friend RegularRegion classify_region(const MeshPtr&, const std::vector<int>&);
  MeshPtr mesh_;
  std::vector<int> elements_;
  std::vector<char> mask_;
  std::vector<int> interior_nodes_;
  std::vector<int> nodes_;
};

// Validates regularity. Throws NotRegular naming an element of the set that
// touches no interior node.
RegularRegion classify_region(const MeshPtr& mesh, const std::vector<int>& elements);

// Elements touching at least one node whose neighbourhood is inside the set.
std::vector<int> regularize(const TensorMesh2D& mesh, const std::vector<int>& elements);

RegularRegion full_region(const MeshPtr& mesh);

// Nodes lying on the topological boundary of the closed region, i.e. nodes of
// the region that touch an element outside it or sit on the global boundary.
bool node_on_region_boundary(const RegularRegion& region, int node);

// Whether element side (see element_neighbor) lies on the region boundary.
bool side_on_region_boundary(const RegularRegion& region, int e, int side);

}  // namespace structfem
