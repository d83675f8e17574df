// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "structfem/feec.hpp"
#include "structfem/mesh.hpp"

namespace structfem {

// Shortest round-trip formatting with 17 significant digits.
std::string format_double(double v);

// RFC 4180 CSV document built in memory.
class CsvDocument {
 public:
  explicit CsvDocument(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_numeric_row(const std::vector<double>& values);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
  void append(const std::vector<std::string>& cells);
};

std::string csv_escape(const std::string& cell);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// node, t, x, value_0 ... value_{m-1}
CsvDocument field_csv(const TensorMesh2D& mesh, const Vector& phi, int components);

// row, col, value of the nonzeros, for debugging assembled matrices.
CsvDocument triplet_csv(const SparseMatrix& A);

}  // namespace structfem
