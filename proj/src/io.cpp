// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "structfem/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "structfem/errors.hpp"

namespace structfem {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

CsvDocument::CsvDocument(std::vector<std::string> header) : columns_(header.size()) {
  append(header);
}

void CsvDocument::append(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_escape(cells[i]);
  }
  text_ += "\r\n";
}

void CsvDocument::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row has the wrong number of cells");
  append(cells);
}

void CsvDocument::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

std::string CsvDocument::str() const { return text_; }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CsvDocument field_csv(const TensorMesh2D& mesh, const Vector& phi, int m) {
  std::vector<std::string> header = {"node", "t", "x"};
  for (int c = 0; c < m; ++c) header.push_back("value_" + std::to_string(c));
  CsvDocument doc(header);
  const int n = mesh.num_nodes();
  for (int node = 0; node < n; ++node) {
    const Point p = mesh.node_point(node);
    std::vector<std::string> row = {std::to_string(node), format_double(p.t), format_double(p.x)};
    for (int c = 0; c < m; ++c) row.push_back(format_double(phi[c * n + node]));
    doc.add_row(row);
  }
  return doc;
}

CsvDocument triplet_csv(const SparseMatrix& A) {
  CsvDocument doc({"row", "col", "value"});
  for (int i = 0; i < A.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      doc.add_row({std::to_string(it.row()), std::to_string(it.col()), format_double(it.value())});
  return doc;
}

}  // namespace structfem
