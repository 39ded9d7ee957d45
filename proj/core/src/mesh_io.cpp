#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "nsv/error.hpp"
#include "nsv/mesh.hpp"

namespace nsv {

namespace {

/// Line-oriented tokenizer that keeps track of line numbers for messages.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw ParseError(std::string("unexpected end of file, expected ") + expecting, line_no_ + 1);
  }

  int line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

void expect_end(std::istringstream& ss, const LineReader& r) {
  std::string extra;
  if (ss >> extra) throw ParseError("unexpected token '" + extra + "'", r.line());
}

long read_section(LineReader& r, const std::string& keyword) {
  auto ss = r.next(keyword.c_str());
  std::string word;
  long count = -1;
  if (!(ss >> word) || word != keyword) throw ParseError("expected '" + keyword + " <count>'", r.line());
  if (!(ss >> count) || count < 0) throw ParseError("invalid " + keyword + " count", r.line());
  expect_end(ss, r);
  return count;
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  LineReader r(in);
  int dim = 0;
  {
    auto ss = r.next("header");
    std::string magic;
    if (!(ss >> magic) || magic != "nsvmesh") throw ParseError("missing 'nsvmesh <dim>' header", r.line());
    if (!(ss >> dim) || (dim != 2 && dim != 3)) throw ParseError("dimension must be 2 or 3", r.line());
    expect_end(ss, r);
  }

  const long nv = read_section(r, "vertices");
  std::vector<Point> vertices(nv, Point{0.0, 0.0, 0.0});
  for (long i = 0; i < nv; ++i) {
    auto ss = r.next("vertex coordinates");
    for (int d = 0; d < dim; ++d)
      if (!(ss >> vertices[i][d])) throw ParseError("expected " + std::to_string(dim) + " coordinates", r.line());
    expect_end(ss, r);
  }

  const long nc = read_section(r, "cells");
  std::vector<CellVertices> cells(nc, CellVertices{-1, -1, -1, -1});
  for (long c = 0; c < nc; ++c) {
    auto ss = r.next("cell indices");
    for (int k = 0; k <= dim; ++k) {
      long idx = -1;
      if (!(ss >> idx)) throw ParseError("expected " + std::to_string(dim + 1) + " vertex indices", r.line());
      if (idx < 0 || idx >= nv) throw ParseError("vertex index " + std::to_string(idx) + " out of range", r.line());
      cells[c][k] = static_cast<int>(idx);
    }
    expect_end(ss, r);
  }

  const long nb = read_section(r, "boundary");
  std::vector<BoundaryFacet> boundary(nb);
  for (long b = 0; b < nb; ++b) {
    auto ss = r.next("boundary facet");
    if (!(ss >> boundary[b].marker)) throw ParseError("expected boundary marker", r.line());
    for (int k = 0; k < dim; ++k) {
      long idx = -1;
      if (!(ss >> idx)) throw ParseError("expected " + std::to_string(dim) + " facet vertex indices", r.line());
      if (idx < 0 || idx >= nv) throw ParseError("vertex index " + std::to_string(idx) + " out of range", r.line());
      boundary[b].vertices[k] = static_cast<int>(idx);
    }
    expect_end(ss, r);
  }

  return Mesh(dim, std::move(vertices), std::move(cells), std::move(boundary));
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const int dim = mesh.dim();
  out << "nsvmesh " << dim << '\n';
  out << "vertices " << mesh.num_vertices() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) {
    for (int d = 0; d < dim; ++d) out << (d ? " " : "") << v[d];
    out << '\n';
  }
  out << "cells " << mesh.num_cells() << '\n';
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell(c);
    for (int k = 0; k <= dim; ++k) out << (k ? " " : "") << v[k];
    out << '\n';
  }
  out << "boundary " << mesh.boundary().size() << '\n';
  for (const auto& f : mesh.boundary()) {
    out << f.marker;
    for (int k = 0; k < dim; ++k) out << ' ' << f.vertices[k];
    out << '\n';
  }
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'", 0);
  return read_mesh(in);
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

}  // namespace nsv
