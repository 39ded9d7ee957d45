#include "nsv/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "nsv/error.hpp"

namespace nsv {

namespace {

// Local P2 nodes in VTK order. Ours: vertices, then edges (i, j), i < j,
// lexicographic. VTK: vertices, then (0,1) (1,2) (2,0) [(0,3) (1,3) (2,3)].
constexpr int vtk_order_2d[6] = {0, 1, 2, 3, 5, 4};
constexpr int vtk_order_3d[10] = {0, 1, 2, 3, 4, 7, 5, 6, 8, 9};
constexpr int edges_2d[3][2] = {{0, 1}, {0, 2}, {1, 2}};
constexpr int edges_3d[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

void write_array(std::ostream& out, const VtkArray& a) {
  if (a.components == 3) out << "VECTORS " << a.name << " double\n";
  else out << "SCALARS " << a.name << " double " << a.components << "\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < a.values.size(); i += a.components) {
    for (int c = 0; c < a.components; ++c) out << (c ? " " : "") << a.values[i + c];
    out << '\n';
  }
}

class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}
  std::string next(const char* what) {
    std::string s;
    if (!(in_ >> s)) throw ParseError(std::string("vtk: unexpected end of file, expected ") + what, 0);
    return s;
  }
  void expect(const std::string& word) {
    const std::string s = next(word.c_str());
    if (s != word) throw ParseError("vtk: expected '" + word + "', got '" + s + "'", 0);
  }
  long integer(const char* what) {
    const std::string s = next(what);
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (*end != '\0') throw ParseError(std::string("vtk: bad ") + what + " '" + s + "'", 0);
    return v;
  }
  double real(const char* what) {
    const std::string s = next(what);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (*end != '\0') throw ParseError(std::string("vtk: bad ") + what + " '" + s + "'", 0);
    return v;
  }
  bool eof() {
    in_ >> std::ws;
    return in_.eof();
  }

 private:
  std::istream& in_;
};

void read_arrays(Tokens& tok, std::size_t count, std::vector<VtkArray>& out, std::string& keyword) {
  for (;;) {
    if (tok.eof()) {
      keyword.clear();
      return;
    }
    keyword = tok.next("data array");
    VtkArray a;
    if (keyword == "VECTORS") {
      a.name = tok.next("array name");
      tok.expect("double");
      a.components = 3;
    } else if (keyword == "SCALARS") {
      a.name = tok.next("array name");
      tok.expect("double");
      a.components = static_cast<int>(tok.integer("component count"));
      tok.expect("LOOKUP_TABLE");
      tok.expect("default");
    } else {
      return;
    }
    a.values.resize(count * a.components);
    for (auto& v : a.values) v = tok.real("value");
    out.push_back(std::move(a));
  }
}

}  // namespace

const VtkArray& VtkData::point_array(const std::string& name) const {
  for (const auto& a : point_data)
    if (a.name == name) return a;
  throw ValidationError("vtk: no point array '" + name + "'");
}

const VtkArray& VtkData::cell_array(const std::string& name) const {
  for (const auto& a : cell_data)
    if (a.name == name) return a;
  throw ValidationError("vtk: no cell array '" + name + "'");
}

VtkData make_vtk(const MixedSpace& space, const std::string& title, const Eigen::VectorXd* velocity,
                 const Eigen::VectorXd* pressure) {
  const int dim = space.dim();
  const int npc = space.nodes_per_cell();
  VtkData d;
  d.title = title;
  d.points.resize(space.num_nodes());
  for (std::size_t i = 0; i < space.num_nodes(); ++i) d.points[i] = space.node(i);
  d.cells.resize(space.num_cells());
  d.cell_types.assign(space.num_cells(), dim == 2 ? 22 : 24);
  for (std::size_t c = 0; c < space.num_cells(); ++c) {
    const auto nodes = space.cell_nodes(c);
    d.cells[c].resize(npc);
    for (int a = 0; a < npc; ++a) d.cells[c][a] = nodes[dim == 2 ? vtk_order_2d[a] : vtk_order_3d[a]];
  }
  if (velocity) {
    if (velocity->size() != static_cast<Eigen::Index>(space.n_vel())) throw ValidationError("vtk: velocity has wrong size");
    VtkArray v{"velocity", 3, std::vector<double>(3 * space.num_nodes(), 0.0)};
    for (std::size_t i = 0; i < space.num_nodes(); ++i)
      for (int j = 0; j < dim; ++j) v.values[3 * i + j] = (*velocity)[space.vel_dof(static_cast<int>(i), j)];
    d.point_data.push_back(std::move(v));
  }
  if (pressure) {
    if (pressure->size() != static_cast<Eigen::Index>(space.n_pre())) throw ValidationError("vtk: pressure has wrong size");
    VtkArray p{"pressure", 1, std::vector<double>(space.num_nodes(), 0.0)};
    const int nv = dim + 1;
    for (std::size_t c = 0; c < space.num_cells(); ++c) {
      const auto nodes = space.cell_nodes(c);
      for (int a = 0; a < nv; ++a) p.values[nodes[a]] = (*pressure)[nodes[a]];
      for (int e = 0; e < (dim == 2 ? 3 : 6); ++e) {
        const auto& ed = dim == 2 ? edges_2d[e] : edges_3d[e];
        p.values[nodes[nv + e]] = 0.5 * ((*pressure)[nodes[ed[0]]] + (*pressure)[nodes[ed[1]]]);
      }
    }
    d.point_data.push_back(std::move(p));
  }
  return d;
}

void add_control(VtkData& data, const Control& u, int n, const std::string& name) {
  if (u.cells() != data.cells.size()) throw ValidationError("vtk: control has wrong cell count");
  VtkArray a{name, 3, std::vector<double>(3 * u.cells(), 0.0)};
  for (std::size_t c = 0; c < u.cells(); ++c)
    for (int j = 0; j < u.dim(); ++j) a.values[3 * c + j] = u(n, c, j);
  data.cell_data.push_back(std::move(a));
}

void write_vtk(std::ostream& out, const VtkData& d) {
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n" << (d.title.empty() ? "nsv" : d.title) << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << d.points.size() << " double\n";
  for (const auto& p : d.points) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  std::size_t total = 0;
  for (const auto& c : d.cells) total += c.size() + 1;
  out << "CELLS " << d.cells.size() << ' ' << total << '\n';
  for (const auto& c : d.cells) {
    out << c.size();
    for (int i : c) out << ' ' << i;
    out << '\n';
  }
  out << "CELL_TYPES " << d.cell_types.size() << '\n';
  for (int t : d.cell_types) out << t << '\n';
  if (!d.point_data.empty()) {
    out << "POINT_DATA " << d.points.size() << '\n';
    for (const auto& a : d.point_data) write_array(out, a);
  }
  if (!d.cell_data.empty()) {
    out << "CELL_DATA " << d.cells.size() << '\n';
    for (const auto& a : d.cell_data) write_array(out, a);
  }
}

void write_vtk(const std::string& path, const VtkData& data) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_vtk(out, data);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

VtkData read_vtk(std::istream& in) {
  VtkData d;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0) throw ParseError("vtk: missing header", 1);
  std::getline(in, d.title);
  Tokens tok(in);
  tok.expect("ASCII");
  tok.expect("DATASET");
  tok.expect("UNSTRUCTURED_GRID");
  tok.expect("POINTS");
  const long np = tok.integer("point count");
  tok.expect("double");
  d.points.resize(np);
  for (auto& p : d.points)
    for (auto& x : p) x = tok.real("coordinate");
  tok.expect("CELLS");
  const long nc = tok.integer("cell count");
  tok.integer("cell list size");
  d.cells.resize(nc);
  for (auto& c : d.cells) {
    c.resize(tok.integer("cell size"));
    for (auto& i : c) {
      i = static_cast<int>(tok.integer("point index"));
      if (i < 0 || i >= np) throw ParseError("vtk: point index out of range", 0);
    }
  }
  tok.expect("CELL_TYPES");
  if (tok.integer("cell type count") != nc) throw ParseError("vtk: CELL_TYPES count mismatch", 0);
  d.cell_types.resize(nc);
  for (auto& t : d.cell_types) t = static_cast<int>(tok.integer("cell type"));
  std::string keyword = tok.eof() ? "" : tok.next("section");
  while (!keyword.empty()) {
    if (keyword == "POINT_DATA") {
      if (tok.integer("point count") != np) throw ParseError("vtk: POINT_DATA count mismatch", 0);
      read_arrays(tok, np, d.point_data, keyword);
    } else if (keyword == "CELL_DATA") {
      if (tok.integer("cell count") != nc) throw ParseError("vtk: CELL_DATA count mismatch", 0);
      read_arrays(tok, nc, d.cell_data, keyword);
    } else {
      throw ParseError("vtk: unexpected '" + keyword + "'", 0);
    }
  }
  return d;
}

VtkData read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_vtk(in);
}

Eigen::VectorXd velocity_coefficients(const VtkArray& a, int dim) {
  if (a.components != 3) throw ValidationError("vtk: '" + a.name + "' is not a vector array");
  const std::size_t nodes = a.values.size() / 3;
  Eigen::VectorXd v(static_cast<Eigen::Index>(nodes * dim));
  for (std::size_t i = 0; i < nodes; ++i)
    for (int j = 0; j < dim; ++j) v[static_cast<Eigen::Index>(i * dim + j)] = a.values[3 * i + j];
  return v;
}

}  // namespace nsv
