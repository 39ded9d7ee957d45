#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsv/control.hpp"
#include "nsv/fem.hpp"

namespace nsv {

/// Named per-point or per-cell array; vectors always carry 3 components.
struct VtkArray {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

/// Legacy ASCII unstructured grid on the P2 nodes of a space: quadratic
/// triangles (type 22) or tetrahedra (type 24). Values are written with 17
/// significant digits so that reading them back is exact.
struct VtkData {
  std::string title;
  std::vector<Point> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> cell_types;
  std::vector<VtkArray> point_data;
  std::vector<VtkArray> cell_data;

  const VtkArray& point_array(const std::string& name) const;
  const VtkArray& cell_array(const std::string& name) const;
};

/// Velocity on every P2 node; the pressure (if given) is extended linearly
/// to the edge nodes.
VtkData make_vtk(const MixedSpace& space, const std::string& title, const Eigen::VectorXd* velocity,
                 const Eigen::VectorXd* pressure = nullptr);
/// Adds the control of interval n as a cell vector array.
void add_control(VtkData& data, const Control& u, int n, const std::string& name = "control");

void write_vtk(std::ostream& out, const VtkData& data);
void write_vtk(const std::string& path, const VtkData& data);
/// Throws ParseError for anything outside the subset written by write_vtk.
VtkData read_vtk(std::istream& in);
VtkData read_vtk(const std::string& path);

/// Interleaved velocity coefficients (node * dim + component) from a point array.
Eigen::VectorXd velocity_coefficients(const VtkArray& array, int dim);

}  // namespace nsv
