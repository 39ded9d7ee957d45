#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "nsv/error.hpp"
#include "nsv/mesh.hpp"

using namespace nsv;

namespace {

Point centroid(const Mesh& m, std::size_t c) {
  Point p{0, 0, 0};
  const auto v = m.cell(c);
  for (int i : v)
    for (int d = 0; d < 3; ++d) p[d] += m.vertices()[i][d] / static_cast<double>(v.size());
  return p;
}

}  // namespace

TEST(Mesh, StructuredCountsAndVolume) {
  for (int n : {1, 2, 5}) {
    const Mesh m2 = build_structured(Box::unit(2), n);
    EXPECT_EQ(m2.num_cells(), static_cast<std::size_t>(2 * n * n));
    EXPECT_EQ(m2.num_vertices(), static_cast<std::size_t>((n + 1) * (n + 1)));
    EXPECT_EQ(m2.boundary().size(), static_cast<std::size_t>(4 * n));
    EXPECT_NEAR(m2.total_volume(), 1.0, 1e-14);
    EXPECT_NEAR(m2.h(), std::sqrt(2.0) / n, 1e-14);

    const Mesh m3 = build_structured(Box::unit(3), n);
    EXPECT_EQ(m3.num_cells(), static_cast<std::size_t>(6 * n * n * n));
    EXPECT_EQ(m3.boundary().size(), static_cast<std::size_t>(12 * n * n));
    EXPECT_NEAR(m3.total_volume(), 1.0, 1e-13);
  }
}

TEST(Mesh, NonUnitBoxVolume) {
  Box b = Box::unit(3);
  b.lower = {-1.0, 0.0, 2.0};
  b.upper = {1.0, 0.5, 5.0};
  EXPECT_NEAR(build_structured(b, 3).total_volume(), 2.0 * 0.5 * 3.0, 1e-13);
}

TEST(Mesh, RightIsoscelesQualityMeasures) {
  // Right isosceles triangle with legs s: h = s sqrt2, inball diameter = s (2 - sqrt2).
  const Mesh m = build_structured(Box::unit(2), 4);
  EXPECT_NEAR(m.shape_regularity(), std::sqrt(2.0) / (2.0 - std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(m.quasi_uniformity(), 1.0, 1e-14);
}

TEST(Mesh, RefinementHalvesAndKeepsShape) {
  for (int dim : {2, 3}) {
    Mesh m = build_structured(Box::unit(dim), 1);
    const double sr = m.shape_regularity();
    for (int level = 1; level <= 3; ++level) {
      const Mesh f = refine_uniform(m);
      EXPECT_EQ(f.num_cells(), m.num_cells() * (dim == 2 ? 4u : 8u));
      EXPECT_NEAR(f.h(), 0.5 * m.h(), 1e-14);
      EXPECT_NEAR(f.total_volume(), 1.0, 1e-13);
      EXPECT_NEAR(f.shape_regularity(), sr, 1e-9) << "dim " << dim << " level " << level;
      m = f;
    }
  }
}

TEST(Mesh, ParentsContainChildren) {
  for (int dim : {2, 3}) {
    const Mesh c = build_structured(Box::unit(dim), 2);
    const Mesh m = refine_uniform(c);
    const Mesh f = refine_uniform(m);
    const Mesh* chain[] = {&c, &m, &f};
    const auto anc = ancestor_map(chain);
    ASSERT_EQ(anc.size(), f.num_cells());
    std::vector<double> vol(c.num_cells(), 0.0);
    for (std::size_t k = 0; k < f.num_cells(); ++k) {
      const long loc = c.locate(centroid(f, k));
      EXPECT_EQ(loc, anc[k]);
      vol[anc[k]] += f.volume(k);
    }
    for (std::size_t k = 0; k < c.num_cells(); ++k) EXPECT_NEAR(vol[k], c.volume(k), 1e-14);
  }
}

TEST(Mesh, LocateOutside) {
  const Mesh m = build_structured(Box::unit(2), 3);
  EXPECT_EQ(m.locate({1.5, 0.5, 0.0}), -1);
  EXPECT_GE(m.locate({0.3, 0.7, 0.0}), 0);
}

TEST(Mesh, TextRoundTrip) {
  for (int dim : {2, 3}) {
    const Mesh m = refine_uniform(build_structured(Box::unit(dim), 2));
    std::stringstream ss;
    write_mesh(ss, m);
    const Mesh r = read_mesh(ss);
    EXPECT_EQ(r.vertices(), m.vertices());
    EXPECT_EQ(r.cells(), m.cells());
    ASSERT_EQ(r.boundary().size(), m.boundary().size());
    EXPECT_EQ(r.h(), m.h());
  }
}

TEST(Mesh, RejectsInvertedCell) {
  std::vector<Point> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  std::vector<BoundaryFacet> b = {{0, {0, 1, -1}}, {0, {1, 2, -1}}, {0, {2, 0, -1}}};
  EXPECT_NO_THROW(Mesh(2, v, {{0, 1, 2, -1}}, b));
  EXPECT_THROW(Mesh(2, v, {{0, 2, 1, -1}}, b), TopologyError);
}

TEST(Mesh, RejectsMissingBoundaryFacet) {
  std::vector<Point> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  std::vector<BoundaryFacet> b = {{0, {0, 1, -1}}, {0, {1, 2, -1}}};
  EXPECT_THROW(Mesh(2, v, {{0, 1, 2, -1}}, b), TopologyError);
}

TEST(Mesh, ParseErrorsCarryLine) {
  std::istringstream bad("nsvmesh 2\nvertices 3\n0 0\n1 0\n0 x\ncells 1\n0 1 2\nboundary 0\n");
  try {
    read_mesh(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
  std::istringstream header("mesh 2\n");
  EXPECT_THROW(read_mesh(header), ParseError);
  std::istringstream range("nsvmesh 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 7\nboundary 0\n");
  EXPECT_THROW(read_mesh(range), ParseError);
}

TEST(Mesh, StructuredRejectsBadInput) {
  EXPECT_THROW(build_structured(Box::unit(2), 0), ValidationError);
  Box b = Box::unit(2);
  b.upper[0] = 0.0;
  EXPECT_THROW(build_structured(b, 2), ValidationError);
}
