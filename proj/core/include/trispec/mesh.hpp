#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "trispec/domain.hpp"

namespace trispec {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct BoundaryEdge {
    int n0 = -1;
    int n1 = -1;
    SideTag side = SideTag::F1;
};

// Structured conforming triangulation of a RightTriangle.  Grid nodes sit at
// (i*a/ndiv, j/ndiv) with i + j <= ndiv; every grid cell is split into the
// one or two triangles conforming to the hypotenuse.  All elements are
// counterclockwise.  Node ordering is canonical (row-major by j, then i), so
// meshes with equal (a, ndiv) are identical.
class Mesh {
public:
    static Mesh structured(const RightTriangle& tri, int ndiv);

    // Uniform midpoint refinement; identical to structured(tri, 2*ndiv).
    // Coarse node (i,j) reappears, coordinate-exact, as fine node (2i,2j).
    Mesh refined() const;

    const RightTriangle& triangle() const { return tri_; }
    int ndiv() const { return ndiv_; }
    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

    int node_index(int i, int j) const;  // grid coordinates -> node id
    double signed_area(int element) const;

    // Element containing (x,y), exploiting the structured layout.
    // Throws InvalidParameter for points outside the closed triangle.
    int locate(double x, double y) const;

    // Line-oriented text format:
    //   ndiv a
    //   nodes N      (N lines "x y")
    //   elements E   (E lines "i j k")
    //   boundary B   (B lines "i j tag")
    void save(std::ostream& os) const;
    static Mesh load(std::istream& is);

private:
    Mesh() = default;

    RightTriangle tri_;
    int ndiv_ = 0;
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<BoundaryEdge> boundary_;
};

}  // namespace trispec
