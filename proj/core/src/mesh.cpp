#include "trispec/mesh.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "trispec/textio.hpp"

namespace trispec {

namespace {

int row_offset(int ndiv, int j) {
    // Row j holds nodes i = 0..ndiv-j; rows 0..j-1 come first.
    return j * (ndiv + 1) - j * (j - 1) / 2;
}

}  // namespace

Mesh Mesh::structured(const RightTriangle& tri, int ndiv) {
    if (ndiv < 1)
        throw InvalidParameter("mesh ndiv must be >= 1, got " + std::to_string(ndiv));

    Mesh mesh;
    mesh.tri_ = tri;
    mesh.ndiv_ = ndiv;

    const int n = ndiv;
    mesh.nodes_.reserve((n + 1) * (n + 2) / 2);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n - j; ++i)
            mesh.nodes_.push_back({static_cast<double>(i) * tri.a / n, static_cast<double>(j) / n});

    const auto id = [&](int i, int j) { return row_offset(n, j) + i; };

    mesh.elements_.reserve(n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n - j; ++i) {
            mesh.elements_.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
            if (i + j < n - 1)
                mesh.elements_.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }

    mesh.boundary_.reserve(3 * n);
    for (int i = 0; i < n; ++i)
        mesh.boundary_.push_back({id(i, 0), id(i + 1, 0), SideTag::F2});
    for (int i = 0; i < n; ++i)
        mesh.boundary_.push_back({id(n - i, i), id(n - i - 1, i + 1), SideTag::F3});
    for (int j = n; j > 0; --j)
        mesh.boundary_.push_back({id(0, j), id(0, j - 1), SideTag::F1});

    return mesh;
}

Mesh Mesh::refined() const {
    return structured(tri_, 2 * ndiv_);
}

int Mesh::node_index(int i, int j) const {
    return row_offset(ndiv_, j) + i;
}

double Mesh::signed_area(int element) const {
    const auto& e = elements_[element];
    const Vec2& p0 = nodes_[e[0]];
    const Vec2& p1 = nodes_[e[1]];
    const Vec2& p2 = nodes_[e[2]];
    return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

int Mesh::locate(double x, double y) const {
    if (!tri_.contains(x, y, 1e-12))
        throw InvalidParameter("point (" + std::to_string(x) + ", " + std::to_string(y) +
                               ") lies outside the triangle");
    const int n = ndiv_;
    const double hx = tri_.a / n;
    const double hy = 1.0 / n;

    int i = static_cast<int>(std::floor(x / hx));
    int j = static_cast<int>(std::floor(y / hy));
    i = std::min(std::max(i, 0), n - 1);
    j = std::min(std::max(j, 0), n - 1);
    // i + j can overshoot the diagonal only when (x,y) sits exactly on a grid
    // line of the hypotenuse band; pull back into the adjacent cell.
    while (i + j > n - 1) {
        if (x / hx - i <= y / hy - j) --j; else --i;
    }

    const double xi = x / hx - i;
    const double eta = y / hy - j;

    // Elements are emitted lower-then-upper per cell, row-major; rows 0..j-1
    // contribute j*(2n - j) elements and each earlier cell in row j two.
    const int idx = j * (2 * n - j) + 2 * i;
    const bool has_upper = (i + j < n - 1);
    if (has_upper && xi + eta > 1.0) return idx + 1;
    return idx;
}

void Mesh::save(std::ostream& os) const {
    os << ndiv_ << ' ' << fmt_double(tri_.a) << '\n';
    os << "nodes " << nodes_.size() << '\n';
    for (const auto& p : nodes_) os << fmt_double(p.x) << ' ' << fmt_double(p.y) << '\n';
    os << "elements " << elements_.size() << '\n';
    for (const auto& e : elements_) os << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
    os << "boundary " << boundary_.size() << '\n';
    for (const auto& b : boundary_) os << b.n0 << ' ' << b.n1 << ' ' << to_string(b.side) << '\n';
}

Mesh Mesh::load(std::istream& is) {
    int ndiv = 0;
    double a = 0.0;
    if (!(is >> ndiv >> a))
        throw InvalidParameter("mesh header: expected 'ndiv a'");

    Mesh mesh = structured(RightTriangle::with_leg(a), ndiv);

    std::string kw;
    std::size_t count = 0;

    if (!(is >> kw >> count) || kw != "nodes" || count != mesh.nodes_.size())
        throw InvalidParameter("mesh file: bad node section");
    for (std::size_t k = 0; k < count; ++k) {
        double x, y;
        if (!(is >> x >> y)) throw InvalidParameter("mesh file: truncated node list");
        if (x != mesh.nodes_[k].x || y != mesh.nodes_[k].y)
            throw InvalidParameter("mesh file: node " + std::to_string(k) +
                                   " does not match the structured layout");
    }

    if (!(is >> kw >> count) || kw != "elements" || count != mesh.elements_.size())
        throw InvalidParameter("mesh file: bad element section");
    for (std::size_t k = 0; k < count; ++k) {
        int i, j, l;
        if (!(is >> i >> j >> l)) throw InvalidParameter("mesh file: truncated element list");
        if (i != mesh.elements_[k][0] || j != mesh.elements_[k][1] || l != mesh.elements_[k][2])
            throw InvalidParameter("mesh file: element " + std::to_string(k) +
                                   " does not match the structured layout");
    }

    if (!(is >> kw >> count) || kw != "boundary" || count != mesh.boundary_.size())
        throw InvalidParameter("mesh file: bad boundary section");
    for (std::size_t k = 0; k < count; ++k) {
        int i, j;
        std::string tag;
        if (!(is >> i >> j >> tag)) throw InvalidParameter("mesh file: truncated boundary list");
        if (i != mesh.boundary_[k].n0 || j != mesh.boundary_[k].n1 ||
            side_from_string(tag) != mesh.boundary_[k].side)
            throw InvalidParameter("mesh file: boundary edge " + std::to_string(k) +
                                   " does not match the structured layout");
    }

    return mesh;
}

}  // namespace trispec
