#pragma once

#include <stdexcept>
#include <string>

namespace trispec {

// Right triangle with vertices (0,0), (a,0), (0,1).  Sides are tagged:
//   F1 = vertical leg   {x = 0},        length 1
//   F2 = horizontal leg {y = 0},        length a
//   F3 = hypotenuse     {x/a + y = 1},  length gamma = sqrt(1 + a^2)
enum class SideTag { F1, F2, F3 };

const char* to_string(SideTag side);
SideTag side_from_string(const std::string& s);

struct RightTriangle {
    double a = 1.0;
    double gamma = 0.0;  // sqrt(1 + a^2)
    double area = 0.0;   // a / 2

    static RightTriangle with_leg(double a);

    double side_length(SideTag side) const;

    // Closed triangle membership, tolerance in the x/a + y <= 1 constraint.
    bool contains(double x, double y, double tol = 1e-12) const;
};

// Vertical strip {x_lo <= x <= x_hi} intersected with the triangle.
// x_lo = 0, x_hi = a gives the whole triangle.
struct Region {
    double x_lo = 0.0;
    double x_hi = 0.0;

    static Region whole(const RightTriangle& tri) { return {0.0, tri.a}; }
    static Region strip(double x_lo, double x_hi) { return {x_lo, x_hi}; }
};

// Strip around x = beta with ramp margins delta^2 on each side:
// {beta - delta^2 <= x <= beta + delta + delta^2}.
struct StripSpec {
    double beta = 0.0;
    double delta = 0.0;

    double lo() const { return beta - delta * delta; }
    double hi() const { return beta + delta + delta * delta; }

    // Requires 0 < lo < hi < a.
    void validate(const RightTriangle& tri) const;
    Region region(const RightTriangle& tri) const;
};

// Exact trapezoid area of the strip region:
//   [(1 - x_lo/a) + (1 - x_hi/a)] * (x_hi - x_lo) / 2.
double region_area(const RightTriangle& tri, const Region& region);

// Thrown on precondition violations (bad parameters, inverted bounds, ...).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace trispec
