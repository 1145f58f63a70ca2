#include "trispec/domain.hpp"

#include <cmath>

namespace trispec {

const char* to_string(SideTag side) {
    switch (side) {
        case SideTag::F1: return "F1";
        case SideTag::F2: return "F2";
        case SideTag::F3: return "F3";
    }
    return "?";
}

SideTag side_from_string(const std::string& s) {
    if (s == "F1") return SideTag::F1;
    if (s == "F2") return SideTag::F2;
    if (s == "F3") return SideTag::F3;
    throw InvalidParameter("unknown side tag '" + s + "'");
}

RightTriangle RightTriangle::with_leg(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidParameter("triangle leg a must be positive, got " + std::to_string(a));
    RightTriangle tri;
    tri.a = a;
    tri.gamma = std::sqrt(1.0 + a * a);
    tri.area = a / 2.0;
    return tri;
}

double RightTriangle::side_length(SideTag side) const {
    switch (side) {
        case SideTag::F1: return 1.0;
        case SideTag::F2: return a;
        case SideTag::F3: return gamma;
    }
    return 0.0;
}

bool RightTriangle::contains(double x, double y, double tol) const {
    return x >= -tol && y >= -tol && x / a + y <= 1.0 + tol;
}

void StripSpec::validate(const RightTriangle& tri) const {
    if (!(delta > 0.0))
        throw InvalidParameter("strip delta must be positive");
    if (!(0.0 < lo() && lo() < hi() && hi() < tri.a))
        throw InvalidParameter("strip [" + std::to_string(lo()) + ", " + std::to_string(hi()) +
                               "] must satisfy 0 < beta - delta^2 < beta + delta + delta^2 < a");
}

Region StripSpec::region(const RightTriangle& tri) const {
    validate(tri);
    return Region::strip(lo(), hi());
}

double region_area(const RightTriangle& tri, const Region& region) {
    if (!(0.0 <= region.x_lo && region.x_lo <= region.x_hi && region.x_hi <= tri.a))
        throw InvalidParameter("region bounds must satisfy 0 <= x_lo <= x_hi <= a");
    const double h_lo = 1.0 - region.x_lo / tri.a;
    const double h_hi = 1.0 - region.x_hi / tri.a;
    return 0.5 * (h_lo + h_hi) * (region.x_hi - region.x_lo);
}

}  // namespace trispec
