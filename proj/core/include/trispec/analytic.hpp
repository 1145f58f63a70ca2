#pragma once

#include <vector>

#include "trispec/domain.hpp"

namespace trispec {

// Closed-form Dirichlet eigenfunctions on the right isosceles triangle
// (a = 1):  u_mn = c*sin(n pi x)*sin(m pi y) + d*sin(m pi x)*sin(n pi y),
// m != n, with |c| = |d| = 2 (unit L2 norm on the triangle).  The relative
// sign is forced by the boundary condition on the hypotenuse: c = d when m, n
// have opposite parity, c = -d when they share parity.  Canonically c = +2.
struct ModeIndex {
    int m = 1;
    int n = 2;
    double c = 2.0;
    double d = 2.0;

    static ModeIndex canonical(int m, int n);  // requires m, n >= 1 and m != n
};

struct AnalyticEigenvalue {
    double lambda = 0.0;  // pi^2 (m^2 + n^2)
    double h = 0.0;       // lambda^{-1/2}

    static AnalyticEigenvalue of(const ModeIndex& mode);
};

struct AnalyticMode {
    ModeIndex index;
    AnalyticEigenvalue eig;
    int cluster_id = 0;    // shared by modes with equal m^2 + n^2
    int cluster_size = 1;
};

// First `count` modes {(m,n): m < n} sorted by ascending eigenvalue; exact
// integer ties grouped into multiplicity clusters.
std::vector<AnalyticMode> enumerate_modes(int count);

struct PointEval {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

PointEval eval_mode(const ModeIndex& mode, double x, double y);

// Normalized Neumann mass on the left half of the bottom side,
//   I_l = 1/2 * int_0^{1/2} |h d_nu u(x,0)|^2 dx,
// in closed form; I_r = 1 - I_l.  Exactly 1/2 whenever m + n is even.
double exact_Il(const ModeIndex& mode);

// Limit of I_l(m, m+j) as m -> infinity for odd gap j:
//   1/2 * (1 + delta(j) * 2/(j pi)),  delta(j) = +1 if j = 1 (mod 4), else -1.
double asymptotic_Il_limit(int j);

// Reference computation on the square [0, pi]^2: for u = (2/pi) sin(mx)sin(ny)
// the x-direction energy int |h d_x u|^2 dV equals h^2 m^2 = m^2/(m^2 + n^2).
double square_mode_x_energy(int m, int n);

}  // namespace trispec
