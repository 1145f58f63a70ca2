#pragma once

#include <functional>
#include <vector>

#include "trispec/domain.hpp"

namespace trispec {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
// iteration on the Legendre recurrence and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// Integrate f over [a, b] with `panels` equal subintervals, Gauss order
// `order` per panel.
double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels,
                    int order = 10);

// Panel count resolving an oscillation of `frequency` full periods per unit
// length: panel width <= 1/(4*frequency).
int panels_for_frequency(double length, int frequency);

// Symmetric quadrature rule on the reference triangle (0,0),(1,0),(0,1).
// Points in (xi, eta), weights summing to 1/2.  Exact for polynomials of the
// stated total degree.
struct TriangleRule {
    std::vector<double> xi;
    std::vector<double> eta;
    std::vector<double> w;
};

const TriangleRule& triangle_rule(int degree);  // degree in {1, 2, 4, 5}

}  // namespace trispec
