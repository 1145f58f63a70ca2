#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "trispec/eigenfunction.hpp"

namespace trispec {

enum class Direction { x, y };

// int_T |h d_dir u|^2 dV.  Analytic handles use frequency-aware panel
// quadrature; FEM handles use elementwise rules exact for the polynomial
// integrand.
double volume_energy(const EigenFunction& u, Direction dir);

// int_side |h d_nu u|^2 dS.  FEM Neumann data is the gradient trace of the
// element adjacent to each boundary edge.
double side_neumann(const EigenFunction& u, SideTag side);

// Same integral restricted to the side's natural coordinate interval
// [lo, hi] (y on F1, x on F2 and F3).  Throws on inverted bounds.
double partial_neumann(const EigenFunction& u, SideTag side, double lo, double hi);

// Fraction of the F2 Neumann mass on [0, split]; split defaults to a/2.
// prop_left + prop_right = 1 by construction.
double prop_left(const EigenFunction& u);
double prop_left(const EigenFunction& u, double split);

// gamma^{-1} int_{F3} w(x) |h d_nu u|^2 dS.  Breakpoints split quadrature
// panels where w is only piecewise smooth.
double weighted_boundary_F3(const EigenFunction& u, const std::function<double(double)>& weight,
                            const std::vector<double>& breakpoints = {});

// int_region |u|^2 dV over a vertical strip (or the whole triangle).
double spatial_mass(const EigenFunction& u, const Region& region);

// Smooth plateau cutoff used by the commutator check: chi = 0 left of
// beta - delta^2, chi = 1 right of beta + delta + delta^2, quintic C^2 ramps
// of width delta^2 and a linear middle on [beta, beta + delta].  chi' >= 0 and
// the middle slope is 1/(delta (1 + delta)), within O(1) of 1/delta (exact
// slope 1/delta is incompatible with total rise 1 once the ramps are C^2 and
// monotone).
struct CutoffSpec {
    double beta = 0.0;
    double delta = 0.0;

    double lo() const { return beta - delta * delta; }
    double hi() const { return beta + delta + delta * delta; }
    double slope() const { return 1.0 / (delta * (1.0 + delta)); }

    double chi(double x) const;
    double dchi(double x) const;

    void validate(const RightTriangle& tri) const;
};

// Both sides of the commutator identity
//   2 int chi' |h d_x u|^2 dV  =  gamma^{-1} int_{F3} chi |h d_nu u|^2 dS + O(h):
// residual = lhs - rhs, which decays like h on analytic eigenfunctions.
struct RellichCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

RellichCheck rellich_cutoff_check(const EigenFunction& u, const CutoffSpec& spec);

// Per-eigenfunction record of every boundary/volume metric.
struct EigenMetrics {
    int index = 0;
    double lambda = 0.0;
    double h = 0.0;
    double x_volume = 0.0;
    double y_volume = 0.0;
    double neumann_F1 = 0.0;
    double neumann_F2 = 0.0;
    double neumann_F3 = 0.0;
    double prop_left = 0.0;
    double weighted_x_F3 = 0.0;
    int cluster_id = 0;
    bool basis_dependent = false;
};

struct MetricsOptions {
    std::optional<double> split;      // default a/2
    bool closed_form_analytic = true; // analytic single modes via exact formulas
    double cluster_rel_gap = 1e-6;
    int threads = 1;                  // parallel over eigenfunctions, slot writes
};

// Campaign over a lambda-ascending list of eigenfunctions.  Cluster ids come
// from exact integer ties (analytic) or the relative-gap rule (FEM);
// basis_dependent marks members of non-trivial clusters.
std::vector<EigenMetrics> compute_metrics(const std::vector<EigenFunction>& fns,
                                          const MetricsOptions& options = {});

// CSV with header index,lambda,h,x_volume,y_volume,neumann_F1,neumann_F2,
// neumann_F3,prop_left,weighted_x_F3,cluster_id,basis_dependent.
void write_metrics_csv(std::ostream& os, const std::vector<EigenMetrics>& rows);
std::vector<EigenMetrics> read_metrics_csv(std::istream& is);

}  // namespace trispec
