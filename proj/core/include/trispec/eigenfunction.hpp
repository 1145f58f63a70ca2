#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <variant>
#include <vector>

#include "trispec/analytic.hpp"
#include "trispec/eigensolver.hpp"
#include "trispec/fem.hpp"
#include "trispec/mesh.hpp"

namespace trispec {

// Mesh + finite-element space + assembled operators shared by all
// eigenfunctions of one solve.  Holds the factorized boundary-trace mass
// matrix used for consistent Neumann flux recovery.
class FemSystem {
public:
    Mesh mesh;
    FemSpace space;
    SparseSym K;  // full-dof stiffness
    SparseSym M;  // full-dof mass
    std::vector<int> boundary_index;  // dof -> boundary position, -1 inside

    FemSystem(Mesh m, FemSpace s, SparseSym k, SparseSym mass);

    static std::shared_ptr<const FemSystem> build(const RightTriangle& tri, int ndiv, int order);

    // Solve the boundary-trace mass system B g = r.
    Eigen::VectorXd recover_flux(const Eigen::VectorXd& boundary_residual) const;

private:
    Eigen::SimplicialLDLT<SparseSym> trace_mass_;
};

// Discrete eigenfunction: full dof coefficient vector (boundary dofs zero)
// plus the recovered boundary Neumann flux.  The flux solves
//   int_dOmega g v dS = a(u,v) - lambda (u,v)  for all boundary trace v,
// which converges faster than the elementwise gradient trace.
struct FemFunction {
    std::shared_ptr<const FemSystem> system;
    Eigen::VectorXd coeffs;         // all dofs
    Eigen::VectorXd boundary_flux;  // indexed like space.boundary_dofs
    double lambda = 0.0;
    double h = 0.0;

    static FemFunction from_pair(std::shared_ptr<const FemSystem> system, const EigenPair& pair);

    // Recovered flux along boundary edge b at parameter s in [0,1] (from the
    // edge's first node to its second).
    double edge_flux(int edge, double s) const;
};

// Value and gradient of a FEM function at a point (element located through
// the structured mesh).  Throws InvalidParameter outside the domain.
PointEval eval_fem(const FemFunction& f, double x, double y);
// Same, with the element known (gradient is elementwise polynomial).
PointEval eval_fem_in_element(const FemFunction& f, int element, double x, double y);

// Closed-form eigenfunction on a = 1, possibly a linear combination of modes
// sharing one eigenvalue (degenerate-cluster rotations).
struct AnalyticFunction {
    struct Term {
        double coeff = 1.0;
        ModeIndex mode;
    };
    std::vector<Term> terms;
    double lambda = 0.0;
    double h = 0.0;
    int max_freq = 1;  // max of all m, n; drives quadrature panel sizing

    static AnalyticFunction from_mode(const ModeIndex& mode);
    static AnalyticFunction combination(const std::vector<Term>& terms);
};

PointEval eval_analytic(const AnalyticFunction& f, double x, double y);

// Uniform handle over both eigenfunction sources.
class EigenFunction {
public:
    explicit EigenFunction(AnalyticFunction f) : impl_(std::move(f)) {}
    explicit EigenFunction(FemFunction f) : impl_(std::move(f)) {}

    double lambda() const;
    double h() const;
    PointEval eval(double x, double y) const;
    RightTriangle triangle() const;

    bool is_analytic() const { return std::holds_alternative<AnalyticFunction>(impl_); }
    const AnalyticFunction& analytic() const { return std::get<AnalyticFunction>(impl_); }
    const FemFunction& fem() const { return std::get<FemFunction>(impl_); }

private:
    std::variant<AnalyticFunction, FemFunction> impl_;
};

}  // namespace trispec
