#include "trispec/eigenfunction.hpp"

#include <algorithm>
#include <cmath>

namespace trispec {

FemSystem::FemSystem(Mesh m, FemSpace s, SparseSym k, SparseSym mass)
    : mesh(std::move(m)), space(std::move(s)), K(std::move(k)), M(std::move(mass)) {
    boundary_index.assign(space.ndof, -1);
    for (std::size_t i = 0; i < space.boundary_dofs.size(); ++i)
        boundary_index[space.boundary_dofs[i]] = static_cast<int>(i);

    // Boundary-trace mass matrix, one quadratic (or linear) patch per edge.
    const int nb = static_cast<int>(space.boundary_dofs.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) {
        const BoundaryEdge& be = mesh.boundary_edges()[b];
        const Vec2& p = mesh.nodes()[be.n0];
        const Vec2& q = mesh.nodes()[be.n1];
        const double len = std::hypot(q.x - p.x, q.y - p.y);
        if (space.order == 1) {
            const int d[2] = {boundary_index[be.n0], boundary_index[be.n1]};
            const double m[2][2] = {{2, 1}, {1, 2}};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    triplets.emplace_back(d[i], d[j], len / 6.0 * m[i][j]);
        } else {
            const int d[3] = {boundary_index[be.n0], boundary_index[be.n1],
                              boundary_index[space.boundary_edge_mid_dof[b]]};
            const double m[3][3] = {{4, -1, 2}, {-1, 4, 2}, {2, 2, 16}};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    triplets.emplace_back(d[i], d[j], len / 30.0 * m[i][j]);
        }
    }
    SparseSym B(nb, nb);
    B.setFromTriplets(triplets.begin(), triplets.end());
    B.makeCompressed();
    trace_mass_.compute(B);
    if (trace_mass_.info() != Eigen::Success)
        throw AssemblyError("boundary trace mass factorization failed");
}

Eigen::VectorXd FemSystem::recover_flux(const Eigen::VectorXd& boundary_residual) const {
    return trace_mass_.solve(boundary_residual);
}

std::shared_ptr<const FemSystem> FemSystem::build(const RightTriangle& tri, int ndiv, int order) {
    Mesh mesh = Mesh::structured(tri, ndiv);
    Assembled assembled = assemble(mesh, order);
    return std::make_shared<FemSystem>(std::move(mesh), std::move(assembled.space),
                                       std::move(assembled.K), std::move(assembled.M));
}

FemFunction FemFunction::from_pair(std::shared_ptr<const FemSystem> system,
                                   const EigenPair& pair) {
    FemFunction f;
    f.lambda = pair.lambda;
    f.h = pair.h;
    f.coeffs = Eigen::VectorXd::Zero(system->space.ndof);
    const auto& interior = system->space.interior_dofs;
    if (pair.coeffs.size() != static_cast<Eigen::Index>(interior.size()))
        throw InvalidParameter("eigenpair coefficient count does not match the space");
    for (std::size_t i = 0; i < interior.size(); ++i) f.coeffs[interior[i]] = pair.coeffs[i];

    const Eigen::VectorXd residual =
        system->K * f.coeffs - pair.lambda * (system->M * f.coeffs);
    Eigen::VectorXd rb(system->space.boundary_dofs.size());
    for (std::size_t i = 0; i < system->space.boundary_dofs.size(); ++i)
        rb[i] = residual[system->space.boundary_dofs[i]];
    f.boundary_flux = system->recover_flux(rb);

    f.system = std::move(system);
    return f;
}

double FemFunction::edge_flux(int edge, double s) const {
    const BoundaryEdge& be = system->mesh.boundary_edges()[edge];
    const double g0 = boundary_flux[system->boundary_index[be.n0]];
    const double g1 = boundary_flux[system->boundary_index[be.n1]];
    if (system->space.order == 1) return g0 * (1.0 - s) + g1 * s;
    const double gm = boundary_flux[system->boundary_index[
        system->space.boundary_edge_mid_dof[edge]]];
    return g0 * (1.0 - s) * (1.0 - 2.0 * s) + g1 * s * (2.0 * s - 1.0) + gm * 4.0 * s * (1.0 - s);
}

PointEval eval_fem_in_element(const FemFunction& f, int element, double x, double y) {
    const Mesh& mesh = f.system->mesh;
    const FemSpace& space = f.system->space;
    const auto& el = mesh.elements()[element];
    const Vec2& p0 = mesh.nodes()[el[0]];
    const Vec2& p1 = mesh.nodes()[el[1]];
    const Vec2& p2 = mesh.nodes()[el[2]];
    const double jxx = p1.x - p0.x, jxy = p2.x - p0.x;
    const double jyx = p1.y - p0.y, jyy = p2.y - p0.y;
    const double det = jxx * jyy - jxy * jyx;
    const double xi = (jyy * (x - p0.x) - jxy * (y - p0.y)) / det;
    const double eta = (-jyx * (x - p0.x) + jxx * (y - p0.y)) / det;

    double N[6], dN[12];
    shape_functions(space.order, xi, eta, N, dN);
    const double itx[2] = {jyy / det, -jyx / det};
    const double ity[2] = {-jxy / det, jxx / det};

    PointEval e;
    const int nd = space.dofs_per_element();
    for (int k = 0; k < nd; ++k) {
        const double c = f.coeffs[space.elem_dofs[element][k]];
        e.value += c * N[k];
        e.dx += c * (itx[0] * dN[2 * k] + itx[1] * dN[2 * k + 1]);
        e.dy += c * (ity[0] * dN[2 * k] + ity[1] * dN[2 * k + 1]);
    }
    return e;
}

PointEval eval_fem(const FemFunction& f, double x, double y) {
    return eval_fem_in_element(f, f.system->mesh.locate(x, y), x, y);
}

AnalyticFunction AnalyticFunction::from_mode(const ModeIndex& mode) {
    return combination({{1.0, mode}});
}

AnalyticFunction AnalyticFunction::combination(const std::vector<Term>& terms) {
    if (terms.empty())
        throw InvalidParameter("analytic combination needs at least one term");
    AnalyticFunction f;
    f.terms = terms;
    const long s0 = static_cast<long>(terms[0].mode.m) * terms[0].mode.m +
                    static_cast<long>(terms[0].mode.n) * terms[0].mode.n;
    for (const auto& t : terms) {
        const long s = static_cast<long>(t.mode.m) * t.mode.m +
                       static_cast<long>(t.mode.n) * t.mode.n;
        if (s != s0)
            throw InvalidParameter("combined modes must share one eigenvalue");
        f.max_freq = std::max({f.max_freq, t.mode.m, t.mode.n});
    }
    const AnalyticEigenvalue eig = AnalyticEigenvalue::of(terms[0].mode);
    f.lambda = eig.lambda;
    f.h = eig.h;
    return f;
}

PointEval eval_analytic(const AnalyticFunction& f, double x, double y) {
    PointEval e;
    for (const auto& t : f.terms) {
        const PointEval p = eval_mode(t.mode, x, y);
        e.value += t.coeff * p.value;
        e.dx += t.coeff * p.dx;
        e.dy += t.coeff * p.dy;
    }
    return e;
}

double EigenFunction::lambda() const {
    return std::visit([](const auto& f) { return f.lambda; }, impl_);
}

double EigenFunction::h() const {
    return std::visit([](const auto& f) { return f.h; }, impl_);
}

PointEval EigenFunction::eval(double x, double y) const {
    if (is_analytic()) return eval_analytic(analytic(), x, y);
    return eval_fem(fem(), x, y);
}

RightTriangle EigenFunction::triangle() const {
    if (is_analytic()) return RightTriangle::with_leg(1.0);
    return fem().system->mesh.triangle();
}

}  // namespace trispec
