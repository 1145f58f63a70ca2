#include "trispec/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trispec/quadrature.hpp"

namespace trispec {

void shape_functions(int order, double xi, double eta, double* N, double* dN) {
    const double l0 = 1.0 - xi - eta;
    const double l1 = xi;
    const double l2 = eta;
    if (order == 1) {
        N[0] = l0; N[1] = l1; N[2] = l2;
        dN[0] = -1.0; dN[1] = -1.0;
        dN[2] = 1.0;  dN[3] = 0.0;
        dN[4] = 0.0;  dN[5] = 1.0;
        return;
    }
    N[0] = l0 * (2.0 * l0 - 1.0);
    N[1] = l1 * (2.0 * l1 - 1.0);
    N[2] = l2 * (2.0 * l2 - 1.0);
    N[3] = 4.0 * l0 * l1;
    N[4] = 4.0 * l1 * l2;
    N[5] = 4.0 * l2 * l0;
    const double g0[2] = {-1.0, -1.0}, g1[2] = {1.0, 0.0}, g2[2] = {0.0, 1.0};
    for (int k = 0; k < 2; ++k) {
        dN[0 + k] = (4.0 * l0 - 1.0) * g0[k];
        dN[2 + k] = (4.0 * l1 - 1.0) * g1[k];
        dN[4 + k] = (4.0 * l2 - 1.0) * g2[k];
        dN[6 + k] = 4.0 * (l1 * g0[k] + l0 * g1[k]);
        dN[8 + k] = 4.0 * (l2 * g1[k] + l1 * g2[k]);
        dN[10 + k] = 4.0 * (l0 * g2[k] + l2 * g0[k]);
    }
}

namespace {

FemSpace build_space(const Mesh& mesh, int order) {
    if (order != 1 && order != 2)
        throw InvalidParameter("element order must be 1 or 2");

    FemSpace space;
    space.order = order;
    const auto& nodes = mesh.nodes();
    space.dof_xy.assign(nodes.begin(), nodes.end());
    space.elem_dofs.resize(mesh.elements().size());

    std::map<std::pair<int, int>, int> edge_dof;
    const auto edge_key = [](int u, int v) {
        return std::make_pair(std::min(u, v), std::max(u, v));
    };

    for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
        const auto& el = mesh.elements()[e];
        auto& dofs = space.elem_dofs[e];
        dofs = {el[0], el[1], el[2], -1, -1, -1};
        if (order == 2) {
            const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
            for (int s = 0; s < 3; ++s) {
                const auto key = edge_key(el[pairs[s][0]], el[pairs[s][1]]);
                auto it = edge_dof.find(key);
                if (it == edge_dof.end()) {
                    const int id = static_cast<int>(space.dof_xy.size());
                    const Vec2& p = nodes[key.first];
                    const Vec2& q = nodes[key.second];
                    space.dof_xy.push_back({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
                    it = edge_dof.emplace(key, id).first;
                }
                dofs[3 + s] = it->second;
            }
        }
    }
    space.ndof = static_cast<int>(space.dof_xy.size());

    std::vector<char> on_boundary(space.ndof, 0);
    space.boundary_edge_mid_dof.assign(mesh.boundary_edges().size(), -1);
    for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) {
        const auto& be = mesh.boundary_edges()[b];
        on_boundary[be.n0] = 1;
        on_boundary[be.n1] = 1;
        if (order == 2) {
            const int mid = edge_dof.at(edge_key(be.n0, be.n1));
            on_boundary[mid] = 1;
            space.boundary_edge_mid_dof[b] = mid;
        }
    }

    space.interior_index.assign(space.ndof, -1);
    for (int d = 0; d < space.ndof; ++d) {
        if (on_boundary[d]) {
            space.boundary_dofs.push_back(d);
        } else {
            space.interior_index[d] = static_cast<int>(space.interior_dofs.size());
            space.interior_dofs.push_back(d);
        }
    }
    return space;
}

}  // namespace

Assembled assemble(const Mesh& mesh, int order) {
    Assembled out;
    out.space = build_space(mesh, order);
    const FemSpace& space = out.space;
    const int nd = space.dofs_per_element();

    const TriangleRule& stiff_rule = triangle_rule(order == 1 ? 1 : 2);
    const TriangleRule& mass_rule = triangle_rule(order == 1 ? 2 : 4);

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(mesh.elements().size() * nd * nd);
    mt.reserve(mesh.elements().size() * nd * nd);

    double N[6], dN[12];
    for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
        const auto& el = mesh.elements()[e];
        const Vec2& p0 = mesh.nodes()[el[0]];
        const Vec2& p1 = mesh.nodes()[el[1]];
        const Vec2& p2 = mesh.nodes()[el[2]];
        const double jxx = p1.x - p0.x, jxy = p2.x - p0.x;
        const double jyx = p1.y - p0.y, jyy = p2.y - p0.y;
        const double det = jxx * jyy - jxy * jyx;
        if (!(det > 1e-14 * (std::abs(jxx) + std::abs(jxy)) * (std::abs(jyx) + std::abs(jyy))) ||
            !std::isfinite(det))
            throw AssemblyError("degenerate element " + std::to_string(e));
        // Rows of J^{-T}: grad_x N = itx . grad_ref N, grad_y N = ity . grad_ref N.
        const double itx[2] = {jyy / det, -jyx / det};
        const double ity[2] = {-jxy / det, jxx / det};

        double Ke[36] = {0}, Me[36] = {0};
        for (std::size_t q = 0; q < stiff_rule.w.size(); ++q) {
            shape_functions(order, stiff_rule.xi[q], stiff_rule.eta[q], N, dN);
            const double w = stiff_rule.w[q] * det;
            double gx[6], gy[6];
            for (int i = 0; i < nd; ++i) {
                gx[i] = itx[0] * dN[2 * i] + itx[1] * dN[2 * i + 1];
                gy[i] = ity[0] * dN[2 * i] + ity[1] * dN[2 * i + 1];
            }
            for (int i = 0; i < nd; ++i)
                for (int j = 0; j < nd; ++j)
                    Ke[i * nd + j] += w * (gx[i] * gx[j] + gy[i] * gy[j]);
        }
        for (std::size_t q = 0; q < mass_rule.w.size(); ++q) {
            shape_functions(order, mass_rule.xi[q], mass_rule.eta[q], N, dN);
            const double w = mass_rule.w[q] * det;
            for (int i = 0; i < nd; ++i)
                for (int j = 0; j < nd; ++j)
                    Me[i * nd + j] += w * N[i] * N[j];
        }
        for (int i = 0; i < nd; ++i)
            for (int j = 0; j < nd; ++j) {
                kt.emplace_back(space.elem_dofs[e][i], space.elem_dofs[e][j], Ke[i * nd + j]);
                mt.emplace_back(space.elem_dofs[e][i], space.elem_dofs[e][j], Me[i * nd + j]);
            }
    }

    out.K.resize(space.ndof, space.ndof);
    out.M.resize(space.ndof, space.ndof);
    out.K.setFromTriplets(kt.begin(), kt.end());
    out.M.setFromTriplets(mt.begin(), mt.end());
    out.K.makeCompressed();
    out.M.makeCompressed();
    return out;
}

Reduced reduce_dirichlet(const Assembled& assembled) {
    const FemSpace& space = assembled.space;
    const int nint = static_cast<int>(space.interior_dofs.size());
    if (nint == 0)
        throw InvalidParameter("no interior dofs: refine the mesh (ndiv too small for order " +
                               std::to_string(space.order) + ")");

    const auto extract = [&](const SparseSym& A) {
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(A.nonZeros());
        for (int col = 0; col < A.outerSize(); ++col) {
            const int jc = space.interior_index[col];
            if (jc < 0) continue;
            for (SparseSym::InnerIterator it(A, col); it; ++it) {
                const int ir = space.interior_index[it.row()];
                if (ir >= 0) t.emplace_back(ir, jc, it.value());
            }
        }
        SparseSym S(nint, nint);
        S.setFromTriplets(t.begin(), t.end());
        S.makeCompressed();
        return S;
    };

    return {extract(assembled.K), extract(assembled.M)};
}

}  // namespace trispec
