#include "trispec/convergence.hpp"

#include <algorithm>
#include <cmath>

namespace trispec {

double max_eigendiff(const std::vector<double>& coarse_lambdas,
                     const std::vector<double>& fine_lambdas, int count) {
    if (count < 1)
        throw InvalidParameter("max_eigendiff: count must be >= 1");
    if (count > static_cast<int>(coarse_lambdas.size()) ||
        count > static_cast<int>(fine_lambdas.size()))
        throw InvalidParameter("max_eigendiff: count exceeds available modes");
    double worst = 0.0;
    for (int i = 0; i < count; ++i)
        worst = std::max(worst, std::abs(coarse_lambdas[i] - fine_lambdas[i]));
    return worst;
}

ConvergenceReport compare_nested(const std::shared_ptr<const FemSystem>& coarse_sys,
                                 const SparseSym& coarse_M_int,
                                 const std::vector<EigenPair>& coarse_pairs,
                                 const std::shared_ptr<const FemSystem>& fine_sys,
                                 const std::vector<EigenPair>& fine_pairs, int count,
                                 double cluster_rel_gap) {
    const RightTriangle& tri = coarse_sys->mesh.triangle();
    if (fine_sys->mesh.ndiv() != 2 * coarse_sys->mesh.ndiv() ||
        fine_sys->mesh.triangle().a != tri.a || fine_sys->space.order != coarse_sys->space.order)
        throw InvalidParameter("compare_nested: fine level must be one refinement of the coarse");
    if (count > static_cast<int>(coarse_pairs.size()) ||
        count > static_cast<int>(fine_pairs.size()))
        throw InvalidParameter("compare_nested: count exceeds available modes");

    ConvergenceReport report;
    report.coarse_ndiv = coarse_sys->mesh.ndiv();
    report.fine_ndiv = fine_sys->mesh.ndiv();
    report.count = count;

    std::vector<double> lc(count), lf(count);
    for (int i = 0; i < count; ++i) {
        lc[i] = coarse_pairs[i].lambda;
        lf[i] = fine_pairs[i].lambda;
    }
    report.eigendiffs.resize(count);
    for (int i = 0; i < count; ++i) report.eigendiffs[i] = std::abs(lc[i] - lf[i]);
    report.max_eigendiff = *std::max_element(report.eigendiffs.begin(), report.eigendiffs.end());

    // Interpolate each fine function onto the coarse space: Lagrange dofs are
    // point values, and every coarse dof point is a fine mesh point.
    const auto& interior = coarse_sys->space.interior_dofs;
    const int nint = static_cast<int>(interior.size());
    std::vector<Eigen::VectorXd> fine_on_coarse(count);
    for (int i = 0; i < count; ++i) {
        const FemFunction ff = FemFunction::from_pair(fine_sys, fine_pairs[i]);
        Eigen::VectorXd v(nint);
        for (int d = 0; d < nint; ++d) {
            const Vec2 p = coarse_sys->space.dof_xy[interior[d]];
            v[d] = eval_fem(ff, p.x, p.y).value;
        }
        fine_on_coarse[i] = std::move(v);
    }

    const std::vector<int> ids = cluster_by_gap(lc, cluster_rel_gap);
    const auto m_dot = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return x.dot(coarse_M_int * y);
    };

    double diff_sum = 0.0;
    int i = 0;
    while (i < count) {
        int e = i;
        while (e + 1 < count && ids[e + 1] == ids[i]) ++e;
        if (e == i) {
            const Eigen::VectorXd& uc = coarse_pairs[i].coeffs;
            Eigen::VectorXd uf = fine_on_coarse[i];
            if (m_dot(uc, uf) < 0.0) uf = -uf;
            diff_sum += std::sqrt(std::max(0.0, m_dot(uc - uf, uc - uf)));
        } else {
            // Degenerate cluster: basis inside the eigenspace is arbitrary, so
            // measure each coarse member against the span of the cluster's
            // interpolated fine functions (principal-angle distance).
            std::vector<Eigen::VectorXd> basis;
            for (int k = i; k <= e; ++k) {
                Eigen::VectorXd v = fine_on_coarse[k];
                for (const auto& b : basis) v -= m_dot(b, v) * b;
                const double norm = std::sqrt(std::max(0.0, m_dot(v, v)));
                if (norm > 1e-10) basis.push_back(v / norm);
            }
            for (int k = i; k <= e; ++k) {
                Eigen::VectorXd r = coarse_pairs[k].coeffs;
                for (const auto& b : basis) r -= m_dot(b, r) * b;
                diff_sum += std::sqrt(std::max(0.0, m_dot(r, r)));
            }
        }
        i = e + 1;
    }
    report.l2_running_avg = diff_sum / count;
    return report;
}

}  // namespace trispec
