#pragma once

#include <vector>

#include "trispec/eigenfunction.hpp"

namespace trispec {

// Diagnostics between two refinement levels of the same triangle and order.
struct ConvergenceReport {
    int coarse_ndiv = 0;
    int fine_ndiv = 0;
    int count = 0;
    double max_eigendiff = 0.0;
    double l2_running_avg = 0.0;
    std::vector<double> eigendiffs;  // |lambda_coarse - lambda_fine| per index
};

// Max over the first `count` of |lambda_coarse - lambda_fine|.
// Throws when count exceeds either list.
double max_eigendiff(const std::vector<double>& coarse_lambdas,
                     const std::vector<double>& fine_lambdas, int count);

// Full comparison of nested levels (fine_ndiv == 2 * coarse_ndiv required).
// The fine eigenfunction is interpolated onto the coarse space (exact on
// nested meshes); signs are aligned by the mass inner product, and members of
// a degenerate coarse cluster are compared against the span of the cluster's
// interpolated fine functions instead of vector-by-vector.
// l2_running_avg is the mean of the per-index L2 differences.
ConvergenceReport compare_nested(const std::shared_ptr<const FemSystem>& coarse_sys,
                                 const SparseSym& coarse_M_int,
                                 const std::vector<EigenPair>& coarse_pairs,
                                 const std::shared_ptr<const FemSystem>& fine_sys,
                                 const std::vector<EigenPair>& fine_pairs, int count,
                                 double cluster_rel_gap = 1e-6);

}  // namespace trispec
