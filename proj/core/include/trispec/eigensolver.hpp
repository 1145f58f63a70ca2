#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "trispec/fem.hpp"

namespace trispec {

struct EigenPair {
    double lambda = 0.0;      // eigenvalue of -Laplace, Rayleigh quotient of coeffs
    double h = 0.0;           // lambda^{-1/2}
    Eigen::VectorXd coeffs;   // interior dofs, M-normalized, first nonzero entry > 0
};

struct SolveOptions {
    // Acceptance: ||K u - lambda M u||_2 <= residual_tol * lambda * ||u||_M.
    double residual_tol = 1e-8;
    int window = 80;          // eigenpairs targeted per shift
    int max_windows = 64;
    unsigned seed = 0x5eedu;  // start vectors are pseudorandom but fixed
};

// Smallest `count` eigenpairs of K u = lambda M u (both SPD), via shift-invert
// Lanczos in the M-inner product with full reorthogonalization.  Converged
// pairs are locked and deflated; the shift advances window by window until
// `count` pairs are accepted.  Deterministic for fixed inputs and options.
// Throws SolverError on non-convergence, reporting the achieved count.
std::vector<EigenPair> solve_eigs(const SparseSym& K, const SparseSym& M, int count,
                                  const SolveOptions& options = {});

// Group a nondecreasing eigenvalue sequence into multiplicity clusters:
// consecutive values within relative gap `rel_gap` share a cluster.  Returns
// per-index cluster ids (the first member's index).
std::vector<int> cluster_by_gap(const std::vector<double>& lambdas, double rel_gap = 1e-6);
std::vector<int> cluster_sizes_from_ids(const std::vector<int>& ids);

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int achieved) : std::runtime_error(what), achieved_count(achieved) {}
    int achieved_count = 0;
};

// Versioned eigenpair container ("TRISPEC-EIG v1"): triangle leg, mesh ndiv,
// element order and the interior coefficient vectors of each pair.
struct EigArchive {
    double a = 1.0;
    int ndiv = 0;
    int order = 2;
    std::vector<EigenPair> pairs;
};

void save_archive(std::ostream& os, const EigArchive& archive);
EigArchive load_archive(std::istream& is);

}  // namespace trispec
