#include "trispec/eigensolver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "trispec/textio.hpp"

namespace trispec {

namespace {

using Vector = Eigen::VectorXd;

Vector deterministic_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = static_cast<double>(rng() >> 5) / static_cast<double>(1u << 27) - 1.0;
    return v;
}

struct Basis {
    std::vector<Vector> v;   // M-orthonormal
    std::vector<Vector> mv;  // M * v, cached for inner products
};

// Two-pass classical Gram-Schmidt of w against one or more bases.
void orthogonalize(Vector& w, const std::vector<const Basis*>& bases) {
    for (int pass = 0; pass < 2; ++pass)
        for (const Basis* b : bases)
            for (std::size_t i = 0; i < b->v.size(); ++i)
                w -= b->mv[i].dot(w) * b->v[i];
}

}  // namespace

std::vector<EigenPair> solve_eigs(const SparseSym& K, const SparseSym& M, int count,
                                  const SolveOptions& options) {
    const int n = static_cast<int>(K.rows());
    if (count < 1)
        throw InvalidParameter("eigenpair count must be >= 1");
    if (count > n)
        throw InvalidParameter("requested " + std::to_string(count) + " eigenpairs of a " +
                               std::to_string(n) + "-dimensional problem");

    Basis locked;
    std::vector<double> locked_lambda;

    double sigma = 0.0;
    unsigned seed_step = 0;

    for (int window = 0; window < options.max_windows; ++window) {
        const int accepted = static_cast<int>(locked.v.size());
        if (accepted >= count) break;

        const int target = std::min(count - accepted, options.window);
        const int kdim = std::min(n - accepted, std::max(3 * target + 40, 120));

        // Factor K - sigma*M; nudge the shift if it lands on an eigenvalue.
        Eigen::SparseLU<SparseSym> lu;
        double sig = sigma;
        for (int attempt = 0;; ++attempt) {
            SparseSym A = K - sig * M;
            A.makeCompressed();
            lu.compute(A);
            if (lu.info() == Eigen::Success) break;
            if (attempt >= 5)
                throw SolverError("factorization failed near shift " + std::to_string(sig),
                                  accepted);
            sig = (sig == 0.0) ? -1.0 : sig * (1.0 + 1e-3) + 1e-8;
        }

        // Lanczos on OP = (K - sigma M)^{-1} M in the M-inner product, locked
        // vectors deflated.  A zero beta starts a fresh block (T keeps a zero
        // off-diagonal entry, which the dense solve below handles fine).
        Basis basis;
        std::vector<double> alpha, beta;
        basis.v.reserve(kdim);
        basis.mv.reserve(kdim);

        Vector v = deterministic_vector(n, options.seed + 977u * seed_step++);
        {
            orthogonalize(v, {&locked});
            const double norm = std::sqrt(v.dot(M * v));
            if (norm <= 0.0) throw SolverError("degenerate start vector", accepted);
            v /= norm;
        }

        for (int j = 0; j < kdim; ++j) {
            basis.v.push_back(v);
            basis.mv.push_back(M * v);
            Vector w = lu.solve(basis.mv[j]);
            const double a_j = basis.mv[j].dot(w);
            alpha.push_back(a_j);
            w -= a_j * basis.v[j];
            if (j > 0) w -= beta[j - 1] * basis.v[j - 1];
            orthogonalize(w, {&basis, &locked});
            double b_j = std::sqrt(std::max(0.0, w.dot(M * w)));
            if (b_j < 1e-12) {
                // Invariant subspace hit: continue from a fresh direction.
                w = deterministic_vector(n, options.seed + 977u * seed_step++);
                orthogonalize(w, {&basis, &locked});
                const double norm = std::sqrt(std::max(0.0, w.dot(M * w)));
                if (norm < 1e-12) break;  // space exhausted
                w /= norm;
                b_j = 0.0;
            } else {
                w /= b_j;
            }
            if (j + 1 < kdim) beta.push_back(b_j);
            v = w;
        }

        const int mdim = static_cast<int>(basis.v.size());
        if (mdim == 0) break;

        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mdim, mdim);
        for (int i = 0; i < mdim; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < mdim) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

        // Ritz values nu map back to lambda = sigma + 1/nu; gather positive-
        // lambda candidates in ascending lambda order.
        std::vector<std::pair<double, int>> cand;
        for (int i = 0; i < mdim; ++i) {
            const double nu = es.eigenvalues()[i];
            if (std::abs(nu) < 1e-300) continue;
            const double lambda = sig + 1.0 / nu;
            if (lambda > 0.0) cand.emplace_back(lambda, i);
        }
        std::sort(cand.begin(), cand.end());

        // Accept ascending until the first unconverged candidate; anything
        // above it may sit over a hole in the spectrum.
        int newly = 0;
        for (const auto& [lambda, col] : cand) {
            if (static_cast<int>(locked.v.size()) >= count + 2) break;
            Vector u = Vector::Zero(n);
            for (int i = 0; i < mdim; ++i) u += es.eigenvectors()(i, col) * basis.v[i];
            Vector mu = M * u;
            const double unorm = std::sqrt(u.dot(mu));
            if (unorm < 1e-8) continue;
            u /= unorm;
            mu /= unorm;
            const double residual = (K * u - lambda * mu).norm();
            if (residual > options.residual_tol * lambda) break;
            locked.v.push_back(std::move(u));
            locked.mv.push_back(std::move(mu));
            locked_lambda.push_back(lambda);
            ++newly;
        }

        if (newly == 0 && static_cast<int>(locked.v.size()) < count)
            throw SolverError("eigensolver stalled at shift " + std::to_string(sig) + " with " +
                                  std::to_string(locked.v.size()) + " of " +
                                  std::to_string(count) + " pairs converged",
                              static_cast<int>(locked.v.size()));

        sigma = *std::max_element(locked_lambda.begin(), locked_lambda.end()) * 1.01;
    }

    if (static_cast<int>(locked.v.size()) < count)
        throw SolverError("eigensolver window cap reached with " +
                              std::to_string(locked.v.size()) + " of " + std::to_string(count) +
                              " pairs converged",
                          static_cast<int>(locked.v.size()));

    std::vector<int> order(locked.v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return locked_lambda[a] < locked_lambda[b]; });
    order.resize(count);

    std::vector<EigenPair> pairs;
    pairs.reserve(count);
    for (int idx : order) {
        EigenPair p;
        p.coeffs = std::move(locked.v[idx]);
        // Exact M-normalization, then lambda as the Rayleigh quotient so the
        // discrete identities (u'Mu = 1, u'Ku = lambda) hold to roundoff.
        const double mnorm = std::sqrt(p.coeffs.dot(M * p.coeffs));
        p.coeffs /= mnorm;
        p.lambda = p.coeffs.dot(K * p.coeffs);
        p.h = 1.0 / std::sqrt(p.lambda);
        const double scale = p.coeffs.cwiseAbs().maxCoeff();
        for (int i = 0; i < p.coeffs.size(); ++i) {
            if (std::abs(p.coeffs[i]) > 1e-12 * scale) {
                if (p.coeffs[i] < 0.0) p.coeffs = -p.coeffs;
                break;
            }
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::vector<int> cluster_by_gap(const std::vector<double>& lambdas, double rel_gap) {
    std::vector<int> ids(lambdas.size(), 0);
    std::size_t k = 0;
    while (k < lambdas.size()) {
        std::size_t e = k;
        while (e + 1 < lambdas.size() &&
               lambdas[e + 1] - lambdas[e] <= rel_gap * std::abs(lambdas[e]))
            ++e;
        for (std::size_t i = k; i <= e; ++i) ids[i] = static_cast<int>(k);
        k = e + 1;
    }
    return ids;
}

std::vector<int> cluster_sizes_from_ids(const std::vector<int>& ids) {
    std::vector<int> sizes(ids.size(), 1);
    std::size_t k = 0;
    while (k < ids.size()) {
        std::size_t e = k;
        while (e + 1 < ids.size() && ids[e + 1] == ids[k]) ++e;
        for (std::size_t i = k; i <= e; ++i) sizes[i] = static_cast<int>(e - k + 1);
        k = e + 1;
    }
    return sizes;
}

void save_archive(std::ostream& os, const EigArchive& archive) {
    os << "TRISPEC-EIG v1\n";
    const int dim = archive.pairs.empty() ? 0 : static_cast<int>(archive.pairs[0].coeffs.size());
    os << "a " << fmt_double(archive.a) << " ndiv " << archive.ndiv << " order " << archive.order
       << " count " << archive.pairs.size() << " dim " << dim << '\n';
    for (const auto& p : archive.pairs) {
        os << "lambda " << fmt_double(p.lambda) << '\n';
        for (int i = 0; i < p.coeffs.size(); ++i) {
            if (i) os << ' ';
            os << fmt_double(p.coeffs[i]);
        }
        os << '\n';
    }
}

EigArchive load_archive(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "TRISPEC-EIG v1")
        throw InvalidParameter("not a TRISPEC-EIG v1 archive");

    EigArchive archive;
    std::string kw;
    std::size_t count = 0;
    int dim = 0;
    is >> kw >> archive.a;
    if (kw != "a") throw InvalidParameter("archive header: expected 'a'");
    is >> kw >> archive.ndiv;
    if (kw != "ndiv") throw InvalidParameter("archive header: expected 'ndiv'");
    is >> kw >> archive.order;
    if (kw != "order") throw InvalidParameter("archive header: expected 'order'");
    is >> kw >> count;
    if (kw != "count") throw InvalidParameter("archive header: expected 'count'");
    is >> kw >> dim;
    if (kw != "dim") throw InvalidParameter("archive header: expected 'dim'");

    archive.pairs.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        is >> kw;
        if (kw != "lambda") throw InvalidParameter("archive: expected 'lambda' record");
        is >> archive.pairs[k].lambda;
        archive.pairs[k].h = 1.0 / std::sqrt(archive.pairs[k].lambda);
        archive.pairs[k].coeffs.resize(dim);
        for (int i = 0; i < dim; ++i)
            if (!(is >> archive.pairs[k].coeffs[i]))
                throw InvalidParameter("archive: truncated coefficient vector");
    }
    return archive;
}

}  // namespace trispec
