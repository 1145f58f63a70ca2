#include "trispec/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace trispec {

namespace {

// sin(k pi / 2) for integer k.
int half_pi_sin(long k) {
    switch (((k % 4) + 4) % 4) {
        case 1: return 1;
        case 3: return -1;
        default: return 0;
    }
}

}  // namespace

ModeIndex ModeIndex::canonical(int m, int n) {
    if (m < 1 || n < 1)
        throw InvalidParameter("mode indices must be positive");
    if (m == n)
        throw InvalidParameter("mode (m,m) is not an eigenfunction; m != n required");
    ModeIndex mode;
    mode.m = m;
    mode.n = n;
    mode.c = 2.0;
    const bool same_parity = ((m ^ n) & 1) == 0;
    mode.d = same_parity ? -2.0 : 2.0;
    return mode;
}

AnalyticEigenvalue AnalyticEigenvalue::of(const ModeIndex& mode) {
    AnalyticEigenvalue e;
    e.lambda = M_PI * M_PI * (static_cast<double>(mode.m) * mode.m +
                              static_cast<double>(mode.n) * mode.n);
    e.h = 1.0 / std::sqrt(e.lambda);
    return e;
}

std::vector<AnalyticMode> enumerate_modes(int count) {
    if (count < 1)
        throw InvalidParameter("mode count must be >= 1");

    // Pairs with m^2 + n^2 <= N^2 are complete once n <= N, so grow N until
    // enough pairs fall inside the disc.
    int N = 8;
    std::vector<std::pair<long, std::pair<int, int>>> pairs;
    for (;;) {
        pairs.clear();
        const long cap = static_cast<long>(N) * N;
        for (int m = 1; m < N; ++m)
            for (int n = m + 1; n <= N; ++n) {
                const long s = static_cast<long>(m) * m + static_cast<long>(n) * n;
                if (s <= cap) pairs.emplace_back(s, std::make_pair(m, n));
            }
        if (static_cast<int>(pairs.size()) >= count) break;
        N *= 2;
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.resize(count);

    std::vector<AnalyticMode> modes;
    modes.reserve(count);
    for (int k = 0; k < count; ++k) {
        AnalyticMode mode;
        mode.index = ModeIndex::canonical(pairs[k].second.first, pairs[k].second.second);
        mode.eig = AnalyticEigenvalue::of(mode.index);
        modes.push_back(mode);
    }
    // Cluster = maximal run of equal m^2 + n^2 (exact integer ties).
    int k = 0;
    while (k < count) {
        int e = k;
        while (e + 1 < count && pairs[e + 1].first == pairs[k].first) ++e;
        for (int i = k; i <= e; ++i) {
            modes[i].cluster_id = k;
            modes[i].cluster_size = e - k + 1;
        }
        k = e + 1;
    }
    return modes;
}

PointEval eval_mode(const ModeIndex& mode, double x, double y) {
    const double mpi = mode.m * M_PI;
    const double npi = mode.n * M_PI;
    const double snx = std::sin(npi * x), cnx = std::cos(npi * x);
    const double smx = std::sin(mpi * x), cmx = std::cos(mpi * x);
    const double smy = std::sin(mpi * y), cmy = std::cos(mpi * y);
    const double sny = std::sin(npi * y), cny = std::cos(npi * y);

    PointEval e;
    e.value = mode.c * snx * smy + mode.d * smx * sny;
    e.dx = mode.c * npi * cnx * smy + mode.d * mpi * cmx * sny;
    e.dy = mode.c * mpi * snx * cmy + mode.d * npi * smx * cny;
    return e;
}

double exact_Il(const ModeIndex& mode) {
    const int m = mode.m, n = mode.n;
    if (m == n)
        throw InvalidParameter("I_l undefined for m == n");
    // 2 I_l = 1 + h^2 c d pi n m (sin(pi(n-m)/2)/(n-m) - sin(pi(n+m)/2)/(n+m)),
    // evaluated with integer quarter-period sines so even m+n gives exactly 1/2.
    const double cd = mode.c * mode.d;
    const long s2 = static_cast<long>(m) * m + static_cast<long>(n) * n;
    const int s_minus = half_pi_sin(n - m);
    const int s_plus = half_pi_sin(n + m);
    const double bracket = static_cast<double>(s_minus) / (n - m) -
                           static_cast<double>(s_plus) / (n + m);
    // h^2 pi n m = n m / (pi (m^2 + n^2)).
    const double factor = cd * static_cast<double>(m) * n / (M_PI * static_cast<double>(s2));
    return 0.5 * (1.0 + factor * bracket);
}

double asymptotic_Il_limit(int j) {
    if (j < 1 || j % 2 == 0)
        throw InvalidParameter("gap j must be a positive odd integer");
    const double delta = (j % 4 == 1) ? 1.0 : -1.0;
    return 0.5 * (1.0 + delta * 2.0 / (j * M_PI));
}

double square_mode_x_energy(int m, int n) {
    if (m < 1 || n < 1)
        throw InvalidParameter("square mode indices must be positive");
    const double m2 = static_cast<double>(m) * m;
    const double n2 = static_cast<double>(n) * n;
    return m2 / (m2 + n2);
}

}  // namespace trispec
