#include "trispec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace trispec {

namespace {

GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
    return it->second;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels,
                    int order) {
    if (panels < 1) panels = 1;
    const GaussRule& rule = gauss_legendre(order);
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        double panel = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            panel += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
        sum += 0.5 * width * panel;
    }
    return sum;
}

int panels_for_frequency(double length, int frequency) {
    if (frequency < 1) frequency = 1;
    const int p = static_cast<int>(std::ceil(length * 4.0 * frequency));
    return std::max(p, 1);
}

const TriangleRule& triangle_rule(int degree) {
    // Standard symmetric rules; barycentric weights normalized to area 1/2.
    static const TriangleRule deg1 = {{1.0 / 3.0}, {1.0 / 3.0}, {0.5}};
    static const TriangleRule deg2 = {
        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
        {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
        {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0}};
    static const TriangleRule deg4 = [] {
        TriangleRule r;
        const double a1 = 0.445948490915965, w1 = 0.223381589678011;
        const double a2 = 0.091576213509771, w2 = 0.109951743655322;
        const double pts[6][3] = {
            {a1, a1, w1}, {1 - 2 * a1, a1, w1}, {a1, 1 - 2 * a1, w1},
            {a2, a2, w2}, {1 - 2 * a2, a2, w2}, {a2, 1 - 2 * a2, w2}};
        for (const auto& p : pts) {
            r.xi.push_back(p[0]);
            r.eta.push_back(p[1]);
            r.w.push_back(0.5 * p[2]);
        }
        return r;
    }();
    static const TriangleRule deg5 = [] {
        TriangleRule r;
        const double a1 = 0.470142064105115, w1 = 0.132394152788506;
        const double a2 = 0.101286507323456, w2 = 0.125939180544827;
        r.xi = {1.0 / 3.0};
        r.eta = {1.0 / 3.0};
        r.w = {0.5 * 0.225};
        const double pts[6][3] = {
            {a1, a1, w1}, {1 - 2 * a1, a1, w1}, {a1, 1 - 2 * a1, w1},
            {a2, a2, w2}, {1 - 2 * a2, a2, w2}, {a2, 1 - 2 * a2, w2}};
        for (const auto& p : pts) {
            r.xi.push_back(p[0]);
            r.eta.push_back(p[1]);
            r.w.push_back(0.5 * p[2]);
        }
        return r;
    }();

    switch (degree) {
        case 1: return deg1;
        case 2: return deg2;
        case 4: return deg4;
        case 5: return deg5;
        default:
            if (degree < 1) return deg1;
            if (degree == 3) return deg4;
            throw InvalidParameter("no triangle rule of degree " + std::to_string(degree));
    }
}

}  // namespace trispec
