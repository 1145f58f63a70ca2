#include "trispec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "trispec/quadrature.hpp"
#include "trispec/textio.hpp"

namespace trispec {

namespace {

// ---------------------------------------------------------------------------
// Side geometry: natural coordinate t, point, outward normal, arclength/dt.

struct SideFrame {
    double t_max;       // natural extent (1 for F1, a for F2/F3)
    double nx, ny;      // outward unit normal
    double ds_dt;       // arclength per unit t
};

SideFrame side_frame(const RightTriangle& tri, SideTag side) {
    switch (side) {
        case SideTag::F1: return {1.0, -1.0, 0.0, 1.0};
        case SideTag::F2: return {tri.a, 0.0, -1.0, 1.0};
        case SideTag::F3: return {tri.a, 1.0 / tri.gamma, tri.a / tri.gamma, tri.gamma / tri.a};
    }
    throw InvalidParameter("bad side");
}

Vec2 side_point(const RightTriangle& tri, SideTag side, double t) {
    switch (side) {
        case SideTag::F1: return {0.0, t};
        case SideTag::F2: return {t, 0.0};
        case SideTag::F3: return {t, 1.0 - t / tri.a};
    }
    throw InvalidParameter("bad side");
}

// Natural coordinate of a boundary node on its side.
double node_coord(SideTag side, const Vec2& p) {
    return side == SideTag::F1 ? p.y : p.x;
}

// ---------------------------------------------------------------------------
// Analytic quadrature (frequency-aware Gauss panels).

constexpr int kGaussOrder = 10;

// 2D integral of g over the triangle slice x in [x0, x1], y in [0, 1 - x/a].
double integrate_slice_analytic(const RightTriangle& tri, double x0, double x1, int freq,
                                int min_x_panels,
                                const std::function<double(double, double)>& g) {
    if (x1 <= x0) return 0.0;
    const GaussRule& rule = gauss_legendre(kGaussOrder);
    const int px = std::max(panels_for_frequency(x1 - x0, freq), min_x_panels);
    const double wx = (x1 - x0) / px;
    double total = 0.0;
    for (int p = 0; p < px; ++p) {
        const double xm = x0 + (p + 0.5) * wx;
        for (std::size_t qx = 0; qx < rule.nodes.size(); ++qx) {
            const double x = xm + 0.5 * wx * rule.nodes[qx];
            const double height = 1.0 - x / tri.a;
            if (height <= 0.0) continue;
            const int py = panels_for_frequency(height, freq);
            const double wy = height / py;
            double inner = 0.0;
            for (int q = 0; q < py; ++q) {
                const double ym = (q + 0.5) * wy;
                for (std::size_t qy = 0; qy < rule.nodes.size(); ++qy)
                    inner += rule.weights[qy] * g(x, ym + 0.5 * wy * rule.nodes[qy]);
            }
            total += rule.weights[qx] * (0.5 * wx) * (0.5 * wy) * inner;
        }
    }
    return total;
}

// Side integrands receive (t, dn) with dn the normal derivative (analytic) or
// the recovered boundary flux (FEM) at natural coordinate t.
using SideIntegrand = std::function<double(double, double)>;

double integrate_side_analytic(const AnalyticFunction& f, const RightTriangle& tri, SideTag side,
                               double lo, double hi, const SideIntegrand& g,
                               const std::vector<double>& breakpoints = {}) {
    if (hi <= lo) return 0.0;
    const SideFrame frame = side_frame(tri, side);
    std::vector<double> cuts = {lo, hi};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double t0 = cuts[k], t1 = cuts[k + 1];
        total += integrate_1d(
            [&](double t) {
                const Vec2 p = side_point(tri, side, t);
                const PointEval e = eval_analytic(f, p.x, p.y);
                return g(t, frame.nx * e.dx + frame.ny * e.dy) * frame.ds_dt;
            },
            t0, t1, panels_for_frequency(t1 - t0, f.max_freq), kGaussOrder);
    }
    return total;
}

// ---------------------------------------------------------------------------
// FEM quadrature (elementwise, degree-matched).

// Clip a CCW triangle against {x >= lo} and {x <= hi}; out has room for 7.
int clip_to_strip(const Vec2* in_pts, int in_n, double lo, double hi, Vec2* out) {
    Vec2 buf[8];
    auto clip = [](const Vec2* pts, int n, double bound, bool keep_right, Vec2* dst) {
        int m = 0;
        for (int i = 0; i < n; ++i) {
            const Vec2& p = pts[i];
            const Vec2& q = pts[(i + 1) % n];
            const bool pin = keep_right ? (p.x >= bound) : (p.x <= bound);
            const bool qin = keep_right ? (q.x >= bound) : (q.x <= bound);
            if (pin) dst[m++] = p;
            if (pin != qin) {
                const double s = (bound - p.x) / (q.x - p.x);
                dst[m++] = {bound, p.y + s * (q.y - p.y)};
            }
        }
        return m;
    };
    int n = clip(in_pts, in_n, lo, true, buf);
    if (n == 0) return 0;
    return clip(buf, n, hi, false, out);
}

// Integrate g over element, restricted to the strip [lo, hi], with a rule of
// the given degree (exact when g is polynomial on the element).
double integrate_element_strip(const FemFunction& f, int element, double lo, double hi,
                               int degree,
                               const std::function<double(double, double, const PointEval&)>& g) {
    const Mesh& mesh = f.system->mesh;
    const auto& el = mesh.elements()[element];
    Vec2 pts[3] = {mesh.nodes()[el[0]], mesh.nodes()[el[1]], mesh.nodes()[el[2]]};
    Vec2 poly[7];
    const int n = clip_to_strip(pts, 3, lo, hi, poly);
    if (n < 3) return 0.0;

    const TriangleRule& rule = triangle_rule(degree);
    double total = 0.0;
    for (int k = 1; k + 1 < n; ++k) {
        const Vec2 a = poly[0], b = poly[k], c = poly[k + 1];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if (std::abs(det) < 1e-30) continue;
        for (std::size_t q = 0; q < rule.w.size(); ++q) {
            const double x = a.x + (b.x - a.x) * rule.xi[q] + (c.x - a.x) * rule.eta[q];
            const double y = a.y + (b.y - a.y) * rule.xi[q] + (c.y - a.y) * rule.eta[q];
            total += rule.w[q] * det * g(x, y, eval_fem_in_element(f, element, x, y));
        }
    }
    return total;
}

double integrate_domain_fem(const FemFunction& f, double lo, double hi, int degree,
                            const std::function<double(double, double, const PointEval&)>& g) {
    double total = 0.0;
    const std::size_t ne = f.system->mesh.elements().size();
    for (std::size_t e = 0; e < ne; ++e)
        total += integrate_element_strip(f, static_cast<int>(e), lo, hi, degree, g);
    return total;
}

double integrate_side_fem(const FemFunction& f, SideTag side, double lo, double hi,
                          int gauss_order, const SideIntegrand& g,
                          const std::vector<double>& breakpoints = {}) {
    const Mesh& mesh = f.system->mesh;
    const RightTriangle& tri = mesh.triangle();
    const SideFrame frame = side_frame(tri, side);
    const GaussRule& rule = gauss_legendre(gauss_order);

    double total = 0.0;
    for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) {
        const BoundaryEdge& be = mesh.boundary_edges()[b];
        if (be.side != side) continue;
        const double tn0 = node_coord(side, mesh.nodes()[be.n0]);
        const double tn1 = node_coord(side, mesh.nodes()[be.n1]);
        const double t0 = std::min(tn0, tn1), t1 = std::max(tn0, tn1);

        std::vector<double> cuts = {std::max(t0, lo), std::min(t1, hi)};
        if (cuts[0] >= cuts[1]) continue;
        for (double brk : breakpoints)
            if (brk > cuts[0] && brk < cuts.back()) cuts.insert(cuts.end() - 1, brk);
        std::sort(cuts.begin(), cuts.end());

        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            const double half = 0.5 * (cuts[k + 1] - cuts[k]);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double t = mid + half * rule.nodes[q];
                const double s = (t - tn0) / (tn1 - tn0);
                total += rule.weights[q] * half *
                         g(t, f.edge_flux(static_cast<int>(b), s)) * frame.ds_dt;
            }
        }
    }
    return total;
}

std::pair<double, double> volume_energies(const EigenFunction& u) {
    const double h2 = u.h() * u.h();
    double ex = 0.0, ey = 0.0;
    if (u.is_analytic()) {
        const AnalyticFunction& f = u.analytic();
        const RightTriangle tri = u.triangle();
        ex = integrate_slice_analytic(tri, 0.0, tri.a, f.max_freq, 1, [&](double x, double y) {
            const PointEval e = eval_analytic(f, x, y);
            return e.dx * e.dx;
        });
        ey = integrate_slice_analytic(tri, 0.0, tri.a, f.max_freq, 1, [&](double x, double y) {
            const PointEval e = eval_analytic(f, x, y);
            return e.dy * e.dy;
        });
    } else {
        const FemFunction& f = u.fem();
        const RightTriangle& tri = f.system->mesh.triangle();
        const int degree = f.system->space.order == 1 ? 1 : 2;
        double sx = 0.0, sy = 0.0;
        const std::size_t ne = f.system->mesh.elements().size();
        for (std::size_t e = 0; e < ne; ++e) {
            sx += integrate_element_strip(f, static_cast<int>(e), 0.0, tri.a, degree,
                                          [](double, double, const PointEval& p) { return p.dx * p.dx; });
            sy += integrate_element_strip(f, static_cast<int>(e), 0.0, tri.a, degree,
                                          [](double, double, const PointEval& p) { return p.dy * p.dy; });
        }
        ex = sx;
        ey = sy;
    }
    return {h2 * ex, h2 * ey};
}

}  // namespace

// ---------------------------------------------------------------------------

double volume_energy(const EigenFunction& u, Direction dir) {
    const auto [ex, ey] = volume_energies(u);
    return dir == Direction::x ? ex : ey;
}

double side_neumann(const EigenFunction& u, SideTag side) {
    const RightTriangle tri = u.triangle();
    return partial_neumann(u, side, 0.0, side_frame(tri, side).t_max);
}

double partial_neumann(const EigenFunction& u, SideTag side, double lo, double hi) {
    const RightTriangle tri = u.triangle();
    const SideFrame frame = side_frame(tri, side);
    if (lo > hi)
        throw InvalidParameter("partial_neumann: inverted bounds");
    if (lo < -1e-12 || hi > frame.t_max * (1.0 + 1e-12))
        throw InvalidParameter("partial_neumann: bounds outside the side extent");
    const double h2 = u.h() * u.h();
    const auto g = [](double, double dn) { return dn * dn; };
    if (u.is_analytic())
        return h2 * integrate_side_analytic(u.analytic(), tri, side, lo, hi, g);
    return h2 * integrate_side_fem(u.fem(), side, lo, hi, 4, g);
}

double prop_left(const EigenFunction& u) {
    return prop_left(u, u.triangle().a / 2.0);
}

double prop_left(const EigenFunction& u, double split) {
    const double whole = partial_neumann(u, SideTag::F2, 0.0, u.triangle().a);
    const double left = partial_neumann(u, SideTag::F2, 0.0, split);
    return left / whole;
}

double weighted_boundary_F3(const EigenFunction& u, const std::function<double(double)>& weight,
                            const std::vector<double>& breakpoints) {
    const RightTriangle tri = u.triangle();
    const double h2 = u.h() * u.h();
    const auto g = [&](double t, double dn) { return weight(t) * dn * dn; };
    double integral;
    if (u.is_analytic())
        integral = integrate_side_analytic(u.analytic(), tri, SideTag::F3, 0.0, tri.a, g,
                                           breakpoints);
    else
        integral = integrate_side_fem(u.fem(), SideTag::F3, 0.0, tri.a, 8, g, breakpoints);
    return h2 * integral / tri.gamma;
}

double spatial_mass(const EigenFunction& u, const Region& region) {
    const RightTriangle tri = u.triangle();
    if (!(0.0 <= region.x_lo && region.x_lo <= region.x_hi && region.x_hi <= tri.a))
        throw InvalidParameter("spatial_mass: region outside [0, a]");
    if (u.is_analytic()) {
        const AnalyticFunction& f = u.analytic();
        return integrate_slice_analytic(tri, region.x_lo, region.x_hi, f.max_freq, 1,
                                        [&](double x, double y) {
                                            const double v = eval_analytic(f, x, y).value;
                                            return v * v;
                                        });
    }
    const FemFunction& f = u.fem();
    const int degree = f.system->space.order == 1 ? 2 : 4;
    return integrate_domain_fem(f, region.x_lo, region.x_hi, degree,
                                [](double, double, const PointEval& e) { return e.value * e.value; });
}

// ---------------------------------------------------------------------------

double CutoffSpec::chi(double x) const {
    const double d2 = delta * delta;
    const double s = slope();
    if (x <= lo()) return 0.0;
    if (x >= hi()) return 1.0;
    const auto ramp_integral = [](double t) {  // int_0^t (6s^5-15s^4+10s^3) ds
        const double t2 = t * t;
        return t2 * t2 * (t2 - 3.0 * t + 2.5);
    };
    if (x < beta) {
        const double t = (x - lo()) / d2;
        return s * d2 * ramp_integral(t);
    }
    if (x <= beta + delta) return s * (0.5 * d2 + (x - beta));
    const double t = (hi() - x) / d2;
    return 1.0 - s * d2 * ramp_integral(t);
}

double CutoffSpec::dchi(double x) const {
    const double d2 = delta * delta;
    const double s = slope();
    if (x <= lo() || x >= hi()) return 0.0;
    const auto smoothstep = [](double t) { return t * t * t * (6.0 * t * t - 15.0 * t + 10.0); };
    if (x < beta) return s * smoothstep((x - lo()) / d2);
    if (x <= beta + delta) return s;
    return s * smoothstep((hi() - x) / d2);
}

void CutoffSpec::validate(const RightTriangle& tri) const {
    if (!(delta > 0.0))
        throw InvalidParameter("cutoff delta must be positive");
    if (!(0.0 < lo() && lo() < hi() && hi() < tri.a))
        throw InvalidParameter("cutoff support [" + std::to_string(lo()) + ", " +
                               std::to_string(hi()) + "] must lie strictly inside (0, a)");
}

RellichCheck rellich_cutoff_check(const EigenFunction& u, const CutoffSpec& spec) {
    const RightTriangle tri = u.triangle();
    spec.validate(tri);
    const double h2 = u.h() * u.h();

    const double pieces[4] = {spec.lo(), spec.beta, spec.beta + spec.delta, spec.hi()};
    double lhs = 0.0;
    if (u.is_analytic()) {
        const AnalyticFunction& f = u.analytic();
        for (int k = 0; k < 3; ++k)
            lhs += integrate_slice_analytic(tri, pieces[k], pieces[k + 1], f.max_freq, 8,
                                            [&](double x, double y) {
                                                const PointEval e = eval_analytic(f, x, y);
                                                return spec.dchi(x) * e.dx * e.dx;
                                            });
    } else {
        const FemFunction& f = u.fem();
        for (int k = 0; k < 3; ++k)
            lhs += integrate_domain_fem(f, pieces[k], pieces[k + 1], 5,
                                        [&](double x, double, const PointEval& e) {
                                            return spec.dchi(x) * e.dx * e.dx;
                                        });
    }
    lhs *= 2.0 * h2;

    const double rhs = weighted_boundary_F3(
        u, [&](double x) { return spec.chi(x); },
        {spec.lo(), spec.beta, spec.beta + spec.delta, spec.hi()});

    return {lhs, rhs, lhs - rhs};
}

// ---------------------------------------------------------------------------

namespace {

EigenMetrics metrics_closed_form(const AnalyticFunction& f, const ModeIndex& mode) {
    // Exact identities on a = 1: balanced volume energies, the per-side law,
    // the closed-form left proportion and the x-weighted commutator identity.
    EigenMetrics m;
    m.lambda = f.lambda;
    m.h = f.h;
    m.x_volume = 0.5;
    m.y_volume = 0.5;
    m.neumann_F1 = 2.0;
    m.neumann_F2 = 2.0;
    m.neumann_F3 = 2.0 * std::sqrt(2.0);
    m.prop_left = exact_Il(mode);
    m.weighted_x_F3 = 1.0;
    return m;
}

EigenMetrics metrics_quadrature(const EigenFunction& u, double split) {
    EigenMetrics m;
    m.lambda = u.lambda();
    m.h = u.h();
    const auto [ex, ey] = volume_energies(u);
    m.x_volume = ex;
    m.y_volume = ey;
    m.neumann_F1 = side_neumann(u, SideTag::F1);
    m.neumann_F2 = side_neumann(u, SideTag::F2);
    m.neumann_F3 = side_neumann(u, SideTag::F3);
    m.prop_left = partial_neumann(u, SideTag::F2, 0.0, split) / m.neumann_F2;
    m.weighted_x_F3 = weighted_boundary_F3(u, [](double x) { return x; });
    return m;
}

}  // namespace

std::vector<EigenMetrics> compute_metrics(const std::vector<EigenFunction>& fns,
                                          const MetricsOptions& options) {
    std::vector<EigenMetrics> rows(fns.size());
    if (fns.empty()) return rows;

    const RightTriangle tri = fns.front().triangle();
    const double split = options.split.value_or(tri.a / 2.0);
    const bool default_split = !options.split.has_value();

    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const EigenFunction& u = fns[i];
            const bool closed = options.closed_form_analytic && u.is_analytic() &&
                                u.analytic().terms.size() == 1 && default_split;
            rows[i] = closed ? metrics_closed_form(u.analytic(), u.analytic().terms[0].mode)
                             : metrics_quadrature(u, split);
            rows[i].index = static_cast<int>(i);
        }
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1 || fns.size() < 2) {
        work(0, fns.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (fns.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(fns.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<double> lambdas(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) lambdas[i] = fns[i].lambda();
    const std::vector<int> ids = cluster_by_gap(lambdas, options.cluster_rel_gap);
    const std::vector<int> sizes = cluster_sizes_from_ids(ids);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].cluster_id = ids[i];
        rows[i].basis_dependent = sizes[i] > 1;
    }
    return rows;
}

// ---------------------------------------------------------------------------

void write_metrics_csv(std::ostream& os, const std::vector<EigenMetrics>& rows) {
    os << "index,lambda,h,x_volume,y_volume,neumann_F1,neumann_F2,neumann_F3,"
          "prop_left,weighted_x_F3,cluster_id,basis_dependent\n";
    for (const auto& r : rows) {
        os << r.index << ',' << fmt_double(r.lambda) << ',' << fmt_double(r.h) << ','
           << fmt_double(r.x_volume) << ',' << fmt_double(r.y_volume) << ','
           << fmt_double(r.neumann_F1) << ',' << fmt_double(r.neumann_F2) << ','
           << fmt_double(r.neumann_F3) << ',' << fmt_double(r.prop_left) << ','
           << fmt_double(r.weighted_x_F3) << ',' << r.cluster_id << ','
           << (r.basis_dependent ? 1 : 0) << '\n';
    }
}

std::vector<EigenMetrics> read_metrics_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw InvalidParameter("metrics CSV: empty file");
    if (line != "index,lambda,h,x_volume,y_volume,neumann_F1,neumann_F2,neumann_F3,"
                "prop_left,weighted_x_F3,cluster_id,basis_dependent")
        throw InvalidParameter("metrics CSV: unexpected header");

    std::vector<EigenMetrics> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12)
            throw InvalidParameter("metrics CSV: malformed row '" + line + "'");
        EigenMetrics r;
        r.index = static_cast<int>(parse_long(cells[0]));
        r.lambda = parse_double(cells[1]);
        r.h = parse_double(cells[2]);
        r.x_volume = parse_double(cells[3]);
        r.y_volume = parse_double(cells[4]);
        r.neumann_F1 = parse_double(cells[5]);
        r.neumann_F2 = parse_double(cells[6]);
        r.neumann_F3 = parse_double(cells[7]);
        r.prop_left = parse_double(cells[8]);
        r.weighted_x_F3 = parse_double(cells[9]);
        r.cluster_id = static_cast<int>(parse_long(cells[10]));
        r.basis_dependent = parse_long(cells[11]) != 0;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace trispec
