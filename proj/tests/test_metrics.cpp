#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "trispec/metrics.hpp"
#include "trispec/quadrature.hpp"

using namespace trispec;

namespace {

EigenFunction mode_fn(int m, int n) {
    return EigenFunction(AnalyticFunction::from_mode(ModeIndex::canonical(m, n)));
}

struct FemRun {
    std::shared_ptr<const FemSystem> system;
    std::vector<EigenPair> pairs;
    SparseSym M_int;
    SparseSym K_int;
};

FemRun fem_run(double a, int ndiv, int order, int count) {
    const RightTriangle tri = RightTriangle::with_leg(a);
    Mesh mesh = Mesh::structured(tri, ndiv);
    Assembled sys = assemble(mesh, order);
    Reduced red = reduce_dirichlet(sys);
    FemRun run;
    run.pairs = solve_eigs(red.K, red.M, count);
    run.system = std::make_shared<FemSystem>(std::move(mesh), std::move(sys.space),
                                             std::move(sys.K), std::move(sys.M));
    run.M_int = std::move(red.M);
    run.K_int = std::move(red.K);
    return run;
}

EigenFunction fem_fn(const FemRun& run, int i) {
    return EigenFunction(FemFunction::from_pair(run.system, run.pairs[i]));
}

}  // namespace

TEST_CASE("analytic volume energies are balanced") {
    for (const auto& [m, n] : {std::pair{1, 2}, {3, 4}, {4, 7}}) {
        const EigenFunction u = mode_fn(m, n);
        const double ex = volume_energy(u, Direction::x);
        const double ey = volume_energy(u, Direction::y);
        CHECK(ex == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(ey == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(ex + ey == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("analytic side law: integral = |side| / area") {
    for (const auto& [m, n] : {std::pair{1, 2}, {2, 5}, {6, 7}}) {
        const EigenFunction u = mode_fn(m, n);
        CHECK(side_neumann(u, SideTag::F1) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(side_neumann(u, SideTag::F2) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(side_neumann(u, SideTag::F3) ==
              doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("partial_neumann and prop_left") {
    SUBCASE("even m+n gives the balanced split") {
        CHECK(prop_left(mode_fn(1, 3)) == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("(1,2) reproduces the closed form") {
        CHECK(prop_left(mode_fn(1, 2)) ==
              doctest::Approx(exact_Il(ModeIndex::canonical(1, 2))).epsilon(1e-9));
        CHECK(prop_left(mode_fn(1, 2)) == doctest::Approx(0.83953).epsilon(1e-4));
    }
    SUBCASE("large k approaches 1/2 + 1/pi") {
        CHECK(std::abs(prop_left(mode_fn(200, 201)) - 0.81831) < 5e-3);
    }
    SUBCASE("additivity over adjoining intervals") {
        const EigenFunction u = mode_fn(2, 5);
        const double left = partial_neumann(u, SideTag::F2, 0.0, 0.3);
        const double mid = partial_neumann(u, SideTag::F2, 0.3, 0.7);
        const double right = partial_neumann(u, SideTag::F2, 0.7, 1.0);
        CHECK(left + mid + right ==
              doctest::Approx(side_neumann(u, SideTag::F2)).epsilon(1e-12));
    }
    SUBCASE("prop_left + prop_right = 1 by construction") {
        const EigenFunction u = mode_fn(3, 8);
        const double whole = side_neumann(u, SideTag::F2);
        const double pl = prop_left(u);
        const double pr = partial_neumann(u, SideTag::F2, 0.5, 1.0) / whole;
        CHECK(pl + pr == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("swap symmetry: F1 proportion equals F2 proportion") {
        for (const auto& [m, n] : {std::pair{1, 2}, {2, 3}, {4, 7}}) {
            const EigenFunction u = mode_fn(m, n);
            const double f1 = partial_neumann(u, SideTag::F1, 0.0, 0.5) /
                              side_neumann(u, SideTag::F1);
            CHECK(f1 == doctest::Approx(prop_left(u)).epsilon(1e-10));
        }
    }
    SUBCASE("inverted or out-of-range bounds throw") {
        const EigenFunction u = mode_fn(1, 2);
        CHECK_THROWS_AS(partial_neumann(u, SideTag::F2, 0.7, 0.3), InvalidParameter);
        CHECK_THROWS_AS(partial_neumann(u, SideTag::F2, 0.0, 1.5), InvalidParameter);
    }
}

TEST_CASE("metrics are sign-flip invariant") {
    const EigenFunction plus = mode_fn(2, 3);
    const EigenFunction minus(
        AnalyticFunction::combination({{-1.0, ModeIndex::canonical(2, 3)}}));
    CHECK(volume_energy(minus, Direction::y) ==
          doctest::Approx(volume_energy(plus, Direction::y)).epsilon(1e-12));
    CHECK(side_neumann(minus, SideTag::F2) ==
          doctest::Approx(side_neumann(plus, SideTag::F2)).epsilon(1e-12));
    CHECK(prop_left(minus) == doctest::Approx(prop_left(plus)).epsilon(1e-12));
}

TEST_CASE("weighted boundary integrals on F3") {
    const EigenFunction u = mode_fn(1, 2);
    const RightTriangle tri = u.triangle();

    SUBCASE("unit weight reduces to the side integral") {
        const double w1 = weighted_boundary_F3(u, [](double) { return 1.0; });
        CHECK(w1 == doctest::Approx(side_neumann(u, SideTag::F3) / tri.gamma).epsilon(1e-10));
        CHECK(w1 == doctest::Approx(2.0 / tri.a).epsilon(1e-9));
    }
    SUBCASE("x weight doubles the x volume energy") {
        for (const auto& [m, n] : {std::pair{1, 2}, {3, 4}, {5, 8}}) {
            const EigenFunction v = mode_fn(m, n);
            const double wx = weighted_boundary_F3(v, [](double x) { return x; });
            CHECK(wx == doctest::Approx(2.0 * volume_energy(v, Direction::x)).epsilon(1e-8));
            CHECK(wx == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
    SUBCASE("(1 - x/a) weight reconstructs the x volume energy") {
        for (const auto& [m, n] : {std::pair{1, 2}, {4, 7}}) {
            const EigenFunction v = mode_fn(m, n);
            const double w = weighted_boundary_F3(v, [&](double x) { return 1.0 - x / tri.a; });
            const double reconstructed = 1.0 - 0.5 * tri.a * w;
            CHECK(std::abs(reconstructed - volume_energy(v, Direction::x)) <= 1e-8);
        }
    }
}

TEST_CASE("spatial mass") {
    const EigenFunction u = mode_fn(2, 5);
    const RightTriangle tri = u.triangle();

    CHECK(spatial_mass(u, Region::whole(tri)) == doctest::Approx(1.0).epsilon(1e-9));

    const double left = spatial_mass(u, Region::strip(0.0, 0.4));
    const double right = spatial_mass(u, Region::strip(0.4, 1.0));
    CHECK(left + right == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(spatial_mass(u, Region::strip(0.2, 1.4)), InvalidParameter);

    // Equidistribution on average: strip mass over the first 100 modes tracks
    // the area fraction within 5%.
    const StripSpec strip{0.5, 0.1};
    const Region region = strip.region(tri);
    const double expected = region_area(tri, region) / tri.area;
    const auto modes = enumerate_modes(100);
    double mean = 0.0;
    for (const auto& m : modes)
        mean += spatial_mass(EigenFunction(AnalyticFunction::from_mode(m.index)), region);
    mean /= modes.size();
    CHECK(std::abs(mean - expected) / expected < 0.05);
}

TEST_CASE("cutoff profile") {
    const RightTriangle tri = RightTriangle::with_leg(1.0);
    const CutoffSpec spec{0.5, 0.1};
    spec.validate(tri);

    CHECK(spec.chi(0.0) == 0.0);
    CHECK(spec.chi(spec.lo()) == 0.0);
    CHECK(spec.chi(spec.hi()) == 1.0);
    CHECK(spec.chi(1.0) == 1.0);

    // chi' >= 0 everywhere; constant slope 1/(delta(1+delta)) on the middle,
    // within delta of 1/delta in relative terms.
    for (int k = 0; k <= 2000; ++k) {
        const double x = k / 2000.0;
        CHECK(spec.dchi(x) >= 0.0);
    }
    for (double x : {0.5, 0.53, 0.57, 0.6}) CHECK(spec.dchi(x) == spec.slope());
    CHECK(std::abs(spec.slope() * spec.delta - 1.0) <= spec.delta);

    // C^1 joins at the four breakpoints.
    for (double x : {spec.lo(), spec.beta, spec.beta + spec.delta, spec.hi()}) {
        const double eps = 1e-9;
        CHECK(std::abs(spec.chi(x - eps) - spec.chi(x + eps)) <= 1e-7);
        CHECK(std::abs(spec.dchi(x - eps) - spec.dchi(x + eps)) <= 1e-5);
    }

    // Total rise is exactly one: integrate chi' piece by piece.
    double mass = 0.0;
    const double joints[4] = {spec.lo(), spec.beta, spec.beta + spec.delta, spec.hi()};
    for (int k = 0; k < 3; ++k)
        mass += integrate_1d([&](double x) { return spec.dchi(x); }, joints[k], joints[k + 1],
                             16, 10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS((CutoffSpec{0.5, 0.8}).validate(tri), InvalidParameter);
    CHECK_THROWS_AS((CutoffSpec{0.005, 0.1}).validate(tri), InvalidParameter);
}

TEST_CASE("commutator cutoff check on analytic modes") {
    const CutoffSpec spec{0.5, 0.1};

    SUBCASE("lowest mode: same scale; moderate modes: close agreement") {
        // At mode (1,2) h is ~0.14, so the O(h) remainder (driven by chi'' on
        // the delta^2 ramps) is still a large fraction of either side.
        const RellichCheck low = rellich_cutoff_check(mode_fn(1, 2), spec);
        CHECK(std::abs(low.residual) <= std::abs(low.rhs));
        CHECK(low.residual == doctest::Approx(low.lhs - low.rhs).epsilon(1e-15));
        // By k = 40 the two sides agree within 10%.
        const RellichCheck mid = rellich_cutoff_check(mode_fn(40, 41), spec);
        CHECK(std::abs(mid.residual) <= 0.1 * std::abs(mid.rhs));
    }

    SUBCASE("residual decays like h along (k, k+1)") {
        const auto h_of = [](int k) {
            return 1.0 / (M_PI * std::sqrt(static_cast<double>(k) * k +
                                           static_cast<double>(k + 1) * (k + 1)));
        };
        const double c_fit =
            std::abs(rellich_cutoff_check(mode_fn(10, 11), spec).residual) / h_of(10);
        double prev = 1e9;
        for (int k : {10, 20, 40}) {
            const RellichCheck r = rellich_cutoff_check(mode_fn(k, k + 1), spec);
            CHECK(std::abs(r.residual) < prev);
            CHECK(std::abs(r.residual) <= 1.5 * c_fit * h_of(k));
            prev = std::abs(r.residual);
        }
    }

    SUBCASE("support leaking outside the domain is rejected") {
        CHECK_THROWS_AS(rellich_cutoff_check(mode_fn(1, 2), CutoffSpec{0.9, 0.3}),
                        InvalidParameter);
    }
}

TEST_CASE("FEM metrics against the continuum laws") {
    const FemRun run = fem_run(0.99, 32, 2, 6);
    const RightTriangle tri = run.system->mesh.triangle();

    SUBCASE("discrete energy identity") {
        for (int i = 0; i < 6; ++i) {
            const EigenFunction u = fem_fn(run, i);
            const double ex = volume_energy(u, Direction::x);
            const double ey = volume_energy(u, Direction::y);
            CHECK(ex + ey == doctest::Approx(1.0).epsilon(1e-9));
            // Quadrature gradient energy equals the assembled quadratic form.
            const auto& c = run.pairs[i].coeffs;
            const double form = c.dot(run.K_int * c) * run.pairs[i].h * run.pairs[i].h;
            CHECK(ex + ey == doctest::Approx(form).epsilon(1e-10));
        }
    }

    SUBCASE("side law within a few percent at this resolution") {
        for (int i = 0; i < 6; ++i) {
            const EigenFunction u = fem_fn(run, i);
            CHECK(side_neumann(u, SideTag::F2) == doctest::Approx(2.0).epsilon(0.05));
            CHECK(side_neumann(u, SideTag::F1) == doctest::Approx(2.0 / tri.a).epsilon(0.05));
            CHECK(side_neumann(u, SideTag::F3) ==
                  doctest::Approx(2.0 * tri.gamma / tri.a).epsilon(0.05));
        }
        // First mode flux on the bottom side is already accurate.
        CHECK(side_neumann(fem_fn(run, 0), SideTag::F2) == doctest::Approx(2.0).epsilon(0.02));
    }

    SUBCASE("normalization and boundary values") {
        const EigenFunction u = fem_fn(run, 0);
        CHECK(spatial_mass(u, Region::whole(tri)) == doctest::Approx(1.0).epsilon(1e-10));
        const FemFunction& f = u.fem();
        for (int d : run.system->space.boundary_dofs) CHECK(f.coeffs[d] == 0.0);
        const Vec2 p = run.system->space.dof_xy[run.system->space.boundary_dofs[1]];
        CHECK(std::abs(eval_fem(f, p.x, p.y).value) <= 1e-12);
    }

    SUBCASE("weighted identity holds approximately") {
        const EigenFunction u = fem_fn(run, 0);
        const double wx = weighted_boundary_F3(u, [](double x) { return x; });
        CHECK(wx == doctest::Approx(2.0 * volume_energy(u, Direction::x)).epsilon(0.05));
    }
}

TEST_CASE("order-1 elements: recovered flux still converges") {
    double prev = 1e9;
    for (int ndiv : {16, 32}) {
        const FemRun run = fem_run(1.0, ndiv, 1, 1);
        const EigenFunction u = fem_fn(run, 0);
        const double err = std::abs(side_neumann(u, SideTag::F2) - 2.0) / 2.0;
        CHECK(err < prev / 3.0);  // O(h^2)
        prev = err;
        CHECK(volume_energy(u, Direction::x) + volume_energy(u, Direction::y) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(prev <= 0.02);  // ndiv=32
}

TEST_CASE("FEM strip masses: clipping partitions exactly") {
    const FemRun run = fem_run(1.0, 32, 2, 1);
    const EigenFunction u = fem_fn(run, 0);
    // Split point off the grid so elements are genuinely clipped.
    const double sl = spatial_mass(u, Region::strip(0.0, 0.37));
    const double sr = spatial_mass(u, Region::strip(0.37, 1.0));
    CHECK(sl + sr == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sl > 0.5);  // the domain is widest at small x
    CHECK(sr > 0.0);
}

TEST_CASE("FEM cutoff check matches the analytic one at matching mode") {
    const CutoffSpec spec{0.5, 0.1};
    const FemRun run = fem_run(1.0, 32, 2, 1);
    const RellichCheck fem = rellich_cutoff_check(fem_fn(run, 0), spec);
    const RellichCheck exact = rellich_cutoff_check(mode_fn(1, 2), spec);
    CHECK(fem.lhs == doctest::Approx(exact.lhs).epsilon(0.01));
    CHECK(fem.rhs == doctest::Approx(exact.rhs).epsilon(0.01));
}

TEST_CASE("first FEM mode converges to the (1,2) eigenfunction in L2") {
    const ModeIndex exact = ModeIndex::canonical(1, 2);
    double prev_err = 1e9;
    for (int ndiv : {8, 16, 32}) {
        const FemRun run = fem_run(1.0, ndiv, 2, 1);
        const FemFunction f = FemFunction::from_pair(run.system, run.pairs[0]);
        // Align signs at an interior probe.
        const double probe = eval_fem(f, 0.3, 0.3).value * eval_mode(exact, 0.3, 0.3).value;
        const double sign = probe >= 0 ? 1.0 : -1.0;
        const TriangleRule& rule = triangle_rule(5);
        double err2 = 0.0;
        const Mesh& mesh = run.system->mesh;
        for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
            const auto& el = mesh.elements()[e];
            const Vec2 p0 = mesh.nodes()[el[0]], p1 = mesh.nodes()[el[1]], p2 = mesh.nodes()[el[2]];
            const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
            for (std::size_t q = 0; q < rule.w.size(); ++q) {
                const double x = p0.x + (p1.x - p0.x) * rule.xi[q] + (p2.x - p0.x) * rule.eta[q];
                const double y = p0.y + (p1.y - p0.y) * rule.xi[q] + (p2.y - p0.y) * rule.eta[q];
                const double d = sign * eval_fem_in_element(f, static_cast<int>(e), x, y).value -
                                 eval_mode(exact, x, y).value;
                err2 += rule.w[q] * det * d * d;
            }
        }
        const double err = std::sqrt(err2);
        CHECK(err < prev_err / 5.0);  // order-2 elements: O(ndiv^-3)
        prev_err = err;
    }
}

TEST_CASE("metrics campaign: closed form matches quadrature") {
    const auto modes = enumerate_modes(12);
    std::vector<EigenFunction> fns;
    for (const auto& m : modes) fns.emplace_back(AnalyticFunction::from_mode(m.index));

    MetricsOptions closed;
    closed.closed_form_analytic = true;
    MetricsOptions quad;
    quad.closed_form_analytic = false;

    const auto a = compute_metrics(fns, closed);
    const auto b = compute_metrics(fns, quad);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lambda == b[i].lambda);
        CHECK(a[i].x_volume == doctest::Approx(b[i].x_volume).epsilon(1e-9));
        CHECK(a[i].neumann_F2 == doctest::Approx(b[i].neumann_F2).epsilon(1e-9));
        CHECK(a[i].neumann_F3 == doctest::Approx(b[i].neumann_F3).epsilon(1e-9));
        CHECK(a[i].prop_left == doctest::Approx(b[i].prop_left).epsilon(1e-9));
        CHECK(a[i].weighted_x_F3 == doctest::Approx(b[i].weighted_x_F3).epsilon(1e-8));
        CHECK(a[i].cluster_id == b[i].cluster_id);
    }

    // Threaded campaign writes the same rows (slot writes only).
    MetricsOptions threaded = closed;
    threaded.threads = 3;
    const auto c = compute_metrics(fns, threaded);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].prop_left == c[i].prop_left);
        CHECK(a[i].x_volume == c[i].x_volume);
    }
}

TEST_CASE("degenerate cluster: summed metrics are basis invariant") {
    const ModeIndex u1 = ModeIndex::canonical(1, 8);
    const ModeIndex u2 = ModeIndex::canonical(4, 7);
    const double theta = 0.3;

    std::vector<EigenFunction> canonical;
    canonical.emplace_back(AnalyticFunction::from_mode(u1));
    canonical.emplace_back(AnalyticFunction::from_mode(u2));

    std::vector<EigenFunction> rotated;
    rotated.emplace_back(
        AnalyticFunction::combination({{std::cos(theta), u1}, {std::sin(theta), u2}}));
    rotated.emplace_back(
        AnalyticFunction::combination({{-std::sin(theta), u1}, {std::cos(theta), u2}}));

    MetricsOptions quad;
    quad.closed_form_analytic = false;
    const auto a = compute_metrics(canonical, quad);
    const auto b = compute_metrics(rotated, quad);

    CHECK(a[0].basis_dependent);
    CHECK(a[0].cluster_id == a[1].cluster_id);

    CHECK(a[0].y_volume + a[1].y_volume ==
          doctest::Approx(b[0].y_volume + b[1].y_volume).epsilon(1e-8));
    CHECK(a[0].neumann_F2 + a[1].neumann_F2 ==
          doctest::Approx(b[0].neumann_F2 + b[1].neumann_F2).epsilon(1e-8));
    CHECK(a[0].neumann_F3 + a[1].neumann_F3 ==
          doctest::Approx(b[0].neumann_F3 + b[1].neumann_F3).epsilon(1e-8));
    // The per-function left proportion is genuinely basis dependent here.
    CHECK(std::abs(a[0].prop_left - b[0].prop_left) > 1e-3);
}

TEST_CASE("metrics CSV round trip") {
    const auto modes = enumerate_modes(8);
    std::vector<EigenFunction> fns;
    for (const auto& m : modes) fns.emplace_back(AnalyticFunction::from_mode(m.index));
    const auto rows = compute_metrics(fns);

    std::stringstream ss;
    write_metrics_csv(ss, rows);
    const std::string text = ss.str();
    const auto back = read_metrics_csv(ss);
    REQUIRE(back.size() == rows.size());

    std::stringstream again;
    write_metrics_csv(again, back);
    CHECK(again.str() == text);

    std::stringstream bad("nope\n");
    CHECK_THROWS_AS(read_metrics_csv(bad), InvalidParameter);
}
