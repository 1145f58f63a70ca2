// trispec: eigenfunction campaigns on right triangles.
//
// Subcommands: analytic | solve | metrics | stats | converge | report.
// CSV artifacts are deterministic for a fixed configuration and build.
// Exit codes: 0 ok, 2 usage, 3 invalid configuration, 4 I/O failure,
// 5 solver failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "trispec/convergence.hpp"
#include "trispec/eigensolver.hpp"
#include "trispec/metrics.hpp"
#include "trispec/stats.hpp"
#include "trispec/svg.hpp"
#include "trispec/textio.hpp"

namespace {

using namespace trispec;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    return is;
}

int env_threads() {
    const char* env = std::getenv("TRISPEC_THREADS");
    if (!env || !*env) return 1;
    const long n = std::strtol(env, nullptr, 10);
    if (n < 1) throw InvalidParameter("TRISPEC_THREADS must be a positive integer");
    return static_cast<int>(n);
}

void validate_run_config(double a, int ndiv, int order, int count) {
    if (!(a > 0.0)) throw InvalidParameter("--a must be positive");
    if (ndiv < 3) throw InvalidParameter("--ndiv must be >= 3");
    if (order != 1 && order != 2) throw InvalidParameter("--order must be 1 or 2");
    if (count < 1) throw InvalidParameter("--count must be >= 1");
}

std::string strip_suffix(const std::string& path, const std::string& suffix) {
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return path.substr(0, path.size() - suffix.size());
    return path;
}

// ---------------------------------------------------------------------------

int cmd_analytic(int count, double split_opt, bool split_given, const std::string& out) {
    if (count < 1) throw InvalidParameter("--count must be >= 1");
    const auto modes = enumerate_modes(count);
    std::vector<EigenFunction> fns;
    fns.reserve(modes.size());
    for (const auto& m : modes) fns.emplace_back(AnalyticFunction::from_mode(m.index));

    MetricsOptions options;
    options.threads = env_threads();
    if (split_given) {
        options.split = split_opt;
        options.closed_form_analytic = (split_opt == 0.5);
    }
    const auto rows = compute_metrics(fns, options);

    if (out.empty()) {
        write_metrics_csv(std::cout, rows);
    } else {
        auto os = open_out(out);
        write_metrics_csv(os, rows);
    }
    return 0;
}

int cmd_solve(double a, int ndiv, int order, int count, const std::string& out) {
    validate_run_config(a, ndiv, order, count);
    const RightTriangle tri = RightTriangle::with_leg(a);
    const Mesh mesh = Mesh::structured(tri, ndiv);
    const Assembled sys = assemble(mesh, order);
    const Reduced red = reduce_dirichlet(sys);
    if (count > static_cast<int>(red.K.rows()))
        throw InvalidParameter("--count exceeds the interior dof count " +
                               std::to_string(red.K.rows()));

    EigArchive archive{a, ndiv, order, solve_eigs(red.K, red.M, count)};
    if (out.empty()) {
        save_archive(std::cout, archive);
    } else {
        auto os = open_out(out);
        save_archive(os, archive);
    }
    return 0;
}

int cmd_metrics(const std::string& in, double split_opt, bool split_given,
                const std::string& out) {
    auto is = open_in(in);
    const EigArchive archive = load_archive(is);
    const RightTriangle tri = RightTriangle::with_leg(archive.a);
    const auto system = FemSystem::build(tri, archive.ndiv, archive.order);

    std::vector<EigenFunction> fns;
    fns.reserve(archive.pairs.size());
    for (const auto& p : archive.pairs) fns.emplace_back(FemFunction::from_pair(system, p));

    MetricsOptions options;
    options.threads = env_threads();
    if (split_given) options.split = split_opt;
    const auto rows = compute_metrics(fns, options);

    if (out.empty()) {
        write_metrics_csv(std::cout, rows);
    } else {
        auto os = open_out(out);
        write_metrics_csv(os, rows);
    }
    return 0;
}

int cmd_stats(const std::string& in, double a, int count, const std::vector<double>& eps,
              const std::string& out) {
    auto is = open_in(in);
    auto rows = read_metrics_csv(is);
    if (rows.empty()) throw InvalidParameter("metrics CSV has no rows");
    if (count > 0 && count < static_cast<int>(rows.size())) rows.resize(count);

    std::vector<double> columns[7];
    const char* names[7] = {"x_volume",   "y_volume",  "neumann_F1",   "neumann_F2",
                            "neumann_F3", "prop_left", "weighted_x_F3"};
    for (const auto& r : rows) {
        columns[0].push_back(r.x_volume);
        columns[1].push_back(r.y_volume);
        columns[2].push_back(r.neumann_F1);
        columns[3].push_back(r.neumann_F2);
        columns[4].push_back(r.neumann_F3);
        columns[5].push_back(r.prop_left);
        columns[6].push_back(r.weighted_x_F3);
    }
    std::vector<std::pair<std::string, std::vector<double>>> selection;
    for (int k = 0; k < 7; ++k) selection.emplace_back(names[k], columns[k]);
    const auto summary = summarize(selection);

    if (out.empty()) {
        write_summary_csv(std::cout, a, rows.size(), summary);
        if (!eps.empty()) write_exceedance_csv(std::cout, make_series(columns[1], 0.5, eps));
        return 0;
    }
    const std::string base = strip_suffix(out, ".csv");
    {
        auto os = open_out(base + "_summary.csv");
        write_summary_csv(os, a, rows.size(), summary);
    }
    if (!eps.empty()) {
        auto os = open_out(base + "_exceedance.csv");
        write_exceedance_csv(os, make_series(columns[1], 0.5, eps));
    }
    return 0;
}

int cmd_converge(double a, int ndiv, int order, int count, const std::string& out) {
    validate_run_config(a, ndiv, order, count);
    if (ndiv % 4 != 0 || ndiv / 4 < 3)
        throw InvalidParameter("--ndiv must be a multiple of 4 with ndiv/4 >= 3");

    struct Level {
        std::shared_ptr<const FemSystem> system;
        SparseSym M_int;
        std::vector<EigenPair> pairs;
    };
    const auto solve_level = [&](int n) {
        Mesh mesh = Mesh::structured(RightTriangle::with_leg(a), n);
        Assembled sys = assemble(mesh, order);
        Reduced red = reduce_dirichlet(sys);
        if (count > static_cast<int>(red.K.rows()))
            throw InvalidParameter("--count exceeds the interior dof count at ndiv " +
                                   std::to_string(n));
        Level lvl;
        lvl.pairs = solve_eigs(red.K, red.M, count);
        lvl.system = std::make_shared<FemSystem>(std::move(mesh), std::move(sys.space),
                                             std::move(sys.K), std::move(sys.M));
        lvl.M_int = std::move(red.M);
        return lvl;
    };

    const Level l0 = solve_level(ndiv / 4);
    const Level l1 = solve_level(ndiv / 2);
    const Level l2 = solve_level(ndiv);

    std::ostringstream csv;
    csv << "coarse_ndiv,fine_ndiv,count,max_eigendiff,l2_running_avg\n";
    for (int pair = 0; pair < 2; ++pair) {
        const Level& coarse = pair == 0 ? l0 : l1;
        const Level& fine = pair == 0 ? l1 : l2;
        const ConvergenceReport r = compare_nested(coarse.system, coarse.M_int, coarse.pairs,
                                                   fine.system, fine.pairs, count);
        csv << r.coarse_ndiv << ',' << r.fine_ndiv << ',' << r.count << ','
            << fmt_double(r.max_eigendiff) << ',' << fmt_double(r.l2_running_avg) << '\n';
    }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        auto os = open_out(out);
        os << csv.str();
    }
    return 0;
}

int cmd_report(const std::string& in, const std::string& out) {
    std::string header;
    {
        auto probe = open_in(in);
        if (!std::getline(probe, header)) throw InvalidParameter("empty input CSV");
    }

    if (header.rfind("index,lambda,", 0) == 0) {
        auto is = open_in(in);
        const auto rows = read_metrics_csv(is);
        if (rows.empty()) throw InvalidParameter("metrics CSV has no rows");
        const std::string base = strip_suffix(out.empty() ? std::string("report") : out, ".svg");
        for (const std::string metric : {"prop_left", "y_volume"}) {
            PlotSeries series;
            for (const auto& r : rows) {
                series.x.push_back(r.index);
                series.y.push_back(metric == "prop_left" ? r.prop_left : r.y_volume);
            }
            PlotSpec spec;
            spec.title = metric + " by eigenvalue index";
            spec.x_label = "eigenvalue index";
            spec.y_label = metric;
            spec.series = {series};
            auto os = open_out(base + "_" + metric + ".svg");
            write_svg(os, spec);
        }
        return 0;
    }
    if (header == "index,eps,percentage") {
        auto is = open_in(in);
        std::string line;
        std::getline(is, line);  // header
        std::map<double, PlotSeries> by_eps;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string idx, eps, pct;
            if (!std::getline(ss, idx, ',') || !std::getline(ss, eps, ',') ||
                !std::getline(ss, pct, ','))
                throw InvalidParameter("malformed exceedance row '" + line + "'");
            auto& s = by_eps[parse_double(eps)];
            s.x.push_back(static_cast<double>(parse_long(idx)));
            s.y.push_back(parse_double(pct));
        }
        if (by_eps.empty()) throw InvalidParameter("exceedance CSV has no rows");
        PlotSpec spec;
        spec.title = "running exceedance percentage";
        spec.x_label = "eigenvalue index";
        spec.y_label = "% with |y_volume - 0.5| > eps";
        for (auto& [eps, s] : by_eps) {
            s.label = "eps = " + fmt_double(eps);
            s.line = true;
            spec.series.push_back(std::move(s));
        }
        auto os = open_out(out.empty() ? "report.svg" : out);
        write_svg(os, spec);
        return 0;
    }
    throw InvalidParameter("unrecognized CSV header: " + header);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenfunction energy-distribution campaigns on right triangles"};
    app.require_subcommand(1);

    double a = 1.0;
    int ndiv = 32;
    int order = 2;
    int count = 100;
    double split = 0.5;
    std::string eps_arg, in_path, out_path;

    auto add_common = [&](CLI::App* cmd, std::initializer_list<std::string> flags) {
        for (const auto& f : flags) {
            if (f == "a") cmd->add_option("--a", a, "triangle leg length");
            if (f == "ndiv") cmd->add_option("--ndiv", ndiv, "mesh divisions per leg");
            if (f == "order") cmd->add_option("--order", order, "element order (1 or 2)");
            if (f == "count") cmd->add_option("--count", count, "number of eigenfunctions");
            if (f == "split") cmd->add_option("--split", split, "left/right split point");
            if (f == "eps") cmd->add_option("--eps", eps_arg, "comma list of tolerances");
            if (f == "in") cmd->add_option("--in", in_path, "input file");
            if (f == "out") cmd->add_option("--out", out_path, "output file");
        }
    };

    CLI::App* c_analytic = app.add_subcommand("analytic", "closed-form metrics table (a = 1)");
    add_common(c_analytic, {"count", "split", "out"});
    CLI::App* c_solve = app.add_subcommand("solve", "FEM eigenpairs -> archive");
    add_common(c_solve, {"a", "ndiv", "order", "count", "out"});
    CLI::App* c_metrics = app.add_subcommand("metrics", "metrics table from an archive");
    add_common(c_metrics, {"in", "split", "out"});
    CLI::App* c_stats = app.add_subcommand("stats", "summary and exceedance series");
    add_common(c_stats, {"in", "a", "count", "eps", "out"});
    CLI::App* c_converge = app.add_subcommand("converge", "nested-level diagnostics");
    add_common(c_converge, {"a", "ndiv", "order", "count", "out"});
    CLI::App* c_report = app.add_subcommand("report", "SVG plots from a CSV");
    add_common(c_report, {"in", "out"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        const bool split_given = c_analytic->count("--split") || c_metrics->count("--split");
        if (app.got_subcommand(c_analytic))
            return cmd_analytic(count, split, split_given, out_path);
        if (app.got_subcommand(c_solve)) return cmd_solve(a, ndiv, order, count, out_path);
        if (app.got_subcommand(c_metrics))
            return cmd_metrics(in_path, split, split_given, out_path);
        if (app.got_subcommand(c_stats)) {
            std::vector<double> eps;
            if (!eps_arg.empty()) {
                std::stringstream ss(eps_arg);
                std::string tok;
                while (std::getline(ss, tok, ',')) eps.push_back(parse_double(tok));
            }
            const int limit = c_stats->count("--count") ? count : 0;
            return cmd_stats(in_path, a, limit, eps, out_path);
        }
        if (app.got_subcommand(c_converge)) return cmd_converge(a, ndiv, order, count, out_path);
        if (app.got_subcommand(c_report)) return cmd_report(in_path, out_path);
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
