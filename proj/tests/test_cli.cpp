#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "trispec/analytic.hpp"
#include "trispec/metrics.hpp"

using namespace trispec;
namespace fs = std::filesystem;

namespace {

const std::string cli = TRISPEC_CLI_PATH;

int run(const std::string& args) {
    const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "trispec_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("exit codes are distinct per failure class") {
    CHECK(run("--bogus-flag") == 2);
    CHECK(run("analytic --bogus") == 2);
    CHECK(run("nosuchcommand") == 2);
    CHECK(run("solve --a -1 --ndiv 8") == 3);          // invalid config
    CHECK(run("solve --a 1 --ndiv 2") == 3);           // ndiv below the CLI floor
    CHECK(run("solve --a 1 --ndiv 8 --order 3") == 3); // bad order
    CHECK(run("metrics --in /nonexistent/file.eig") == 4);
    CHECK(run("--help") == 0);
}

TEST_CASE("analytic table reproduces the closed-form proportions") {
    TempDir tmp;
    const std::string out = tmp.file("m.csv");
    REQUIRE(run("analytic --count 40 --out " + out) == 0);

    std::ifstream is(out);
    const auto rows = read_metrics_csv(is);
    REQUIRE(rows.size() == 40);
    const auto modes = enumerate_modes(40);
    for (int i = 0; i < 40; ++i) {
        CHECK(rows[i].lambda == doctest::Approx(modes[i].eig.lambda).epsilon(1e-14));
        CHECK(rows[i].prop_left ==
              doctest::Approx(exact_Il(modes[i].index)).epsilon(1e-12));
        CHECK(rows[i].y_volume == 0.5);
        CHECK(rows[i].neumann_F2 == 2.0);
    }
}

TEST_CASE("solve then metrics round trip through the archive") {
    TempDir tmp;
    const std::string archive = tmp.file("run.eig");
    REQUIRE(run("solve --a 1 --ndiv 8 --order 2 --count 1 --out " + archive) == 0);

    // Archive holds one eigenvalue near 5 pi^2.
    std::ifstream is(archive);
    std::string magic;
    std::getline(is, magic);
    CHECK(magic == "TRISPEC-EIG v1");
    std::string kw;
    double a;
    int ndiv, order, count, dim;
    is >> kw >> a >> kw >> ndiv >> kw >> order >> kw >> count >> kw >> dim;
    CHECK(a == 1.0);
    CHECK(count == 1);
    is >> kw;
    double lambda;
    is >> lambda;
    CHECK(std::abs(lambda - 5.0 * M_PI * M_PI) / (5.0 * M_PI * M_PI) < 0.01);

    const std::string mcsv = tmp.file("m.csv");
    REQUIRE(run("metrics --in " + archive + " --out " + mcsv) == 0);
    std::ifstream ms(mcsv);
    const auto rows = read_metrics_csv(ms);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].x_volume + rows[0].y_volume == doctest::Approx(1.0).epsilon(1e-9));
    // ndiv=8 is deliberately coarse; the flux trace carries ~10% error here.
    CHECK(rows[0].neumann_F2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("stats on the balanced analytic table") {
    TempDir tmp;
    const std::string mcsv = tmp.file("m.csv");
    REQUIRE(run("analytic --count 30 --out " + mcsv) == 0);
    REQUIRE(run("stats --in " + mcsv + " --a 1 --eps 0.01,0.001 --out " + tmp.file("s.csv")) == 0);

    const std::string summary = slurp(tmp.file("s_summary.csv"));
    CHECK(summary.find("triangle_a,num_eigs,metric,mean") == 0);
    CHECK(summary.find("1,30,y_volume,0.5") != std::string::npos);

    // Exceedance of the constant y volume column is identically zero.
    std::ifstream ex(tmp.file("s_exceedance.csv"));
    std::string line;
    std::getline(ex, line);
    CHECK(line == "index,eps,percentage");
    while (std::getline(ex, line)) {
        if (line.empty()) continue;
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }
}

TEST_CASE("converge emits one row per adjacent level pair") {
    TempDir tmp;
    const std::string out = tmp.file("c.csv");
    REQUIRE(run("converge --a 0.99 --ndiv 16 --order 2 --count 5 --out " + out) == 0);
    std::ifstream is(out);
    std::string header, row1, row2;
    std::getline(is, header);
    CHECK(header == "coarse_ndiv,fine_ndiv,count,max_eigendiff,l2_running_avg");
    REQUIRE(std::getline(is, row1));
    REQUIRE(std::getline(is, row2));
    CHECK(row1.rfind("4,8,5,", 0) == 0);
    CHECK(row2.rfind("8,16,5,", 0) == 0);

    CHECK(run("converge --a 0.99 --ndiv 18 --order 2 --count 5") == 3);  // not a multiple of 4
}

TEST_CASE("report renders SVG scatters and curves") {
    TempDir tmp;
    const std::string mcsv = tmp.file("m.csv");
    REQUIRE(run("analytic --count 25 --out " + mcsv) == 0);
    REQUIRE(run("report --in " + mcsv + " --out " + tmp.file("plot.svg")) == 0);
    const std::string scatter = slurp(tmp.file("plot_prop_left.svg"));
    CHECK(scatter.rfind("<svg", 0) == 0);
    CHECK(scatter.find("<circle") != std::string::npos);
    CHECK(slurp(tmp.file("plot_y_volume.svg")).rfind("<svg", 0) == 0);

    REQUIRE(run("stats --in " + mcsv + " --eps 0.01 --out " + tmp.file("s.csv")) == 0);
    REQUIRE(run("report --in " + tmp.file("s_exceedance.csv") + " --out " +
                tmp.file("curve.svg")) == 0);
    const std::string curve = slurp(tmp.file("curve.svg"));
    CHECK(curve.rfind("<svg", 0) == 0);
    CHECK(curve.find("<polyline") != std::string::npos);
}

TEST_CASE("thread count controls parallelism, not results") {
    TempDir tmp;
    REQUIRE(run("analytic --count 50 --out " + tmp.file("t1.csv")) == 0);
    const int status = std::system(("TRISPEC_THREADS=3 " + cli + " analytic --count 50 --out " +
                                    tmp.file("t3.csv") + " >/dev/null 2>&1")
                                       .c_str());
    REQUIRE(WIFEXITED(status));
    REQUIRE(WEXITSTATUS(status) == 0);
    CHECK(slurp(tmp.file("t1.csv")) == slurp(tmp.file("t3.csv")));

    const int bad = std::system(
        ("TRISPEC_THREADS=0 " + cli + " analytic --count 5 >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(bad) == 3);
}

TEST_CASE("identical configurations give byte-identical artifacts") {
    TempDir tmp;
    REQUIRE(run("analytic --count 60 --out " + tmp.file("a1.csv")) == 0);
    REQUIRE(run("analytic --count 60 --out " + tmp.file("a2.csv")) == 0);
    CHECK(slurp(tmp.file("a1.csv")) == slurp(tmp.file("a2.csv")));

    REQUIRE(run("solve --a 0.99 --ndiv 12 --order 2 --count 6 --out " + tmp.file("r1.eig")) == 0);
    REQUIRE(run("solve --a 0.99 --ndiv 12 --order 2 --count 6 --out " + tmp.file("r2.eig")) == 0);
    CHECK(slurp(tmp.file("r1.eig")) == slurp(tmp.file("r2.eig")));

    REQUIRE(run("metrics --in " + tmp.file("r1.eig") + " --out " + tmp.file("m1.csv")) == 0);
    REQUIRE(run("metrics --in " + tmp.file("r2.eig") + " --out " + tmp.file("m2.csv")) == 0);
    CHECK(slurp(tmp.file("m1.csv")) == slurp(tmp.file("m2.csv")));
}
