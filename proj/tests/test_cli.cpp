#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hadlab/config.hpp"
#include "hadlab/errors.hpp"
#include "hadlab/expr.hpp"
#include "hadlab/runner.hpp"

using namespace hadlab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("hadlab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}
} // namespace

TEST_CASE("expression parser") {
    CHECK(Expression("sinh(2*r)/2")(1.0) == doctest::Approx(std::sinh(2.0) / 2).epsilon(1e-15));
    CHECK(Expression("2+3*4^0.5")(0.0) == doctest::Approx(8.0));
    CHECK(Expression("-x^2")(3.0) == doctest::Approx(-9.0)); // unary minus binds the power
    CHECK(Expression("cos(t)+0.5*sin(2*t)")(0.7) ==
          doctest::Approx(std::cos(0.7) + 0.5 * std::sin(1.4)).epsilon(1e-15));
    CHECK(Expression("pi")(0.0) == doctest::Approx(std::numbers::pi));
    CHECK(Expression("exp(1)")(0.0) == doctest::Approx(std::numbers::e));
    CHECK(Expression("sqrt(x*x)")(2.5) == doctest::Approx(2.5));
    CHECK(Expression("2^3^1")(0.0) == doctest::Approx(8.0)); // right associative
    CHECK(Expression("(1+2)*(3-1)")(0.0) == doctest::Approx(6.0));

    CHECK_THROWS_AS(Expression("foo(1)"), config_error);      // unknown function
    CHECK_THROWS_AS(Expression("a+b"), config_error);         // two distinct variables
    CHECK_THROWS_AS(Expression("1+"), config_error);          // dangling operator
    CHECK_THROWS_AS(Expression("sin 1"), config_error);       // missing parenthesis
    CHECK_THROWS_AS(Expression("(1+2"), config_error);        // unbalanced
    CHECK_THROWS_AS(Expression("1 2"), config_error);         // trailing input
}

TEST_CASE("config parsing and validation") {
    SUBCASE("minimal sr-curve config with defaults") {
        const RunConfig cfg = parse_config("[sr-curve]\nr_intersect = 1\nk = 1\n", false);
        CHECK(cfg.command == "sr-curve");
        CHECK(cfg.get_real("r_intersect") == 1.0);
        CHECK(cfg.real_in("tol", 1e-10, 1e-14, 1e-2) == 1e-10); // default fills in
    }
    SUBCASE("unknown key carries its line number") {
        try {
            parse_config("[sr-curve]\nr_intersect = 1\nbogus = 2\n", false);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("unknown section, duplicate keys, malformed lines") {
        CHECK_THROWS_AS(parse_config("[warp-drive]\n", false), config_error);
        CHECK_THROWS_AS(parse_config("[solve]\nk = 1\nk = 2\n", false), config_error);
        CHECK_THROWS_AS(parse_config("[solve]\nk 1\n", false), config_error);
        CHECK_THROWS_AS(parse_config("k = 1\n", false), config_error);
        CHECK_THROWS_AS(parse_config("# only a comment\n", false), config_error);
    }
    SUBCASE("comments and quoted strings") {
        const RunConfig cfg = parse_config(
            "[solve]  # ball solve\nk = 1 # curvature\nphi_expr = \"cos(t)\"\nradius = 2\n",
            false);
        CHECK(cfg.get_string("phi_expr") == "cos(t)");
    }
    SUBCASE("lists") {
        const RunConfig cfg =
            parse_config("[cascade]\nk = 1\nradii = 2, 3, 4, 5\n", false);
        const auto r = cfg.get_list("radii");
        REQUIRE(r.size() == 4);
        CHECK(r[3] == 5.0);
    }
    SUBCASE("environment override") {
        setenv("HADLAB_K", "2.5", 1);
        const RunConfig cfg = parse_config("[sr-curve]\nr_intersect = 1\nk = 1\n", true);
        CHECK(cfg.get_real("k") == 2.5);
        unsetenv("HADLAB_K");
    }
}

TEST_CASE("runner exit codes") {
    SUBCASE("p out of range is a config error") {
        RunConfig cfg = parse_config(
            "[solve]\nk = 1\np = 0.5\nradius = 1\nn_r = 8\nn_t = 8\n", false);
        cfg.output_dir = fresh_dir("exit2a").string();
        CHECK(run(cfg, true).exit_code == 2);
    }
    SUBCASE("p together with profile = minimal conflicts") {
        RunConfig cfg = parse_config(
            "[solve]\nk = 1\np = 2\nprofile = minimal\nradius = 1\nn_r = 8\nn_t = 8\n",
            false);
        cfg.output_dir = fresh_dir("exit2b").string();
        CHECK(run(cfg, true).exit_code == 2);
    }
    SUBCASE("grid size zero is a config error") {
        RunConfig cfg =
            parse_config("[solve]\nk = 1\nradius = 1\nn_r = 0\nn_t = 8\n", false);
        cfg.output_dir = fresh_dir("exit2c").string();
        CHECK(run(cfg, true).exit_code == 2);
    }
    SUBCASE("newton starved of iterations reports nonconvergence") {
        RunConfig cfg = parse_config("[solve]\nk = 1\np = 3\nradius = 2\nn_r = 16\n"
                                     "n_t = 16\nmax_newton = 1\n",
                                     false);
        cfg.output_dir = fresh_dir("exit3").string();
        CHECK(run(cfg, true).exit_code == 3);
    }
    SUBCASE("failing check exits one") {
        // f(r) = r violates the curvature comparison bound
        RunConfig cfg = parse_config(
            "[check-manifold]\nwarping = custom\nk = 1\nf_expr = r\nf_prime_expr = 1\n"
            "f_double_prime_expr = 0\n",
            false);
        cfg.output_dir = fresh_dir("exit1").string();
        CHECK(run(cfg, true).exit_code == 1);
    }
    SUBCASE("passing certificate exits zero") {
        RunConfig cfg = parse_config(
            "[certify-convexity]\nwarping = hyperbolic\nk = 1\nr_intersect = 1\n"
            "n_t_grid = 50\nn_theta_grid = 11\n",
            false);
        cfg.output_dir = fresh_dir("exit0").string();
        const RunOutcome out = run(cfg, true);
        CHECK(out.exit_code == 0);
        CHECK(slurp(out.report_path).find("\"verdict\": \"pass\"") != std::string::npos);
    }
}

TEST_CASE("sr-curve artifacts are byte-identical across runs") {
    const std::string text = "[sr-curve]\nr_intersect = 1\nk = 1\nt_max = 3\nseed = 7\n";
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    RunConfig cfg1 = parse_config(text, false);
    cfg1.output_dir = d1.string();
    RunConfig cfg2 = parse_config(text, false);
    cfg2.output_dir = d2.string();
    CHECK(run(cfg1, true).exit_code == 0);
    CHECK(run(cfg2, true).exit_code == 0);
    const std::string a = slurp(d1 / "sr_curve.csv");
    const std::string b = slurp(d2 / "sr_curve.csv");
    REQUIRE(a.size() > 100);
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "t,r,theta,first_integral_residual");
}

TEST_CASE("borbely command writes schedule and constants") {
    RunConfig cfg = parse_config(
        "[borbely]\nk = 1\neps = 1\nalpha = 0.785\nr0 = 10\nr_stop = 12\n", false);
    const fs::path dir = fresh_dir("borb");
    cfg.output_dir = dir.string();
    const RunOutcome out = run(cfg, true);
    CHECK(out.exit_code == 0);
    CHECK(fs::exists(dir / "borbely_schedule.csv"));
    const std::string rep = slurp(out.report_path);
    CHECK(rep.find("angle_budget_bucket") != std::string::npos);
    CHECK(rep.find("finite_crossing_log10_steps") != std::string::npos);
}

TEST_CASE("barrier command emits a residual table") {
    RunConfig cfg = parse_config("[barrier]\nk = 1\nn = 2\nheight_c = 1\np = 2\n", false);
    const fs::path dir = fresh_dir("barr");
    cfg.output_dir = dir.string();
    CHECK(run(cfg, true).exit_code == 0);
    const std::string csv = slurp(dir / "barrier_table.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "s,g,sigma,residual");
}

TEST_CASE("report command aggregates the battery") {
    RunConfig cfg = parse_config(
        "[report]\nwarping = hyperbolic\nk = 1\np = 2\nn = 2\nheight_c = 1\n"
        "r_intersect = 1\n",
        false);
    const fs::path dir = fresh_dir("rep");
    cfg.output_dir = dir.string();
    const RunOutcome out = run(cfg, true);
    CHECK(out.exit_code == 0);
    CHECK(slurp(out.report_path).find("\"all_pass\": true") != std::string::npos);
}
