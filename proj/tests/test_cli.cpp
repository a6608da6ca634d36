// End-to-end tests for the command-line tool: spawn the real binary, capture
// stdout/stderr/exit codes, and check the emitted records against closed
// forms computed independently here.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/serialize.hpp"

namespace {

using hardy::ordered_json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Run the CLI with the given arguments, capturing both streams.  The optional
// prefix lets tests set environment variables for the child process.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const std::string out_path = "cli_stdout_" + std::to_string(counter) + ".txt";
    const std::string err_path = "cli_stderr_" + std::to_string(counter) + ".txt";
    ++counter;
    const std::string cmd =
        env_prefix + HARDY_CLI_PATH " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::vector<ordered_json> json_lines(const std::string& text) {
    std::vector<ordered_json> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(ordered_json::parse(line));
    return out;
}

std::vector<std::string> text_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("profile: right-angle cone in three dimensions has degree one") {
    const RunResult r = run_cli("profile --gamma 1.5708 --N 3 --p 2");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    const ordered_json& j = lines[0];
    CHECK(j.at("command") == "profile");
    // 1.5708 sits 3.7e-6 from the exact right angle and the degree moves at
    // unit rate there, so the comparison tolerance reflects the flag, not
    // the solver.
    CHECK(j.at("lambda").get<double>() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(j.at("residual").get<double>() < 1e-6);
    CHECK(j.at("degraded").get<bool>() == false);
    CHECK(j.at("gamma").get<double>() == doctest::Approx(1.5708));
    CHECK(j.at("samples").get<long>() > 100);
}

TEST_CASE("profile: closed aperture in the plane has degree one half") {
    // 3.1416 is close enough to snap to the exact endpoint
    const RunResult r = run_cli("profile --gamma 3.1416 --N 2 --p 2");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].at("lambda").get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(lines[0].at("gamma").get<double>() == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("profile: closed aperture with p + 1 <= N fails with a solver error") {
    const RunResult r = run_cli("profile --gamma 3.1416 --N 5 --p 2");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("eigenvalue vanishes") != std::string::npos);
}

TEST_CASE("profile: --out writes the sampled profile as CSV") {
    const std::string path = "cli_profile_dump.csv";
    const RunResult r = run_cli("profile --gamma 1.5708 --N 2 --p 2 --out " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(json_lines(r.out).size() == 1);  // metadata still goes to stdout
    const auto rows = text_lines(slurp(path));
    std::remove(path.c_str());
    REQUIRE(rows.size() > 100);
    CHECK(rows[0].rfind("# gamma=", 0) == 0);
    CHECK(rows[1] == "theta,phi,dphi");
}

TEST_CASE("flag errors exit with code 1") {
    CHECK(run_cli("profile").exit_code == 1);                       // missing --gamma
    CHECK(run_cli("profile --gamma 1 --bogus 2").exit_code == 1);   // unknown flag
    CHECK(run_cli("").exit_code == 1);                              // missing subcommand
    CHECK(run_cli("estimate --domain nowhere").exit_code == 1);     // not in the gallery
    CHECK(run_cli("estimate --alpha 0").exit_code == 1);            // missing domain
    CHECK(run_cli("estimate --domain sector").exit_code == 1);      // missing half-angle
    CHECK(run_cli("verify --kind bogus").exit_code == 1);
    CHECK(run_cli("verify --kind supersolution --domain unit_square").exit_code == 1);
    CHECK(run_cli("verify --kind appendix --format csv").exit_code == 1);
    CHECK(run_cli("bound --beta 1.5 --simply-connected --N 3").exit_code == 1);
    const RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("Usage") != std::string::npos);
}

TEST_CASE("bound: right-angle exterior cone tabulates optimum, endpoint, and known rows") {
    const double beta = 1.5708;
    const RunResult r = run_cli("bound --beta 1.5708 --alpha 0 --p 2 --N 2");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 4);

    std::vector<ordered_json> cone_rows;
    const ordered_json* exterior_row = nullptr;
    const ordered_json* dimensional_row = nullptr;
    for (const auto& j : lines) {
        CHECK(j.at("command") == "bound");
        CHECK(j.at("beta").get<double>() == doctest::Approx(beta));
        if (j.at("method") == "cone") cone_rows.push_back(j);
        if (j.at("method") == "known" && j.at("details").at("name") == "planar_exterior_cone")
            exterior_row = &j;
        if (j.at("method") == "known" && j.at("details").at("name") == "dimensional")
            dimensional_row = &j;
    }
    REQUIRE(cone_rows.size() == 2);
    REQUIRE(exterior_row != nullptr);
    REQUIRE(dimensional_row != nullptr);

    // Closed aperture: the barrier degree is 1/2 with profile cos(theta/2),
    // so the rate is cos^2(beta/2)/2 and the bound (rate/2)^2.
    const double endpoint_value = std::pow(std::cos(beta / 2.0), 4.0) / 16.0;
    const ordered_json* endpoint = nullptr;
    const ordered_json* best = nullptr;
    for (const auto& j : cone_rows) {
        if (std::abs(j.at("details").at("gamma_star").get<double>() - pi) < 1e-9)
            endpoint = &j;
        else
            best = &j;
    }
    REQUIRE(endpoint != nullptr);
    REQUIRE(best != nullptr);
    CHECK(endpoint->at("valid").get<bool>());
    CHECK(endpoint->at("value").get<double>() ==
          doctest::Approx(endpoint_value).epsilon(1e-6));
    // The optimized aperture strictly beats the closed endpoint here.
    CHECK(best->at("valid").get<bool>());
    CHECK(best->at("value").get<double>() > endpoint->at("value").get<double>());
    CHECK(best->at("details").at("gamma_star").get<double>() < pi);
    CHECK(best->at("details").at("gamma_star").get<double>() > beta);

    // pi^2 / (16 beta^2) for the planar exterior-cone inequality.
    CHECK(exterior_row->at("valid").get<bool>());
    CHECK(exterior_row->at("value").get<double>() ==
          doctest::Approx(pi * pi / (16.0 * beta * beta)).epsilon(1e-12));

    // alpha + p = 2 = N: the dimensional gate fails, row is marked invalid.
    CHECK(dimensional_row->at("valid").get<bool>() == false);
    CHECK(!dimensional_row->contains("value"));
}

TEST_CASE("bound: large weight exponent invalidates every cone row") {
    const RunResult r = run_cli("bound --beta 1.0 --alpha 5 --p 2 --N 2");
    REQUIRE(r.exit_code == 0);
    std::size_t cone_rows = 0;
    for (const auto& j : json_lines(r.out)) {
        if (j.at("method") == "cone") {
            ++cone_rows;
            CHECK(j.at("valid").get<bool>() == false);
            CHECK(!j.contains("value"));
        }
        if (j.at("method") == "known" && j.at("details").at("name") == "dimensional") {
            // alpha + p - N = 5: bound (5/2)^2
            CHECK(j.at("valid").get<bool>());
            CHECK(j.at("value").get<double>() == doctest::Approx(6.25).epsilon(1e-12));
        }
    }
    CHECK(cone_rows == 2);
}

TEST_CASE("bound: fixed aperture emits a single cone row") {
    const RunResult r = run_cli("bound --beta 1.5708 --gamma 3.1416 --alpha 0 --p 2 --N 2");
    REQUIRE(r.exit_code == 0);
    std::size_t cone_rows = 0;
    for (const auto& j : json_lines(r.out))
        if (j.at("method") == "cone") {
            ++cone_rows;
            CHECK(j.at("details").at("gamma_star").get<double>() ==
                  doctest::Approx(pi).epsilon(1e-12));
        }
    CHECK(cone_rows == 1);
}

TEST_CASE("bound: CSV output has a header and one row per record") {
    const RunResult json_run = run_cli("bound --beta 1.5708");
    const RunResult csv_run = run_cli("bound --beta 1.5708 --format csv");
    REQUIRE(csv_run.exit_code == 0);
    const auto rows = text_lines(csv_run.out);
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == "command,beta,method,name,gamma_star,lambda,phi_beta,valid,value,N,p,alpha");
    CHECK(rows.size() - 1 == json_lines(json_run.out).size());
    CHECK(rows[1].rfind("bound,", 0) == 0);
}

TEST_CASE("estimate: unit square Laplace constant at moderate resolution") {
    const RunResult r = run_cli("estimate --domain unit_square --alpha 0 --p 2 --h 0.0625");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    const ordered_json& j = lines[0];
    CHECK(j.at("command") == "estimate");
    CHECK(j.at("method") == "inverse_power_iteration");
    CHECK(j.at("converged").get<bool>());
    CHECK(j.at("domain").at("shape") == "unit_square");
    // Pinned discrete value at h = 1/16 (the estimator suite re-derives it
    // against an independent eigensolver).
    CHECK(j.at("value").get<double>() == doctest::Approx(0.6461686474).epsilon(1e-6));
}

TEST_CASE("estimate: iteration cap exhausts and exits 3 with the record retained") {
    const RunResult r = run_cli("estimate --domain unit_square --h 0.125 --max-iter 1");
    CHECK(r.exit_code == 3);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].at("converged").get<bool>() == false);
}

TEST_CASE("estimate: --dump-field writes the minimizer grid") {
    const std::string path = "cli_field_dump.csv";
    const RunResult r =
        run_cli("estimate --domain unit_disk --h 0.125 --dump-field " + path);
    REQUIRE(r.exit_code == 0);
    const auto rows = text_lines(slurp(path));
    std::remove(path.c_str());
    REQUIRE(rows.size() > 10);
    CHECK(rows[0] == "x,y,inside,value");
}

TEST_CASE("estimate: CSV record") {
    const RunResult r = run_cli("estimate --domain unit_square --h 0.125 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = text_lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "command,domain,alpha,p,h,value,iterations,converged,residual");
    CHECK(rows[1].rfind("estimate,unit_square,0,2,0.125,", 0) == 0);
}

TEST_CASE("verify appendix: random sweep reports zero failures") {
    const RunResult r = run_cli("verify --kind appendix --samples 2000 --seed 11");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    const ordered_json& j = lines[0];
    CHECK(j.at("kind") == "appendix");
    CHECK(j.at("samples").get<long>() == 2000);
    CHECK(j.at("failures").get<long>() == 0);
    CHECK(j.at("exact").at("lhs").get<double>() == 0.1875);
    CHECK(j.at("exact").at("rhs").get<double>() == 0.25);
    CHECK(j.at("exact").at("holds").get<bool>());
}

TEST_CASE("verify mincon: square with three-quarter aperture meets its claim") {
    const RunResult r = run_cli(
        "verify --kind mincon --domain unit_square --gamma 2.356 --epsilon 0.1 "
        "--h 0.03125 --n-cones 32");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    const ordered_json& j = lines[0];
    CHECK(j.at("kind") == "mincon");
    CHECK(j.at("meets_claim").get<bool>());
    CHECK(j.at("essinf_ratio").get<double>() > 0.0);
    CHECK(j.at("claimed").get<double>() > 0.0);
    CHECK(j.at("nodes_tested").get<long>() > 100);
}

TEST_CASE("verify projection: window radius matches the closed form") {
    const RunResult r = run_cli(
        "verify --kind projection --domain unit_disk --x 0.1 --y -0.2 --epsilon 0.5");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    const ordered_json& j = lines[0];
    CHECK(j.at("passes").get<bool>());
    const double t = 0.99 * 0.5 / 2.5;
    const double delta = 1.0 - std::hypot(0.1, -0.2);
    CHECK(j.at("tau").get<double>() == doctest::Approx(t * delta).epsilon(1e-12));
}

TEST_CASE("verify projection: exterior point is a solver failure") {
    const RunResult r = run_cli(
        "verify --kind projection --domain unit_disk --x 2 --y 0 --epsilon 0.5");
    CHECK(r.exit_code == 2);
    CHECK(!r.err.empty());
}

TEST_CASE("verify supersolution: composite barrier passes at the critical rate") {
    const RunResult r = run_cli(
        "verify --kind supersolution --domain unit_square --h 0.0078125 "
        "--mu 0.249999 --normalize-max 0.2");
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    const ordered_json& j = lines[0];
    CHECK(j.at("kind") == "supersolution");
    CHECK(j.at("nu").get<double>() == doctest::Approx(0.501).epsilon(1e-12));
    CHECK(j.at("passes").get<bool>());
    CHECK(j.at("min_weak_residual").get<double>() >=
          -1e-8 * j.at("scale").get<double>());
}

TEST_CASE("sweep: full grid, deterministic output under any thread count") {
    const std::string args = "sweep --beta 0.7854,1.5708 --alpha 0 --p 2 --N 2";
    const RunResult first = run_cli(args);
    REQUIRE(first.exit_code == 0);
    const auto lines = json_lines(first.out);
    CHECK(lines.size() == 8);  // per beta: two cone rows + two known rows

    const RunResult again = run_cli(args);
    CHECK(again.out == first.out);

    const RunResult t1 = run_cli(args, "HARDY_THREADS=1 ");
    const RunResult t3 = run_cli(args, "HARDY_THREADS=3 ");
    CHECK(t1.out == first.out);
    CHECK(t3.out == first.out);
}

TEST_CASE("sweep: solver failures become error records, not aborts") {
    const RunResult r = run_cli("sweep --beta 1.0 --N 5 --p 2 --gamma 3.1416");
    REQUIRE(r.exit_code == 0);
    bool saw_error = false;
    for (const auto& j : json_lines(r.out))
        if (j.contains("error")) {
            saw_error = true;
            CHECK(j.at("error").get<std::string>().find("eigenvalue vanishes") !=
                  std::string::npos);
        }
    CHECK(saw_error);
}

TEST_CASE("sweep: CSV format emits one header plus data rows") {
    const RunResult r = run_cli("sweep --beta 0.7854,1.5708 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = text_lines(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].rfind("command,beta,", 0) == 0);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].rfind("bound,", 0) == 0);
}

TEST_CASE("estimate: domain config file is accepted") {
    const std::string path = "cli_domain.json";
    {
        std::ofstream f(path);
        f << R"({"shape": "sector", "params": {"half_angle": 0.7853981633974483, )"
          << R"("radius": 1.0}})";
    }
    const RunResult r = run_cli("estimate --domain-json " + path + " --h 0.125");
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].at("domain").at("shape") == "sector");
}
