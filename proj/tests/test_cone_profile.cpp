#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/cone_profile.hpp"

using namespace hardy;

namespace {

ProblemParams params(int N, double p, double tol = 1e-7) {
    ProblemParams prm;
    prm.N = N;
    prm.p = p;
    prm.tol = tol;
    return prm;
}

// first zero of the quadratic Legendre polynomial P_2(cos theta)
constexpr double legendre2_zero = 0.95531661812450927;

}  // namespace

TEST_CASE("profile_rhs reproduces the planar trigonometric family") {
    // N = 2, p = 2: omega = cos(lambda theta) solves the equation for every lambda
    for (double lambda : {0.5, 1.0, 2.0, 3.7}) {
        auto prm = params(2, 2.0);
        for (double theta : {0.3, 1.0, 2.0, 2.9}) {
            double w = std::cos(lambda * theta);
            double dw = -lambda * std::sin(lambda * theta);
            if (lambda * lambda * w * w + dw * dw <= 0.0) continue;
            double rhs = profile_rhs(theta, w, dw, lambda, prm);
            CHECK(std::abs(rhs - (-lambda * lambda * w)) <= 1e-12 * (1.0 + lambda * lambda));
        }
    }
}

TEST_CASE("profile_rhs reproduces cos(theta) for lambda = 1 in every dimension") {
    // p = 2, lambda = 1: omega = cos(theta) solves the equation for every N
    for (int N : {2, 3, 4, 7}) {
        auto prm = params(N, 2.0);
        for (double theta : {0.2, 0.9, 1.4}) {
            double rhs = profile_rhs(theta, std::cos(theta), -std::sin(theta), 1.0, prm);
            CHECK(std::abs(rhs + std::cos(theta)) <= 1e-12);
        }
    }
    // and for p != 2 as well: |grad(x_N)| is constant, so x_N is p-harmonic
    for (double p : {1.5, 3.0, 4.2}) {
        auto prm = params(3, p);
        double theta = 0.8;
        double rhs = profile_rhs(theta, std::cos(theta), -std::sin(theta), 1.0, prm);
        CHECK(std::abs(rhs + std::cos(theta)) <= 1e-12);
    }
}

TEST_CASE("profile_rhs has the regular axis limit") {
    struct Case {
        int N;
        double p, lambda;
    };
    for (Case c : {Case{2, 2.0, 0.5}, Case{3, 2.0, 2.0}, Case{2, 3.0, 0.66},
                   Case{4, 2.5, 1.3}, Case{7, 1.2, 0.9}}) {
        auto prm = params(c.N, c.p);
        double lt = c.lambda * (c.p - 1.0) + double(c.N) - c.p;
        double limit = -c.lambda * lt / double(c.N - 1);
        double cc = -limit / 2.0;
        double theta = 1e-8;
        double w = 1.0 - cc * theta * theta;
        double dw = -2.0 * cc * theta;
        double rhs = profile_rhs(theta, w, dw, c.lambda, prm);
        CHECK(std::abs(rhs - limit) <= 1e-9 * (1.0 + std::abs(limit)));
    }
}

TEST_CASE("profile_rhs rejects out-of-range angles and degenerate states") {
    auto prm = params(3, 2.0);
    CHECK_THROWS_AS(profile_rhs(0.0, 1.0, 0.0, 1.0, prm), std::domain_error);
    CHECK_THROWS_AS(profile_rhs(-0.1, 1.0, 0.0, 1.0, prm), std::domain_error);
    CHECK_THROWS_AS(profile_rhs(pi, 1.0, 0.0, 1.0, prm), std::domain_error);
    CHECK_THROWS_AS(profile_rhs(1.0, 0.0, 0.0, 1.0, prm), std::domain_error);
}

TEST_CASE("shoot finds the quadratic Legendre zero") {
    auto res = shoot(2.0, params(3, 2.0), pi / 2);
    REQUIRE(res.crossed);
    CHECK(std::abs(res.theta_star - legendre2_zero) <= 1e-7);
    CHECK_FALSE(res.degraded);
}

TEST_CASE("shoot resolves planar zeros, including one exactly at pi") {
    auto res = shoot(1.0, params(2, 2.0), pi);
    REQUIRE(res.crossed);
    CHECK(std::abs(res.theta_star - pi / 2) <= 1e-8);

    // cos(theta/2) vanishes exactly at the integration cap; the linearly
    // extrapolated root must be accepted
    res = shoot(0.5, params(2, 2.0), pi);
    REQUIRE(res.crossed);
    CHECK(std::abs(res.theta_star - pi) <= 1e-6);

    // first zero at pi/0.6 > pi: no crossing inside the sphere
    res = shoot(0.3, params(2, 2.0), pi);
    CHECK_FALSE(res.crossed);
}

TEST_CASE("shoot handles a nonlinear exponent at the far endpoint") {
    // N = 2, p = 3: the degree of the full-aperture cone is (p+1-N)/p = 2/3
    auto res = shoot(2.0 / 3.0, params(2, 3.0), pi);
    REQUIRE(res.crossed);
    CHECK(std::abs(res.theta_star - pi) <= 1e-5);
}

TEST_CASE("shoot zeros move inward as lambda grows") {
    auto prm = params(3, 2.0);
    double prev = pi;
    for (double lambda : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        auto res = shoot(lambda, prm, pi);
        REQUIRE(res.crossed);
        CHECK(res.theta_star < prev);
        prev = res.theta_star;
    }
}

TEST_CASE("shoot validates its arguments") {
    CHECK_THROWS_AS(shoot(-1.0, params(2, 2.0), pi), std::invalid_argument);
    CHECK_THROWS_AS(shoot(0.0, params(2, 2.0), pi), std::invalid_argument);
    CHECK_THROWS_AS(shoot(1.0, params(1, 2.0), pi), std::invalid_argument);
    CHECK_THROWS_AS(shoot(1.0, params(2, 1.0), pi), std::invalid_argument);
    CHECK_THROWS_AS(shoot(1.0, params(2, 2.0), 1e-9), std::invalid_argument);
}

TEST_CASE("solve_lambda gives degree one on the half-space cone") {
    // gamma = pi/2: H = x_N is p-harmonic for every N and p, so lambda = 1
    struct Case {
        int N;
        double p;
    };
    for (Case c : {Case{2, 2.0}, Case{3, 2.0}, Case{2, 3.0}, Case{3, 3.0}, Case{5, 2.5}}) {
        auto pr = solve_lambda(pi / 2, params(c.N, c.p));
        CHECK(std::abs(pr.lambda - 1.0) <= 1e-6);
        CHECK(pr.theta_grid.size() == 4096);
        CHECK(pr.phi.front() == 1.0);
        CHECK(pr.phi.back() == 0.0);
        CHECK(pr.residual <= 1e-6);
        CHECK_FALSE(pr.degraded);
    }
}

TEST_CASE("solve_lambda matches the planar wedge formula") {
    // N = 2, p = 2: lambda = pi / (2 gamma), profile cos(lambda theta)
    for (double gamma : {pi / 3, 2 * pi / 3, 3 * pi / 4, 0.9, 2.2}) {
        auto pr = solve_lambda(gamma, params(2, 2.0));
        double expect = pi / (2.0 * gamma);
        CHECK(std::abs(pr.lambda - expect) <= 1e-6 * expect);
        double worst_phi = 0.0, worst_dphi = 0.0;
        for (int k = 1; k < 50; ++k) {
            double theta = gamma * double(k) / 50.0;
            worst_phi = std::max(worst_phi,
                                 std::abs(phi_at(pr, theta) - std::cos(expect * theta)));
            worst_dphi = std::max(
                worst_dphi,
                std::abs(dphi_at(pr, theta) + expect * std::sin(expect * theta)));
        }
        CHECK(worst_phi <= 1e-6);
        CHECK(worst_dphi <= 1e-5);
    }
}

TEST_CASE("solve_lambda matches the full-aperture formula") {
    // gamma = pi requires p + 1 > N and gives lambda = (p+1-N)/p
    struct Case {
        int N;
        double p, expect;
    };
    for (Case c : {Case{2, 2.0, 0.5}, Case{2, 3.0, 2.0 / 3.0}, Case{3, 3.0, 1.0 / 3.0},
                   Case{2, 1.5, 1.0 / 3.0}}) {
        auto pr = solve_lambda(pi, params(c.N, c.p));
        CHECK(std::abs(pr.lambda - c.expect) <= 1e-6);
    }
}

TEST_CASE("solve_lambda rejects the degenerate full-aperture cases") {
    CHECK_THROWS_AS(solve_lambda(pi, params(3, 2.0)), solver_error);
    CHECK_THROWS_AS(solve_lambda(pi, params(5, 2.0)), solver_error);
    CHECK_THROWS_AS(solve_lambda(pi, params(4, 3.0)), solver_error);  // p+1 = N exactly
    try {
        solve_lambda(pi, params(3, 2.0));
    } catch (const solver_error& e) {
        CHECK(std::string(e.what()).find("vanishes") != std::string::npos);
    }
}

TEST_CASE("solve_lambda snaps near-pi apertures and validates the range") {
    auto pr = solve_lambda(3.1416, params(2, 2.0));
    CHECK(pr.gamma == pi);
    CHECK(std::abs(pr.lambda - 0.5) <= 1e-6);
    CHECK_THROWS_AS(solve_lambda(3.1416, params(3, 2.0)), solver_error);
    CHECK_THROWS_AS(solve_lambda(3.15, params(2, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(solve_lambda(0.0, params(2, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(solve_lambda(-1.0, params(2, 2.0)), std::invalid_argument);
}

TEST_CASE("solve_lambda degree decreases as the aperture widens") {
    for (auto prm : {params(3, 2.7), params(2, 2.0)}) {
        double prev = 1e300;
        for (double gamma : {pi / 8, pi / 4, pi / 2, 3 * pi / 4, pi - 0.2}) {
            auto pr = solve_lambda(gamma, prm);
            CHECK(pr.lambda < prev);
            prev = pr.lambda;
        }
    }
}

TEST_CASE("solve_lambda inverts the Legendre zero") {
    auto pr = solve_lambda(legendre2_zero, params(3, 2.0));
    CHECK(std::abs(pr.lambda - 2.0) <= 1e-5);
}

TEST_CASE("stored samples satisfy the equation and are mutually consistent") {
    for (auto [gamma, prm] :
         {std::pair{2.0, params(3, 2.5)}, std::pair{pi, params(2, 2.0)},
          std::pair{1.1, params(2, 3.5)}}) {
        auto pr = solve_lambda(gamma, prm);
        CHECK(pr.residual <= 1e-6);
        // dphi really is the derivative of phi: 2nd-order differences of phi
        // agree with dphi up to O(h^2)
        double h = pr.theta_grid[1] - pr.theta_grid[0];
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < pr.phi.size(); ++i) {
            if (i + 1 == pr.phi.size() - 1) continue;  // last value is pinned
            double fd = (pr.phi[i + 1] - pr.phi[i - 1]) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - pr.dphi[i]));
        }
        double scale = (pr.lambda * pr.lambda * pr.lambda + 1.0) * h * h + 1e-9;
        CHECK(worst <= 5.0 * scale);
        for (std::size_t i = 0; i + 2 < pr.phi.size(); ++i) CHECK(pr.phi[i + 1] < pr.phi[i]);
    }
}

TEST_CASE("phi_at and dphi_at interpolate accurately and clamp the range") {
    auto pr = solve_lambda(pi / 2, params(2, 2.0));
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        double theta = (pi / 2) * double(k) / 1000.0;
        worst = std::max(worst, std::abs(phi_at(pr, theta) - std::cos(theta)));
    }
    CHECK(worst <= 1e-7);
    CHECK(phi_at(pr, 0.0) == 1.0);
    CHECK(phi_at(pr, pr.gamma) == 0.0);
    CHECK_THROWS_AS(phi_at(pr, -0.01), std::domain_error);
    CHECK_THROWS_AS(phi_at(pr, pr.gamma + 0.01), std::domain_error);
    CHECK_THROWS_AS(dphi_at(pr, pr.gamma + 0.01), std::domain_error);

    // interpolated values inherit monotonicity
    std::mt19937 rng(12345);
    auto pr2 = solve_lambda(2.8, params(4, 3.2));
    std::uniform_real_distribution<double> U(0.0, pr2.gamma);
    for (int k = 0; k < 1000; ++k) {
        double a = U(rng), b = U(rng);
        if (a > b) std::swap(a, b);
        CHECK(phi_at(pr2, a) >= phi_at(pr2, b));
    }
}

TEST_CASE("eval_translated reproduces the linear half-space field") {
    // gamma = pi/2, lambda = 1, Phi = cos(theta): H(x) = <x - z, axis>
    auto pr = solve_lambda(pi / 2, params(3, 2.0));
    BoundaryCone cone;
    cone.vertex = {1.0, -2.0, 0.5};
    cone.axis = {0.0, 0.0, 1.0};
    cone.aperture = pi / 2;
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> x = {cone.vertex[0] + U(rng), cone.vertex[1] + U(rng),
                                 cone.vertex[2] + std::abs(U(rng)) + 1e-3};
        double expect = x[2] - cone.vertex[2];
        double r2 = 0;
        for (int i = 0; i < 3; ++i) {
            double d = x[i] - cone.vertex[i];
            r2 += d * d;
        }
        if (expect / std::sqrt(r2) > std::cos(pi / 2 - 1e-3)) {
            auto v = eval_translated(pr, cone, x);
            CHECK(std::abs(v.value - expect) <= 1e-7 * (1.0 + std::abs(expect)));
            CHECK(std::abs(v.grad[0]) <= 1e-7);
            CHECK(std::abs(v.grad[1]) <= 1e-7);
            CHECK(std::abs(v.grad[2] - 1.0) <= 1e-7);
        }
    }
}

TEST_CASE("eval_translated agrees with polar coordinates in 2D and 3D") {
    auto pr2 = solve_lambda(2.5, params(2, 3.0));
    BoundaryCone cone2;
    cone2.vertex = {0.3, 0.7};
    double a0 = 0.8;
    cone2.axis = {std::cos(a0), std::sin(a0)};
    cone2.aperture = 2.5;
    for (double t : {-2.3, -1.0, 0.0, 0.4, 2.49}) {
        for (double r : {0.25, 1.0, 3.0}) {
            std::vector<double> x = {cone2.vertex[0] + r * std::cos(a0 + t),
                                     cone2.vertex[1] + r * std::sin(a0 + t)};
            auto v = eval_translated(pr2, cone2, x);
            double expect = std::pow(r, pr2.lambda) * phi_at(pr2, std::abs(t));
            CHECK(std::abs(v.value - expect) <= 1e-9 * (1.0 + expect));
        }
    }

    auto pr3 = solve_lambda(2.0, params(3, 2.0));
    BoundaryCone cone3;
    cone3.vertex = {0.0, 0.0, 0.0};
    cone3.axis = {0.0, 0.0, 1.0};
    cone3.aperture = 2.0;
    for (double theta : {0.0, 0.5, 1.2, 1.99}) {
        for (double az : {0.0, 1.1, 4.0}) {
            double r = 1.7;
            std::vector<double> x = {r * std::sin(theta) * std::cos(az),
                                     r * std::sin(theta) * std::sin(az),
                                     r * std::cos(theta)};
            auto v = eval_translated(pr3, cone3, x);
            double expect = std::pow(r, pr3.lambda) * phi_at(pr3, theta);
            CHECK(std::abs(v.value - expect) <= 1e-9 * (1.0 + expect));
            // gradient decomposition: radial part lambda*Phi*r^(lambda-1),
            // axis part lambda*Phi*cos - dPhi*sin (times r^(lambda-1))
            double rl1 = std::pow(r, pr3.lambda - 1.0);
            double gdotu = 0.0, gdota = 0.0;
            for (int i = 0; i < 3; ++i) {
                gdotu += v.grad[i] * x[i] / r;
                gdota += v.grad[i] * cone3.axis[i];
            }
            double Phi = phi_at(pr3, theta), dPhi = dphi_at(pr3, theta);
            CHECK(std::abs(gdotu - rl1 * pr3.lambda * Phi) <= 1e-9 * (1.0 + rl1));
            CHECK(std::abs(gdota - rl1 * (pr3.lambda * Phi * std::cos(theta) -
                                          dPhi * std::sin(theta))) <= 1e-9 * (1.0 + rl1));
        }
    }
}

TEST_CASE("eval_translated is homogeneous of degree lambda") {
    auto pr = solve_lambda(2.0, params(3, 2.6));
    BoundaryCone cone;
    cone.vertex = {0.1, 0.2, -0.3};
    cone.axis = {0.0, 1.0, 0.0};
    cone.aperture = 2.0;
    std::vector<double> d = {0.4, 0.8, 0.2};
    std::vector<double> x1(3);
    for (int i = 0; i < 3; ++i) x1[i] = cone.vertex[i] + d[i];
    auto v1 = eval_translated(pr, cone, x1);
    for (double t : {0.5, 2.0, 7.0}) {
        std::vector<double> xt(3);
        for (int i = 0; i < 3; ++i) xt[i] = cone.vertex[i] + t * d[i];
        auto vt = eval_translated(pr, cone, xt);
        double s = std::pow(t, pr.lambda);
        CHECK(std::abs(vt.value - s * v1.value) <= 1e-10 * s * v1.value);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(vt.grad[i] - s / t * v1.grad[i]) <= 1e-9 * (s / t));
    }
}

TEST_CASE("eval_translated gradient matches finite differences") {
    auto pr = solve_lambda(2.5, params(2, 3.0));
    BoundaryCone cone;
    cone.vertex = {0.0, 0.0};
    cone.axis = {1.0, 0.0};
    cone.aperture = 2.5;
    double fd_h = 1e-6;
    for (auto x0 : {std::vector<double>{0.8, 0.3}, std::vector<double>{0.2, -0.5},
                    std::vector<double>{-0.4, 0.6}}) {
        auto v = eval_translated(pr, cone, x0);
        for (int i = 0; i < 2; ++i) {
            auto xp = x0, xm = x0;
            xp[i] += fd_h;
            xm[i] -= fd_h;
            double fd = (eval_translated(pr, cone, xp).value -
                         eval_translated(pr, cone, xm).value) /
                        (2.0 * fd_h);
            CHECK(std::abs(fd - v.grad[i]) <= 1e-5 * (1.0 + std::abs(v.grad[i])));
        }
    }
}

TEST_CASE("eval_translated rejects singular and outside points") {
    auto pr = solve_lambda(1.0, params(3, 2.0));
    BoundaryCone cone;
    cone.vertex = {0.0, 0.0, 0.0};
    cone.axis = {0.0, 0.0, 1.0};
    cone.aperture = 1.0;
    CHECK_THROWS_AS(eval_translated(pr, cone, {0.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eval_translated(pr, cone, {1.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eval_translated(pr, cone, {0.0, 0.0, -1.0}), std::domain_error);
    BoundaryCone bad = cone;
    bad.axis = {0.0, 0.0, 2.0};
    CHECK_THROWS_AS(eval_translated(pr, bad, {0.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(eval_translated(pr, cone, {0.0, 1.0}), std::invalid_argument);

    // on the slit (gamma = pi, theta = pi) the gradient direction is undefined
    auto slit = solve_lambda(pi, params(2, 2.0));
    BoundaryCone sc;
    sc.vertex = {0.0, 0.0};
    sc.axis = {1.0, 0.0};
    sc.aperture = pi;
    CHECK_THROWS_AS(eval_translated(slit, sc, {-1.0, 0.0}), std::domain_error);
    // but on the axis itself (theta = 0, dPhi = 0) the gradient is fine
    auto ok = eval_translated(slit, sc, {1.0, 0.0});
    CHECK(std::abs(ok.value - 1.0) <= 1e-9);
}

TEST_CASE("gradient_norm is consistent with eval_translated") {
    auto pr = solve_lambda(2.2, params(3, 2.4));
    BoundaryCone cone;
    cone.vertex = {0.0, 0.0, 0.0};
    cone.axis = {0.0, 0.0, 1.0};
    cone.aperture = 2.2;
    for (double theta : {0.1, 0.9, 1.8}) {
        for (double r : {0.3, 1.0, 4.0}) {
            std::vector<double> x = {r * std::sin(theta), 0.0, r * std::cos(theta)};
            auto v = eval_translated(pr, cone, x);
            double g2 = 0.0;
            for (double gi : v.grad) g2 += gi * gi;
            double gn = gradient_norm(pr, r, theta);
            CHECK(std::abs(std::sqrt(g2) - gn) <= 1e-10 * (1.0 + gn));
        }
    }
    // half-space profile: |grad| = 1 everywhere
    auto half = solve_lambda(pi / 2, params(2, 2.0));
    for (double theta : {0.0, 0.7, 1.5}) CHECK(std::abs(gradient_norm(half, 2.0, theta) - 1.0) <= 1e-6);
    CHECK_THROWS_AS(gradient_norm(half, 0.0, 0.3), std::domain_error);
}

TEST_CASE("dump_csv emits the documented layout") {
    auto pr = solve_lambda(pi / 2, params(2, 2.0));
    std::ostringstream os;
    dump_csv(pr, os);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    REQUIRE(lines.size() == 2 + 4096);
    CHECK(lines[0].rfind("# gamma=", 0) == 0);
    CHECK(lines[0].find("lambda=") != std::string::npos);
    CHECK(lines[1] == "theta,phi,dphi");
    CHECK(lines[2] == "0,1,0");
    // a middle row round-trips the stored doubles exactly
    std::size_t i = 2048;
    double a, b, c;
    char comma;
    std::istringstream row(lines[2 + i]);
    row >> a >> comma >> b >> comma >> c;
    CHECK(a == pr.theta_grid[i]);
    CHECK(b == pr.phi[i]);
    CHECK(c == pr.dphi[i]);
}
