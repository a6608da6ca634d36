#include "hardy/cone_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "hardy/rk45.hpp"

namespace hardy {

namespace {

constexpr double theta_series_start = 1e-6;
constexpr double theta_cap_margin = 1e-8;  // keep away from the cot(theta) pole at pi
constexpr std::size_t profile_samples = 4096;

double lambda_tilde(double lambda, const ProblemParams& prm) {
    return lambda * (prm.p - 1.0) + double(prm.N) - prm.p;
}

// Series start near the axis: omega = 1 - c theta^2 + O(theta^4) with
// 2c = lambda*(lambda(p-1)+N-p)/(N-1), forced by regularity at theta = 0.
void series_start(double lambda, const ProblemParams& prm, double theta0, double& omega,
                  double& domega) {
    double c = lambda * lambda_tilde(lambda, prm) / (2.0 * double(prm.N - 1));
    omega = 1.0 - c * theta0 * theta0;
    domega = -2.0 * c * theta0;
}

struct ProfileOde {
    double lambda;
    ProblemParams prm;
    rk_state<2> operator()(double theta, const rk_state<2>& y) const {
        return {y[1], profile_rhs(theta, y[0], y[1], lambda, prm)};
    }
};

}  // namespace

double profile_rhs(double theta, double omega, double domega, double lambda,
                   const ProblemParams& prm) {
    if (!(theta > 0.0) || theta >= pi)
        throw std::domain_error("profile_rhs: theta must lie in (0, pi)");
    double Q = lambda * lambda * omega * omega + domega * domega;
    if (Q <= 0.0)
        throw std::domain_error("profile_rhs: degenerate state (omega and omega' both zero)");
    double cot = std::cos(theta) / std::sin(theta);
    double num = (prm.p - 2.0) * lambda * lambda * omega * domega * domega / Q +
                 double(prm.N - 2) * cot * domega + lambda * lambda_tilde(lambda, prm) * omega;
    double den = 1.0 + (prm.p - 2.0) * domega * domega / Q;  // = (l^2 w^2 + (p-1) w'^2)/Q > 0
    return -num / den;
}

ShootResult shoot(double lambda, const ProblemParams& prm, double theta_max) {
    validate(prm);
    if (!(lambda > 0.0)) throw std::invalid_argument("shoot: lambda must be > 0");
    if (!(theta_max > theta_series_start))
        throw std::invalid_argument("shoot: theta_max too small");
    double cap = std::min(theta_max, pi - theta_cap_margin);

    ProfileOde ode{lambda, prm};
    rk45_stepper<2> stepper;
    stepper.f = ode;
    stepper.rtol = stepper.atol = std::max(prm.tol / 10.0, 1e-13);
    // keep steps well inside an oscillation half-period (solutions behave
    // like cos(lambda theta) for large lambda), so no zero can be stepped over
    stepper.hmax = std::min(0.05, 1.0 / lambda);

    double theta = theta_series_start;
    rk_state<2> y;
    series_start(lambda, prm, theta, y[0], y[1]);
    rk_state<2> k1 = ode(theta, y);

    ShootResult res;
    double h = std::min(1e-4, stepper.hmax);
    while (theta < cap) {
        h = std::min(h, cap - theta);
        rk_state<2> ynew;
        bool ok = stepper.try_step(theta, y, h, ynew, k1);
        if (!ok) {
            double hs = stepper.suggest(h);
            if (hs < stepper.hmin) {
                // endpoint singularity ground the step size down; report the
                // current position with the degraded flag
                res.degraded = true;
                break;
            }
            h = hs;
            continue;
        }
        if (ynew[0] <= 0.0) {
            // first zero inside this step: bisect by re-stepping from the
            // pre-step state (each probe is a single full-accuracy RK step)
            double lo = 0.0, hi = h;
            const rk_state<2> k_at_y = ode(theta, y);
            for (int it = 0; it < 80 && (hi - lo) > 1e-16 * std::max(1.0, theta); ++it) {
                double mid = 0.5 * (lo + hi);
                rk_state<2> yprobe, kprobe = k_at_y;
                // ynew is filled even when the error test rejects the step,
                // and mid < h was already accepted, so the probe is reliable
                stepper.try_step(theta, y, mid, yprobe, kprobe);
                (yprobe[0] > 0.0 ? lo : hi) = mid;
            }
            res.crossed = true;
            res.theta_star = theta + 0.5 * (lo + hi);
            return res;
        }
        theta += h;
        y = ynew;
        h = std::min(stepper.suggest(h), stepper.hmax);
        // the ODE is homogeneous of degree one in (omega, omega'): rescale to
        // keep the state bounded when lambda is far from the eigenvalue
        double mag = std::max(std::abs(y[0]), std::abs(y[1]));
        if (mag > 1e6) {
            y[0] /= mag;
            y[1] /= mag;
            k1 = ode(theta, y);
        }
    }

    // reached the cap (or underflowed next to it) with omega still positive;
    // a zero hiding between the cap and theta_max must still be reported
    if (y[1] < 0.0) {
        if (theta_max > pi - theta_cap_margin) {
            // cap sits just short of pi, where profiles vanish like s^kappa
            // in s = pi - theta with kappa = (p+1-N)/(p-1) in (0, 1]; fit
            // omega = C s^kappa + D from (omega, omega') and let the sign of
            // the remainder D decide (linear extrapolation is biased when
            // kappa < 1, i.e. when the derivative blows up at pi)
            double kappa = (prm.p + 1.0 - double(prm.N)) / (prm.p - 1.0);
            if (kappa > 0.0) {
                double s = pi - theta;
                double D = y[0] - (-y[1]) * s / kappa;
                if (D <= 0.0) {
                    double C = (-y[1]) * std::pow(s, 1.0 - kappa) / kappa;
                    double root =
                        (C > 0.0) ? pi - std::pow(-D / C, 1.0 / kappa) : pi;
                    res.crossed = true;
                    res.theta_star = std::clamp(root, theta, pi);
                    return res;
                }
            }
            // kappa <= 0 (p+1 <= N): a positive profile cannot reach zero at pi
        } else {
            // regular endpoint: accept a linearly extrapolated root if it
            // lands essentially at the cap
            double overshoot = y[0] / -y[1];
            if (theta + overshoot <= theta_max + 1e-6) {
                res.crossed = true;
                res.theta_star = std::min(theta + overshoot, theta_max);
                return res;
            }
        }
    }
    res.crossed = false;
    res.theta_star = 0.0;
    return res;
}

namespace {

// Integrate once more at the final lambda, landing steps exactly on a uniform
// sample grid over [0, gamma]; sample_tol is tighter than the shooting
// tolerance so that re-differencing the samples reproduces the ODE.
void sample_profile(double lambda, double gamma, const ProblemParams& prm, ConeProfile& out,
                    bool* degraded) {
    std::size_t n = profile_samples;
    out.theta_grid.assign(n, 0.0);
    out.phi.assign(n, 0.0);
    out.dphi.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) out.theta_grid[k] = gamma * double(k) / double(n - 1);

    ProfileOde ode{lambda, prm};
    rk45_stepper<2> stepper;
    stepper.f = ode;
    stepper.rtol = stepper.atol = std::clamp(prm.tol / 100.0, 1e-13, 1e-9);
    stepper.hmax = std::min(0.05, 1.0 / lambda);

    double theta = theta_series_start;
    rk_state<2> y;
    series_start(lambda, prm, theta, y[0], y[1]);
    rk_state<2> k1 = ode(theta, y);

    out.phi[0] = 1.0;  // exact axis values
    out.dphi[0] = 0.0;

    double cap = std::min(gamma, pi - theta_cap_margin);
    std::size_t next = 1;
    // samples that fall below the series start (only ever theta=0 in practice)
    while (next < n && out.theta_grid[next] <= theta) {
        series_start(lambda, prm, out.theta_grid[next], out.phi[next], out.dphi[next]);
        ++next;
    }
    double h = std::min(1e-4, stepper.hmax);
    while (next < n) {
        double target = std::min(out.theta_grid[next], cap);
        if (theta >= target) {
            out.phi[next] = y[0];
            out.dphi[next] = y[1];
            ++next;
            continue;
        }
        h = std::min(h, target - theta);
        rk_state<2> ynew;
        if (!stepper.try_step(theta, y, h, ynew, k1)) {
            double hs = stepper.suggest(h);
            if (hs < stepper.hmin) {
                if (degraded) *degraded = true;
                // freeze the remaining samples at the current state
                for (; next < n; ++next) {
                    out.phi[next] = y[0];
                    out.dphi[next] = y[1];
                }
                break;
            }
            h = hs;
            continue;
        }
        theta += h;
        y = ynew;
        if (theta >= target - 1e-15) {
            out.phi[next] = y[0];
            out.dphi[next] = y[1];
            ++next;
        }
        h = std::min(stepper.suggest(h), stepper.hmax);
    }
    // boundary condition: the eigen-profile vanishes at gamma; the integrated
    // value there is O(bisection tolerance) and is pinned to exactly zero
    out.phi[n - 1] = 0.0;
}

double profile_defect(const ConeProfile& pr, const ProblemParams& prm) {
    // 4th-order central differences of dphi vs the ODE right-hand side,
    // skipping a thin layer at both ends (the far endpoint may be singular
    // for gamma = pi and N > 2)
    std::size_t n = pr.theta_grid.size();
    if (n < 16) return 0.0;
    double h = pr.theta_grid[1] - pr.theta_grid[0];
    std::size_t lo = std::max<std::size_t>(3, std::size_t(0.005 * double(n)));
    std::size_t hi = n - 1 - std::max<std::size_t>(3, std::size_t(0.005 * double(n)));
    double worst = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        double fd = (-pr.dphi[i + 2] + 8.0 * pr.dphi[i + 1] - 8.0 * pr.dphi[i - 1] +
                     pr.dphi[i - 2]) /
                    (12.0 * h);
        double rhs = profile_rhs(pr.theta_grid[i], pr.phi[i], pr.dphi[i], pr.lambda, prm);
        worst = std::max(worst, std::abs(fd - rhs) / (1.0 + std::abs(rhs)));
    }
    return worst;
}

}  // namespace

ConeProfile solve_lambda(double gamma, const ProblemParams& prm) {
    validate(prm);
    if (std::abs(gamma - pi) <= 1e-3) gamma = pi;
    if (!(gamma > 0.0) || gamma > pi)
        throw std::invalid_argument("solve_lambda: gamma must lie in (0, pi]");
    if (gamma == pi && prm.p + 1.0 <= double(prm.N))
        throw solver_error("eigenvalue vanishes (p+1 <= N): no positive degree at gamma = pi");

    double theta_max = gamma;  // first zero at or before gamma decides the bisection side
    auto theta_star = [&](double lambda) {
        ShootResult r = shoot(lambda, prm, theta_max);
        return r.crossed ? r.theta_star : std::numeric_limits<double>::infinity();
    };

    double lo = 1e-4, hi = 50.0;
    // need: profile at `hi` crosses before gamma, profile at `lo` does not
    if (!(theta_star(hi) < gamma)) {
        hi *= 10.0;
        if (!(theta_star(hi) < gamma))
            throw solver_error("solve_lambda: could not bracket (upper end)");
    }
    if (!(theta_star(lo) >= gamma)) {
        lo /= 10.0;
        if (!(theta_star(lo) >= gamma))
            throw solver_error("solve_lambda: could not bracket (lower end)");
    }

    // shooting map sanity: theta_star should decrease in lambda; verify on a
    // coarse geometric grid before trusting the bisection
    {
        double prev = std::numeric_limits<double>::infinity();
        bool seen_finite = false;
        for (int k = 0; k <= 5; ++k) {
            double lam = lo * std::pow(hi / lo, double(k) / 5.0);
            double ts = theta_star(lam);
            if (seen_finite && ts > prev + 1e-9)
                throw solver_error("solve_lambda: shooting map is not monotone in lambda");
            if (std::isfinite(ts)) seen_finite = true;
            if (std::isfinite(ts)) prev = ts;
        }
    }

    double width_goal = std::max(prm.tol, 1e-13);
    for (int it = 0; it < 200 && (hi - lo) > width_goal * std::max(1.0, lo); ++it) {
        double mid = 0.5 * (lo + hi);
        (theta_star(mid) >= gamma ? lo : hi) = mid;
    }

    ConeProfile out;
    out.gamma = gamma;
    out.N = prm.N;
    out.p = prm.p;
    out.lambda = 0.5 * (lo + hi);
    bool degraded = false;
    sample_profile(out.lambda, gamma, prm, out, &degraded);
    out.degraded = degraded;
    out.residual = profile_defect(out, prm);

    // the eigen-profile is strictly decreasing (an interior critical point
    // would be a local maximum, impossible after a decreasing stretch); a
    // degraded tail is frozen and only required to be non-increasing
    for (std::size_t i = 0; i + 2 < out.phi.size(); ++i) {
        bool bad = out.degraded ? (out.phi[i + 1] > out.phi[i]) : (out.phi[i + 1] >= out.phi[i]);
        if (bad) throw solver_error("solve_lambda: profile is not decreasing");
    }
    return out;
}

namespace {

std::size_t bracket_index(const ConeProfile& pr, double theta) {
    // uniform grid: direct index, clamped to the last interval
    std::size_t n = pr.theta_grid.size();
    double h = pr.theta_grid[1] - pr.theta_grid[0];
    double s = theta / h;
    std::size_t i = s <= 0.0 ? 0 : std::min(std::size_t(s), n - 2);
    return i;
}

}  // namespace

double phi_at(const ConeProfile& profile, double theta) {
    if (theta < -1e-12 || theta > profile.gamma + 1e-12)
        throw std::domain_error("phi_at: theta outside [0, gamma]");
    theta = std::clamp(theta, 0.0, profile.gamma);
    if (theta == 0.0) return 1.0;
    if (theta == profile.gamma) return 0.0;
    std::size_t i = bracket_index(profile, theta);
    double h = profile.theta_grid[i + 1] - profile.theta_grid[i];
    double t = (theta - profile.theta_grid[i]) / h;
    double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    double h10 = t * (1.0 - t) * (1.0 - t);
    double h01 = t * t * (3.0 - 2.0 * t);
    double h11 = t * t * (t - 1.0);
    double v = h00 * profile.phi[i] + h10 * h * profile.dphi[i] + h01 * profile.phi[i + 1] +
               h11 * h * profile.dphi[i + 1];
    return std::clamp(v, 0.0, 1.0);
}

double dphi_at(const ConeProfile& profile, double theta) {
    if (theta < -1e-12 || theta > profile.gamma + 1e-12)
        throw std::domain_error("dphi_at: theta outside [0, gamma]");
    theta = std::clamp(theta, 0.0, profile.gamma);
    std::size_t i = bracket_index(profile, theta);
    double h = profile.theta_grid[i + 1] - profile.theta_grid[i];
    double t = (theta - profile.theta_grid[i]) / h;
    double d00 = (6.0 * t * t - 6.0 * t) / h;
    double d10 = 3.0 * t * t - 4.0 * t + 1.0;
    double d01 = (6.0 * t - 6.0 * t * t) / h;
    double d11 = 3.0 * t * t - 2.0 * t;
    return d00 * profile.phi[i] + d10 * profile.dphi[i] + d01 * profile.phi[i + 1] +
           d11 * profile.dphi[i + 1];
}

ConeFieldValue eval_translated(const ConeProfile& profile, const BoundaryCone& cone,
                               const std::vector<double>& x) {
    if (cone.vertex.size() != x.size() || cone.axis.size() != x.size())
        throw std::invalid_argument("eval_translated: dimension mismatch");
    double axis_norm = 0.0;
    for (double a : cone.axis) axis_norm += a * a;
    if (std::abs(axis_norm - 1.0) > 1e-9)
        throw std::invalid_argument("eval_translated: axis must be a unit vector");

    std::size_t dim = x.size();
    std::vector<double> d(dim);
    double r2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        d[i] = x[i] - cone.vertex[i];
        r2 += d[i] * d[i];
    }
    double r = std::sqrt(r2);
    if (r == 0.0) throw std::domain_error("eval_translated: x is the cone vertex (singular)");

    double ct = 0.0;
    for (std::size_t i = 0; i < dim; ++i) ct += d[i] * cone.axis[i];
    ct = std::clamp(ct / r, -1.0, 1.0);
    double theta = std::acos(ct);
    if (theta > std::min(cone.aperture, profile.gamma) + 1e-12)
        throw std::domain_error("eval_translated: point outside the cone");
    theta = std::min({theta, cone.aperture, profile.gamma});

    double lam = profile.lambda;
    double Phi = phi_at(profile, theta);
    double dPhi = dphi_at(profile, theta);
    double rl1 = std::pow(r, lam - 1.0);

    ConeFieldValue out;
    out.value = rl1 * r * Phi;
    out.grad.assign(dim, 0.0);
    // unit vectors: radial u = d/r and polar e_theta = (ct*u - a)/|ct*u - a|;
    // note |ct*u - a| = sin(theta) exactly, so this stays well conditioned
    double wnorm2 = 0.0;
    std::vector<double> w(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        w[i] = ct * d[i] / r - cone.axis[i];
        wnorm2 += w[i] * w[i];
    }
    double wnorm = std::sqrt(wnorm2);
    // wnorm vanishes in two places: on the axis (theta ~ 0), where the
    // angular term vanishes with it because Phi'(0) = 0, and opposite the
    // axis (theta ~ pi, reachable only when gamma = pi), where a nonzero
    // Phi' leaves the gradient direction genuinely undefined.
    if (wnorm <= 1e-14 && ct < 0.0 && std::abs(dPhi) > 1e-12)
        throw std::domain_error(
            "eval_translated: gradient direction undefined opposite the axis");
    for (std::size_t i = 0; i < dim; ++i) {
        double radial = lam * Phi * d[i] / r;
        double angular = (wnorm > 1e-14) ? dPhi * w[i] / wnorm : 0.0;
        out.grad[i] = rl1 * (radial + angular);
    }
    return out;
}

double gradient_norm(const ConeProfile& profile, double r, double theta) {
    if (!(r > 0.0)) throw std::domain_error("gradient_norm: r must be > 0");
    double Phi = phi_at(profile, theta);
    double dPhi = dphi_at(profile, theta);
    double lam = profile.lambda;
    return std::pow(r, lam - 1.0) * std::sqrt(lam * lam * Phi * Phi + dPhi * dPhi);
}

void dump_csv(const ConeProfile& profile, std::ostream& os) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "# gamma=%.17g, N=%d, p=%.17g, lambda=%.17g, residual=%.17g\n",
                  profile.gamma, profile.N, profile.p, profile.lambda, profile.residual);
    os << buf << "theta,phi,dphi\n";
    for (std::size_t i = 0; i < profile.theta_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", profile.theta_grid[i],
                      profile.phi[i], profile.dphi[i]);
        os << buf;
    }
}

}  // namespace hardy
