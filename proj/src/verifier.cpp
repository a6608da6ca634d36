#include "hardy/verifier.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "hardy/kernels.hpp"
#include "hardy/params.hpp"

namespace hardy {

SupersolutionReport weak_residual(const GridField& u, double alpha, double p, double mu) {
    const QuadratureWeights w = make_weights(*u.domain, alpha, p);
    const std::vector<double> v = masked_values(w, u);
    const DiscreteDomain& g = *w.domain;
    const std::size_t total = v.size();

    const double nonpos = kernels::map_max(
        total, [&](std::size_t k) { return (w.active[k] && v[k] <= 0.0) ? 1.0 : 0.0; }, 0.0);
    if (nonpos > 0.0)
        throw std::invalid_argument(
            "weak_residual: supersolution candidate must be positive on active nodes");

    std::vector<double> diff(total);
    weak_diffusion(w, v, 0.0, diff);
    std::vector<double> mass_term(total, 0.0);
    kernels::for_each_index(total, [&](std::size_t k) {
        if (w.active[k]) mass_term[k] = w.node_w[k] * std::pow(v[k], p - 1.0);
    });

    SupersolutionReport rep;
    rep.mu = mu;
    rep.nodes_tested = w.n_active;
    rep.scale =
        kernels::map_max(total, [&](std::size_t k) { return std::fabs(diff[k]); }, 0.0) +
        kernels::map_max(total, [&](std::size_t k) { return std::fabs(mass_term[k]); }, 0.0);

    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < total; ++k) {
        if (!w.active[k]) continue;
        const double a = diff[k] - mu * mass_term[k];
        if (a < best) {
            best = a;
            arg = k;
        }
    }
    rep.min_weak_residual = best;
    rep.worst_node = g.node(arg % g.nx, arg / g.nx);

    // essinf of |grad u| delta / u over interior nodes (delta > 2h), using the
    // larger one-sided difference per axis so kinks of u are not averaged away.
    const double h = g.h;
    double lam = std::numeric_limits<double>::infinity();
    for (std::size_t iy = 1; iy + 1 < g.ny; ++iy)
        for (std::size_t ix = 1; ix + 1 < g.nx; ++ix) {
            const std::size_t k = g.idx(ix, iy);
            if (!g.inside[k] || g.delta[k] <= 2.0 * h || v[k] <= 0.0) continue;
            if (!g.inside[k + 1] || !g.inside[k - 1] || !g.inside[k + g.nx] ||
                !g.inside[k - g.nx])
                continue;
            const double gx =
                std::max(std::fabs(v[k + 1] - v[k]), std::fabs(v[k] - v[k - 1])) / h;
            const double gy =
                std::max(std::fabs(v[k + g.nx] - v[k]), std::fabs(v[k] - v[k - g.nx])) / h;
            lam = std::min(lam, std::hypot(gx, gy) * g.delta[k] / v[k]);
        }
    rep.Lambda_measured = std::isfinite(lam) ? lam : 0.0;
    return rep;
}

GridField agmon_composite(const GridField& U, double nu, double eta) {
    if (!U.domain) throw std::invalid_argument("agmon_composite: field has no grid");
    if (!(nu < eta)) throw std::invalid_argument("agmon_composite: need nu < eta");
    const DiscreteDomain& g = *U.domain;
    const std::size_t total = g.nx * g.ny;
    if (U.values.size() != total)
        throw std::invalid_argument("agmon_composite: field size does not match its grid");
    const double bad = kernels::map_max(
        total,
        [&](std::size_t k) {
            if (!g.inside[k]) return 0.0;
            const double x = U.values[k];
            return (x > 0.0 && x <= 0.5) ? 0.0 : 1.0;
        },
        0.0);
    if (bad > 0.0)
        throw std::invalid_argument(
            "agmon_composite: normalization error: values must lie in (0, 1/2] on inside nodes");
    GridField out;
    out.domain = U.domain;
    out.values.assign(total, 0.0);
    kernels::for_each_index(total, [&](std::size_t k) {
        if (!g.inside[k]) return;
        const double x = U.values[k];
        out.values[k] = std::pow(x, nu) - std::pow(x, eta);
    });
    return out;
}

std::pair<GridField, MinConstructionReport> min_construction(const DiscreteDomain& grid,
                                                             const DomainSpec& spec, double gamma,
                                                             const ConeProfile& profile,
                                                             std::size_t n_cones, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("min_construction: epsilon must be > 0");
    if (std::fabs(profile.gamma - gamma) > 1e-12)
        throw std::invalid_argument("min_construction: profile aperture does not match gamma");
    if (!spec.exterior_cone_beta)
        throw std::invalid_argument("min_construction: domain has no exterior cone aperture");
    const double beta = *spec.exterior_cone_beta;
    const std::vector<BoundaryCone> cones = boundary_sample(spec, n_cones, gamma);

    const std::size_t total = grid.nx * grid.ny;
    GridField u;
    u.domain = &grid;
    u.values.assign(total, 0.0);
    std::vector<int> which(total, -1);
    std::atomic<int> bad{0};
    kernels::for_each_index(total, [&](std::size_t k) {
        if (!grid.inside[k]) return;
        const Point2 xy = grid.node(k % grid.nx, k / grid.nx);
        const std::vector<double> x{xy[0], xy[1]};
        double best = std::numeric_limits<double>::infinity();
        int arg = -1;
        for (std::size_t j = 0; j < cones.size(); ++j) {
            double val;
            try {
                val = eval_translated(profile, cones[j], x).value;
            } catch (const std::exception&) {
                bad.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            if (val < best) {
                best = val;
                arg = static_cast<int>(j);
            }
        }
        u.values[k] = best;
        which[k] = arg;
    });
    if (bad.load() != 0)
        throw solver_error(
            "min_construction: a grid node escapes a sampled barrier cone (containment "
            "violated)");

    MinConstructionReport rep;
    rep.epsilon = epsilon;
    rep.gamma = gamma;
    rep.n_cones = cones.size();
    rep.claimed = profile.lambda *
                  std::pow(phi_at(profile, std::min(beta, profile.gamma)), 1.0 / profile.lambda) /
                  (1.0 + epsilon);

    const double h = grid.h;
    double essinf = std::numeric_limits<double>::infinity();
    std::size_t tested = 0, flagged = 0, arg_worst = 0;
    for (std::size_t iy = 1; iy + 1 < grid.ny; ++iy)
        for (std::size_t ix = 1; ix + 1 < grid.nx; ++ix) {
            const std::size_t k = grid.idx(ix, iy);
            if (!grid.inside[k] || grid.delta[k] <= 2.0 * h) continue;
            const std::size_t kE = k + 1, kW = k - 1, kN = k + grid.nx, kS = k - grid.nx;
            if (!grid.inside[kE] || !grid.inside[kW] || !grid.inside[kN] || !grid.inside[kS])
                continue;
            const int k0 = which[k];
            double gx, gy;
            const bool eE = which[kE] == k0, eW = which[kW] == k0;
            if (eE && eW)
                gx = (u.values[kE] - u.values[kW]) / (2.0 * h);
            else if (eE)
                gx = (u.values[kE] - u.values[k]) / h;
            else if (eW)
                gx = (u.values[k] - u.values[kW]) / h;
            else {
                ++flagged;
                continue;
            }
            const bool eN = which[kN] == k0, eS = which[kS] == k0;
            if (eN && eS)
                gy = (u.values[kN] - u.values[kS]) / (2.0 * h);
            else if (eN)
                gy = (u.values[kN] - u.values[k]) / h;
            else if (eS)
                gy = (u.values[k] - u.values[kS]) / h;
            else {
                ++flagged;
                continue;
            }
            const double ratio = std::hypot(gx, gy) * grid.delta[k] / u.values[k];
            ++tested;
            if (ratio < essinf) {
                essinf = ratio;
                arg_worst = k;
            }
        }
    if (tested == 0)
        throw solver_error("min_construction: no interior node qualifies for the ratio scan");
    rep.essinf_ratio = essinf;
    rep.nodes_tested = tested;
    rep.flagged = flagged;
    rep.worst_node = grid.node(arg_worst % grid.nx, arg_worst / grid.nx);
    return {std::move(u), rep};
}

double projection_window(const DomainSpec& spec, const Point2& x, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("projection_window: epsilon must be > 0");
    const auto [dx, px] = distance(spec, x);  // domain_error when x is not interior
    const double t = 0.99 * epsilon / (2.0 + epsilon);
    const double tau = t * dx;

    std::mt19937 rng(20250301u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 1000; ++s) {
        const double r = tau * std::sqrt(unit(rng));
        const double phi = 2.0 * pi * unit(rng);
        const Point2 y{x[0] + r * std::cos(phi), x[1] + r * std::sin(phi)};
        const double dy = distance(spec, y).first;
        const double to_px = std::hypot(y[0] - px[0], y[1] - px[1]);
        if (dy > to_px + 1e-12 || to_px > (1.0 + epsilon) * dy + 1e-12)
            throw solver_error("projection_window: sampled point violates the comparison");
    }
    return tau;
}

AppendixCheck appendix_inequality(double a, double nu, double eta, double p) {
    if (!(p > 1.0)) throw std::domain_error("appendix_inequality: p must be > 1");
    if (!(nu < eta)) throw std::domain_error("appendix_inequality: need nu < eta");
    const double lo = (a + p - 1.0) / p;
    if (a + p > 1.0) {
        const double hi = (a + p - 1.0) / (p - 1.0);
        if (nu < lo || eta > hi)
            throw std::domain_error(
                "appendix_inequality: exponents outside [(a+p-1)/p, (a+p-1)/(p-1)]");
    } else if (a + p < 1.0) {
        if (nu < lo || eta > 0.0)
            throw std::domain_error("appendix_inequality: exponents outside [(a+p-1)/p, 0]");
    } else {
        throw std::domain_error("appendix_inequality: a + p = 1 admits no exponent interval");
    }
    // lambda_t / t = |t|^{p-2} [a + (1-t)(p-1)]; multiplying the displayed
    // forms through by nu and |eta|^{p-2} removes every division, which keeps
    // eta = 0 (allowed when a + p < 1) and nu near 0 finite.
    const double s = std::pow(std::fabs(nu), p - 2.0);
    const double b_nu = a + (1.0 - nu) * (p - 1.0);
    const double b_eta = a + (1.0 - eta) * (p - 1.0);
    AppendixCheck out;
    out.lhs = (p - 2.0) * s * b_nu * eta + s * eta * b_eta;
    out.rhs = (p - 1.0) * s * nu * b_nu;
    out.holds = out.lhs < out.rhs;
    return out;
}

}  // namespace hardy
