#include "hardy/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "hardy/kernels.hpp"

namespace hardy {

namespace {

inline double pow_abs(double x, double p) {
    if (p == 2.0) return x * x;
    return std::pow(std::fabs(x), p);
}

void check_compatible(const QuadratureWeights& w, const GridField& u) {
    if (!u.domain) throw std::invalid_argument("field has no grid");
    const DiscreteDomain& a = *w.domain;
    const DiscreteDomain& b = *u.domain;
    const bool same = &a == &b || (a.nx == b.nx && a.ny == b.ny && a.h == b.h &&
                                   a.origin[0] == b.origin[0] && a.origin[1] == b.origin[1]);
    if (!same) throw std::invalid_argument("field grid does not match the quadrature grid");
    if (u.values.size() != a.nx * a.ny)
        throw std::invalid_argument("field size does not match its grid");
}

// Largest squared gradient magnitude over weighted cells (for the
// regularization scale of the p != 2 line search).
double max_grad_sq(const QuadratureWeights& w, const std::vector<double>& u) {
    const DiscreteDomain& g = *w.domain;
    const std::size_t nx = g.nx, ncx = nx - 1, ncy = g.ny - 1;
    const double h = g.h;
    return kernels::map_max(
        ncx * ncy,
        [&](std::size_t c) {
            if (w.cell_w[c] == 0.0) return 0.0;
            const std::size_t k = c % ncx + nx * (c / ncx);
            const double dx = (u[k + 1] - u[k]) / h;
            const double dy = (u[k + nx] - u[k]) / h;
            return dx * dx + dy * dy;
        },
        0.0);
}

void scale_vector(std::vector<double>& v, double c) {
    kernels::for_each_index(v.size(), [&](std::size_t k) { v[k] *= c; });
}

double norm2(const std::vector<double>& v) { return std::sqrt(kernels::dot(v, v)); }

}  // namespace

QuadratureWeights make_weights(const DiscreteDomain& grid, double alpha, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    QuadratureWeights w;
    w.domain = &grid;
    w.alpha = alpha;
    w.p = p;
    const std::size_t nx = grid.nx, ny = grid.ny, total = nx * ny;
    w.active.assign(total, 0);
    w.node_w.assign(total, 0.0);
    const double half_h = 0.5 * grid.h;
    const double h2 = grid.h * grid.h;
    std::size_t count = 0;
    for (std::size_t iy = 1; iy + 1 < ny; ++iy)
        for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
            const std::size_t k = grid.idx(ix, iy);
            if (!grid.inside[k] || grid.delta[k] < half_h) continue;
            w.active[k] = 1;
            w.node_w[k] = std::pow(grid.delta[k], -(alpha + p)) * h2;
            ++count;
        }
    w.n_active = count;
    if (count == 0)
        throw std::invalid_argument(
            "grid too coarse: no nodes remain after the boundary-layer exclusion");
    const std::size_t ncx = nx - 1, ncy = ny - 1;
    w.cell_w.assign(ncx * ncy, 0.0);
    kernels::for_each_index(ncx * ncy, [&](std::size_t c) {
        const std::size_t cx = c % ncx, cy = c / ncx;
        const std::size_t corners[4] = {grid.idx(cx, cy), grid.idx(cx + 1, cy),
                                        grid.idx(cx, cy + 1), grid.idx(cx + 1, cy + 1)};
        int cnt = 0;
        double s = 0.0;
        for (const std::size_t k : corners)
            if (w.active[k]) {
                ++cnt;
                s += std::pow(grid.delta[k], -alpha);
            }
        if (cnt > 0) w.cell_w[c] = s / cnt;
    });
    return w;
}

std::vector<double> masked_values(const QuadratureWeights& w, const GridField& u) {
    check_compatible(w, u);
    const std::size_t total = u.values.size();
    std::vector<double> v(total);
    kernels::for_each_index(total,
                            [&](std::size_t k) { v[k] = w.active[k] ? u.values[k] : 0.0; });
    const double bad =
        kernels::map_max(total, [&](std::size_t k) { return std::isfinite(v[k]) ? 0.0 : 1.0; }, 0.0);
    if (bad > 0.0) throw std::invalid_argument("field has non-finite values");
    return v;
}

double energy(const QuadratureWeights& w, const std::vector<double>& u) {
    const DiscreteDomain& g = *w.domain;
    const std::size_t nx = g.nx, ncx = nx - 1, ncy = g.ny - 1;
    const double h = g.h, h2 = h * h, p = w.p;
    return kernels::map_sum(ncx * ncy, [&](std::size_t c) {
        const double wc = w.cell_w[c];
        if (wc == 0.0) return 0.0;
        const std::size_t k = c % ncx + nx * (c / ncx);
        const double gx = (u[k + 1] - u[k]) / h;
        const double gy = (u[k + nx] - u[k]) / h;
        const double m2 = gx * gx + gy * gy;
        return p == 2.0 ? wc * m2 * h2 : wc * std::pow(m2, 0.5 * p) * h2;
    });
}

double mass(const QuadratureWeights& w, const std::vector<double>& u) {
    const double p = w.p;
    return kernels::map_sum(w.node_w.size(), [&](std::size_t k) {
        const double nw = w.node_w[k];
        return nw == 0.0 ? 0.0 : nw * pow_abs(u[k], p);
    });
}

void weak_diffusion(const QuadratureWeights& w, const std::vector<double>& u, double eps,
                    std::vector<double>& out) {
    const DiscreteDomain& g = *w.domain;
    const std::size_t nx = g.nx, ncx = nx - 1;
    const double h2inv = 1.0 / (g.h * g.h), p = w.p, e2 = eps * eps;
    const bool plain = (p == 2.0 && e2 == 0.0);
    out.assign(u.size(), 0.0);
    kernels::for_each_index(u.size(), [&](std::size_t k) {
        if (!w.active[k]) return;
        const std::size_t ix = k % nx, iy = k / nx;
        // Contribution of cell (cx, cy) tested against the hat at node k:
        // w_c h^2 (|grad u|^2 + eps^2)^{(p-2)/2} grad u . grad phi_k.
        // role 0: k is the cell origin; role 1: its x-neighbor; role 2: its
        // y-neighbor.  The h^2 measure cancels the hat-gradient scale.
        const auto term = [&](std::size_t cx, std::size_t cy, int role) {
            const double wc = w.cell_w[cx + ncx * cy];
            if (wc == 0.0) return 0.0;
            const std::size_t kc = cx + nx * cy;
            const double dx = u[kc + 1] - u[kc];
            const double dy = u[kc + nx] - u[kc];
            double f = 1.0;
            if (!plain) {
                const double me2 = (dx * dx + dy * dy) * h2inv + e2;
                if (me2 == 0.0) return 0.0;
                f = std::pow(me2, 0.5 * p - 1.0);
            }
            const double num = role == 0 ? -(dx + dy) : (role == 1 ? dx : dy);
            return wc * f * num;
        };
        // Active nodes are never on the grid edge, so all three cells exist.
        out[k] = term(ix, iy, 0) + term(ix - 1, iy, 1) + term(ix, iy - 1, 2);
    });
}

void energy_gradient(const QuadratureWeights& w, const std::vector<double>& u, double eps,
                     std::vector<double>& out) {
    weak_diffusion(w, u, eps, out);
    scale_vector(out, w.p);
}

void mass_gradient(const QuadratureWeights& w, const std::vector<double>& u,
                   std::vector<double>& out) {
    const double p = w.p;
    out.assign(u.size(), 0.0);
    kernels::for_each_index(u.size(), [&](std::size_t k) {
        const double nw = w.node_w[k];
        if (nw == 0.0 || u[k] == 0.0) return;
        const double v = p == 2.0 ? u[k] : std::pow(std::fabs(u[k]), p - 2.0) * u[k];
        out[k] = p * nw * v;
    });
}

double rayleigh(const GridField& u, double alpha, double p) {
    const QuadratureWeights w = make_weights(*u.domain, alpha, p);
    const std::vector<double> v = masked_values(w, u);
    const double den = mass(w, v);
    if (!(den > 0.0) || !std::isfinite(den))
        throw std::invalid_argument("degenerate field: weighted mass vanishes on the active mask");
    return energy(w, v) / den;
}

namespace {

// Jacobi diagonal of the p = 2 stiffness operator.
std::vector<double> stiffness_diagonal(const QuadratureWeights& w) {
    const DiscreteDomain& g = *w.domain;
    const std::size_t nx = g.nx, ncx = nx - 1;
    std::vector<double> d(w.node_w.size(), 1.0);
    kernels::for_each_index(d.size(), [&](std::size_t k) {
        if (!w.active[k]) return;
        const std::size_t ix = k % nx, iy = k / nx;
        d[k] = 2.0 * w.cell_w[ix + ncx * iy] + w.cell_w[(ix - 1) + ncx * iy] +
               w.cell_w[ix + ncx * (iy - 1)];
        if (d[k] <= 0.0) d[k] = 1.0;
    });
    return d;
}

// Preconditioned conjugate gradients for the p = 2 stiffness system A x = b.
void cg_solve(const QuadratureWeights& w, const std::vector<double>& diag,
              const std::vector<double>& b, std::vector<double>& x, double rel_tol,
              int max_iter) {
    const std::size_t n = b.size();
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        return;
    }
    std::vector<double> r(n), z(n), d(n), Ad(n);
    weak_diffusion(w, x, 0.0, Ad);
    kernels::for_each_index(n, [&](std::size_t k) {
        r[k] = w.active[k] ? b[k] - Ad[k] : 0.0;
        z[k] = r[k] / diag[k];
    });
    d = z;
    double rz = kernels::dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        if (norm2(r) <= rel_tol * bnorm) break;
        weak_diffusion(w, d, 0.0, Ad);
        const double dAd = kernels::dot(d, Ad);
        if (!(dAd > 0.0)) break;  // numerically singular direction
        const double a = rz / dAd;
        kernels::for_each_index(n, [&](std::size_t k) {
            x[k] += a * d[k];
            r[k] -= a * Ad[k];
        });
        kernels::for_each_index(n, [&](std::size_t k) { z[k] = r[k] / diag[k]; });
        const double rz_new = kernels::dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        kernels::for_each_index(n, [&](std::size_t k) { d[k] = z[k] + beta * d[k]; });
    }
}

void fix_sign(std::vector<double>& u) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double a = std::fabs(u[k]);
        if (a > best) {
            best = a;
            arg = k;
        }
    }
    if (u[arg] < 0.0) scale_vector(u, -1.0);
}

RayleighEstimate pack_estimate(const DiscreteDomain& grid, double value, int iterations,
                               double residual, bool converged, std::vector<double> u) {
    fix_sign(u);
    RayleighEstimate est;
    est.value = value;
    est.h = grid.h;
    est.iterations = iterations;
    est.residual = residual;
    est.converged = converged;
    est.minimizer.domain = &grid;
    est.minimizer.values = std::move(u);
    return est;
}

// Inverse-power iteration on A u = mu B u with B the diagonal node weight.
RayleighEstimate solve_p2(const DiscreteDomain& grid, double alpha, const MinimizeOptions& opts) {
    const QuadratureWeights w = make_weights(grid, alpha, 2.0);
    const std::vector<double> diag = stiffness_diagonal(w);
    const std::size_t n = w.node_w.size();
    const double cg_tol = std::min(1e-10, 0.05 * opts.tol);

    std::vector<double> u(n), b(n), Au(n), Bu(n);
    kernels::for_each_index(n, [&](std::size_t k) { u[k] = w.active[k] ? grid.delta[k] : 0.0; });
    scale_vector(u, 1.0 / std::sqrt(mass(w, u)));
    double mu = energy(w, u) / mass(w, u);
    double rel = std::numeric_limits<double>::infinity();
    int it = 0;
    bool converged = false;
    for (it = 1; it <= opts.max_iter; ++it) {
        kernels::for_each_index(n, [&](std::size_t k) { b[k] = w.node_w[k] * u[k]; });
        cg_solve(w, diag, b, u, cg_tol, 100000);
        const double nrm = mass(w, u);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
        scale_vector(u, 1.0 / std::sqrt(nrm));
        const double mu_new = energy(w, u) / mass(w, u);
        rel = std::fabs(mu_new - mu) / std::max(std::fabs(mu_new), 1e-300);
        mu = mu_new;
        if (rel <= opts.tol) {
            weak_diffusion(w, u, 0.0, Au);
            kernels::for_each_index(n, [&](std::size_t k) { Bu[k] = w.node_w[k] * u[k]; });
            kernels::for_each_index(n, [&](std::size_t k) { Au[k] -= mu * Bu[k]; });
            if (norm2(Au) <= opts.tol * norm2(Bu)) {
                converged = true;
                break;
            }
        }
    }
    return pack_estimate(grid, mu, std::min(it, opts.max_iter), rel, converged, std::move(u));
}

// Projected gradient descent on the quotient for p != 2, normalized in the
// weighted p-norm, seeded with the p = 2 minimizer.
RayleighEstimate solve_descent(const DiscreteDomain& grid, double alpha, double p,
                               const MinimizeOptions& opts) {
    const QuadratureWeights w = make_weights(grid, alpha, p);
    RayleighEstimate seed = solve_p2(grid, alpha, opts);
    std::vector<double> u = masked_values(w, seed.minimizer);

    const double d0 = mass(w, u);
    if (!(d0 > 0.0) || !std::isfinite(d0))
        throw std::invalid_argument("degenerate starting field for the descent");
    scale_vector(u, std::pow(d0, -1.0 / p));

    const std::size_t n = u.size();
    std::vector<double> dN(n), dD(n), g(n), v(n);
    double q = energy(w, u) / mass(w, u);
    double step = 1.0;
    double rel = std::numeric_limits<double>::infinity();
    int it = 0;
    bool converged = false;
    for (it = 1; it <= opts.max_iter; ++it) {
        const double eps = 1e-12 * std::sqrt(max_grad_sq(w, u));
        energy_gradient(w, u, eps, dN);
        mass_gradient(w, u, dD);
        const double den = mass(w, u);
        kernels::for_each_index(n, [&](std::size_t k) { g[k] = (dN[k] - q * dD[k]) / den; });
        const double g2 = kernels::dot(g, g);

        double s = std::min(step * 1.3, 1e6);
        bool accepted = false;
        double q_trial = q;
        for (int bt = 0; bt < 60 && !accepted; ++bt) {
            kernels::for_each_index(n, [&](std::size_t k) { v[k] = u[k] - s * g[k]; });
            const double mv = mass(w, v);
            if (mv > 0.0 && std::isfinite(mv)) {
                scale_vector(v, std::pow(mv, -1.0 / p));
                q_trial = energy(w, v) / mass(w, v);
                if (q_trial <= q - 1e-4 * s * g2) accepted = true;
            }
            if (!accepted) s *= 0.5;
        }
        if (!accepted) break;  // no decrease available at machine precision
        rel = (q - q_trial) / std::max(q_trial, 1e-300);
        u.swap(v);
        q = q_trial;
        step = s;
        if (rel <= opts.tol) {
            converged = true;
            break;
        }
    }
    return pack_estimate(grid, q, std::min(it, opts.max_iter), rel, converged, std::move(u));
}

}  // namespace

RayleighEstimate minimize(const DiscreteDomain& grid, double alpha, double p,
                          MinimizeOptions opts) {
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be positive");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    return p == 2.0 ? solve_p2(grid, alpha, opts) : solve_descent(grid, alpha, p, opts);
}

void field_to_csv(const GridField& u, std::ostream& os) {
    const DiscreteDomain& g = *u.domain;
    os << "x,y,inside,value\n";
    char buf[128];
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const std::size_t k = g.idx(ix, iy);
            const Point2 x = g.node(ix, iy);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.17g\n", x[0], x[1],
                          int(g.inside[k]), u.values[k]);
            os << buf;
        }
}

}  // namespace hardy
