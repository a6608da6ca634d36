#include "hardy/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace hardy {

LowerBoundReport mu_easy(double Lambda, const ProblemParams& prm) {
    validate(prm);
    if (!(Lambda > 0.0)) throw std::invalid_argument("mu_easy: Lambda must be > 0");
    LowerBoundReport rep;
    rep.params = prm;
    rep.method = EasyDetail{Lambda};
    double margin = Lambda * (prm.p - 1.0) - std::abs(prm.alpha);
    rep.valid = margin > 0.0;
    // pow evaluates exp(p log .), so large p underflows gracefully to 0
    if (rep.valid) rep.value = std::pow(margin / prm.p, prm.p);
    return rep;
}

LowerBoundReport mu_cone(double beta, const ConeProfile& profile, const ProblemParams& prm) {
    validate(prm);
    if (!(beta > 0.0) || !(beta < profile.gamma))
        throw std::invalid_argument("mu_cone: need 0 < beta < barrier aperture");
    double phib = phi_at(profile, beta);
    LowerBoundReport rep;
    if (phib > 0.0) {
        double rate = profile.lambda * std::pow(phib, 1.0 / profile.lambda);
        rep = mu_easy(rate, prm);
    }
    rep.params = prm;
    rep.method = ConeDetail{beta, profile.gamma, profile.lambda, phib};
    return rep;
}

namespace {

struct ApertureEval {
    bool ok = false;
    double rate = -1.0;  // lambda * Phi(beta)^(1/lambda)
    double lambda = 0.0;
    double phi_beta = 0.0;
};

ApertureEval eval_aperture(double gamma, double beta, const ProblemParams& prm) {
    ApertureEval e;
    try {
        ConeProfile pr = solve_lambda(gamma, prm);
        double phib = phi_at(pr, beta);
        if (phib <= 0.0) return e;
        e.lambda = pr.lambda;
        e.phi_beta = phib;
        e.rate = pr.lambda * std::pow(phib, 1.0 / pr.lambda);
        e.ok = true;
    } catch (const solver_error&) {
        // aperture not solvable (e.g. snapped to pi with p+1 <= N): skip it
    }
    return e;
}

}  // namespace

LowerBoundReport best_cone_bound(double beta, const ProblemParams& prm) {
    validate(prm);
    if (!(beta > 0.0) || !(beta < pi))
        throw std::invalid_argument("best_cone_bound: beta must lie in (0, pi)");

    double lo = beta + 1e-3, hi = pi - 1e-3;
    ApertureEval best;
    double best_gamma = 0.0;
    if (lo < hi) {
        // golden-section maximization of the rate over the interior apertures;
        // unimodality is backed by grid cross-checks in the test suite
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - gr * (hi - lo);
        double d = lo + gr * (hi - lo);
        ApertureEval ec = eval_aperture(c, beta, prm);
        ApertureEval ed = eval_aperture(d, beta, prm);
        for (int it = 0; it < 100 && (hi - lo) > 1e-6; ++it) {
            if (ec.rate >= ed.rate) {
                hi = d;
                d = c;
                ed = ec;
                c = hi - gr * (hi - lo);
                ec = eval_aperture(c, beta, prm);
            } else {
                lo = c;
                c = d;
                ec = ed;
                d = lo + gr * (hi - lo);
                ed = eval_aperture(d, beta, prm);
            }
        }
        best = ec.rate >= ed.rate ? ec : ed;
        best_gamma = ec.rate >= ed.rate ? c : d;
    }
    // the sup over gamma may sit at the full aperture; evaluate it explicitly
    if (prm.p + 1.0 > double(prm.N)) {
        ApertureEval epi = eval_aperture(pi, beta, prm);
        if (epi.ok && epi.rate > best.rate) {
            best = epi;
            best_gamma = pi;
        }
    }

    LowerBoundReport rep;
    if (best.ok) rep = mu_easy(best.rate, prm);
    rep.params = prm;
    rep.method = ConeDetail{beta, best_gamma, best.lambda, best.phi_beta};
    return rep;
}

std::vector<LowerBoundReport> known_bounds(const ProblemParams& prm, const DomainFlags& flags) {
    validate(prm);
    if (flags.simply_connected_2d && prm.N != 2)
        throw std::invalid_argument("known_bounds: simply_connected_2d requires N = 2");
    if (flags.exterior_cone_beta) {
        double b = *flags.exterior_cone_beta;
        if (!(b > 0.0) || b > pi)
            throw std::invalid_argument("known_bounds: exterior cone angle must lie in (0, pi]");
    }

    std::vector<LowerBoundReport> out;
    auto push = [&](std::string name, bool valid, double value, bool equality = false) {
        LowerBoundReport rep;
        rep.params = prm;
        rep.valid = valid;
        if (valid) rep.value = value;
        rep.method = KnownDetail{std::move(name), equality};
        out.push_back(std::move(rep));
    };

    // |(alpha+p-N)/p|^p: holds on any domain once alpha + p exceeds N
    bool dim_ok = prm.alpha + prm.p > double(prm.N);
    push("dimensional", dim_ok,
         dim_ok ? std::pow(std::abs(prm.alpha + prm.p - double(prm.N)) / prm.p, prm.p) : 0.0);

    if (flags.convex || flags.mean_convex) {
        // |(alpha+p-1)/p|^p, attained on mean convex domains for alpha+p > 1
        bool ok = prm.alpha + prm.p > 1.0;
        push("convex_boundary", ok,
             ok ? std::pow(std::abs(prm.alpha + (prm.p - 1.0)) / prm.p, prm.p) : 0.0, true);
    }
    if (flags.simply_connected_2d) {
        // quarter bound for planar simply connected domains (p = 2, alpha = 0)
        bool ok = prm.p == 2.0 && prm.alpha == 0.0;
        push("planar_simply_connected", ok, 1.0 / 16.0);
    }
    if (flags.exterior_cone_beta) {
        // pi^2/(16 beta^2) for planar domains with a uniform exterior cone
        double b = *flags.exterior_cone_beta;
        bool ok = prm.N == 2 && prm.p == 2.0 && prm.alpha == 0.0;
        push("planar_exterior_cone", ok, ok ? pi * pi / (16.0 * b * b) : 0.0);
    }
    return out;
}

LowerBoundReport vertex_hardy_bound(double beta, const ProblemParams& prm) {
    validate(prm);
    if (!(beta > 0.0) || beta > pi)
        throw std::invalid_argument("vertex_hardy_bound: beta must lie in (0, pi]");
    ConeProfile pr = solve_lambda(beta, prm);  // throws at beta = pi when p+1 <= N
    LowerBoundReport rep;
    rep.params = prm;
    rep.valid = true;
    rep.value = std::pow((prm.p - 1.0) / prm.p, prm.p) * std::pow(pr.lambda, prm.p);
    rep.method = VertexDetail{beta, pr.lambda};
    return rep;
}

double lambda_a(double a, double alpha_hat, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("lambda_a: p must be > 1");
    if (a == 0.0) return 0.0;  // limit value; |a|^{p-2} alone diverges for p < 2
    return std::pow(std::abs(a), p - 2.0) * a * (alpha_hat + (p - 1.0) * (1.0 - a));
}

AgmonParams make_agmon(double nu, double eta, double alpha_hat, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("make_agmon: p must be > 1");
    if (!(alpha_hat + p > 1.0)) throw std::invalid_argument("make_agmon: need alpha_hat + p > 1");
    double lo = (alpha_hat + p - 1.0) / p;
    double hi = (alpha_hat + p - 1.0) / (p - 1.0);
    if (!(lo < nu) || !(nu < eta) || !(eta <= hi))
        throw std::invalid_argument(
            "make_agmon: exponents must satisfy (alpha_hat+p-1)/p < nu < eta <= "
            "(alpha_hat+p-1)/(p-1)");

    AgmonParams ap;
    ap.alpha_hat = alpha_hat;
    ap.nu = nu;
    ap.eta = eta;
    ap.lambda_nu = lambda_a(nu, alpha_hat, p);
    ap.lambda_eta = lambda_a(eta, alpha_hat, p);
    // lambda_eta |nu|^{p-2} / |eta|^{p-2} with the eta powers cancelled, so
    // eta at the right endpoint (rate 0) stays exact
    double cross = std::pow(std::abs(nu), p - 2.0) * eta * (alpha_hat + (p - 1.0) * (1.0 - eta));
    ap.A = (p - 2.0) * ap.lambda_nu * eta / nu + cross;
    return ap;
}

}  // namespace hardy
