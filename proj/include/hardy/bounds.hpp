#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hardy/cone_profile.hpp"
#include "hardy/params.hpp"

namespace hardy {

// How a lower bound was obtained, with the inputs that reproduce it.
struct EasyDetail {
    double Lambda = 0.0;  // supersolution decay rate
};
struct ConeDetail {
    double beta = 0.0;        // exterior-cone aperture of the domain
    double gamma_star = 0.0;  // barrier-cone aperture actually used
    double lambda = 0.0;      // degree of the barrier profile
    double phi_beta = 0.0;    // profile value at theta = beta
};
struct KnownDetail {
    std::string name;       // which literature bound
    bool equality = false;  // bound is attained on the stated class
};
struct VertexDetail {
    double beta = 0.0;    // cone aperture
    double lambda = 0.0;  // its degree
};

// One lower bound for the Hardy constant.  When the bound's hypothesis gate
// fails, valid is false and value is absent.
struct LowerBoundReport {
    std::optional<double> value;
    bool valid = false;
    std::variant<EasyDetail, ConeDetail, KnownDetail, VertexDetail> method;
    ProblemParams params;
};

// Geometric side conditions for the literature comparison bounds.
struct DomainFlags {
    bool convex = false;
    bool simply_connected_2d = false;  // requires N = 2
    bool mean_convex = false;
    std::optional<double> exterior_cone_beta;  // uniform exterior cone angle, in (0, pi]
};

// Lower bound from a positive p-superharmonic function with decay rate
// Lambda: valid iff Lambda (p-1) > |alpha|, and then
// value = |(Lambda (p-1) - |alpha|) / p|^p.
LowerBoundReport mu_easy(double Lambda, const ProblemParams& prm);

// Cone version: the decay rate is lambda * Phi(beta)^(1/lambda) for a barrier
// cone of aperture profile.gamma > beta.  Agrees with mu_easy at that rate
// bit for bit.
LowerBoundReport mu_cone(double beta, const ConeProfile& profile, const ProblemParams& prm);

// Maximize the cone bound over the barrier aperture gamma in (beta, pi],
// the endpoint included when p + 1 > N.  Golden-section search on the
// interior plus an explicit endpoint evaluation.
LowerBoundReport best_cone_bound(double beta, const ProblemParams& prm);

// Literature comparison bounds applicable under the given flags, each with
// its parameter gate evaluated.
std::vector<LowerBoundReport> known_bounds(const ProblemParams& prm, const DomainFlags& flags);

// Hardy constant of the vertex weight |x - vertex|^{-p} on a cone of
// aperture beta: ((p-1)/p)^p * lambda(beta)^p.
LowerBoundReport vertex_hardy_bound(double beta, const ProblemParams& prm);

// The exponent-to-rate map lambda_a = |a|^{p-2} a [alpha_hat + (p-1)(1-a)];
// strictly decreasing and nonnegative for a between (alpha_hat+p-1)/p and
// (alpha_hat+p-1)/(p-1).
double lambda_a(double a, double alpha_hat, double p);

// Data of the two-exponent supersolution composite: exponents nu < eta taken
// from ((alpha_hat+p-1)/p, (alpha_hat+p-1)/(p-1)], their rates, and the
// cross term A = (p-2) lambda_nu eta/nu + lambda_eta |nu|^{p-2}/|eta|^{p-2}.
struct AgmonParams {
    double alpha_hat = 0.0;
    double nu = 0.0;
    double eta = 0.0;
    double lambda_nu = 0.0;
    double lambda_eta = 0.0;
    double A = 0.0;
};

// Validates the exponent interval and fills in the rates and cross term.
AgmonParams make_agmon(double nu, double eta, double alpha_hat, double p);

}  // namespace hardy
