#pragma once

#include <iosfwd>
#include <vector>

#include "hardy/params.hpp"

namespace hardy {

// Angular profile Phi of a positive p-harmonic function r^lambda * Phi(theta)
// on a circular cone of half-aperture gamma, normalized by Phi(0) = 1 and
// pinned down by Phi(gamma) = 0.  theta is the polar angle from the cone axis.
struct ConeProfile {
    double gamma = 0.0;   // half-aperture, in (0, pi]
    int N = 2;            // ambient dimension
    double p = 2.0;       // exponent
    double lambda = 0.0;  // homogeneity degree, > 0
    std::vector<double> theta_grid;  // uniform samples on [0, gamma]
    std::vector<double> phi;         // profile values, phi[0] = 1, strictly decreasing to 0
    std::vector<double> dphi;        // profile derivative at the samples
    double residual = 0.0;           // max normalized ODE defect over the trimmed grid
    bool degraded = false;           // step-size underflow hit near the far endpoint
};

// A cone used as an enclosing barrier: vertex on (or outside) the domain
// boundary, unit axis pointing into the domain, half-aperture `aperture`.
struct BoundaryCone {
    std::vector<double> vertex;
    std::vector<double> axis;
    double aperture = 0.0;
};

// Right-hand side of the second-order profile ODE written as
// omega'' = profile_rhs(theta, omega, omega', lambda).  Derivation: plug
// u = r^lambda omega(theta) into div(|grad u|^{p-2} grad u) = 0 and divide
// out the radial powers; Q = lambda^2 omega^2 + omega'^2 is |grad u|^2 / r^{2 lambda - 2}.
double profile_rhs(double theta, double omega, double domega, double lambda,
                   const ProblemParams& prm);

struct ShootResult {
    bool crossed = false;    // found a zero of omega in (0, theta_max]
    double theta_star = 0.0; // location of the first zero when crossed
    bool degraded = false;   // adaptive step size underflowed (endpoint singularity)
};

// Integrate the profile from the axis (series start at theta0 = 1e-6) and
// report the first zero of omega at or before theta_max (capped at pi - 1e-8).
ShootResult shoot(double lambda, const ProblemParams& prm, double theta_max);

// Solve for the homogeneity degree lambda(gamma): the unique lambda whose
// profile first vanishes exactly at theta = gamma.  Bisection over a bracket
// with a monotonicity pre-check of the shooting map.  gamma within 1e-3 of pi
// is snapped to pi, which requires p + 1 > N (otherwise the degree vanishes).
ConeProfile solve_lambda(double gamma, const ProblemParams& prm);

// Monotone cubic Hermite interpolation of the stored samples; results are
// clamped to [0, 1].  theta outside [0, gamma] is a domain error.
double phi_at(const ConeProfile& profile, double theta);
double dphi_at(const ConeProfile& profile, double theta);

struct ConeFieldValue {
    double value = 0.0;
    std::vector<double> grad;
};

// Evaluate H(x) = |x - z|^lambda Phi(theta) and its gradient for the cone
// (vertex z, axis a).  theta is the angle between x - z and the axis; points
// with theta > aperture are outside the cone (domain error), and the vertex
// itself is a singular point.
ConeFieldValue eval_translated(const ConeProfile& profile, const BoundaryCone& cone,
                               const std::vector<double>& x);

// |grad H| at polar coordinates (r, theta) relative to the cone: the gradient
// magnitude is r^{lambda-1} sqrt(lambda^2 Phi^2 + Phi'^2) independent of azimuth.
double gradient_norm(const ConeProfile& profile, double r, double theta);

// CSV dump: one metadata comment line, a header, and one row per sample with
// 17 significant digits.
void dump_csv(const ConeProfile& profile, std::ostream& os);

}  // namespace hardy
