#pragma once

// Numerical verification of the machinery behind the lower bounds: weak-form
// supersolution residuals of the composite construction, the gradient-ratio
// scan of the minimum-of-cone-barriers field, the projection-window distance
// comparison, and the two-exponent algebraic inequality.

#include <cstddef>
#include <utility>

#include "hardy/cone_profile.hpp"
#include "hardy/estimator.hpp"
#include "hardy/geometry.hpp"

namespace hardy {

// Result of testing u as a discrete weak supersolution of the mu-equation:
//   a_i = sum_c delta^{-alpha} |grad u|^{p-2} grad u . grad phi_i
//       - mu sum   delta^{-(alpha+p)} u^{p-1} phi_i
// for every nodal hat phi_i on the active mask; u qualifies iff
// min_i a_i >= -tol for the caller's tolerance.
struct SupersolutionReport {
    double mu = 0.0;
    double min_weak_residual = 0.0;
    std::size_t nodes_tested = 0;    // active nodes scanned
    double Lambda_measured = 0.0;    // essinf of |grad u| delta / u over interior nodes
    double scale = 0.0;              // max |diffusion term| + max |mass term|
    Point2 worst_node{0.0, 0.0};     // location of the residual minimum
};

// Throws std::invalid_argument unless u > 0 on all active nodes.
SupersolutionReport weak_residual(const GridField& u, double alpha, double p, double mu);

// Node-wise composite U^nu - U^eta (strictly positive for nu < eta).
// Preconditions: nu < eta and 0 < U <= 1/2 on inside nodes (normalization
// error otherwise).
GridField agmon_composite(const GridField& U, double nu, double eta);

// Result of scanning u = min_i H_{z_i} over the grid: the measured essential
// infimum of |grad u| delta / u against the claimed value
// lambda Phi(beta)^{1/lambda} / (1 + epsilon).
struct MinConstructionReport {
    double epsilon = 0.0;
    double gamma = 0.0;
    std::size_t n_cones = 0;
    double essinf_ratio = 0.0;
    double claimed = 0.0;
    std::size_t nodes_tested = 0;  // interior nodes entering the essinf
    std::size_t flagged = 0;       // nodes skipped: no stencil stays on the attained cone
    Point2 worst_node{0.0, 0.0};   // location of the ratio minimum
};

// Builds the minimum of translated cone barriers over n_cones boundary cones
// of aperture gamma and scans the gradient ratio.  The profile must be solved
// at that same aperture.  At nodes where the minimizing cone index changes
// across the stencil, one-sided differences into the attained region are
// used; nodes with no usable stencil are flagged, not failed.  Throws
// hardy::solver_error if a grid node escapes some sampled cone (containment
// violation) or no node qualifies for the scan.
std::pair<GridField, MinConstructionReport> min_construction(const DiscreteDomain& grid,
                                                             const DomainSpec& spec, double gamma,
                                                             const ConeProfile& profile,
                                                             std::size_t n_cones, double epsilon);

// Radius tau = t * delta(x) with t = 0.99 * epsilon / (2 + epsilon) (so that
// 2t/(1-t) < epsilon), verified by sampling 1000 points y in the ball
// B_tau(x): delta(y) <= |y - Px| <= (1 + epsilon) delta(y).  Throws
// std::domain_error when x is not an interior point and hardy::solver_error
// if a sample violates the comparison.
double projection_window(const DomainSpec& spec, const Point2& x, double epsilon);

// Two-exponent inequality behind the composite supersolution: with
// lambda_t = |t|^{p-2} t [a + (1-t)(p-1)],
//   lhs = (p-2) lambda_nu eta/nu + lambda_eta |nu|^{p-2}/|eta|^{p-2},
//   rhs = (p-1) lambda_nu,
// evaluated in cancellation form (no divisions), holds <=> lhs < rhs.
// Requires nu < eta inside the admissible interval:
// [(a+p-1)/p, (a+p-1)/(p-1)] when a+p > 1, or [(a+p-1)/p, 0] when a+p < 1
// (std::domain_error otherwise).
struct AppendixCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
AppendixCheck appendix_inequality(double a, double nu, double eta, double p);

}  // namespace hardy
