#pragma once

#include "json.hpp"

#include "hardy/bounds.hpp"
#include "hardy/estimator.hpp"
#include "hardy/geometry.hpp"
#include "hardy/verifier.hpp"

namespace hardy {

using ordered_json = nlohmann::ordered_json;

// {method, value?, valid, params:{N,p,alpha}, details:{...}} — value is
// omitted when the hypothesis gate failed.
ordered_json report_to_json(const LowerBoundReport& rep);

// Gallery config: {"shape": <name>, "params": {...}}.  Shapes: unit_square,
// unit_disk, sector (half_angle, radius), half_plane, slit_plane,
// convex_polygon (vertices: [[x,y],...]), l_shape.
DomainSpec domain_from_json(const ordered_json& j);
ordered_json domain_to_json(const DomainSpec& domain);

// {domain, alpha, p, h, value, iterations, converged, residual}.
ordered_json estimate_to_json(const RayleighEstimate& est, const DomainSpec& domain,
                              double alpha, double p);

// {mu, min_weak_residual, scale, nodes_tested, lambda_measured,
//  worst_node:[x,y]}.
ordered_json supersolution_to_json(const SupersolutionReport& rep);

// {epsilon, gamma, n_cones, claimed, essinf_ratio, nodes_tested, flagged,
//  worst_node:[x,y]}.
ordered_json min_construction_to_json(const MinConstructionReport& rep);

// {lhs, rhs, holds}.
ordered_json appendix_to_json(const AppendixCheck& chk);

}  // namespace hardy
