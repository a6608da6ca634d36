#include "hardy/serialize.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace hardy {

namespace {

template <class... Ts>
struct overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

}  // namespace

ordered_json report_to_json(const LowerBoundReport& rep) {
    ordered_json j;
    j["method"] = std::visit(
        overload{[](const EasyDetail&) { return "easy"; },
                 [](const ConeDetail&) { return "cone"; },
                 [](const KnownDetail&) { return "known"; },
                 [](const VertexDetail&) { return "vertex"; }},
        rep.method);
    if (rep.value) j["value"] = *rep.value;
    j["valid"] = rep.valid;
    j["params"] = {{"N", rep.params.N}, {"p", rep.params.p}, {"alpha", rep.params.alpha}};
    std::visit(overload{[&](const EasyDetail& d) { j["details"] = {{"Lambda", d.Lambda}}; },
                        [&](const ConeDetail& d) {
                            j["details"] = {{"beta", d.beta},
                                            {"gamma_star", d.gamma_star},
                                            {"lambda", d.lambda},
                                            {"phi_beta", d.phi_beta}};
                        },
                        [&](const KnownDetail& d) {
                            j["details"] = {{"name", d.name}, {"equality", d.equality}};
                        },
                        [&](const VertexDetail& d) {
                            j["details"] = {{"beta", d.beta}, {"lambda", d.lambda}};
                        }},
               rep.method);
    return j;
}

DomainSpec domain_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("shape"))
        throw std::invalid_argument("domain config must be an object with a \"shape\" field");
    const std::string name = j.at("shape").get<std::string>();
    const ordered_json params = j.value("params", ordered_json::object());
    if (name == "unit_square") return domain_square();
    if (name == "unit_disk") return domain_disk();
    if (name == "sector")
        return domain_sector(params.at("half_angle").get<double>(),
                             params.value("radius", 1.0));
    if (name == "half_plane") return domain_half_plane();
    if (name == "slit_plane") return domain_slit_plane();
    if (name == "l_shape") return domain_l_shape();
    if (name == "convex_polygon") {
        std::vector<Point2> verts;
        for (const auto& v : params.at("vertices"))
            verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        return domain_convex_polygon(std::move(verts));
    }
    throw std::invalid_argument("unknown domain shape: " + name);
}

ordered_json domain_to_json(const DomainSpec& domain) {
    ordered_json j;
    std::visit(overload{[&](const UnitSquare&) { j["shape"] = "unit_square"; },
                        [&](const UnitDisk&) { j["shape"] = "unit_disk"; },
                        [&](const Sector& s) {
                            j["shape"] = "sector";
                            j["params"] = {{"half_angle", s.half_angle}, {"radius", s.radius}};
                        },
                        [&](const HalfPlane&) { j["shape"] = "half_plane"; },
                        [&](const SlitPlane&) { j["shape"] = "slit_plane"; },
                        [&](const ConvexPolygon& s) {
                            j["shape"] = "convex_polygon";
                            ordered_json verts = ordered_json::array();
                            for (const auto& v : s.vertices) verts.push_back({v[0], v[1]});
                            j["params"] = {{"vertices", verts}};
                        },
                        [&](const LShape&) { j["shape"] = "l_shape"; }},
               domain.shape);
    j["convex"] = domain.convex;
    j["mean_convex"] = domain.mean_convex;
    if (domain.exterior_cone_beta) j["exterior_cone_beta"] = *domain.exterior_cone_beta;
    return j;
}

ordered_json estimate_to_json(const RayleighEstimate& est, const DomainSpec& domain,
                              double alpha, double p) {
    ordered_json j;
    j["domain"] = domain_to_json(domain);
    j["alpha"] = alpha;
    j["p"] = p;
    j["h"] = est.h;
    j["value"] = est.value;
    j["iterations"] = est.iterations;
    j["converged"] = est.converged;
    j["residual"] = est.residual;
    return j;
}

ordered_json supersolution_to_json(const SupersolutionReport& rep) {
    ordered_json j;
    j["mu"] = rep.mu;
    j["min_weak_residual"] = rep.min_weak_residual;
    j["scale"] = rep.scale;
    j["nodes_tested"] = rep.nodes_tested;
    j["lambda_measured"] = rep.Lambda_measured;
    j["worst_node"] = {rep.worst_node[0], rep.worst_node[1]};
    return j;
}

ordered_json min_construction_to_json(const MinConstructionReport& rep) {
    ordered_json j;
    j["epsilon"] = rep.epsilon;
    j["gamma"] = rep.gamma;
    j["n_cones"] = rep.n_cones;
    j["claimed"] = rep.claimed;
    j["essinf_ratio"] = rep.essinf_ratio;
    j["nodes_tested"] = rep.nodes_tested;
    j["flagged"] = rep.flagged;
    j["worst_node"] = {rep.worst_node[0], rep.worst_node[1]};
    return j;
}

ordered_json appendix_to_json(const AppendixCheck& chk) {
    ordered_json j;
    j["lhs"] = chk.lhs;
    j["rhs"] = chk.rhs;
    j["holds"] = chk.holds;
    return j;
}

}  // namespace hardy
