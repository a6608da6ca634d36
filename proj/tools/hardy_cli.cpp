// Command-line front end: solve cone profiles, tabulate lower bounds, run the
// Rayleigh estimator and the verifiers, and stream results as line-delimited
// JSON (or CSV on request).
//
// Exit codes: 0 success, 1 invalid flags, 2 solver failure, 3 estimator did
// not converge (the partial record is still written).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hardy/bounds.hpp"
#include "hardy/cone_profile.hpp"
#include "hardy/estimator.hpp"
#include "hardy/geometry.hpp"
#include "hardy/kernels.hpp"
#include "hardy/params.hpp"
#include "hardy/serialize.hpp"
#include "hardy/verifier.hpp"

namespace {

using hardy::ordered_json;

// Flag values like 3.1416 mean "pi" at the aperture endpoint; snap anything
// within 1e-3 so the closed-aperture branch is reachable from the shell.
double snap_aperture(double gamma) {
    return std::fabs(gamma - hardy::pi) <= 1e-3 ? hardy::pi : gamma;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Output plumbing

struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        os = &file;
    }
    void line(const std::string& s) { *os << s << "\n"; }
};

// ---------------------------------------------------------------------------
// Domain flags shared by estimate/verify

struct DomainArgs {
    std::string name;
    double half_angle = 0.0;
    double radius = 1.0;
    std::string json_path;
    CLI::Option* name_opt = nullptr;
    CLI::Option* half_angle_opt = nullptr;

    // Called from the owning subcommand's callback (CLI11 keeps one callback
    // per App, so validation is pulled rather than pushed).
    void validate(bool needed) const {
        if (needed && name.empty() && json_path.empty())
            throw CLI::RequiredError("--domain or --domain-json");
        if (name == "sector" && half_angle_opt->count() == 0)
            throw CLI::RequiredError("--half-angle (with --domain sector)");
    }
};

void add_domain_options(CLI::App* cmd, DomainArgs& d) {
    d.name_opt =
        cmd->add_option("--domain", d.name, "gallery shape")
            ->check(CLI::IsMember({"unit_square", "unit_disk", "sector", "half_plane",
                                   "slit_plane", "l_shape"}));
    d.half_angle_opt = cmd->add_option("--half-angle", d.half_angle, "sector half-angle");
    cmd->add_option("--radius", d.radius, "sector radius")->capture_default_str();
    auto* json_opt = cmd->add_option("--domain-json", d.json_path,
                                     "domain config file ({\"shape\": ..., \"params\": ...})")
                         ->check(CLI::ExistingFile);
    d.name_opt->excludes(json_opt);
}

hardy::DomainSpec resolve_domain(const DomainArgs& d) {
    if (!d.json_path.empty()) {
        std::ifstream f(d.json_path);
        return hardy::domain_from_json(ordered_json::parse(f));
    }
    if (d.name == "unit_square") return hardy::domain_square();
    if (d.name == "unit_disk") return hardy::domain_disk();
    if (d.name == "sector") return hardy::domain_sector(d.half_angle, d.radius);
    if (d.name == "half_plane") return hardy::domain_half_plane();
    if (d.name == "slit_plane") return hardy::domain_slit_plane();
    if (d.name == "l_shape") return hardy::domain_l_shape();
    throw std::invalid_argument("unknown domain: " + d.name);
}

std::string domain_label(const hardy::DomainSpec& spec) {
    return hardy::domain_to_json(spec).at("shape").get<std::string>();
}

// ---------------------------------------------------------------------------
// bound / sweep shared row builder

struct BoundInputs {
    double beta = 0.0;
    std::optional<double> gamma;  // fixed barrier aperture; otherwise optimize
    hardy::ProblemParams prm;
    bool convex = false;
    bool mean_convex = false;
    bool simply_connected = false;
};

std::vector<ordered_json> bound_records(const BoundInputs& in) {
    std::vector<hardy::LowerBoundReport> rows;
    if (in.gamma) {
        rows.push_back(hardy::mu_cone(in.beta, hardy::solve_lambda(*in.gamma, in.prm), in.prm));
    } else {
        rows.push_back(hardy::best_cone_bound(in.beta, in.prm));
        try {
            // The closed-aperture barrier has its own closed forms; report it
            // alongside the optimum so both are tabulated.
            rows.push_back(
                hardy::mu_cone(in.beta, hardy::solve_lambda(hardy::pi, in.prm), in.prm));
        } catch (const hardy::solver_error&) {
            // no positive degree at the closed aperture (p + 1 <= N)
        }
    }
    hardy::DomainFlags flags;
    flags.convex = in.convex;
    flags.mean_convex = in.mean_convex;
    flags.simply_connected_2d = in.simply_connected;
    flags.exterior_cone_beta = in.beta;
    for (auto& rep : hardy::known_bounds(in.prm, flags)) rows.push_back(std::move(rep));

    std::vector<ordered_json> out;
    out.reserve(rows.size());
    for (const auto& rep : rows) {
        ordered_json j;
        j["command"] = "bound";
        j["beta"] = in.beta;
        j.update(hardy::report_to_json(rep));
        out.push_back(std::move(j));
    }
    return out;
}

std::string bound_csv_header() {
    return "command,beta,method,name,gamma_star,lambda,phi_beta,valid,value,N,p,alpha";
}

std::string bound_csv_row(const ordered_json& j) {
    const ordered_json& d = j.at("details");
    const ordered_json& p = j.at("params");
    std::ostringstream ss;
    ss << j.at("command").get<std::string>() << "," << fmt_double(j.at("beta").get<double>())
       << "," << j.at("method").get<std::string>() << ","
       << (d.contains("name") ? d.at("name").get<std::string>() : "") << ","
       << (d.contains("gamma_star") ? fmt_double(d.at("gamma_star").get<double>()) : "") << ","
       << (d.contains("lambda") ? fmt_double(d.at("lambda").get<double>()) : "") << ","
       << (d.contains("phi_beta") ? fmt_double(d.at("phi_beta").get<double>()) : "") << ","
       << (j.at("valid").get<bool>() ? "true" : "false") << ","
       << (j.contains("value") ? fmt_double(j.at("value").get<double>()) : "") << ","
       << p.at("N").get<int>() << "," << fmt_double(p.at("p").get<double>()) << ","
       << fmt_double(p.at("alpha").get<double>());
    return ss.str();
}

// ---------------------------------------------------------------------------
// Subcommand runners (invoked after a successful parse)

struct ProfileArgs {
    double gamma = 0.0;
    int N = 2;
    double p = 2.0;
    double tol = 1e-7;
    std::string out;
    std::string format = "json";
};

int run_profile(const ProfileArgs& a) {
    hardy::ProblemParams prm;
    prm.N = a.N;
    prm.p = a.p;
    prm.tol = a.tol;
    const hardy::ConeProfile prof = hardy::solve_lambda(snap_aperture(a.gamma), prm);

    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot open output file: " + a.out);
        hardy::dump_csv(prof, f);
    }
    if (a.format == "csv" && a.out.empty()) {
        hardy::dump_csv(prof, std::cout);
        return 0;
    }
    ordered_json meta;
    meta["command"] = "profile";
    meta["method"] = "cone_profile_shooting";
    meta["gamma"] = prof.gamma;
    meta["N"] = a.N;
    meta["p"] = a.p;
    meta["lambda"] = prof.lambda;
    meta["residual"] = prof.residual;
    meta["degraded"] = prof.degraded;
    meta["samples"] = prof.theta_grid.size();
    std::cout << meta.dump() << "\n";
    return 0;
}

struct BoundArgs {
    BoundInputs in;
    double gamma_flag = 0.0;
    CLI::Option* gamma_opt = nullptr;
    std::string out;
    std::string format = "json";
};

int run_bound(BoundArgs& a) {
    if (a.gamma_opt->count() > 0) a.in.gamma = snap_aperture(a.gamma_flag);
    Sink sink;
    sink.open(a.out);
    const std::vector<ordered_json> rows = bound_records(a.in);
    if (a.format == "csv") {
        sink.line(bound_csv_header());
        for (const auto& j : rows) sink.line(bound_csv_row(j));
    } else {
        for (const auto& j : rows) sink.line(j.dump());
    }
    return 0;
}

struct EstimateArgs {
    DomainArgs domain;
    double alpha = 0.0;
    double p = 2.0;
    double h = 0.03125;
    int max_iter = 800;
    double tol = 1e-9;
    std::string dump_field;
    std::string out;
    std::string format = "json";
};

int run_estimate(const EstimateArgs& a) {
    const hardy::DomainSpec spec = resolve_domain(a.domain);
    const hardy::DiscreteDomain grid = hardy::build_grid(spec, a.h);
    hardy::MinimizeOptions opts;
    opts.max_iter = a.max_iter;
    opts.tol = a.tol;
    const hardy::RayleighEstimate est = hardy::minimize(grid, a.alpha, a.p, opts);

    Sink sink;
    sink.open(a.out);
    if (a.format == "csv") {
        sink.line("command,domain,alpha,p,h,value,iterations,converged,residual");
        std::ostringstream ss;
        ss << "estimate," << domain_label(spec) << "," << fmt_double(a.alpha) << ","
           << fmt_double(a.p) << "," << fmt_double(est.h) << "," << fmt_double(est.value) << ","
           << est.iterations << "," << (est.converged ? "true" : "false") << ","
           << fmt_double(est.residual);
        sink.line(ss.str());
    } else {
        ordered_json j;
        j["command"] = "estimate";
        j["method"] = a.p == 2.0 ? "inverse_power_iteration" : "projected_gradient_descent";
        j.update(hardy::estimate_to_json(est, spec, a.alpha, a.p));
        sink.line(j.dump());
    }
    if (!a.dump_field.empty()) {
        std::ofstream f(a.dump_field);
        if (!f) throw std::runtime_error("cannot open output file: " + a.dump_field);
        hardy::field_to_csv(est.minimizer, f);
    }
    return est.converged ? 0 : 3;
}

struct VerifyArgs {
    std::string kind;
    DomainArgs domain;
    // appendix
    long samples = 100000;
    unsigned seed = 7;
    // supersolution
    double mu = 0.0;
    double nu = 0.0;
    double eta = 0.9;
    double normalize_max = 0.5;
    double residual_tol = 1e-8;
    CLI::Option* nu_opt = nullptr;
    CLI::Option* mu_opt = nullptr;
    // mincon
    double gamma = 0.0;
    double epsilon = 0.0;
    std::size_t n_cones = 64;
    double claim_tol = 1e-3;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* epsilon_opt = nullptr;
    // projection
    double x = 0.0, y = 0.0;
    CLI::Option* x_opt = nullptr;
    CLI::Option* y_opt = nullptr;
    // shared
    double alpha = 0.0;
    double p = 2.0;
    int N = 2;
    double h = 0.015625;
    std::string out;
};

int run_verify_appendix(const VerifyArgs& a, Sink& sink) {
    std::mt19937 rng(a.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long failures = 0;
    for (long trial = 0; trial < a.samples; ++trial) {
        const double p = 1.1 + 2.9 * unit(rng);
        double aa, lo, hi;
        if (trial % 2 == 0) {
            aa = (1.0 - p) + 1e-3 + 3.0 * unit(rng);
            lo = (aa + p - 1.0) / p;
            hi = (aa + p - 1.0) / (p - 1.0);
        } else {
            aa = (1.0 - p) - 1e-3 - 3.0 * unit(rng);
            lo = (aa + p - 1.0) / p;
            hi = 0.0;
        }
        const double zeta = std::max(1e-12, 1e-9 * (hi - lo));
        const double nu = lo + unit(rng) * (hi - lo - zeta);
        const double eta = nu + zeta + unit(rng) * (hi - nu - zeta);
        const hardy::AppendixCheck c = hardy::appendix_inequality(aa, nu, eta, p);
        if (!c.holds) {
            ++failures;
            if (failures <= 20) {
                ordered_json f;
                f["command"] = "verify";
                f["kind"] = "appendix";
                f["failure"] = {{"a", aa}, {"nu", nu}, {"eta", eta}, {"p", p},
                                {"lhs", c.lhs}, {"rhs", c.rhs}};
                sink.line(f.dump());
            }
        }
    }
    const hardy::AppendixCheck exact = hardy::appendix_inequality(0.0, 0.5, 0.75, 2.0);
    ordered_json j;
    j["command"] = "verify";
    j["kind"] = "appendix";
    j["samples"] = a.samples;
    j["failures"] = failures;
    j["exact"] = hardy::appendix_to_json(exact);
    sink.line(j.dump());
    return failures == 0 && exact.holds ? 0 : 2;
}

int run_verify_supersolution(const VerifyArgs& a, Sink& sink) {
    const hardy::DomainSpec spec = resolve_domain(a.domain);
    const hardy::DiscreteDomain grid = hardy::build_grid(spec, a.h);
    hardy::GridField U = hardy::make_field(grid, [](const hardy::Point2&, double d) { return d; });
    double max_delta = 0.0;
    for (double v : U.values) max_delta = std::max(max_delta, v);
    if (!(max_delta > 0.0)) throw hardy::solver_error("supersolution: empty grid");
    for (double& v : U.values) v *= a.normalize_max / max_delta;

    const double nu = a.nu_opt->count() > 0 ? a.nu : (a.p - 1.0) / a.p + 1e-3;
    const hardy::GridField W = hardy::agmon_composite(U, nu, a.eta);
    const hardy::SupersolutionReport rep = hardy::weak_residual(W, a.alpha, a.p, a.mu);

    ordered_json j;
    j["command"] = "verify";
    j["kind"] = "supersolution";
    j["domain"] = hardy::domain_to_json(spec);
    j["alpha"] = a.alpha;
    j["p"] = a.p;
    j["h"] = a.h;
    j["nu"] = nu;
    j["eta"] = a.eta;
    j["normalize_max"] = a.normalize_max;
    j.update(hardy::supersolution_to_json(rep));
    j["passes"] = rep.min_weak_residual >= -a.residual_tol * rep.scale;
    sink.line(j.dump());
    return 0;
}

int run_verify_mincon(const VerifyArgs& a, Sink& sink) {
    const hardy::DomainSpec spec = resolve_domain(a.domain);
    const hardy::DiscreteDomain grid = hardy::build_grid(spec, a.h);
    hardy::ProblemParams prm;
    prm.N = a.N;
    prm.p = a.p;
    const double gamma = snap_aperture(a.gamma);
    const hardy::ConeProfile prof = hardy::solve_lambda(gamma, prm);
    const auto [field, rep] = hardy::min_construction(grid, spec, gamma, prof, a.n_cones,
                                                      a.epsilon);
    (void)field;

    ordered_json j;
    j["command"] = "verify";
    j["kind"] = "mincon";
    j["domain"] = hardy::domain_to_json(spec);
    j["N"] = a.N;
    j["p"] = a.p;
    j["h"] = a.h;
    j["lambda"] = prof.lambda;
    j.update(hardy::min_construction_to_json(rep));
    j["meets_claim"] = rep.essinf_ratio >= rep.claimed - a.claim_tol;
    sink.line(j.dump());
    return 0;
}

int run_verify_projection(const VerifyArgs& a, Sink& sink) {
    const hardy::DomainSpec spec = resolve_domain(a.domain);
    const double tau = hardy::projection_window(spec, {a.x, a.y}, a.epsilon);
    ordered_json j;
    j["command"] = "verify";
    j["kind"] = "projection";
    j["domain"] = hardy::domain_to_json(spec);
    j["x"] = a.x;
    j["y"] = a.y;
    j["epsilon"] = a.epsilon;
    j["tau"] = tau;
    j["samples"] = 1000;
    j["passes"] = true;  // projection_window throws on any violated sample
    sink.line(j.dump());
    return 0;
}

int run_verify(const VerifyArgs& a) {
    Sink sink;
    sink.open(a.out);
    if (a.kind == "appendix") return run_verify_appendix(a, sink);
    if (a.kind == "supersolution") return run_verify_supersolution(a, sink);
    if (a.kind == "mincon") return run_verify_mincon(a, sink);
    return run_verify_projection(a, sink);
}

struct SweepArgs {
    std::vector<double> beta;
    std::vector<double> alpha{0.0};
    std::vector<double> p{2.0};
    std::vector<int> N{2};
    std::vector<double> gamma;  // empty: optimize per combination
    bool convex = false;
    bool mean_convex = false;
    bool simply_connected = false;
    double tol = 1e-7;
    std::string out;
    std::string format = "json";
};

int run_sweep(const SweepArgs& a) {
    // Cartesian grid of jobs; gamma = "optimize" when no list is given.
    std::vector<BoundInputs> jobs;
    for (double beta : a.beta)
        for (double alpha : a.alpha)
            for (double p : a.p)
                for (int N : a.N) {
                    BoundInputs in;
                    in.beta = beta;
                    in.prm.N = N;
                    in.prm.p = p;
                    in.prm.alpha = alpha;
                    in.prm.tol = a.tol;
                    in.convex = a.convex;
                    in.mean_convex = a.mean_convex;
                    in.simply_connected = a.simply_connected && N == 2;
                    if (a.gamma.empty()) {
                        jobs.push_back(in);
                    } else {
                        for (double g : a.gamma) {
                            in.gamma = snap_aperture(g);
                            jobs.push_back(in);
                        }
                    }
                }

    // Each job is independent; render in parallel, emit in job order so
    // reruns are byte-identical for any thread count.
    std::vector<std::string> rendered(jobs.size());
    const bool csv = a.format == "csv";
    hardy::kernels::for_each_index(jobs.size(), [&](std::size_t k) {
        std::ostringstream ss;
        try {
            for (const auto& j : bound_records(jobs[k]))
                ss << (csv ? bound_csv_row(j) : j.dump()) << "\n";
        } catch (const std::exception& e) {
            ordered_json err;
            err["command"] = "bound";
            err["beta"] = jobs[k].beta;
            err["params"] = {{"N", jobs[k].prm.N}, {"p", jobs[k].prm.p},
                             {"alpha", jobs[k].prm.alpha}};
            err["error"] = e.what();
            ss << err.dump() << "\n";
        }
        rendered[k] = ss.str();
    });

    Sink sink;
    sink.open(a.out);
    if (csv) sink.line(bound_csv_header());
    for (const std::string& s : rendered) *sink.os << s;
    return 0;
}

void add_format_option(CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "output format")->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Lower bounds, discrete estimates, and proof-machinery verification for "
        "weighted Hardy constants on planar domains"};
    app.require_subcommand(1);
    // Grid spacing is spelled --h, so the help flag keeps only its long form.
    app.set_help_flag("--help", "print this help message and exit");

    ProfileArgs pa;
    auto* cmd_profile = app.add_subcommand(
        "profile", "solve the cone profile ODE and report the homogeneity degree");
    cmd_profile->add_option("--gamma", pa.gamma, "cone aperture in (0, pi]")->required();
    cmd_profile->add_option("--N", pa.N, "ambient dimension")->capture_default_str()->check(CLI::Range(2, 64));
    cmd_profile->add_option("--p", pa.p, "gradient exponent (> 1)")->capture_default_str();
    cmd_profile->add_option("--tol", pa.tol, "solver tolerance")->capture_default_str();
    cmd_profile->add_option("--out", pa.out, "write the sampled profile as CSV here");
    add_format_option(cmd_profile, pa.format);

    BoundArgs ba;
    auto* cmd_bound =
        app.add_subcommand("bound", "tabulate lower bounds for the Hardy constant");
    cmd_bound->add_option("--beta", ba.in.beta, "exterior cone aperture in (0, pi)")
        ->required();
    cmd_bound->add_option("--alpha", ba.in.prm.alpha, "weight exponent")->capture_default_str();
    cmd_bound->add_option("--p", ba.in.prm.p, "gradient exponent (> 1)")->capture_default_str();
    cmd_bound->add_option("--N", ba.in.prm.N, "ambient dimension")->capture_default_str()
        ->check(CLI::Range(2, 64));
    ba.gamma_opt = cmd_bound->add_option("--gamma", ba.gamma_flag,
                                         "fixed barrier aperture (default: optimize)");
    cmd_bound->add_flag("--convex", ba.in.convex, "domain is convex");
    cmd_bound->add_flag("--mean-convex", ba.in.mean_convex, "domain is mean convex");
    cmd_bound->add_flag("--simply-connected", ba.in.simply_connected,
                        "domain is planar and simply connected (N = 2)");
    cmd_bound->add_option("--tol", ba.in.prm.tol, "profile solver tolerance")->capture_default_str();
    cmd_bound->add_option("--out", ba.out, "output file (default stdout)");
    add_format_option(cmd_bound, ba.format);
    cmd_bound->callback([&ba]() {
        if (ba.in.simply_connected && ba.in.prm.N != 2)
            throw CLI::ValidationError("--simply-connected requires --N 2");
    });

    EstimateArgs ea;
    auto* cmd_estimate = app.add_subcommand(
        "estimate", "minimize the discrete weighted Rayleigh quotient on a gallery domain");
    add_domain_options(cmd_estimate, ea.domain);
    cmd_estimate->add_option("--alpha", ea.alpha, "weight exponent")->capture_default_str();
    cmd_estimate->add_option("--p", ea.p, "gradient exponent (> 1)")->capture_default_str();
    cmd_estimate->add_option("--h", ea.h, "grid spacing")->capture_default_str();
    cmd_estimate->add_option("--max-iter", ea.max_iter, "iteration cap")->capture_default_str();
    cmd_estimate->add_option("--tol", ea.tol, "relative convergence tolerance")->capture_default_str();
    cmd_estimate->add_option("--dump-field", ea.dump_field, "write the minimizer as CSV here");
    cmd_estimate->add_option("--out", ea.out, "output file (default stdout)");
    add_format_option(cmd_estimate, ea.format);
    cmd_estimate->callback([&ea]() { ea.domain.validate(true); });

    VerifyArgs va;
    auto* cmd_verify =
        app.add_subcommand("verify", "run one of the proof-machinery verifications");
    cmd_verify->add_option("--kind", va.kind, "which verification to run")
        ->required()
        ->check(CLI::IsMember({"appendix", "supersolution", "mincon", "projection"}));
    add_domain_options(cmd_verify, va.domain);
    cmd_verify->add_option("--samples", va.samples, "random tuples (appendix)")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_verify->add_option("--seed", va.seed, "random seed (appendix)")->capture_default_str();
    va.mu_opt = cmd_verify->add_option("--mu", va.mu, "tested rate (supersolution)");
    va.nu_opt = cmd_verify->add_option(
        "--nu", va.nu, "lower composite exponent (default (p-1)/p + 1e-3)");
    cmd_verify->add_option("--eta", va.eta, "upper composite exponent")->capture_default_str();
    cmd_verify->add_option("--normalize-max", va.normalize_max,
                           "max of the normalized superharmonic field")->capture_default_str();
    cmd_verify->add_option("--residual-tol", va.residual_tol,
                           "pass threshold relative to the residual scale")->capture_default_str();
    va.gamma_opt = cmd_verify->add_option("--gamma", va.gamma, "barrier aperture (mincon)");
    va.epsilon_opt =
        cmd_verify->add_option("--epsilon", va.epsilon, "window parameter (mincon/projection)");
    cmd_verify->add_option("--n-cones", va.n_cones, "boundary cones (mincon)")->capture_default_str();
    cmd_verify->add_option("--claim-tol", va.claim_tol, "claim slack (mincon)")->capture_default_str();
    va.x_opt = cmd_verify->add_option("--x", va.x, "point, first coordinate (projection)");
    va.y_opt = cmd_verify->add_option("--y", va.y, "point, second coordinate (projection)");
    cmd_verify->add_option("--alpha", va.alpha, "weight exponent")->capture_default_str();
    cmd_verify->add_option("--p", va.p, "gradient exponent (> 1)")->capture_default_str();
    cmd_verify->add_option("--N", va.N, "ambient dimension")->capture_default_str()->check(CLI::Range(2, 64));
    cmd_verify->add_option("--h", va.h, "grid spacing")->capture_default_str();
    cmd_verify->add_option("--out", va.out, "output file (default stdout)");
    cmd_verify->callback([&va]() {
        va.domain.validate(va.kind != "appendix");
        if (va.kind == "supersolution" && va.mu_opt->count() == 0)
            throw CLI::RequiredError("--mu (for --kind supersolution)");
        if (va.kind == "mincon" &&
            (va.gamma_opt->count() == 0 || va.epsilon_opt->count() == 0))
            throw CLI::RequiredError("--gamma and --epsilon (for --kind mincon)");
        if (va.kind == "projection" &&
            (va.x_opt->count() == 0 || va.y_opt->count() == 0 ||
             va.epsilon_opt->count() == 0))
            throw CLI::RequiredError("--x, --y and --epsilon (for --kind projection)");
    });

    SweepArgs sa;
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "tabulate bounds over a Cartesian parameter grid (parallel)");
    cmd_sweep->add_option("--beta", sa.beta, "exterior cone apertures")
        ->required()
        ->delimiter(',');
    cmd_sweep->add_option("--alpha", sa.alpha, "weight exponents")->capture_default_str()->delimiter(',');
    cmd_sweep->add_option("--p", sa.p, "gradient exponents (> 1)")->capture_default_str()->delimiter(',');
    cmd_sweep->add_option("--N", sa.N, "ambient dimensions")->capture_default_str()->delimiter(',');
    cmd_sweep->add_option("--gamma", sa.gamma, "fixed barrier apertures (default: optimize)")
        ->delimiter(',');
    cmd_sweep->add_flag("--convex", sa.convex, "domains are convex");
    cmd_sweep->add_flag("--mean-convex", sa.mean_convex, "domains are mean convex");
    cmd_sweep->add_flag("--simply-connected", sa.simply_connected,
                        "domains are planar and simply connected (applied when N = 2)");
    cmd_sweep->add_option("--tol", sa.tol, "profile solver tolerance")->capture_default_str();
    cmd_sweep->add_option("--out", sa.out, "output file (default stdout)");
    add_format_option(cmd_sweep, sa.format);

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->set_help_flag("--help", "print this help message and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_profile->parsed()) return run_profile(pa);
        if (cmd_bound->parsed()) return run_bound(ba);
        if (cmd_estimate->parsed()) return run_estimate(ea);
        if (cmd_verify->parsed()) return run_verify(va);
        if (cmd_sweep->parsed()) return run_sweep(sa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
