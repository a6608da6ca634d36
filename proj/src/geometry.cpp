#include "hardy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hardy/kernels.hpp"
#include "hardy/params.hpp"

namespace hardy {
namespace {

double dot2(const Point2& a, const Point2& b) { return a[0] * b[0] + a[1] * b[1]; }
double cross2(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }
double norm2(const Point2& a) { return std::hypot(a[0], a[1]); }
Point2 sub2(const Point2& a, const Point2& b) { return {a[0] - b[0], a[1] - b[1]}; }

// Distance from x to the segment [a, b] with the realizing point.
std::pair<double, Point2> segment_distance(const Point2& x, const Point2& a, const Point2& b) {
    const Point2 ab = sub2(b, a);
    const double len2 = dot2(ab, ab);
    double t = len2 > 0.0 ? dot2(sub2(x, a), ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point2 p{a[0] + t * ab[0], a[1] + t * ab[1]};
    return {norm2(sub2(x, p)), p};
}

// Edges walked in vertex order; ties keep the earliest edge.
std::pair<double, Point2> polygon_distance(const std::vector<Point2>& v, const Point2& x) {
    double best = std::numeric_limits<double>::infinity();
    Point2 bp{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto [d, p] = segment_distance(x, v[i], v[(i + 1) % v.size()]);
        if (d < best) {
            best = d;
            bp = p;
        }
    }
    return {best, bp};
}

const std::vector<Point2>& square_vertices() {
    static const std::vector<Point2> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    return v;
}

const std::vector<Point2>& l_shape_vertices() {
    static const std::vector<Point2> v{{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}};
    return v;
}

bool inside_convex_polygon(const std::vector<Point2>& v, const Point2& x) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        if (cross2(sub2(b, a), sub2(x, a)) <= 0.0) return false;
    }
    return true;
}

struct BBox {
    double xmin, xmax, ymin, ymax;
};

BBox bounding_box(const DomainSpec& domain) {
    return std::visit(
        [](const auto& s) -> BBox {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UnitSquare> || std::is_same_v<T, LShape>) {
                return {0, 1, 0, 1};
            } else if constexpr (std::is_same_v<T, UnitDisk> || std::is_same_v<T, SlitPlane>) {
                return {-1, 1, -1, 1};
            } else if constexpr (std::is_same_v<T, Sector>) {
                const double R = s.radius, b = s.half_angle;
                const double ymax = b >= pi / 2 ? R : R * std::sin(b);
                return {std::min(0.0, R * std::cos(b)), R, -ymax, ymax};
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return {0, 1, 0, 1};
            } else {
                static_assert(std::is_same_v<T, ConvexPolygon>);
                BBox box{s.vertices[0][0], s.vertices[0][0], s.vertices[0][1], s.vertices[0][1]};
                for (const auto& v : s.vertices) {
                    box.xmin = std::min(box.xmin, v[0]);
                    box.xmax = std::max(box.xmax, v[0]);
                    box.ymin = std::min(box.ymin, v[1]);
                    box.ymax = std::max(box.ymax, v[1]);
                }
                return box;
            }
        },
        domain.shape);
}

// Distance without the inside precondition (assumes x strictly interior).
std::pair<double, Point2> distance_unchecked(const DomainSpec& domain, const Point2& x) {
    return std::visit(
        [&x](const auto& s) -> std::pair<double, Point2> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UnitSquare>) {
                return polygon_distance(square_vertices(), x);
            } else if constexpr (std::is_same_v<T, LShape>) {
                return polygon_distance(l_shape_vertices(), x);
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                return polygon_distance(s.vertices, x);
            } else if constexpr (std::is_same_v<T, UnitDisk>) {
                const double r = norm2(x);
                if (r == 0.0) return {1.0, Point2{1.0, 0.0}};
                return {1.0 - r, Point2{x[0] / r, x[1] / r}};
            } else if constexpr (std::is_same_v<T, Sector>) {
                const double R = s.radius, b = s.half_angle;
                const Point2 origin{0, 0};
                const Point2 lo{R * std::cos(b), -R * std::sin(b)};
                const Point2 hi{R * std::cos(b), R * std::sin(b)};
                // Boundary walk: lower edge, arc, upper edge.
                auto best = segment_distance(x, origin, lo);
                const double r = norm2(x);
                const double darc = R - r;
                if (darc < best.first) best = {darc, Point2{R * x[0] / r, R * x[1] / r}};
                auto up = segment_distance(x, hi, origin);
                if (up.first < best.first) best = up;
                return best;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return {x[1], Point2{x[0], 0.0}};
            } else {
                static_assert(std::is_same_v<T, SlitPlane>);
                if (x[0] >= 0.0) return {std::abs(x[1]), Point2{x[0], 0.0}};
                return {norm2(x), Point2{0.0, 0.0}};
            }
        },
        domain.shape);
}

// Minimal arc of directions: axis angle and half-width of the smallest arc
// containing every input direction (largest-gap construction).
struct DirectionArc {
    double axis;
    double half_width;
};

DirectionArc enclosing_arc(std::vector<double> angles) {
    if (angles.empty()) throw std::logic_error("enclosing_arc: no directions");
    const double two_pi = 2.0 * pi;
    for (double& a : angles) {
        a = std::fmod(a, two_pi);
        if (a < 0.0) a += two_pi;
    }
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + two_pi - angles.back();
    double arc_start = angles.front();
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
        const double g = angles[i + 1] - angles[i];
        if (g > gap) {
            gap = g;
            arc_start = angles[i + 1];
        }
    }
    const double width = two_pi - gap;
    double axis = std::fmod(arc_start + width / 2.0, two_pi);
    if (axis < 0.0) axis += two_pi;
    return {axis, width / 2.0};
}

constexpr double vertex_snap = 1e-9;  // parameter tolerance for landing on a vertex

// Direction candidates into a polygonal domain as seen from boundary point z,
// which sits on edge (v[edge], v[edge+1]) at parameter t.  Extreme directions
// of the full direction set are attained at vertices or along edges adjacent
// to z; interior edge samples break gap ties inside the covered arc.
std::vector<double> polygon_direction_candidates(const std::vector<Point2>& v, const Point2& z,
                                                 std::size_t edge, double t) {
    std::vector<double> ang;
    auto push_dir = [&ang, &z](const Point2& q) {
        const Point2 d = sub2(q, z);
        if (norm2(d) > 1e-14) ang.push_back(std::atan2(d[1], d[0]));
    };
    for (const auto& q : v) push_dir(q);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        for (double s : {0.25, 0.5, 0.75})
            push_dir(Point2{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])});
    }
    if (t > vertex_snap && t < 1.0 - vertex_snap) {
        // Strictly inside an edge: the boundary continues both ways along it.
        const Point2 d = sub2(v[(edge + 1) % v.size()], v[edge]);
        const double a = std::atan2(d[1], d[0]);
        ang.push_back(a);
        ang.push_back(a + pi);
    }
    return ang;
}

struct BoundaryPoint {
    Point2 z;
    std::vector<double> directions;  // candidate directions into the domain
};

// Evenly spaced perimeter samples for a closed polygon, starting at vertex 0.
std::vector<BoundaryPoint> polygon_boundary_points(const std::vector<Point2>& v, std::size_t n) {
    const std::size_t m = v.size();
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        cum[i + 1] = cum[i] + norm2(sub2(v[(i + 1) % m], v[i]));
    const double L = cum[m];
    std::vector<BoundaryPoint> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = L * double(k) / double(n);
        std::size_t e = 0;
        while (e + 1 < m && cum[e + 1] <= s) ++e;
        const double len = cum[e + 1] - cum[e];
        const double t = len > 0.0 ? (s - cum[e]) / len : 0.0;
        const Point2& a = v[e];
        const Point2& b = v[(e + 1) % m];
        Point2 z{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
        if (t <= vertex_snap) z = a;
        if (t >= 1.0 - vertex_snap) z = b;
        out.push_back({z, polygon_direction_candidates(v, z, e, t)});
    }
    return out;
}

// Perimeter samples and direction candidates for the circular sector
// {r < R, |angle| < b}: origin -> lower edge -> arc -> upper edge.
std::vector<BoundaryPoint> sector_boundary_points(double b, double R, std::size_t n) {
    const Point2 origin{0, 0};
    const Point2 lo{R * std::cos(b), -R * std::sin(b)};
    const Point2 hi{R * std::cos(b), R * std::sin(b)};
    const double L = 2.0 * R + 2.0 * b * R;
    std::vector<BoundaryPoint> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = L * double(k) / double(n);
        Point2 z{};
        bool on_edge = false;
        Point2 edge_dir{};
        if (s <= R) {
            const double t = s / R;
            z = {t * lo[0], t * lo[1]};
            on_edge = t > vertex_snap && t < 1.0 - vertex_snap;
            edge_dir = {std::cos(-b), std::sin(-b)};
        } else if (s <= R + 2.0 * b * R) {
            const double phi = -b + (s - R) / R;
            z = {R * std::cos(phi), R * std::sin(phi)};
        } else {
            const double t = (s - R - 2.0 * b * R) / R;
            z = {hi[0] + t * (origin[0] - hi[0]), hi[1] + t * (origin[1] - hi[1])};
            on_edge = t > vertex_snap && t < 1.0 - vertex_snap;
            edge_dir = {std::cos(b), std::sin(b)};
        }
        std::vector<double> ang;
        auto push_dir = [&ang, &z](const Point2& q) {
            const Point2 d = sub2(q, z);
            if (norm2(d) > 1e-12) ang.push_back(std::atan2(d[1], d[0]));
        };
        push_dir(origin);
        push_dir(lo);
        push_dir(hi);
        for (int j = 1; j <= 16; ++j) {
            const double phi = -b + 2.0 * b * double(j) / 17.0;
            push_dir(Point2{R * std::cos(phi), R * std::sin(phi)});
        }
        for (const Point2& c : {lo, hi})
            for (double t : {0.25, 0.5, 0.75}) push_dir(Point2{t * c[0], t * c[1]});
        if (on_edge) {
            const double a = std::atan2(edge_dir[1], edge_dir[0]);
            ang.push_back(a);
            ang.push_back(a + pi);
        }
        if (std::abs(norm2(z) - R) < 1e-12) {
            // On the arc: one-sided tangents bound the chord directions exactly.
            const double phi = std::atan2(z[1], z[0]);
            if (phi < b - 1e-12) ang.push_back(std::atan2(std::cos(phi), -std::sin(phi)));
            if (phi > -b + 1e-12) ang.push_back(std::atan2(-std::cos(phi), std::sin(phi)));
        }
        out.push_back({z, std::move(ang)});
    }
    return out;
}

BoundaryCone make_cone(const Point2& z, const Point2& axis, double aperture) {
    BoundaryCone cone;
    cone.vertex = {z[0], z[1]};
    cone.axis = {axis[0], axis[1]};
    cone.aperture = aperture;
    return cone;
}

BoundaryCone cone_from_directions(const Point2& z, const std::vector<double>& directions,
                                  double gamma) {
    const DirectionArc arc = enclosing_arc(directions);
    if (arc.half_width > gamma + 1e-6)
        throw std::logic_error("boundary_sample: enclosing cone construction failed");
    return make_cone(z, Point2{std::cos(arc.axis), std::sin(arc.axis)}, gamma);
}

}  // namespace

DomainSpec domain_square() {
    DomainSpec d;
    d.shape = UnitSquare{};
    d.convex = true;
    d.mean_convex = true;
    d.exterior_cone_beta = pi / 2;
    return d;
}

DomainSpec domain_disk() {
    DomainSpec d;
    d.shape = UnitDisk{};
    d.convex = true;
    d.mean_convex = true;
    d.exterior_cone_beta = pi / 2;
    return d;
}

DomainSpec domain_sector(double half_angle, double radius) {
    if (!(half_angle > 0.0) || !(half_angle < pi))
        throw std::invalid_argument("sector half-angle must lie in (0, pi)");
    if (!(radius > 0.0)) throw std::invalid_argument("sector radius must be positive");
    DomainSpec d;
    d.shape = Sector{half_angle, radius};
    d.convex = half_angle <= pi / 2;
    d.mean_convex = d.convex;
    d.exterior_cone_beta = std::max(half_angle, pi / 2);
    return d;
}

DomainSpec domain_half_plane() {
    DomainSpec d;
    d.shape = HalfPlane{};
    d.convex = true;
    d.mean_convex = true;
    d.exterior_cone_beta = pi / 2;
    return d;
}

DomainSpec domain_slit_plane() {
    DomainSpec d;
    d.shape = SlitPlane{};
    d.convex = false;
    d.mean_convex = false;
    d.exterior_cone_beta = pi;
    return d;
}

DomainSpec domain_convex_polygon(std::vector<Point2> vertices) {
    if (vertices.size() < 3)
        throw std::invalid_argument("convex polygon needs at least 3 vertices");
    const std::size_t m = vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 e1 = sub2(vertices[(i + 1) % m], vertices[i]);
        const Point2 e2 = sub2(vertices[(i + 2) % m], vertices[(i + 1) % m]);
        if (norm2(e1) < 1e-14) throw std::invalid_argument("degenerate polygon edge");
        if (cross2(e1, e2) <= 0.0)
            throw std::invalid_argument("polygon must be strictly convex and counterclockwise");
    }
    DomainSpec d;
    d.shape = ConvexPolygon{std::move(vertices)};
    d.convex = true;
    d.mean_convex = true;
    d.exterior_cone_beta = pi / 2;
    return d;
}

DomainSpec domain_l_shape() {
    DomainSpec d;
    d.shape = LShape{};
    d.convex = false;
    d.mean_convex = false;
    d.exterior_cone_beta = 3.0 * pi / 4.0;
    return d;
}

bool inside(const DomainSpec& domain, const Point2& x) {
    return std::visit(
        [&x](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UnitSquare>) {
                return x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[1] < 1.0;
            } else if constexpr (std::is_same_v<T, UnitDisk>) {
                return norm2(x) < 1.0;
            } else if constexpr (std::is_same_v<T, Sector>) {
                const double r = norm2(x);
                return r > 0.0 && r < s.radius && std::abs(std::atan2(x[1], x[0])) < s.half_angle;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return x[1] > 0.0;
            } else if constexpr (std::is_same_v<T, SlitPlane>) {
                return !(x[1] == 0.0 && x[0] >= 0.0);
            } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
                return inside_convex_polygon(s.vertices, x);
            } else {
                static_assert(std::is_same_v<T, LShape>);
                return x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[1] < 1.0 &&
                       !(x[0] >= 0.5 && x[1] >= 0.5);
            }
        },
        domain.shape);
}

std::pair<double, Point2> distance(const DomainSpec& domain, const Point2& x) {
    if (!inside(domain, x)) throw std::domain_error("distance: point is outside the domain");
    return distance_unchecked(domain, x);
}

DiscreteDomain build_grid(const DomainSpec& domain, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    const BBox box = bounding_box(domain);
    const auto count = [h](double lo, double hi) {
        return std::size_t(std::floor((hi - lo) / h + 1e-9)) + 1;
    };
    DiscreteDomain g;
    g.h = h;
    g.origin = {box.xmin, box.ymin};
    g.nx = count(box.xmin, box.xmax);
    g.ny = count(box.ymin, box.ymax);
    if (g.nx > 100000 || g.ny > 100000 || g.nx * g.ny > 50000000)
        throw std::invalid_argument("grid spacing too fine for this domain");
    const std::size_t total = g.nx * g.ny;
    g.inside.assign(total, 0);
    g.delta.assign(total, 0.0);
    g.proj_x.assign(total, 0.0);
    g.proj_y.assign(total, 0.0);

    kernels::for_each_index(total, [&](std::size_t k) {
        const std::size_t ix = k % g.nx;
        const std::size_t iy = k / g.nx;
        const Point2 x = g.node(ix, iy);
        if (!inside(domain, x)) return;
        const auto [d, p] = distance_unchecked(domain, x);
        g.inside[k] = 1;
        g.delta[k] = d;
        g.proj_x[k] = p[0];
        g.proj_y[k] = p[1];
    });
    if (std::find(g.inside.begin(), g.inside.end(), std::uint8_t(1)) == g.inside.end())
        throw std::invalid_argument("grid resolution too coarse: no interior nodes");
    return g;
}

std::vector<BoundaryCone> boundary_sample(const DomainSpec& domain, std::size_t n,
                                          double gamma) {
    if (n == 0) throw std::invalid_argument("boundary_sample: n must be positive");
    if (!domain.exterior_cone_beta)
        throw std::invalid_argument("boundary_sample: domain has no exterior cone aperture");
    const double beta = *domain.exterior_cone_beta;
    if (gamma > pi + 1e-12)
        throw std::invalid_argument("boundary_sample: cone aperture cannot exceed pi");
    if (gamma < beta - 1e-12)
        throw std::invalid_argument(
            "boundary_sample: cone too narrow: requested aperture is below the domain's "
            "exterior cone aperture");

    std::vector<BoundaryCone> cones;
    cones.reserve(n);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UnitSquare> || std::is_same_v<T, LShape> ||
                          std::is_same_v<T, ConvexPolygon>) {
                const std::vector<Point2>* v = nullptr;
                if constexpr (std::is_same_v<T, UnitSquare>)
                    v = &square_vertices();
                else if constexpr (std::is_same_v<T, LShape>)
                    v = &l_shape_vertices();
                else
                    v = &s.vertices;
                for (const auto& bp : polygon_boundary_points(*v, n))
                    cones.push_back(cone_from_directions(bp.z, bp.directions, gamma));
            } else if constexpr (std::is_same_v<T, UnitDisk>) {
                for (std::size_t k = 0; k < n; ++k) {
                    const double phi = 2.0 * pi * double(k) / double(n);
                    const Point2 z{std::cos(phi), std::sin(phi)};
                    cones.push_back(make_cone(z, Point2{-z[0], -z[1]}, gamma));
                }
            } else if constexpr (std::is_same_v<T, Sector>) {
                for (const auto& bp : sector_boundary_points(s.half_angle, s.radius, n))
                    cones.push_back(cone_from_directions(bp.z, bp.directions, gamma));
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = n == 1 ? 0.0 : -1.0 + 2.0 * double(k) / double(n - 1);
                    cones.push_back(make_cone(Point2{x, 0.0}, Point2{0.0, 1.0}, gamma));
                }
            } else {
                static_assert(std::is_same_v<T, SlitPlane>);
                // Tip first (axis along the negative axis direction keeps the
                // translated profile positive inside the domain), then face
                // samples along the slit: top face looks down, bottom face up.
                cones.push_back(make_cone(Point2{0.0, 0.0}, Point2{-1.0, 0.0}, gamma));
                for (std::size_t j = 1; j < n; ++j) {
                    const double t = double(j) / double(n - 1);
                    const double ay = (j % 2 == 1) ? -1.0 : 1.0;
                    cones.push_back(make_cone(Point2{t, 0.0}, Point2{0.0, ay}, gamma));
                }
            }
        },
        domain.shape);
    return cones;
}

void grid_to_csv(const DiscreteDomain& grid, std::ostream& os) {
    os << "x,y,inside,delta\n";
    char buf[160];
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const std::size_t k = grid.idx(ix, iy);
            const Point2 x = grid.node(ix, iy);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.17g\n", x[0], x[1],
                          int(grid.inside[k]), grid.delta[k]);
            os << buf;
        }
    }
}

}  // namespace hardy
