#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hardy/cone_profile.hpp"

namespace hardy {

using Point2 = std::array<double, 2>;

// Gallery shapes.  All two-dimensional; the unbounded ones carry a default
// sampling window used by build_grid.
struct UnitSquare {};                       // (0,1)^2
struct UnitDisk {};                         // |x| < 1
struct Sector {                             // {r < radius, |angle| < half_angle}
    double half_angle = 0.0;                // in (0, pi)
    double radius = 1.0;
};
struct HalfPlane {};                        // x2 > 0, grid window [0,1]^2
struct SlitPlane {};                        // plane minus {x1 >= 0, x2 = 0}, window [-1,1]^2
struct ConvexPolygon {
    std::vector<Point2> vertices;           // counterclockwise, convex
};
struct LShape {};                           // (0,1)^2 minus [1/2,1] x [1/2,1]

struct DomainSpec {
    std::variant<UnitSquare, UnitDisk, Sector, HalfPlane, SlitPlane, ConvexPolygon, LShape>
        shape;
    bool convex = false;
    bool mean_convex = false;
    std::optional<double> exterior_cone_beta;  // uniform enclosing-cone aperture (r0 = infinity)
};

// Constructors with consistent metadata.
DomainSpec domain_square();
DomainSpec domain_disk();
DomainSpec domain_sector(double half_angle, double radius = 1.0);
DomainSpec domain_half_plane();
DomainSpec domain_slit_plane();
DomainSpec domain_convex_polygon(std::vector<Point2> vertices);
DomainSpec domain_l_shape();

// Strict interior test.
bool inside(const DomainSpec& domain, const Point2& x);

// Exact distance to the boundary together with a realizing boundary point;
// ties are broken by the smallest boundary parameter (boundary walked
// counterclockwise from a fixed start per shape).  x must lie inside.
std::pair<double, Point2> distance(const DomainSpec& domain, const Point2& x);

// Node-centered uniform grid over the shape's bounding box.  Functions on the
// grid are extended by zero outside the inside-mask.
struct DiscreteDomain {
    double h = 0.0;
    Point2 origin{};                   // position of node (0, 0)
    std::size_t nx = 0, ny = 0;        // node counts per axis
    std::vector<std::uint8_t> inside;  // nx*ny, row-major
    std::vector<double> delta;         // boundary distance, 0 outside
    std::vector<double> proj_x;        // nearest boundary point, 0 outside
    std::vector<double> proj_y;

    std::size_t idx(std::size_t ix, std::size_t iy) const { return ix + nx * iy; }
    Point2 node(std::size_t ix, std::size_t iy) const {
        return {origin[0] + h * double(ix), origin[1] + h * double(iy)};
    }
};

DiscreteDomain build_grid(const DomainSpec& domain, double h);

// n boundary points, each with a cone of aperture gamma whose translate
// contains the whole domain: vertex on the boundary, axis from the minimal
// arc enclosing all directions into the domain.  gamma must be at least the
// domain's exterior_cone_beta (and at most pi).
std::vector<BoundaryCone> boundary_sample(const DomainSpec& domain, std::size_t n,
                                          double gamma);

// CSV export: header "x,y,inside,delta" then one row per node.
void grid_to_csv(const DiscreteDomain& grid, std::ostream& os);

}  // namespace hardy
