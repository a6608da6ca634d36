#pragma once

// Discrete weighted Rayleigh quotient
//
//     Q(u) = [ sum_cells |grad u|^p delta^{-alpha} h^2 ]
//          / [ sum_nodes |u|^p delta^{-(alpha+p)} h^2 ]
//
// over grid functions that vanish outside the domain, and its minimization.
// Gradients are forward differences per cell with zero extension at
// masked-out neighbors; the singular weights are kept finite by excluding
// nodes with delta < h/2 from both sums (test functions supported in the
// eroded domain).  Nodes on the grid-window edge are excluded as well, so the
// mask realizes compact support even on the clipped windows used for
// unbounded domains.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

// A scalar field sampled on a grid; values at nodes outside the domain are
// zero and ignored.  The referenced grid must outlive the field.
struct GridField {
    const DiscreteDomain* domain = nullptr;
    std::vector<double> values;  // size nx*ny
};

// Fill a field from f(node, delta) at inside nodes (zero elsewhere).
template <class F>
GridField make_field(const DiscreteDomain& grid, F&& f) {
    GridField u;
    u.domain = &grid;
    u.values.assign(grid.nx * grid.ny, 0.0);
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const std::size_t k = grid.idx(ix, iy);
            if (grid.inside[k]) u.values[k] = f(grid.node(ix, iy), grid.delta[k]);
        }
    return u;
}

// Quadrature data shared by the quotient, its gradient, and the weak-form
// residuals: the active node mask, per-cell weights delta^{-alpha} (mean over
// the cell's active corners; cells with no active corner get weight 0), and
// per-node weights delta^{-(alpha+p)} h^2.
struct QuadratureWeights {
    const DiscreteDomain* domain = nullptr;
    double alpha = 0.0;
    double p = 2.0;
    std::vector<std::uint8_t> active;  // size nx*ny
    std::vector<double> cell_w;        // size (nx-1)*(ny-1)
    std::vector<double> node_w;        // size nx*ny, zero at inactive nodes
    std::size_t n_active = 0;
};

// Throws std::invalid_argument if p <= 1 or no node is active at this h.
QuadratureWeights make_weights(const DiscreteDomain& grid, double alpha, double p);

// Copy of u.values with inactive nodes zeroed; validates grid compatibility
// and finiteness.
std::vector<double> masked_values(const QuadratureWeights& w, const GridField& u);

// Numerator sum_cells w_c |grad u|^p h^2 and denominator
// sum_nodes node_w |u|^p of the quotient, both over the masked vector.
double energy(const QuadratureWeights& w, const std::vector<double>& u);
double mass(const QuadratureWeights& w, const std::vector<double>& u);

// Weak diffusion form against the nodal hat functions:
//   out_i = sum_cells w_c h^2 (|grad u|^2 + eps^2)^{(p-2)/2} grad u . grad phi_i
// (zero at inactive nodes; cells with zero gradient contribute nothing when
// eps = 0).  For p = 2 and eps = 0 this is the stiffness apply A u.
void weak_diffusion(const QuadratureWeights& w, const std::vector<double>& u, double eps,
                    std::vector<double>& out);

// Gradient of energy(): d/du_i = p * weak_diffusion (with regularization eps).
void energy_gradient(const QuadratureWeights& w, const std::vector<double>& u, double eps,
                     std::vector<double>& out);

// Gradient of mass(): d/du_i = p * node_w_i |u_i|^{p-2} u_i.
void mass_gradient(const QuadratureWeights& w, const std::vector<double>& u,
                   std::vector<double>& out);

// The quotient Q(u).  Throws std::invalid_argument when the denominator
// vanishes (field zero on the active mask) or values are not finite.
double rayleigh(const GridField& u, double alpha, double p);

struct MinimizeOptions {
    int max_iter = 800;
    double tol = 1e-9;  // relative change in the quotient
    unsigned seed = 0;  // reserved; both algorithms are deterministic
};

struct RayleighEstimate {
    double value = 0.0;     // minimized quotient
    double h = 0.0;         // grid spacing
    int iterations = 0;     // outer iterations used
    double residual = 0.0;  // final relative change of the quotient
    bool converged = false;
    GridField minimizer;    // normalized, single-signed
};

// Minimize the quotient over the active mask.  p = 2: inverse-power iteration
// on the generalized eigenproblem A u = mu B u (weighted 5-point stiffness
// versus diagonal weight), converged when both the relative eigenvalue change
// and the eigen-residual |A u - mu B u| / |B u| drop below tol.  p != 2:
// projected gradient descent on Q with Armijo backtracking (shrink 0.5,
// initial step 1.0, step growth 1.3 after acceptance), renormalized in the
// weighted p-norm each iteration, started from the p = 2 minimizer.
// Non-convergence in max_iter returns the partial estimate with
// converged = false (no throw).
RayleighEstimate minimize(const DiscreteDomain& grid, double alpha, double p,
                          MinimizeOptions opts = {});

// CSV dump of a field: "x,y,inside,value" per node.
void field_to_csv(const GridField& u, std::ostream& os);

}  // namespace hardy
