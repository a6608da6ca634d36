#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace hardy {

inline constexpr double pi = std::numbers::pi;

// Parameters of the weighted Hardy problem on an N-dimensional domain:
// the quotient integrates |grad u|^p against delta^{-alpha} in the numerator
// and |u|^p against delta^{-(alpha+p)} in the denominator.
struct ProblemParams {
    int N = 2;           // ambient dimension, >= 2
    double p = 2.0;      // gradient exponent, > 1
    double alpha = 0.0;  // weight exponent (any sign)
    double tol = 1e-7;   // solver tolerance knob, > 0
};

inline void validate(const ProblemParams& prm) {
    if (prm.N < 2) throw std::invalid_argument("ProblemParams: N must be >= 2");
    if (!(prm.p > 1.0)) throw std::invalid_argument("ProblemParams: p must be > 1");
    if (!(prm.tol > 0.0)) throw std::invalid_argument("ProblemParams: tol must be > 0");
}

// Thrown when an iterative solver cannot deliver (bracketing failed, shooting
// map not monotone, eigenvalue degenerate, ...).  The CLI maps this to exit 2.
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hardy
