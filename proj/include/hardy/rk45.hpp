#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

// Embedded Dormand-Prince 5(4) stepper for small fixed-size systems.
// Only what the profile shooter needs: adaptive steps with a classic
// PI-free controller, the FSAL trick, and exact stepping onto requested
// abscissae (no dense-output polynomial; we simply land steps on targets).

namespace hardy {

template <std::size_t D>
using rk_state = std::array<double, D>;

template <std::size_t D>
struct rk45_stepper {
    using state = rk_state<D>;
    using rhs_fn = std::function<state(double, const state&)>;

    rhs_fn f;
    double rtol = 1e-10;
    double atol = 1e-12;
    double hmin = 1e-14;
    double hmax = 0.1;

    // One trial step of size h from (t, y).  On acceptance returns true and
    // fills ynew/err_norm; k1 must hold f(t, y) and is replaced by f(t+h, ynew)
    // (FSAL) when the step is accepted.
    bool try_step(double t, const state& y, double h, state& ynew, state& k1) const {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                                a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                                a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                                a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        // difference between the 5th and the embedded 4th order weights
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        state k2, k3, k4, k5, k6, k7, yt;
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * a21 * k1[i];
        k2 = f(t + h / 5.0, yt);
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(t + 3.0 * h / 10.0, yt);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(t + 4.0 * h / 5.0, yt);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(t + 8.0 * h / 9.0, yt);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(t + h, yt);
        for (std::size_t i = 0; i < D; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(t + h, ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / double(D));
        last_err_ = err;
        if (err <= 1.0) {
            k1 = k7;
            return true;
        }
        return false;
    }

    double suggest(double h) const {
        double fac = 0.9 * std::pow(std::max(last_err_, 1e-16), -0.2);
        return h * std::clamp(fac, 0.2, 5.0);
    }

  private:
    mutable double last_err_ = 0.0;
};

}  // namespace hardy
