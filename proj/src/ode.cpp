#include "nambu/ode.hpp"

#include <algorithm>
#include <cmath>

namespace nambu {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights (with the FSAL stage).
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

void integrate_adaptive(const OdeDeriv& f, std::vector<double>& y, double t0, double t1,
                        const OdeOptions& opt, const OdeObserver& observer) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_adaptive: need t0 < t1");
    const size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n), y4(n);

    double t = t0;
    f(t, y, k1);
    if (observer) observer(t, y);

    double h = opt.initial_step;
    if (h <= 0.0) {
        // Crude but serviceable first guess, refined immediately by control.
        double ny = 0, nd = 0;
        for (size_t i = 0; i < n; ++i) {
            ny = std::max(ny, std::fabs(y[i]));
            nd = std::max(nd, std::fabs(k1[i]));
        }
        h = (nd > 0) ? std::min(0.01 * (ny + 1.0) / nd, (t1 - t0) / 10.0) : (t1 - t0) / 100.0;
        h = std::max(h, (t1 - t0) * 1e-12);
    }

    long steps = 0;
    bool k1_fresh = true;
    while (t < t1) {
        if (++steps > opt.max_steps) throw OdeError("integrate_adaptive: step limit exceeded");
        h = std::min(h, t1 - t);
        if (!(h > std::fabs(t) * 1e-16 + 1e-300) || !std::isfinite(h))
            throw OdeError("integrate_adaptive: step size underflow at t=" + std::to_string(t));
        if (!k1_fresh) {
            f(t, y, k1);
            k1_fresh = true;
        }

        for (size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, yt, k2);
        for (size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, yt, k3);
        for (size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, yt, k4);
        for (size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, yt, k5);
        for (size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, yt, k6);
        for (size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7);
        for (size_t i = 0; i < n; ++i)
            y4[i] = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);

        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
            double e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (!std::isfinite(err)) {
            // Overflowed stage values: treat as a hard rejection.
            k1_fresh = true;
            h *= 0.2;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            k1_fresh = true;
            if (observer) observer(t, y);
        } else {
            k1_fresh = true;  // k1 still matches (t, y)
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
}

}  // namespace nambu
