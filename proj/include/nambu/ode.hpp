// Adaptive Dormand-Prince 5(4) integrator with embedded error control.
// Small dense systems only; the derivative callback may throw to abort a
// trajectory (used for denominator blow-up guards).
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nambu {

class OdeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    double initial_step = 0.0;  // 0 = automatic
    long max_steps = 50000000;
};

using OdeDeriv = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
using OdeObserver = std::function<void(double, const std::vector<double>&)>;

// Integrates y' = f(t, y) from t0 to t1 (t0 < t1), mutating y in place.  The
// observer, when provided, sees the initial state and every accepted step.
void integrate_adaptive(const OdeDeriv& f, std::vector<double>& y, double t0, double t1,
                        const OdeOptions& opt = {}, const OdeObserver& observer = nullptr);

}  // namespace nambu
