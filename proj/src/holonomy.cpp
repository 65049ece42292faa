#include "nambu/holonomy.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nambu/ode.hpp"

namespace nambu {

double default_bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double cone_quadratic(const std::vector<double>& x) {
    double f = 0.5 * (x[0] * x[0] + x[1] * x[1]);
    for (size_t i = 2; i < x.size(); ++i) f -= 0.5 * x[i] * x[i];
    return f;
}

namespace {

std::vector<double> field_impl(int n, const std::function<double(double)>& bump, bool flip,
                               const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("counterexample_field: point dimension mismatch");
    double rho2 = x[0] * x[0] + x[1] * x[1];
    double f = cone_quadratic(x);
    double g = bump ? bump(f) : 0.0;
    std::vector<double> v(n, 0.0);
    if (rho2 == 0.0) {
        if (g != 0.0)
            throw std::domain_error("counterexample_field: singular on the x3-axis (g(f) != 0)");
        // rotation term vanishes here as well
    } else {
        v[0] = x[1] - g * x[0] / rho2;
        v[1] = -(x[0] + g * x[1] / rho2);
    }
    if (flip)
        for (double& c : v) c = -c;
    return v;
}

TrajectoryRecord integrate_impl(int n, const std::function<double(double)>& bump, bool flip,
                                const std::vector<double>& x0, double duration, double tol) {
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("integrate_trajectory: point dimension mismatch");
    if (!(duration > 0)) throw std::invalid_argument("integrate_trajectory: need duration > 0");

    TrajectoryRecord tr;
    double px = x0[0], py = x0[1];
    double theta = std::atan2(py, px);

    auto deriv = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy = field_impl(n, bump, flip, y);
    };
    auto observe = [&](double t, const std::vector<double>& y) {
        // Unwrap by accumulating the rotation relative to the previous sample.
        double cross = px * y[1] - py * y[0];
        double dot = px * y[0] + py * y[1];
        if (cross != 0.0 || dot != 0.0) theta += std::atan2(cross, dot);
        px = y[0];
        py = y[1];
        tr.times.push_back(t);
        tr.points.push_back(y);
        tr.f_values.push_back(cone_quadratic(y));
        tr.theta.push_back(theta);
    };

    std::vector<double> y = x0;
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-3;
    integrate_adaptive(deriv, y, 0.0, duration, opt, observe);
    return tr;
}

}  // namespace

std::vector<double> counterexample_field(const CounterexampleSpec& spec,
                                         const std::vector<double>& x) {
    return field_impl(spec.n, spec.bump, spec.flip_orientation, x);
}

TrajectoryRecord integrate_trajectory(const CounterexampleSpec& spec,
                                      const std::vector<double>& x0, double duration, double tol) {
    if (x0.size() >= 2 && x0[0] == 0.0 && x0[1] == 0.0)
        throw std::invalid_argument("integrate_trajectory: start point lies on the x3-axis");
    return integrate_impl(spec.n, spec.bump, spec.flip_orientation, x0, duration, tol);
}

TrajectoryRecord linear_model_orbit(int n, const std::vector<double>& x0, double duration,
                                    double tol) {
    return integrate_impl(n, nullptr, false, x0, duration, tol);
}

SpiralMetrics spiral_metrics(const CounterexampleSpec& spec, const TrajectoryRecord& tr) {
    SpiralMetrics m;
    size_t len = tr.times.size();
    if (len == 0) {
        m.empty = true;
        return m;
    }

    if (len >= 2) {
        double tbar = 0, thbar = 0;
        for (size_t i = 0; i < len; ++i) {
            tbar += tr.times[i];
            thbar += tr.theta[i];
        }
        tbar /= len;
        thbar /= len;
        double sxx = 0, sxy = 0;
        for (size_t i = 0; i < len; ++i) {
            double dt = tr.times[i] - tbar;
            sxx += dt * dt;
            sxy += dt * (tr.theta[i] - thbar);
        }
        m.theta_rate = sxx > 0 ? sxy / sxx : 0.0;
    }

    m.f_monotone = true;
    m.f_strictly_decreasing = len >= 2;
    for (size_t i = 0; i + 1 < len; ++i) {
        if (tr.f_values[i + 1] > tr.f_values[i]) m.f_monotone = false;
        if (tr.f_values[i + 1] >= tr.f_values[i]) m.f_strictly_decreasing = false;
    }

    // Independent scalar comparison: u' = -g(u) from the recorded start value,
    // advanced segment by segment to the recorded timestamps.
    auto deriv = [&](double, const std::vector<double>& u, std::vector<double>& du) {
        du[0] = -(spec.bump ? spec.bump(u[0]) : 0.0);
    };
    std::vector<double> u{tr.f_values[0]};
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-15;
    double worst = 0.0;
    for (size_t i = 1; i < len; ++i) {
        if (tr.times[i] > tr.times[i - 1])
            integrate_adaptive(deriv, u, tr.times[i - 1], tr.times[i], opt);
        worst = std::max(worst, std::fabs(u[0] - tr.f_values[i]));
    }
    m.f_ode_residual = worst;
    return m;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& tr) {
    size_t n = tr.points.empty() ? 0 : tr.points[0].size();
    std::string line = "t";
    for (size_t i = 1; i <= n; ++i) line += ",x" + std::to_string(i);
    line += ",f,theta\n";
    os << line;
    for (size_t k = 0; k < tr.times.size(); ++k) {
        line.clear();
        append_double(line, tr.times[k]);
        for (size_t i = 0; i < n; ++i) {
            line += ',';
            append_double(line, tr.points[k][i]);
        }
        line += ',';
        append_double(line, tr.f_values[k]);
        line += ',';
        append_double(line, tr.theta[k]);
        line += '\n';
        os << line;
    }
}

}  // namespace nambu
