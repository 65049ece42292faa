// Numeric reproduction of the holonomy counterexample: the Hamiltonian
// vector field of the structure dual to
//   alpha = df + g(f)/(x1^2+x2^2) (x2 dx1 - x1 dx2),   f = (x1^2+x2^2-x3^2-...)/2,
// integrated to exhibit flow lines spiraling towards the cone {f = 0}, with
// the linear model (g = 0) as the holonomy-free contrast class.
//
// The field is re-derived from alpha through this project's duality and
// contraction conventions (the test suite carries the symbolic derivation):
//   X = (x2 - g(f) x1 / rho^2) d1 - (x1 + g(f) x2 / rho^2) d2,
// so theta' = -1 and X f = -g(f) exactly, and x3..xn are conserved.
#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace nambu {

// Flat bump: exp(-1/x) for x > 0, identically 0 for x <= 0.
double default_bump(double x);

struct CounterexampleSpec {
    int n = 3;
    std::function<double(double)> bump = default_bump;
    bool flip_orientation = false;  // negates the field (theta' = +1)

    explicit CounterexampleSpec(int n_ = 3) : n(n_) {
        if (n < 3) throw std::invalid_argument("CounterexampleSpec: need n >= 3");
    }
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::vector<double>> points;
    std::vector<double> f_values;
    std::vector<double> theta;  // unwrapped angle in the (x1,x2)-plane
};

struct SpiralMetrics {
    bool empty = false;
    double theta_rate = 0.0;           // least-squares slope of theta(t)
    bool f_monotone = false;           // non-increasing at every recorded step
    bool f_strictly_decreasing = false;
    double f_ode_residual = 0.0;       // vs independent 1-D integration of f' = -g(f)
};

// f = (x1^2 + x2^2 - x3^2 - ... - xn^2)/2, the l = 2 quadratic.
double cone_quadratic(const std::vector<double>& x);

// Hamiltonian vector field X_{x3,...,xn} of the counterexample structure.
// Throws when evaluated on the x3-axis with g(f) != 0.
std::vector<double> counterexample_field(const CounterexampleSpec& spec,
                                         const std::vector<double>& x);

TrajectoryRecord integrate_trajectory(const CounterexampleSpec& spec,
                                      const std::vector<double>& x0, double duration,
                                      double tol = 1e-10);

// Same integration for the linear model's Hamiltonian field (g = 0); orbits
// preserve f exactly.
TrajectoryRecord linear_model_orbit(int n, const std::vector<double>& x0, double duration,
                                    double tol = 1e-10);

SpiralMetrics spiral_metrics(const CounterexampleSpec& spec, const TrajectoryRecord& tr);

// CSV with header t,x1,...,xn,f,theta; round-trip decimal formatting.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& tr);

}  // namespace nambu
