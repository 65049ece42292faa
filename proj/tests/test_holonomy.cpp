#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nambu/holonomy.hpp"
#include "nambu/nambu.hpp"
#include "test_util.hpp"

using namespace nambu;

namespace {

Poly x(int nv, int i) { return Poly::variable(nv, i); }

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("field derivation: Hamiltonian field of the dual structure, symbolically") {
    // With a generic polynomial m(x) standing in for g(f), the structure dual
    // to  omega = rho^2 df + m (x2 dx1 - x1 dx2)  must have
    //   X_{x3..xn} = (rho^2 x2 - m x1) e1 - (rho^2 x1 + m x2) e2,
    // the rho^2-cleared version of the counterexample field.  This pins the
    // sign/slot conventions used by the numeric field.
    for (int n : {3, 4}) {
        Poly f(n);
        for (int i = 0; i < n; ++i) {
            Exponents e(n, 0u);
            e[i] = 2;
            f.add_term(e, Rational(i < 2 ? 1 : -1, 2));
        }
        Poly rho2(n);
        {
            Exponents e(n, 0u);
            e[0] = 2;
            rho2.add_term(e, Rational(1));
            Exponents e2(n, 0u);
            e2[1] = 2;
            rho2.add_term(e2, Rational(1));
        }
        std::mt19937_64 rng(606 + n);
        Poly m = testutil::random_poly(rng, n, 2, 3);

        DiffForm beta(n, 1);
        beta.add_term({0}, x(n, 1));
        beta.add_term({1}, -x(n, 0));
        DiffForm omega = differential(f).scaled(rho2) + beta.scaled(m);

        NambuCandidate c = candidate_from_dual_form(omega);
        std::vector<Poly> fs;
        for (int i = 2; i < n; ++i) fs.push_back(x(n, i));
        MultiVector ham = hamiltonian_vf(c, fs);

        MultiVector expect(n, 1);
        expect.add_term({0}, rho2 * x(n, 1) - m * x(n, 0));
        expect.add_term({1}, -(rho2 * x(n, 0) + m * x(n, 1)));
        CHECK(ham == expect);

        // X . f = -m rho^2 (the cleared version of X.f = -g(f)).
        MultiVector f0(n, 0);
        f0.add_term({}, f);
        MultiVector xf = schouten(ham, f0);
        MultiVector expect_xf(n, 0);
        expect_xf.add_term({}, -(m * rho2));
        CHECK(xf == expect_xf);
    }
}

TEST_CASE("counterexample_field: numeric spot values") {
    CounterexampleSpec spec(3);

    // On the cone through (1,0,1): f = 0, so pure rotation.
    auto v = counterexample_field(spec, {1.0, 0.0, 1.0});
    CHECK(v[0] == doctest::Approx(0.0));
    CHECK(v[1] == doctest::Approx(-1.0));
    CHECK(v[2] == doctest::Approx(0.0));

    // At (1,0,0): f = 1/2, rotation plus inward radial pull of size g(1/2).
    auto w = counterexample_field(spec, {1.0, 0.0, 0.0});
    double g = default_bump(0.5);
    CHECK(g == doctest::Approx(std::exp(-2.0)));
    CHECK(w[0] == doctest::Approx(-g));
    CHECK(w[1] == doctest::Approx(-1.0));

    // Directional identity X . f = -g(f) at random points.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> p{u(rng), u(rng), u(rng)};
        if (p[0] * p[0] + p[1] * p[1] < 1e-6) continue;
        auto field = counterexample_field(spec, p);
        double fdot = 0;
        std::vector<double> grad{p[0], p[1], -p[2]};
        for (int i = 0; i < 3; ++i) fdot += field[i] * grad[i];
        CHECK(fdot == doctest::Approx(-default_bump(cone_quadratic(p))).epsilon(1e-12));
    }

    // Orientation flag flips the field.
    CounterexampleSpec flipped(3);
    flipped.flip_orientation = true;
    auto fv = counterexample_field(flipped, {1.0, 0.0, 0.0});
    CHECK(fv[1] == doctest::Approx(1.0));

    // Singular axis: rejected when g(f) != 0 there.
    CounterexampleSpec weird(3);
    weird.bump = [](double) { return 1.0; };
    CHECK_THROWS_AS(counterexample_field(weird, {0.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("spiral trajectory: monotone f, unit theta rate, 1-D comparison") {
    CounterexampleSpec spec(3);
    TrajectoryRecord tr = integrate_trajectory(spec, {1.0, 0.0, 0.0}, 50.0, 1e-10);
    SpiralMetrics m = spiral_metrics(spec, tr);
    CHECK_FALSE(m.empty);
    CHECK(m.f_monotone);
    CHECK(m.f_strictly_decreasing);
    CHECK(std::fabs(m.theta_rate + 1.0) <= 1e-6);
    CHECK(m.f_ode_residual <= 1e-8);
    CHECK(tr.f_values.back() > 0.0);
    // Holonomy witness: more than two full turns while f stays positive.
    CHECK(tr.theta.front() - tr.theta.back() > 4.0 * kPi);
}

TEST_CASE("inside the cone: closed circular orbits") {
    CounterexampleSpec spec(3);
    // f(x0) = (0.25 - 1)/2 < 0: the bump vanishes, pure rotation of period 2 pi.
    std::vector<double> x0{0.5, 0.0, 1.0};
    TrajectoryRecord tr = integrate_trajectory(spec, x0, 2.0 * kPi, 1e-12);
    const auto& last = tr.points.back();
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(last[i] - x0[i]) <= 1e-9);
    SpiralMetrics m = spiral_metrics(spec, tr);
    CHECK(std::fabs(m.theta_rate + 1.0) <= 1e-6);
    double fmin = *std::min_element(tr.f_values.begin(), tr.f_values.end());
    double fmax = *std::max_element(tr.f_values.begin(), tr.f_values.end());
    CHECK(fmax - fmin <= 1e-9);
}

TEST_CASE("on the cone: periodic orbit stays on the cone") {
    CounterexampleSpec spec(3);
    std::vector<double> x0{1.0, 0.0, 1.0};
    TrajectoryRecord tr = integrate_trajectory(spec, x0, 2.0 * kPi, 1e-12);
    for (double f : tr.f_values) CHECK(std::fabs(f) <= 1e-9);
    const auto& last = tr.points.back();
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(last[i] - x0[i]) <= 1e-9);
}

TEST_CASE("linear model orbits conserve f and close up") {
    for (std::vector<double> x0 :
         {std::vector<double>{1.0, 0.0, 0.0}, {0.3, -0.2, 0.8}, {0.0, 1.0, 0.2}}) {
        TrajectoryRecord tr = linear_model_orbit(3, x0, 100.0, 1e-12);
        double f0 = tr.f_values.front();
        for (double f : tr.f_values) CHECK(std::fabs(f - f0) <= 1e-9);
    }

    TrajectoryRecord loop = linear_model_orbit(3, {1.0, 0.0, 0.0}, 2.0 * kPi, 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(loop.points.back()[i] - loop.points.front()[i]) <= 1e-9);

    // Stationary start: the origin is a zero of the linear field.
    TrajectoryRecord still = linear_model_orbit(3, {0.0, 0.0, 0.0}, 1.0, 1e-12);
    for (const auto& p : still.points)
        for (double c : p) CHECK(c == 0.0);
}

TEST_CASE("conserved transverse coordinates and empty-record guard") {
    CounterexampleSpec spec(4);
    TrajectoryRecord tr = integrate_trajectory(spec, {1.0, 0.0, 0.3, -0.2}, 20.0, 1e-10);
    for (const auto& p : tr.points) {
        CHECK(std::fabs(p[2] - 0.3) <= 1e-10);
        CHECK(std::fabs(p[3] + 0.2) <= 1e-10);
    }

    SpiralMetrics empty = spiral_metrics(spec, TrajectoryRecord{});
    CHECK(empty.empty);

    CHECK_THROWS_AS(integrate_trajectory(spec, {0.0, 0.0, 1.0, 0.0}, 1.0, 1e-10),
                    std::invalid_argument);
}

TEST_CASE("CSV export shape") {
    CounterexampleSpec spec(3);
    TrajectoryRecord tr = integrate_trajectory(spec, {1.0, 0.0, 0.0}, 1.0, 1e-8);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    std::string text = os.str();
    CHECK(text.rfind("t,x1,x2,x3,f,theta\n", 0) == 0);
    size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == tr.times.size() + 1);
}
