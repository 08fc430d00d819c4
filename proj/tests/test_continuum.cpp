#include "support.hpp"

#include "ffdelay/continuum.hpp"
#include "ffdelay/errors.hpp"
#include "ffdelay/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace ffdelay;
using ffdelay::testing::Generator;
using ffdelay::testing::max_rel_diff;

namespace {

// Exact solution of g' = -g/tau + w for w = c on [1, 2) and 0 elsewhere.
double exact_pulse(double t, double c, double tau) {
    if (t <= 1.0) return 0.0;
    if (t <= 2.0) return c * tau * (1.0 - std::exp(-(t - 1.0) / tau));
    return exact_pulse(2.0, c, tau) * std::exp(-(t - 2.0) / tau);
}

// Left-endpoint, exactly attenuated quadrature of the same pulse at grid
// point t = 1 + p/m (p <= m): a geometric sum of m-panel contributions.
double quadrature_pulse(int p, int m, double c, double tau) {
    const double h = 1.0 / m;
    const double q = std::exp(-h / tau);
    return c * h * q * (1.0 - std::pow(q, p)) / (1.0 - q);
}

} // namespace

TEST_CASE("one substep per day reproduces the day-grid recursions") {
    Generator gen(31);
    for (int t = 0; t < 20; ++t) {
        const Index n = gen.index(5, 200);
        const auto w = gen.load(n);
        const auto s = gen.single();
        const auto grid = integrate_single_delay({w}, s, n - 1, 1);
        CHECK(grid.values == eval_single_delay_recursive(w, s, n).values);

        const auto th = gen.three();
        const auto grid3 = integrate_three_delay({w}, th, n - 1, 1);
        CHECK(grid3.values == eval_three_delay_recursive(w, th, n).values);
    }
}

TEST_CASE("grid layout") {
    const LoadSeries w{0.0, 2.0, 1.0, 0.0};
    const auto g = integrate_single_delay({w}, {3.0, 5.0}, 3, 4);
    CHECK(g.substeps_per_day == 4);
    CHECK(g.values.size() == 13);
    CHECK(g.values[0] == 0.0);
    CHECK(g.day_values().size() == 4);
    CHECK(g.at_day(3) == g.values[12]);
}

TEST_CASE("step load is piecewise constant") {
    const StepLoad w{LoadSeries{0.0, 2.0, 5.0}};
    CHECK(w(0.5) == 0.0);
    CHECK(w(1.0) == 2.0);
    CHECK(w(1.999) == 2.0);
    CHECK(w(2.25) == 5.0);
    CHECK(w(7.0) == 0.0);
}

TEST_CASE("zero load stays zero on every grid") {
    const LoadSeries zero(Vector::Zero(10));
    for (int m : {1, 3, 16}) {
        CHECK(integrate_single_delay({zero}, {2.0, 3.0}, 9, m).values.isZero(0.0));
        CHECK(integrate_three_delay({zero}, {2.0, 3.0, 4.0, 5.0}, 9, m).values.isZero(0.0));
    }
}

TEST_CASE("refinement converges to the exact pulse response") {
    const double tau = 1.0;
    const LoadSeries w{0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    double previous = INFINITY;
    for (int m : {1, 2, 4, 8, 16, 32, 64, 128}) {
        const auto g = integrate_single_delay({w}, {tau, kInfiniteLag}, 5, m);
        double err = 0.0;
        for (Index d = 0; d <= 5; ++d) err = std::max(err, std::abs(g.at_day(d) - exact_pulse(static_cast<double>(d), 1.0, tau)));
        CHECK(err < previous);
        previous = err;
    }
    // First order: error ~ h/2 * max|g'| with g' bounded by 1 here.
    CHECK(previous < 1.0 / 128.0);
}

TEST_CASE("grid values match the closed-form quadrature sum") {
    const double c = 3.0;
    const double tau = 2.5;
    const LoadSeries w{0.0, c, 0.0};
    for (int m : {1, 2, 5, 8}) {
        const auto g = integrate_single_delay({w}, {tau, kInfiniteLag}, 2, m);
        for (int p = 0; p <= m; ++p) {
            CHECK(g.values[m + p] == doctest::Approx(quadrature_pulse(p, m, c, tau)).epsilon(1e-13));
        }
    }
}

TEST_CASE("infinite lags reduce the three-delay grid to the single-delay grid") {
    Generator gen(41);
    const auto w = gen.load(30);
    const auto a = integrate_three_delay({w}, {3.0}, 29, 6);
    const auto b = integrate_single_delay({w}, {3.0, kInfiniteLag}, 29, 6);
    CHECK(max_rel_diff(a.values, b.values) <= 1e-12);
}

TEST_CASE("linearity in load holds on a refined grid") {
    Generator gen(43);
    const auto w1 = gen.load(40);
    const auto w2 = gen.load(40);
    const LoadSeries mix(Vector(2.0 * w1.values() + 0.5 * w2.values()));
    const SingleDelayParams p{7.0, 12.0};
    const Vector lhs = integrate_single_delay({mix}, p, 39, 4).values;
    const Vector rhs =
        2.0 * integrate_single_delay({w1}, p, 39, 4).values + 0.5 * integrate_single_delay({w2}, p, 39, 4).values;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * rhs.cwiseAbs().maxCoeff());
}

TEST_SUITE("convergence probe") {
    TEST_CASE("impulse differences decrease monotonically") {
        Vector w = Vector::Zero(20);
        w[1] = 1.0;
        const auto probe = convergence_probe({LoadSeries(w)}, {2.0, 5.0}, 19, {1, 2, 4, 8});
        REQUIRE(probe.size() == 3);
        CHECK(probe[0].substeps == 1);
        CHECK(probe[0].sup_diff > probe[1].sup_diff);
        CHECK(probe[1].sup_diff > probe[2].sup_diff);
    }

    TEST_CASE("zero load gives zero differences") {
        const auto probe = convergence_probe({LoadSeries(Vector::Zero(10))}, {2.0, 5.0}, 9, {1, 2, 4});
        for (const auto& e : probe) CHECK(e.sup_diff == 0.0);
    }

    TEST_CASE("two-day pulse matches the hand-computed quadrature error") {
        const double c = 2.0;
        const double tau = 1.5;
        const std::vector<int> grids{1, 2, 4, 8};
        const auto probe = convergence_probe({LoadSeries{0.0, c}}, {tau, kInfiniteLag}, 2, grids);
        for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
            const int m = grids[i];
            const int fine = grids.back();
            double expected = 0.0;
            for (int p = 0; p <= m; ++p) {
                expected = std::max(expected, std::abs(quadrature_pulse(p, m, c, tau) -
                                                       quadrature_pulse(p * (fine / m), fine, c, tau)));
            }
            CHECK(probe[i].sup_diff == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    TEST_CASE("halving ratios are first order") {
        Vector w = Vector::Zero(30);
        for (Index d = 1; d < 30; ++d) w[d] = 50.0 + 30.0 * std::sin(static_cast<double>(d) / 4.0);
        const auto probe = convergence_probe({LoadSeries(w)}, {10.0, 15.0}, 29, {1, 2, 4, 8, 16});
        for (std::size_t i = 0; i + 1 < probe.size(); ++i) {
            const double ratio = probe[i + 1].sup_diff / probe[i].sup_diff;
            CHECK(ratio >= 0.3);
            CHECK(ratio <= 0.8);
        }
    }

    TEST_CASE("grid list validation") {
        const StepLoad w{LoadSeries{0.0, 1.0, 1.0}};
        CHECK_THROWS_AS((void)convergence_probe(w, {1.0, 2.0}, 2, {1, 3, 4}), ParameterError);
        CHECK_THROWS_AS((void)convergence_probe(w, {1.0, 2.0}, 2, {2, 1}), ParameterError);
        CHECK_THROWS_AS((void)convergence_probe(w, {1.0, 2.0}, 2, {4}), ParameterError);
        CHECK_THROWS_AS((void)integrate_single_delay(w, {1.0, 2.0}, 2, 0), ParameterError);
        CHECK_THROWS_AS((void)integrate_single_delay(w, {1.0, 2.0}, 4, 1), InputLengthError);
    }
}
