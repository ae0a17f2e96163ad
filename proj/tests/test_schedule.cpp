#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qaf/rng.hpp"
#include "qaf/schedule.hpp"

using namespace qaf;

TEST_CASE("schedule evaluation") {
    CHECK(Schedule::fourier({0, 0, 0, 0, 0, 0}).evaluate(0.5) == doctest::Approx(0.5));
    CHECK(Schedule::fourier({0.1, 0, 0, 0, 0, 0}).evaluate(0.5) == doctest::Approx(0.6));
    CHECK(Schedule::quadratic().evaluate(0.5) == doctest::Approx(0.25));
    CHECK(Schedule::linear().evaluate(0.3) == doctest::Approx(0.3));
    CHECK_THROWS_AS(Schedule::linear().evaluate(1.5), std::domain_error);
}

TEST_CASE("boundary values are exact for random coefficients") {
    RngStream rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> b(6);
        for (double& v : b) v = rng.uniform(-1.0, 1.0);
        const Schedule sched = Schedule::fourier(b);
        CHECK(sched.evaluate(0.0) == 0.0);
        CHECK(sched.evaluate(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("linear recovery at zero coefficients") {
    const Schedule sched = Schedule::fourier(std::vector<double>(6, 0.0));
    for (int k = 0; k <= 100; ++k) {
        const double s = k / 100.0;
        CHECK(sched.evaluate(s) == s);
    }
}

TEST_CASE("monotonicity checks") {
    CHECK(Schedule::fourier({0, 0, 0, 0, 0, 0}).is_monotone());
    CHECK_FALSE(Schedule::fourier({-0.5, 0, 0, 0, 0, 0}).is_monotone());
    CHECK(Schedule::fourier({0.05, 0.02, 0, 0, 0, 0}).is_monotone());
    CHECK(Schedule::quadratic().is_monotone());
}

TEST_CASE("grid checker agrees with the analytic derivative") {
    // If 1 + sum_m m pi b_m cos(m pi s) >= 0 on a dense grid, the value
    // checker must accept.
    RngStream rng(13);
    int positive_cases = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> b(6);
        for (double& v : b) v = rng.uniform(-0.03, 0.03);
        double min_derivative = 1e300;
        for (int k = 0; k <= 10000; ++k) {
            const double s = k / 10000.0;
            double d = 1.0;
            for (std::size_t m = 0; m < b.size(); ++m)
                d += static_cast<double>(m + 1) * M_PI * b[m] * std::cos((m + 1) * M_PI * s);
            min_derivative = std::min(min_derivative, d);
        }
        const Schedule sched = Schedule::fourier(b);
        if (min_derivative >= 0.0) {
            ++positive_cases;
            CHECK(sched.is_monotone(1024));
        } else if (min_derivative < -1e-3) {
            CHECK_FALSE(sched.is_monotone(4096));
        }
    }
    CHECK(positive_cases > 10);  // the sample exercises both branches
}

TEST_CASE("coefficient clamping") {
    CHECK(clamp_coefficients({1.2, 0.0})[0] == 1.0);
    const std::vector<double> in{-0.5, 0.7};
    CHECK(clamp_coefficients(in) == in);
    const auto clamped = clamp_coefficients({-3, 3, 0, 0, 0, 0});
    CHECK(clamped == std::vector<double>{-1, 1, 0, 0, 0, 0});
}
