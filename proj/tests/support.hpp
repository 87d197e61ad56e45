#pragma once

#include "lsde/catalog.hpp"
#include "lsde/core.hpp"
#include "lsde/driver.hpp"

#include <cmath>
#include <random>

namespace lsde::testing {

inline Vec vec(std::initializer_list<double> values)
{
    Vec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v[i++] = x;
    }
    return v;
}

// Classical RK4 on the drift row of sys (noise rows ignored), fixed step.
inline Vec rk4_drift(const LieSystem& sys, Vec x, double horizon, std::size_t steps)
{
    const double h = horizon / static_cast<double>(steps);
    auto f = [&](double t, const Vec& y) {
        const std::vector<double> b(sys.ell(), 0.0);
        std::vector<double> driver = b;
        driver[0] = t;
        return Vec(assemble_operator_unchecked(sys, driver, y).row(0).transpose());
    };
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const Vec k1 = f(t, x);
        const Vec k2 = f(t + h / 2, x + h / 2 * k1);
        const Vec k3 = f(t + h / 2, x + h / 2 * k2);
        const Vec k4 = f(t + h, x + h * k3);
        x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return x;
}

// Driver path with every Brownian increment set to zero.
inline DriverPath quiet_path(std::size_t ell, double horizon, std::size_t steps)
{
    return DriverPath::from_increments(0, horizon, steps, 0, Mat::Zero(static_cast<Eigen::Index>(ell - 1),
                                                                       static_cast<Eigen::Index>(steps)));
}

inline Vec uniform(std::mt19937_64& rng, const SampleBox& box)
{
    return sample_point(box, rng);
}

}  // namespace lsde::testing
