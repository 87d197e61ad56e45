#include "lsde/driver.hpp"

#include "lsde/errors.hpp"

#include <cmath>
#include <random>

namespace lsde {

DriverPath::DriverPath(std::uint64_t seed, double horizon, std::size_t base_steps, unsigned level, Mat increments)
    : seed_(seed), horizon_(horizon), base_steps_(base_steps), level_(level), increments_(std::move(increments))
{
    if (!(horizon_ > 0.0) || base_steps_ == 0) {
        throw PreconditionError("driver path needs a positive horizon and at least one step");
    }
    if (static_cast<std::size_t>(increments_.cols()) != (base_steps_ << level_)) {
        throw ShapeError("driver increments do not match base_steps * 2^level");
    }
    cumulative_ = Mat::Zero(increments_.rows(), increments_.cols() + 1);
    for (Eigen::Index k = 0; k < increments_.cols(); ++k) {
        cumulative_.col(k + 1) = cumulative_.col(k) + increments_.col(k);
    }
}

DriverPath DriverPath::generate(std::uint64_t seed, std::size_t ell, double horizon, std::size_t base_steps,
                                unsigned level)
{
    if (ell < 1) {
        throw PreconditionError("driver needs at least the time component");
    }
    const std::size_t steps = base_steps << level;
    const double sd = std::sqrt(horizon / static_cast<double>(steps));
    Mat inc(static_cast<Eigen::Index>(ell - 1), static_cast<Eigen::Index>(steps));
    for (std::size_t c = 0; c + 1 < ell; ++c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < steps; ++k) {
            inc(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = sd * normal(rng);
        }
    }
    return DriverPath(seed, horizon, base_steps, level, std::move(inc));
}

DriverPath DriverPath::from_increments(std::uint64_t seed, double horizon, std::size_t base_steps, unsigned level,
                                       Mat increments)
{
    return DriverPath(seed, horizon, base_steps, level, std::move(increments));
}

DriverPath DriverPath::coarsened() const
{
    if (level_ == 0) {
        throw PreconditionError("level-0 driver path cannot be coarsened");
    }
    const Eigen::Index half = increments_.cols() / 2;
    Mat inc(increments_.rows(), half);
    for (Eigen::Index k = 0; k < half; ++k) {
        inc.col(k) = increments_.col(2 * k) + increments_.col(2 * k + 1);
    }
    return DriverPath(seed_, horizon_, base_steps_, level_ - 1, std::move(inc));
}

DriverPath DriverPath::at_level(unsigned level) const
{
    if (level > level_) {
        throw PreconditionError("cannot refine a driver path; generate it at the finest level instead");
    }
    DriverPath p = *this;
    while (p.level_ > level) {
        p = p.coarsened();
    }
    return p;
}

double DriverPath::time(std::size_t step) const
{
    return static_cast<double>(step) * horizon_ / static_cast<double>(steps());
}

std::vector<double> DriverPath::value(std::size_t step) const
{
    std::vector<double> b(ell());
    b[0] = time(step);
    for (Eigen::Index c = 0; c < cumulative_.rows(); ++c) {
        b[static_cast<std::size_t>(c) + 1] = cumulative_(c, static_cast<Eigen::Index>(step));
    }
    return b;
}

Vec DriverPath::increment(std::size_t step) const
{
    Vec d(static_cast<Eigen::Index>(ell()));
    d[0] = time(step + 1) - time(step);
    d.tail(increments_.rows()) = increments_.col(static_cast<Eigen::Index>(step));
    return d;
}

}  // namespace lsde
