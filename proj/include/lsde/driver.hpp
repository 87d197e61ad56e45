#pragma once

#include "lsde/core.hpp"

#include <cstdint>
#include <vector>

namespace lsde {

/// Discretized driver B = (t, W^2, ..., W^l) on a uniform grid over [0, T].
///
/// A path at refinement level k has base_steps * 2^k steps. Paths are drawn
/// at the finest level a study needs and coarsened by summing increment
/// pairs, so every level sees the same Brownian realization.
class DriverPath {
public:
    static constexpr const char* kRngAlgorithm =
        "std::mt19937_64 per Brownian component, seeded by seed_seq{seed_lo, seed_hi, component}; "
        "increments via std::normal_distribution<double> scaled by sqrt(dt)";

    static DriverPath generate(std::uint64_t seed, std::size_t ell, double horizon, std::size_t base_steps,
                               unsigned level);

    // Builds a path from explicit increments ((l-1) x steps).
    static DriverPath from_increments(std::uint64_t seed, double horizon, std::size_t base_steps, unsigned level,
                                      Mat increments);

    // Level-(k-1) path obtained by summing consecutive increment pairs.
    DriverPath coarsened() const;
    DriverPath at_level(unsigned level) const;

    std::uint64_t seed() const { return seed_; }
    unsigned level() const { return level_; }
    std::size_t base_steps() const { return base_steps_; }
    std::size_t steps() const { return static_cast<std::size_t>(increments_.cols()); }
    std::size_t ell() const { return static_cast<std::size_t>(increments_.rows()) + 1; }
    double horizon() const { return horizon_; }
    double dt() const { return horizon_ / static_cast<double>(steps()); }
    double time(std::size_t step) const;

    const Mat& increments() const { return increments_; }

    // Driver value B at grid index step: (t_step, W^2_step, ...).
    std::vector<double> value(std::size_t step) const;
    // Driver increment at step: (dt, dW^2, ...).
    Vec increment(std::size_t step) const;

private:
    DriverPath(std::uint64_t seed, double horizon, std::size_t base_steps, unsigned level, Mat increments);

    std::uint64_t seed_ = 0;
    double horizon_ = 0.0;
    std::size_t base_steps_ = 0;
    unsigned level_ = 0;
    Mat increments_;
    Mat cumulative_;  // (l-1) x (steps + 1), column 0 is zero.
};

}  // namespace lsde
