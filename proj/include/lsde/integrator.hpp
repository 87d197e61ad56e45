#pragma once

#include "lsde/core.hpp"
#include "lsde/driver.hpp"
#include "lsde/parallel.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lsde {

// Sign s in  Ito drift = Stratonovich drift + s * 1/2 sum_b (dX_b/dx) X_b.
// Fixed by requiring the Euler-Maruyama integration of geometric Brownian
// motion to converge to the Stratonovich closed-form solution; the opposite
// sign converges to a different process (see integrator tests).
inline constexpr double kItoCorrectionSign = +1.0;

enum class TrajectoryStatus { Complete, Truncated };

struct Trajectory {
    std::vector<double> t;
    Mat states;  // (valid steps + 1) x n, row 0 is the initial condition
    TrajectoryStatus status = TrajectoryStatus::Complete;
    double t_last_valid = 0.0;
    std::string truncation_reason;
    std::uint64_t seed = 0;
    unsigned level = 0;
    std::size_t grid_steps = 0;  // steps of the driver grid, even when truncated

    std::size_t valid_steps() const { return t.empty() ? 0 : t.size() - 1; }
    bool complete() const { return status == TrajectoryStatus::Complete; }
    Vec state(std::size_t step) const { return states.row(static_cast<Eigen::Index>(step)).transpose(); }
    Vec final_state() const { return state(valid_steps()); }
};

struct IntegratorOptions {
    // Integrate positive coordinates as u = ln x; defaults to the system's own policy.
    std::optional<bool> log_coordinates;
    double blowup_threshold = 1e12;
    double ito_correction_sign = kItoCorrectionSign;
};

// Stochastic Heun: predictor x~ = x + S(B_n, x) dB, corrector
// x' = x + 1/2 (S(B_n, x) + S(B_{n+1}, x~)) dB, with dB = (dt, dW^2, ...).
Trajectory integrate_stratonovich(const LieSystem& sys, const StateVector& x0, const DriverPath& path,
                                  const IntegratorOptions& options = {});

// Euler-Maruyama on the corrected drift with the raw noise rows.
Trajectory integrate_ito(const LieSystem& sys, const StateVector& x0, const DriverPath& path,
                         const IntegratorOptions& options = {});

// Ito drift equivalent to the Stratonovich operator at (B, x). Throws
// UnsupportedError when the noise coefficients depend on driver components
// other than time.
Vec stratonovich_to_ito_drift(const LieSystem& sys, std::span<const double> driver, const Vec& x,
                              double sign = kItoCorrectionSign);

// 1/2 sum_b (dX_b/dx) X_b, the unsigned correction term.
Vec ito_correction_term(const LieSystem& sys, std::span<const double> driver, const Vec& x);

enum class Scheme { StratonovichHeun, ItoEulerMaruyama };

const char* scheme_name(Scheme scheme);

// Exact solution on a given path at a grid index.
using PathOracle = std::function<Vec(const DriverPath& path, std::size_t step)>;

struct ConvergenceOptions {
    std::uint64_t seed = 0;      // first seed; seed + i for path i
    std::size_t seeds = 64;
    std::size_t levels = 4;      // reported levels 0..levels-1
    double horizon = 1.0;
    std::size_t base_steps = 16;
    Scheme scheme = Scheme::StratonovichHeun;
    std::optional<PathOracle> oracle;  // otherwise level `levels` is the reference
    Execution execution = Execution::Parallel;
    IntegratorOptions integrator;
};

struct ConvergenceRow {
    double dt = 0.0;
    double error = 0.0;  // mean over seeds of ||x_N - x_ref(T)||_inf
    double order = 0.0;  // log2(previous error / error); NaN on the first row
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double mean_order = 0.0;  // log2(e_0 / e_last) / (levels - 1)
    std::size_t seeds_used = 0;
    std::size_t seeds_truncated = 0;
    bool against_oracle = false;
};

// Strong error at time T per level. Seeds with any truncated level are
// dropped; throws StudyFailed when none remain or levels < 3.
ConvergenceTable convergence_study(const LieSystem& sys, const StateVector& x0, const ConvergenceOptions& options);

struct EnsembleSpec {
    std::uint64_t first_seed = 0;
    std::size_t count = 1;
    double horizon = 1.0;
    std::size_t base_steps = 100;
    unsigned level = 0;
    Scheme scheme = Scheme::StratonovichHeun;
};

// One trajectory per seed; identical results for serial and parallel execution.
std::vector<Trajectory> run_ensemble(const LieSystem& sys, const StateVector& x0, const EnsembleSpec& spec,
                                     Execution execution, const IntegratorOptions& options = {});

Trajectory integrate(Scheme scheme, const LieSystem& sys, const StateVector& x0, const DriverPath& path,
                     const IntegratorOptions& options = {});

}  // namespace lsde
