#pragma once

#include "lsde/catalog.hpp"
#include "lsde/integrator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lsde {

// Minimal coordinate separation between initial states counted as generic.
inline constexpr double kGenericSeparation = 1e-6;

// True when every pair of states differs by at least `separation` in every coordinate.
bool is_generic(const std::vector<Vec>& states, double separation = kGenericSeparation);

// Constants k with rule.phi(k, particulars) == target. Throws PreconditionError
// without a rule or with the wrong number of particulars.
Vec solve_constants(const CatalogEntry& entry, const Vec& target, const std::vector<Vec>& particulars);

enum class VerifyStatus { Pass, Fail, Inconclusive };

const char* status_name(VerifyStatus status);

struct PathwiseOptions {
    std::uint64_t seed = 0;
    std::size_t levels = 3;        // dt = horizon / (base_steps 2^k), k = 0..levels-1
    std::size_t base_steps = 100;
    double horizon = 1.0;
    double slack = 0.2;            // e_{k+1} <= (1 + slack) e_k
    double threshold = 1e-2;       // on the finest-level error
    double error_floor = 1e-12;    // errors below this count as converged
    IntegratorOptions integrator;
};

struct PathwiseLevel {
    double dt = 0.0;
    double error = 0.0;
    double order = 0.0;          // log2(previous error / error); NaN on the first level
    double window = 0.0;         // common valid time window
    std::size_t compared = 0;    // grid points compared
    std::size_t guarded = 0;     // grid points skipped by the rule guards
    bool conclusive = true;      // window covers at least half the horizon
    std::string truncation;      // first truncation reason, empty if none
};

struct PathwiseReport {
    std::string entry;
    std::string rule;
    std::uint64_t seed = 0;
    Vec constants;
    std::vector<PathwiseLevel> levels;
    bool monotone = false;
    double final_error = 0.0;
    double threshold = 0.0;
    VerifyStatus status = VerifyStatus::Fail;
};

// Integrates the target and the particular solutions on one shared path per
// level, fixes the constants at t = 0 and measures
//   sup_t ||phi(k, particulars(t)) - target(t)||_inf / (1 + ||target(t)||_inf)
// over the common valid window. Throws VerificationInconclusive when no level
// keeps a window of at least half the horizon.
PathwiseReport verify_pathwise(const CatalogEntry& entry, const Vec& target, const std::vector<Vec>& particulars,
                               const PathwiseOptions& options = {});

struct IntegralOptions {
    std::uint64_t seed = 0;
    std::size_t steps = 1000;
    double horizon = 1.0;
    double threshold = 5e-3;
    IntegratorOptions integrator;
};

struct IntegralDrift {
    std::string name;
    std::size_t copies = 0;
    double initial = 0.0;
    double drift = 0.0;  // max_t |F(t) - F(0)| / (1 + |F(0)|)
    bool pass = false;
};

struct IntegralReport {
    std::string entry;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double threshold = 0.0;
    double window = 0.0;
    std::string truncation;
    std::vector<IntegralDrift> integrals;
    VerifyStatus status = VerifyStatus::Fail;
};

// Integrates every copy on one shared path and tracks each first integral.
IntegralReport check_first_integrals_along_path(const CatalogEntry& entry, const std::vector<Vec>& copies,
                                                const IntegralOptions& options = {});

// n x n matrix of partial derivatives of the first n integrals with respect
// to the copy-0 coordinates at a point of the product manifold.
Mat integral_jacobian(const CatalogEntry& entry, const Vec& point);

double check_jacobian_condition(const CatalogEntry& entry, const Vec& point);

}  // namespace lsde
