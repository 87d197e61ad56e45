#pragma once

#include "lsde/core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lsde {

// Relative size below which a rule denominator counts as vanishing.
inline constexpr double kRuleGuard = 1e-12;

/// Superposition rule x = phi(k; x_(1), ..., x_(m)) together with its inverse
/// k = solve(x, x_(1), ..., x_(m)). Both are pure algebraic maps.
struct SuperpositionRule {
    std::string name;
    std::size_t m = 0;          // particular solutions
    std::size_t const_dim = 0;  // equals the manifold dimension
    std::function<Vec(const Vec& constants, const std::vector<Vec>& particulars)> phi;
    std::function<Vec(const Vec& target, const std::vector<Vec>& particulars)> solve;
};

// Cross-ratio rule of the Riccati equation. Throws SingularRuleError when the
// denominator (g1 - g2) + z (g3 - g2) vanishes relative to its terms.
double eval_riccati_rule(double g1, double g2, double g3, double z);

// z with eval_riccati_rule(g1, g2, g3, z) == target.
double solve_riccati_constant(double target, double g1, double g2, double g3);

// H0 = k1 k2 H1, R0 = k1 (H1 + R1) - k1 k2 H1; DomainError outside the positive quadrant.
Vec eval_corona_rule(double h1, double r1, double k1, double k2);

// (k1, k2) = ((H0 + R0)/(H1 + R1), H0 (H1 + R1) / (H1 (H0 + R0))).
Vec solve_corona_constants(const Vec& target, const Vec& particular);

// N2 = xi1 (N2)_1, N1 = xi2^{(N2)_2 / d} (N1)_1 ((N1)_1 / (N1)_2)^{(xi1 - 1)(N2)_1 / d},
// d = (N2)_1 - (N2)_2. Throws SingularRuleError when d vanishes.
Vec eval_lv_rule(const Vec& copy1, const Vec& copy2, double xi1, double xi2);

// xi1 = N2 / (N2)_1 and xi2 = exp(F2) through logarithms.
Vec solve_lv_constants(const Vec& target, const Vec& copy1, const Vec& copy2);

SuperpositionRule riccati_rule();
SuperpositionRule corona_rule();
SuperpositionRule lv_rule();

}  // namespace lsde
