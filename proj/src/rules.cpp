#include "lsde/rules.hpp"

#include "lsde/errors.hpp"

#include <cmath>
#include <sstream>

namespace lsde {

namespace {

bool positive_pair(const Vec& p)
{
    return p.size() == 2 && p[0] > 0.0 && p[1] > 0.0 && p.allFinite();
}

std::string fmt(std::initializer_list<double> values)
{
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (double v : values) {
        os << (first ? "" : ", ") << v;
        first = false;
    }
    return os.str();
}

}  // namespace

double eval_riccati_rule(double g1, double g2, double g3, double z)
{
    const double d12 = g1 - g2;
    const double d32 = g3 - g2;
    const double den = d12 + z * d32;
    const double scale = std::abs(d12) + std::abs(z * d32);
    if (!(std::abs(den) > kRuleGuard * scale)) {
        throw SingularRuleError("Riccati rule denominator vanishes at (g1, g2, g3, z) = (" + fmt({g1, g2, g3, z}) +
                                ")");
    }
    return (g3 * d12 + z * g1 * d32) / den;
}

double solve_riccati_constant(double target, double g1, double g2, double g3)
{
    // target * (d12 + z d32) = g3 d12 + z g1 d32  =>  z = d12 (g3 - target) / (d32 (target - g1))
    const double d12 = g1 - g2;
    const double d32 = g3 - g2;
    const double den = d32 * (target - g1);
    const double scale = std::abs(d32) * (std::abs(target) + std::abs(g1));
    if (!(std::abs(den) > kRuleGuard * scale) || !(std::abs(d12) > kRuleGuard * (std::abs(g1) + std::abs(g2)))) {
        throw SingularRuleError("Riccati constant is not finite for target " + fmt({target}) +
                                " and particulars (" + fmt({g1, g2, g3}) + ")");
    }
    return d12 * (g3 - target) / den;
}

Vec eval_corona_rule(double h1, double r1, double k1, double k2)
{
    if (!(h1 > 0.0 && r1 > 0.0)) {
        throw DomainError("corona rule needs a particular solution in the positive quadrant");
    }
    Vec out(2);
    out[0] = k1 * k2 * h1;
    out[1] = k1 * (h1 + r1) - k1 * k2 * h1;
    if (!(out[0] > 0.0 && out[1] > 0.0)) {
        throw DomainError("corona rule constants (" + fmt({k1, k2}) + ") map outside the positive quadrant: (" +
                          fmt({out[0], out[1]}) + ")");
    }
    return out;
}

Vec solve_corona_constants(const Vec& target, const Vec& particular)
{
    if (!positive_pair(target) || !positive_pair(particular)) {
        throw DomainError("corona constants need states in the positive quadrant");
    }
    const double s0 = target[0] + target[1];
    const double s1 = particular[0] + particular[1];
    Vec k(2);
    k[0] = s0 / s1;
    k[1] = target[0] * s1 / (particular[0] * s0);
    return k;
}

Vec eval_lv_rule(const Vec& copy1, const Vec& copy2, double xi1, double xi2)
{
    if (!positive_pair(copy1) || !positive_pair(copy2) || !(xi1 > 0.0) || !(xi2 > 0.0)) {
        throw DomainError("LV rule needs positive copies and constants");
    }
    const double d = copy1[1] - copy2[1];
    if (!(std::abs(d) > kRuleGuard * (copy1[1] + copy2[1]))) {
        throw SingularRuleError("LV rule needs distinct N2 values in the two copies, got " + fmt({copy1[1]}));
    }
    Vec out(2);
    out[1] = xi1 * copy1[1];
    out[0] = std::pow(xi2, copy2[1] / d) * copy1[0] * std::pow(copy1[0] / copy2[0], (xi1 - 1.0) * copy1[1] / d);
    return out;
}

Vec solve_lv_constants(const Vec& target, const Vec& copy1, const Vec& copy2)
{
    if (!positive_pair(target) || !positive_pair(copy1) || !positive_pair(copy2)) {
        throw DomainError("LV constants need states in the positive quadrant");
    }
    const double d = copy1[1] - copy2[1];
    if (!(std::abs(d) > kRuleGuard * (copy1[1] + copy2[1]))) {
        throw SingularRuleError("LV constants need distinct N2 values in the two copies");
    }
    // ln xi2 = F2 = [d ln(N1/(N1)_1) - (N2 - (N2)_1) ln((N1)_1/(N1)_2)] / (N2)_2
    const double log_xi2 = (d * std::log(target[0] / copy1[0]) - (target[1] - copy1[1]) * std::log(copy1[0] / copy2[0])) /
                           copy2[1];
    Vec xi(2);
    xi[0] = target[1] / copy1[1];
    xi[1] = std::exp(log_xi2);
    return xi;
}

SuperpositionRule riccati_rule()
{
    SuperpositionRule r;
    r.name = "riccati-cross-ratio";
    r.m = 3;
    r.const_dim = 1;
    r.phi = [](const Vec& k, const std::vector<Vec>& p) {
        Vec out(1);
        out[0] = eval_riccati_rule(p[0][0], p[1][0], p[2][0], k[0]);
        return out;
    };
    r.solve = [](const Vec& target, const std::vector<Vec>& p) {
        Vec k(1);
        k[0] = solve_riccati_constant(target[0], p[0][0], p[1][0], p[2][0]);
        return k;
    };
    return r;
}

SuperpositionRule corona_rule()
{
    SuperpositionRule r;
    r.name = "corona";
    r.m = 1;
    r.const_dim = 2;
    r.phi = [](const Vec& k, const std::vector<Vec>& p) { return eval_corona_rule(p[0][0], p[0][1], k[0], k[1]); };
    r.solve = [](const Vec& target, const std::vector<Vec>& p) { return solve_corona_constants(target, p[0]); };
    return r;
}

SuperpositionRule lv_rule()
{
    SuperpositionRule r;
    r.name = "lv-diffusion";
    r.m = 2;
    r.const_dim = 2;
    r.phi = [](const Vec& k, const std::vector<Vec>& p) { return eval_lv_rule(p[0], p[1], k[0], k[1]); };
    r.solve = [](const Vec& target, const std::vector<Vec>& p) { return solve_lv_constants(target, p[0], p[1]); };
    return r;
}

}  // namespace lsde
