#include "lsde/superposition.hpp"

#include "lsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsde {

namespace {

const SuperpositionRule& require_rule(const CatalogEntry& entry)
{
    if (!entry.rule) {
        throw PreconditionError(entry.name + " has no superposition rule");
    }
    return *entry.rule;
}

std::vector<Trajectory> integrate_all(const CatalogEntry& entry, const std::vector<Vec>& states,
                                      const DriverPath& path, const IntegratorOptions& options)
{
    std::vector<Trajectory> out;
    out.reserve(states.size());
    for (const Vec& s : states) {
        out.push_back(integrate_stratonovich(entry.sys, StateVector::make(s, entry.sys.domain()), path, options));
    }
    return out;
}

// Grid points valid in every trajectory, and the first truncation reason.
std::size_t common_steps(const std::vector<Trajectory>& trs, std::string& reason)
{
    std::size_t steps = std::numeric_limits<std::size_t>::max();
    for (const auto& tr : trs) {
        steps = std::min(steps, tr.valid_steps());
        if (!tr.complete() && reason.empty()) {
            reason = tr.truncation_reason;
        }
    }
    return steps;
}

}  // namespace

bool is_generic(const std::vector<Vec>& states, double separation)
{
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if ((states[i] - states[j]).cwiseAbs().minCoeff() < separation) {
                return false;
            }
        }
    }
    return true;
}

const char* status_name(VerifyStatus status)
{
    switch (status) {
    case VerifyStatus::Pass:
        return "PASS";
    case VerifyStatus::Fail:
        return "FAIL";
    case VerifyStatus::Inconclusive:
        return "INCONCLUSIVE";
    }
    return "FAIL";
}

Vec solve_constants(const CatalogEntry& entry, const Vec& target, const std::vector<Vec>& particulars)
{
    const SuperpositionRule& rule = require_rule(entry);
    if (particulars.size() != rule.m) {
        throw PreconditionError(entry.name + " rule needs " + std::to_string(rule.m) + " particular solutions, got " +
                                std::to_string(particulars.size()));
    }
    return rule.solve(target, particulars);
}

PathwiseReport verify_pathwise(const CatalogEntry& entry, const Vec& target, const std::vector<Vec>& particulars,
                               const PathwiseOptions& options)
{
    const SuperpositionRule& rule = require_rule(entry);
    if (options.levels < 3) {
        throw PreconditionError("pathwise verification needs at least 3 levels");
    }
    std::vector<Vec> initial{target};
    initial.insert(initial.end(), particulars.begin(), particulars.end());
    if (!is_generic(initial)) {
        throw PreconditionError(entry.name + ": initial states are not in generic position");
    }

    PathwiseReport report;
    report.entry = entry.name;
    report.rule = rule.name;
    report.seed = options.seed;
    report.threshold = options.threshold;
    report.constants = solve_constants(entry, target, particulars);

    const auto finest = static_cast<unsigned>(options.levels - 1);
    const DriverPath fine =
        DriverPath::generate(options.seed, entry.sys.ell(), options.horizon, options.base_steps, finest);

    for (unsigned k = 0; k <= finest; ++k) {
        const DriverPath path = fine.at_level(k);
        const std::vector<Trajectory> trs = integrate_all(entry, initial, path, options.integrator);
        PathwiseLevel level;
        level.dt = path.dt();
        const std::size_t steps = common_steps(trs, level.truncation);
        level.window = path.time(steps);
        level.conclusive = level.window >= 0.5 * options.horizon;

        std::vector<Vec> current(rule.m);
        for (std::size_t i = 0; i <= steps; ++i) {
            for (std::size_t j = 0; j < rule.m; ++j) {
                current[j] = trs[j + 1].state(i);
            }
            Vec rebuilt;
            try {
                rebuilt = rule.phi(report.constants, current);
            } catch (const SingularRuleError&) {
                ++level.guarded;
                continue;
            } catch (const DomainError&) {
                ++level.guarded;
                continue;
            }
            const Vec x = trs[0].state(i);
            const double err = (rebuilt - x).lpNorm<Eigen::Infinity>() / (1.0 + x.lpNorm<Eigen::Infinity>());
            level.error = std::max(level.error, err);
            ++level.compared;
        }
        level.order = report.levels.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : std::log2(report.levels.back().error / level.error);
        report.levels.push_back(level);
    }

    const bool any_conclusive = std::any_of(report.levels.begin(), report.levels.end(),
                                            [](const PathwiseLevel& l) { return l.conclusive; });
    if (!any_conclusive) {
        throw VerificationInconclusive(entry.name + ": every level was truncated before half the horizon (seed " +
                                       std::to_string(options.seed) + ")");
    }

    report.monotone = true;
    for (std::size_t k = 1; k < report.levels.size(); ++k) {
        const double prev = report.levels[k - 1].error;
        const double cur = report.levels[k].error;
        if (cur > (1.0 + options.slack) * prev && cur > options.error_floor) {
            report.monotone = false;
        }
    }
    report.final_error = report.levels.back().error;
    const bool all_conclusive = std::all_of(report.levels.begin(), report.levels.end(),
                                            [](const PathwiseLevel& l) { return l.conclusive && l.compared > 0; });
    if (!all_conclusive) {
        report.status = VerifyStatus::Inconclusive;
    } else if (report.monotone && report.final_error < options.threshold) {
        report.status = VerifyStatus::Pass;
    } else {
        report.status = VerifyStatus::Fail;
    }
    return report;
}

IntegralReport check_first_integrals_along_path(const CatalogEntry& entry, const std::vector<Vec>& copies,
                                                const IntegralOptions& options)
{
    if (entry.integrals.empty()) {
        throw PreconditionError(entry.name + " has no first integrals");
    }
    const std::size_t n = entry.sys.dim();
    for (const auto& f : entry.integrals) {
        if (f.copies > copies.size()) {
            throw PreconditionError(entry.name + ": integral " + f.name + " needs " + std::to_string(f.copies) +
                                    " copies, got " + std::to_string(copies.size()));
        }
    }

    IntegralReport report;
    report.entry = entry.name;
    report.seed = options.seed;
    report.threshold = options.threshold;
    const DriverPath path = DriverPath::generate(options.seed, entry.sys.ell(), options.horizon, options.steps, 0);
    report.dt = path.dt();
    const std::vector<Trajectory> trs = integrate_all(entry, copies, path, options.integrator);
    const std::size_t steps = common_steps(trs, report.truncation);
    report.window = path.time(steps);

    auto stacked = [&](std::size_t step, std::size_t count) {
        Vec x(static_cast<Eigen::Index>(count * n));
        for (std::size_t c = 0; c < count; ++c) {
            x.segment(static_cast<Eigen::Index>(c * n), static_cast<Eigen::Index>(n)) = trs[c].state(step);
        }
        return x;
    };

    bool pass = true;
    for (const auto& f : entry.integrals) {
        IntegralDrift d;
        d.name = f.name;
        d.copies = f.copies;
        d.initial = f.fn(stacked(0, f.copies));
        for (std::size_t i = 1; i <= steps; ++i) {
            const double v = f.fn(stacked(i, f.copies));
            const double rel = std::abs(v - d.initial) / (1.0 + std::abs(d.initial));
            d.drift = std::isfinite(rel) ? std::max(d.drift, rel) : std::numeric_limits<double>::infinity();
        }
        d.pass = d.drift < options.threshold;
        pass = pass && d.pass;
        report.integrals.push_back(d);
    }
    if (report.window < 0.5 * options.horizon) {
        report.status = VerifyStatus::Inconclusive;
    } else {
        report.status = pass ? VerifyStatus::Pass : VerifyStatus::Fail;
    }
    return report;
}

Mat integral_jacobian(const CatalogEntry& entry, const Vec& point)
{
    const auto n = static_cast<Eigen::Index>(entry.sys.dim());
    if (entry.integrals.size() < static_cast<std::size_t>(n)) {
        throw PreconditionError(entry.name + " supplies fewer first integrals than the manifold dimension");
    }
    Mat jac(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const FirstIntegral& f = entry.integrals[static_cast<std::size_t>(a)];
        const auto size = static_cast<Eigen::Index>(f.copies) * n;
        if (point.size() < size) {
            throw ShapeError(entry.name + ": point has " + std::to_string(point.size()) + " coordinates, integral " +
                             f.name + " needs " + std::to_string(size));
        }
        jac.row(a) = f.fn.gradient(point.head(size)).head(n).transpose();
    }
    return jac;
}

double check_jacobian_condition(const CatalogEntry& entry, const Vec& point)
{
    return integral_jacobian(entry, point).determinant();
}

}  // namespace lsde
