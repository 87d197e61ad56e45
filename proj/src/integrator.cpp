#include "lsde/integrator.hpp"

#include "lsde/errors.hpp"

#include <cmath>
#include <limits>

namespace lsde {

namespace {

/// Integration coordinates: u_i = ln x_i on log-transformed coordinates, u_i = x_i otherwise.
/// The Stratonovich chain rule carries over unchanged, so the operator rows
/// transform as S~ = E^{-1} S with E = diag(x_i on log coordinates, 1 elsewhere).
class WorkingCoordinates {
public:
    WorkingCoordinates(const LieSystem& sys, const IntegratorOptions& options) : sys_(sys)
    {
        const bool use_log = options.log_coordinates.value_or(sys.log_coordinates());
        log_.assign(sys.dim(), false);
        if (use_log) {
            for (std::size_t i = 0; i < sys.dim(); ++i) {
                log_[i] = sys.domain().is_positive(i);
            }
        }
    }

    Vec to_work(const Vec& x) const
    {
        Vec u = x;
        for (std::size_t i = 0; i < log_.size(); ++i) {
            if (log_[i]) {
                u[idx(i)] = std::log(x[idx(i)]);
            }
        }
        return u;
    }

    Vec from_work(const Vec& u) const
    {
        Vec x = u;
        for (std::size_t i = 0; i < log_.size(); ++i) {
            if (log_[i]) {
                x[idx(i)] = std::exp(u[idx(i)]);
            }
        }
        return x;
    }

    Mat operator_rows(std::span<const double> driver, const Vec& u) const
    {
        const Vec x = from_work(u);
        Mat rows = assemble_operator_unchecked(sys_, driver, x);
        for (std::size_t i = 0; i < log_.size(); ++i) {
            if (log_[i]) {
                rows.col(idx(i)) /= x[idx(i)];
            }
        }
        return rows;
    }

    // 1/2 sum over noise rows of J~_b S~_b in working coordinates.
    Vec correction(std::span<const double> driver, const Vec& u) const
    {
        const Vec x = from_work(u);
        const Mat b = sys_.coefficients(driver);
        const auto n = static_cast<Eigen::Index>(sys_.dim());
        Vec scale = Vec::Ones(n);
        for (std::size_t i = 0; i < log_.size(); ++i) {
            if (log_[i]) {
                scale[idx(i)] = x[idx(i)];
            }
        }
        std::vector<Vec> values(sys_.rank());
        std::vector<Mat> jacobians(sys_.rank());
        Vec total = Vec::Zero(n);
        for (Eigen::Index beta = 1; beta < b.rows(); ++beta) {
            Vec f = Vec::Zero(n);
            Mat j = Mat::Zero(n, n);
            for (std::size_t a = 0; a < sys_.rank(); ++a) {
                const double c = b(beta, static_cast<Eigen::Index>(a));
                if (c == 0.0) {
                    continue;
                }
                if (values[a].size() == 0) {
                    values[a] = sys_.field(a)(x);
                    jacobians[a] = sys_.field(a).jacobian(x);
                }
                f += c * values[a];
                j += c * jacobians[a];
            }
            const Vec fw = f.cwiseQuotient(scale);
            Mat jw = scale.cwiseInverse().asDiagonal() * j * scale.asDiagonal();
            for (std::size_t i = 0; i < log_.size(); ++i) {
                if (log_[i]) {
                    jw(idx(i), idx(i)) -= fw[idx(i)];
                }
            }
            total += jw * fw;
        }
        return 0.5 * total;
    }

private:
    static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

    const LieSystem& sys_;
    std::vector<bool> log_;
};

class Recorder {
public:
    Recorder(const LieSystem& sys, const StateVector& x0, const DriverPath& path, const IntegratorOptions& options)
        : sys_(sys), blowup_(options.blowup_threshold)
    {
        if (x0.dim() != sys.dim() || !sys.domain().contains(x0.coords())) {
            throw DomainError(sys.name() + ": initial state outside " + sys.domain().describe());
        }
        if (path.ell() != sys.ell()) {
            throw ShapeError(sys.name() + ": driver has " + std::to_string(path.ell()) + " components, system needs " +
                             std::to_string(sys.ell()));
        }
        traj_.seed = path.seed();
        traj_.level = path.level();
        traj_.grid_steps = path.steps();
        traj_.t.reserve(path.steps() + 1);
        rows_.reserve(path.steps() + 1);
        traj_.t.push_back(0.0);
        rows_.push_back(x0.coords());
    }

    // Appends x at time t; returns false (and marks truncation) when x is unusable.
    bool push(double t, const Vec& x)
    {
        const char* reason = nullptr;
        if (!x.allFinite()) {
            reason = "non-finite state";
        } else if (x.lpNorm<Eigen::Infinity>() > blowup_) {
            reason = "state exceeded the blowup threshold";
        } else if (!sys_.domain().contains(x)) {
            reason = "state left the domain";
        }
        if (reason) {
            traj_.status = TrajectoryStatus::Truncated;
            traj_.truncation_reason = reason;
            return false;
        }
        traj_.t.push_back(t);
        rows_.push_back(x);
        return true;
    }

    Trajectory finish()
    {
        traj_.t_last_valid = traj_.t.back();
        traj_.states.resize(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(sys_.dim()));
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            traj_.states.row(static_cast<Eigen::Index>(k)) = rows_[k].transpose();
        }
        return std::move(traj_);
    }

private:
    const LieSystem& sys_;
    double blowup_;
    Trajectory traj_;
    std::vector<Vec> rows_;
};

}  // namespace

Trajectory integrate_stratonovich(const LieSystem& sys, const StateVector& x0, const DriverPath& path,
                                  const IntegratorOptions& options)
{
    Recorder rec(sys, x0, path, options);
    const WorkingCoordinates wc(sys, options);
    Vec u = wc.to_work(x0.coords());
    std::vector<double> b_now = path.value(0);
    for (std::size_t k = 0; k < path.steps(); ++k) {
        const std::vector<double> b_next = path.value(k + 1);
        const Vec db = path.increment(k);
        const Mat s0 = wc.operator_rows(b_now, u);
        const Vec predictor = u + s0.transpose() * db;
        if (!predictor.allFinite()) {
            rec.push(path.time(k + 1), wc.from_work(predictor));
            break;
        }
        const Mat s1 = wc.operator_rows(b_next, predictor);
        u += 0.5 * (s0 + s1).transpose() * db;
        if (!rec.push(path.time(k + 1), wc.from_work(u))) {
            break;
        }
        b_now = b_next;
    }
    return rec.finish();
}

Vec ito_correction_term(const LieSystem& sys, std::span<const double> driver, const Vec& x)
{
    IntegratorOptions raw;
    raw.log_coordinates = false;
    return WorkingCoordinates(sys, raw).correction(driver, x);
}

Vec stratonovich_to_ito_drift(const LieSystem& sys, std::span<const double> driver, const Vec& x, double sign)
{
    if (sys.noise_uses_driver()) {
        throw UnsupportedError(sys.name() +
                               ": Ito conversion requires noise coefficients that depend on time and state only");
    }
    const Mat rows = assemble_operator(sys, driver, x);
    return rows.row(0).transpose() + sign * ito_correction_term(sys, driver, x);
}

Trajectory integrate_ito(const LieSystem& sys, const StateVector& x0, const DriverPath& path,
                         const IntegratorOptions& options)
{
    if (sys.noise_uses_driver()) {
        throw UnsupportedError(sys.name() +
                               ": Ito conversion requires noise coefficients that depend on time and state only");
    }
    Recorder rec(sys, x0, path, options);
    const WorkingCoordinates wc(sys, options);
    Vec u = wc.to_work(x0.coords());
    for (std::size_t k = 0; k < path.steps(); ++k) {
        const std::vector<double> b = path.value(k);
        const Vec db = path.increment(k);
        const Mat s = wc.operator_rows(b, u);
        const Vec drift = s.row(0).transpose() + options.ito_correction_sign * wc.correction(b, u);
        u += drift * db[0];
        for (Eigen::Index beta = 1; beta < s.rows(); ++beta) {
            u += s.row(beta).transpose() * db[beta];
        }
        if (!rec.push(path.time(k + 1), wc.from_work(u))) {
            break;
        }
    }
    return rec.finish();
}

Trajectory integrate(Scheme scheme, const LieSystem& sys, const StateVector& x0, const DriverPath& path,
                     const IntegratorOptions& options)
{
    return scheme == Scheme::StratonovichHeun ? integrate_stratonovich(sys, x0, path, options)
                                              : integrate_ito(sys, x0, path, options);
}

const char* scheme_name(Scheme scheme)
{
    return scheme == Scheme::StratonovichHeun ? "stratonovich-heun" : "ito-euler-maruyama";
}

ConvergenceTable convergence_study(const LieSystem& sys, const StateVector& x0, const ConvergenceOptions& options)
{
    if (options.levels < 3) {
        throw StudyFailed("convergence study needs at least 3 levels");
    }
    if (options.seeds < 1) {
        throw StudyFailed("convergence study needs at least one seed");
    }
    const std::size_t levels = options.levels;
    const bool oracle = options.oracle.has_value();
    const auto finest = static_cast<unsigned>(oracle ? levels - 1 : levels);

    // errors[s][k]; NaN marks a seed with a truncated level.
    std::vector<std::vector<double>> errors(options.seeds, std::vector<double>(levels, 0.0));
    for_each_index(options.seeds, options.execution, [&](std::size_t s) {
        const DriverPath fine =
            DriverPath::generate(options.seed + s, sys.ell(), options.horizon, options.base_steps, finest);
        Vec reference;
        if (oracle) {
            reference = (*options.oracle)(fine, fine.steps());
        } else {
            const Trajectory ref = integrate(options.scheme, sys, x0, fine, options.integrator);
            if (!ref.complete()) {
                errors[s].assign(levels, std::numeric_limits<double>::quiet_NaN());
                return;
            }
            reference = ref.final_state();
        }
        for (std::size_t k = 0; k < levels; ++k) {
            const DriverPath p = fine.at_level(static_cast<unsigned>(k));
            const Trajectory tr = integrate(options.scheme, sys, x0, p, options.integrator);
            if (!tr.complete()) {
                errors[s].assign(levels, std::numeric_limits<double>::quiet_NaN());
                return;
            }
            errors[s][k] = (tr.final_state() - reference).lpNorm<Eigen::Infinity>();
        }
    });

    ConvergenceTable table;
    table.against_oracle = oracle;
    std::vector<double> mean(levels, 0.0);
    for (const auto& e : errors) {
        if (std::isnan(e.front())) {
            ++table.seeds_truncated;
            continue;
        }
        ++table.seeds_used;
        for (std::size_t k = 0; k < levels; ++k) {
            mean[k] += e[k];
        }
    }
    if (table.seeds_used == 0) {
        throw StudyFailed(sys.name() + ": every path was truncated (" + std::to_string(table.seeds_truncated) +
                          " seeds)");
    }
    for (std::size_t k = 0; k < levels; ++k) {
        ConvergenceRow row;
        row.dt = options.horizon / static_cast<double>(options.base_steps << k);
        row.error = mean[k] / static_cast<double>(table.seeds_used);
        row.order = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : std::log2(table.rows.back().error / row.error);
        table.rows.push_back(row);
    }
    table.mean_order =
        std::log2(table.rows.front().error / table.rows.back().error) / static_cast<double>(levels - 1);
    return table;
}

std::vector<Trajectory> run_ensemble(const LieSystem& sys, const StateVector& x0, const EnsembleSpec& spec,
                                     Execution execution, const IntegratorOptions& options)
{
    std::vector<Trajectory> out(spec.count);
    for_each_index(spec.count, execution, [&](std::size_t i) {
        const DriverPath path =
            DriverPath::generate(spec.first_seed + i, sys.ell(), spec.horizon, spec.base_steps, spec.level);
        out[i] = integrate(spec.scheme, sys, x0, path, options);
    });
    return out;
}

}  // namespace lsde
