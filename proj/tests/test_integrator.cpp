#include "support.hpp"

#include "lsde/errors.hpp"
#include "lsde/integrator.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace lsde;
using lsde::testing::quiet_path;
using lsde::testing::vec;

namespace {

LieSystem single_field(std::string name, std::function<Vec(const Vec&)> f, std::function<Mat(const Vec&)> j,
                       double drift, double noise)
{
    return LieSystem({std::move(name),
                      Domain::full_space(1),
                      {VectorField{"X", 1, std::move(f), std::move(j)}},
                      StructureConstants(1),
                      2,
                      [=](std::span<const double>) {
                          Mat m(2, 1);
                          m << drift, noise;
                          return m;
                      },
                      false,
                      {vec({-1}), vec({1})},
                      false});
}

LieSystem linear_growth(double drift, double noise)
{
    return single_field(
        "linear", [](const Vec& x) { return x; }, [](const Vec&) { return Mat::Ones(1, 1).eval(); }, drift, noise);
}

// Riccati dx = (b0 + b1 x + b2 x^2) dt solved through the linear system for (p, q), x = p / q.
double riccati_closed_form(double b0, double b1, double b2, double x0, double t)
{
    Mat m(2, 2);
    m << b1, b0, -b2, 0;
    const Mat e = (m * t).exp();
    const Vec pq = e * vec({x0, 1});
    return pq[0] / pq[1];
}

}  // namespace

TEST_CASE("zero coefficients keep the state constant")
{
    const CatalogEntry e = make_entry("corona");
    const LieSystem still = e.sys.with_scaled_coefficients(0.0);
    const DriverPath p = DriverPath::generate(1, 2, 1.0, 50, 0);
    const Trajectory tr = integrate_stratonovich(still, StateVector::make(vec({1, 2}), still.domain()), p);
    CHECK(tr.complete());
    CHECK(tr.final_state() == vec({1, 2}));
}

TEST_CASE("pure drift reaches e with second-order accuracy")
{
    const LieSystem sys = linear_growth(1.0, 0.0);
    const Trajectory tr = integrate_stratonovich(sys, StateVector::make(vec({1}), sys.domain()),
                                                 DriverPath::generate(0, 2, 1.0, 1000, 0));
    CHECK(std::abs(tr.final_state()[0] - std::exp(1.0)) < 1e-5);
}

TEST_CASE("Heun converges to the Stratonovich GBM solution on each path")
{
    const LieSystem sys = linear_growth(0.1, 0.2);
    const DriverPath fine = DriverPath::generate(3, 2, 1.0, 16, 6);
    double previous = INFINITY;
    for (unsigned k = 0; k <= 6; k += 2) {
        const DriverPath p = fine.at_level(k);
        const Trajectory tr = integrate_stratonovich(sys, StateVector::make(vec({1}), sys.domain()), p);
        double err = 0.0;
        for (std::size_t i = 0; i <= p.steps(); ++i) {
            err = std::max(err, std::abs(tr.state(i)[0] - std::exp(0.1 * p.time(i) + 0.2 * p.value(i)[1])));
        }
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-4);
}

TEST_CASE("Ito correction terms")
{
    // constant noise: no correction
    const LieSystem additive = single_field(
        "additive", [](const Vec&) { return vec({1}); }, [](const Vec&) { return Mat::Zero(1, 1).eval(); }, 0.3,
        0.5);
    const std::vector<double> b{0.0, 0.0};
    CHECK(ito_correction_term(additive, b, vec({2}))[0] == 0.0);
    CHECK(stratonovich_to_ito_drift(additive, b, vec({2}))[0] == doctest::Approx(0.3));

    // GBM: (mu + sigma^2 / 2) x with the calibrated sign
    const LieSystem g = gbm(0.1, 0.2);
    CHECK(stratonovich_to_ito_drift(g, b, vec({2}))[0] == doctest::Approx((0.1 + 0.02) * 2));

    // Riccati noise x^2 + x + 1 at x = 1: 1/2 (2x + 1)(x^2 + x + 1) = 4.5
    RiccatiParams p;
    p.bp0 = p.bp1 = p.bp2 = CoefficientFn::constant(1.0);
    const CatalogEntry r = riccati(p);
    CHECK(ito_correction_term(r.sys, b, vec({1}))[0] == doctest::Approx(4.5));

    // the corona Ito reading converts back to the plain Ito drift A M2
    CoronaParams cp;
    cp.ito_reading = true;
    const CatalogEntry c = corona(cp);
    const Vec x = vec({1.3, 0.4});
    CHECK((stratonovich_to_ito_drift(c.sys, b, x) - vec({-0.3 * 1.3, -0.3 * 0.4})).norm() < 1e-14);
}

TEST_CASE("Ito conversion needs noise coefficients free of the Brownian driver")
{
    RiccatiParams p;
    p.bp1 = CoefficientFn::brownian(0.1, 1.0);
    const CatalogEntry e = riccati(p);
    const std::vector<double> b{0.0, 0.0};
    CHECK_THROWS_AS(stratonovich_to_ito_drift(e.sys, b, vec({0.5})), UnsupportedError);
    CHECK_THROWS_AS(integrate_ito(e.sys, StateVector::make(vec({0.5}), e.sys.domain()),
                                  DriverPath::generate(0, 2, 1.0, 10, 0)),
                    UnsupportedError);
    // the Stratonovich side is fine
    CHECK(integrate_stratonovich(e.sys, StateVector::make(vec({0.5}), e.sys.domain()),
                                 DriverPath::generate(0, 2, 1.0, 10, 0))
              .complete());
}

TEST_CASE("Euler-Maruyama with the corrected drift tracks Heun")
{
    const LieSystem g = gbm(0.1, 0.2);
    const StateVector x0 = StateVector::make(vec({1}), g.domain());
    std::vector<double> gaps;
    for (unsigned k = 0; k < 5; ++k) {
        double sum = 0.0;
        for (std::uint64_t s = 0; s < 64; ++s) {
            const DriverPath p = DriverPath::generate(s, 2, 1.0, 16, 4).at_level(k);
            sum += std::abs(integrate_stratonovich(g, x0, p).final_state()[0] -
                            integrate_ito(g, x0, p).final_state()[0]);
        }
        gaps.push_back(sum / 64);
    }
    // strong order 1/2: the gap shrinks by about 1/sqrt(2) per halving
    for (std::size_t k = 1; k < gaps.size(); ++k) {
        const double ratio = gaps[k] / gaps[k - 1];
        CHECK(ratio > std::sqrt(0.5) * 0.7);
        CHECK(ratio < std::sqrt(0.5) * 1.3);
    }
}

TEST_CASE("GBM convergence studies")
{
    const LieSystem g = gbm(0.1, 0.2);
    const StateVector x0 = StateVector::make(vec({1}), g.domain());
    ConvergenceOptions o;
    o.levels = 5;
    o.oracle = [](const DriverPath& p, std::size_t k) {
        return vec({std::exp(0.1 * p.time(k) + 0.2 * p.value(k)[1])});
    };
    const ConvergenceTable heun = convergence_study(g, x0, o);
    CHECK(heun.mean_order >= 0.7);
    CHECK(heun.mean_order <= 1.3);
    CHECK(heun.seeds_used == 64);
    o.scheme = Scheme::ItoEulerMaruyama;
    CHECK(convergence_study(g, x0, o).mean_order >= 0.45);

    o.levels = 1;
    CHECK_THROWS_AS(convergence_study(g, x0, o), StudyFailed);
}

TEST_CASE("deterministic Riccati study has order two")
{
    RiccatiParams p;
    p.bp1 = CoefficientFn::constant(0.0);
    const CatalogEntry e = riccati(p);
    const StateVector x0 = StateVector::make(vec({0.2}), e.sys.domain());
    ConvergenceOptions o;
    o.seeds = 1;
    o.levels = 4;
    o.oracle = [](const DriverPath& path, std::size_t k) {
        return vec({riccati_closed_form(1, 0, -1, 0.2, path.time(k))});
    };
    const ConvergenceTable t = convergence_study(e.sys, x0, o);
    CHECK(t.mean_order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("zero-noise catalog systems match a deterministic RK4 reference")
{
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_entry(name);
        const std::size_t noise_rows = e.sys.ell() - 1;
        const LieSystem quiet = e.sys.with_coefficients(
            [&e, noise_rows](std::span<const double> b) {
                Mat m = e.sys.coefficients(b);
                m.bottomRows(static_cast<Eigen::Index>(noise_rows)).setZero();
                return m;
            },
            false);
        const Vec x0 = e.default_target;
        const Trajectory tr = integrate_stratonovich(quiet, StateVector::make(x0, quiet.domain()),
                                                     quiet_path(quiet.ell(), 1.0, 1000));
        CAPTURE(name);
        REQUIRE(tr.complete());
        const Vec ref = lsde::testing::rk4_drift(quiet, x0, 1.0, 4000);
        CHECK((tr.final_state() - ref).lpNorm<Eigen::Infinity>() < 1e-6);
    }
}

TEST_CASE("zero-noise Riccati matches the closed form")
{
    RiccatiParams p;
    p.b0 = CoefficientFn::constant(0.5);
    p.b1 = CoefficientFn::constant(0.3);
    p.b2 = CoefficientFn::constant(-1.2);
    p.bp1 = CoefficientFn::constant(0.0);
    const CatalogEntry e = riccati(p);
    const Trajectory tr =
        integrate_stratonovich(e.sys, StateVector::make(vec({1.5}), e.sys.domain()), quiet_path(2, 1.0, 1000));
    for (std::size_t i = 0; i <= tr.valid_steps(); i += 100) {
        CHECK(std::abs(tr.state(i)[0] - riccati_closed_form(0.5, 0.3, -1.2, 1.5, tr.t[i])) < 1e-6);
    }
}

TEST_CASE("Riccati blowup truncates the trajectory")
{
    RiccatiParams p;
    p.b0 = CoefficientFn::constant(1.0);
    p.b2 = CoefficientFn::constant(1.0);  // dx = (1 + x^2) dt escapes at t = pi/2 - atan(x0)
    p.bp1 = CoefficientFn::constant(0.0);
    const CatalogEntry e = riccati(p);
    const Trajectory tr =
        integrate_stratonovich(e.sys, StateVector::make(vec({0.0}), e.sys.domain()), quiet_path(2, 3.0, 3000));
    CHECK_FALSE(tr.complete());
    CHECK(std::abs(tr.t_last_valid - M_PI / 2) < 0.01);
    CHECK(tr.states.allFinite());
    CHECK(tr.states.rows() == static_cast<Eigen::Index>(tr.t.size()));
    CHECK_FALSE(tr.truncation_reason.empty());
}

TEST_CASE("positivity is preserved in log coordinates")
{
    for (const char* name : {"corona", "lv-diffusion"}) {
        const CatalogEntry e = make_entry(name);
        for (std::uint64_t s = 0; s < 20; ++s) {
            const Trajectory tr = integrate_stratonovich(e.sys, StateVector::make(e.default_target, e.sys.domain()),
                                                         DriverPath::generate(s, e.sys.ell(), 5.0, 100, 0));
            CHECK(tr.complete());
            CHECK(tr.states.minCoeff() > 0.0);
        }
    }
}

TEST_CASE("log and raw coordinates agree under refinement")
{
    const CatalogEntry e = make_entry("lv-diffusion");
    const StateVector x0 = StateVector::make(e.default_target, e.sys.domain());
    const DriverPath p = DriverPath::generate(4, 3, 1.0, 100, 6);
    IntegratorOptions raw;
    raw.log_coordinates = false;
    const Vec a = integrate_stratonovich(e.sys, x0, p).final_state();
    const Vec b = integrate_stratonovich(e.sys, x0, p, raw).final_state();
    CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("integration on a coarsened path equals integration on the same increments")
{
    const CatalogEntry e = make_entry("ermakov");
    const StateVector x0 = StateVector::make(e.default_target, e.sys.domain());
    const DriverPath fine = DriverPath::generate(9, 2, 1.0, 25, 2);
    const DriverPath coarse = fine.at_level(0);
    const DriverPath direct = DriverPath::from_increments(9, 1.0, 25, 0, coarse.increments());
    const Trajectory a = integrate_stratonovich(e.sys, x0, coarse);
    const Trajectory b = integrate_stratonovich(e.sys, x0, direct);
    CHECK(a.states == b.states);
    CHECK(a.t == b.t);
}

TEST_CASE("trajectories are deterministic and ensembles are execution independent")
{
    const CatalogEntry e = make_entry("lv-diffusion");
    const StateVector x0 = StateVector::make(e.default_target, e.sys.domain());
    EnsembleSpec spec;
    spec.first_seed = 100;
    spec.count = 16;
    const auto serial = run_ensemble(e.sys, x0, spec, Execution::Serial);
    const auto parallel = run_ensemble(e.sys, x0, spec, Execution::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].states == parallel[i].states);
        CHECK(serial[i].seed == 100 + i);
    }
    const auto again = run_ensemble(e.sys, x0, spec, Execution::Serial);
    CHECK(again[3].states == serial[3].states);

    const LieSystem g = gbm(0.1, 0.2);
    ConvergenceOptions o;
    o.seeds = 8;
    o.execution = Execution::Serial;
    const ConvergenceTable a = convergence_study(g, StateVector::make(vec({1}), g.domain()), o);
    o.execution = Execution::Parallel;
    const ConvergenceTable b = convergence_study(g, StateVector::make(vec({1}), g.domain()), o);
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        CHECK(a.rows[k].error == b.rows[k].error);
    }
}

TEST_CASE("input validation")
{
    const CatalogEntry e = make_entry("lv-diffusion");
    CHECK_THROWS_AS(integrate_stratonovich(e.sys, StateVector::make(vec({1, 1}), e.sys.domain()),
                                           DriverPath::generate(0, 2, 1.0, 10, 0)),
                    ShapeError);
}

TEST_CASE("additive-noise LV truncates on leaving the orthant")
{
    LvAdditiveParams p;
    p.sigma2 = CoefficientFn::constant(3.0);
    const CatalogEntry e = lv_additive(p);
    std::size_t truncated = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Trajectory tr = integrate_stratonovich(e.sys, StateVector::make(vec({1, 0.3}), e.sys.domain()),
                                                     DriverPath::generate(s, 2, 1.0, 200, 0));
        truncated += tr.complete() ? 0 : 1;
        CHECK(tr.states.minCoeff() > 0.0);
    }
    CHECK(truncated > 0);
}
