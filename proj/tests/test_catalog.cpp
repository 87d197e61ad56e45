#include "support.hpp"

#include "lsde/errors.hpp"
#include "lsde/integrator.hpp"

#include <doctest.h>

#include <cmath>

using namespace lsde;
using lsde::testing::vec;

TEST_CASE("catalog listing")
{
    const auto& names = catalog_names();
    CHECK(names == std::vector<std::string>{"riccati", "oscillator", "ermakov", "corona", "lv-diffusion", "lv-additive"});
    CHECK(make_entry("riccati").m == 3);
    CHECK(make_entry("corona").m == 1);
    CHECK(make_entry("lv-diffusion").m == 2);
    CHECK(make_entry("lv-diffusion").sys.ell() == 3);
    CHECK(make_entry("gbm").sys.dim() == 1);
    CHECK_THROWS_AS(make_entry("kepler"), PreconditionError);
}

TEST_CASE("every entry carries consistent default data")
{
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_entry(name);
        CAPTURE(name);
        CHECK(e.name == name);
        CHECK(validate_state(e.sys, e.default_target));
        if (e.rule) {
            CHECK(e.default_particulars.size() == e.rule->m);
            CHECK(e.rule->m == e.m);
        }
        if (!e.integrals.empty()) {
            CHECK(e.default_integral_copies.size() >= e.integrals.front().copies);
        }
        if (e.ham) {
            CHECK(e.hamiltonian_fields().size() == e.sys.rank());
        }
        CHECK(default_params(name).size() == e.params.size());
    }
}

TEST_CASE("parameter overrides")
{
    const std::vector<double> b{0.0, 0.0};
    const CatalogEntry e = make_entry("corona", {{"A", CoefficientFn::constant(0.7)}});
    const Mat m = e.sys.coefficients(b);
    CHECK(m.cwiseAbs().maxCoeff() == doctest::Approx(0.7));
    CHECK_THROWS_AS(make_entry("corona", {{"C", CoefficientFn::constant(1.0)}}), PreconditionError);
    CHECK_THROWS_AS(make_entry("ermakov", {{"k", CoefficientFn::linear(1.0, 1.0)}}), PreconditionError);
    CHECK_NOTHROW(make_entry("ermakov", {{"k", CoefficientFn::constant(2.0)}}));

    const CatalogEntry t = make_entry("riccati", {{"b1", CoefficientFn::sinusoid(0.0, 1.0, 2.0, 0.0)}});
    const std::vector<double> at{0.25 * M_PI, 0.0};
    CHECK(t.sys.coefficients(at)(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("x / v along the oscillator solves the reduced Riccati equation")
{
    const CatalogEntry osc = make_entry("oscillator");
    const CatalogEntry red = riccati_reduction();
    CHECK(red.name == "riccati-reduction");
    const double x0 = 0.2, v0 = 1.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const DriverPath p = DriverPath::generate(s, 2, 0.5, 500, 0);
        const Trajectory a = integrate_stratonovich(osc.sys, StateVector::make(vec({x0, v0}), osc.sys.domain()), p);
        const Trajectory g = integrate_stratonovich(red.sys, StateVector::make(vec({x0 / v0}), red.sys.domain()), p);
        REQUIRE(a.complete());
        REQUIRE(g.complete());
        double err = 0.0;
        for (std::size_t i = 0; i <= p.steps(); ++i) {
            err = std::max(err, std::abs(a.state(i)[0] / a.state(i)[1] - g.state(i)[0]));
        }
        CHECK(err < 1e-5);
    }
}

TEST_CASE("Ermakov integrals depend on their own pair of copies")
{
    const CatalogEntry e = make_entry("ermakov");
    REQUIRE(e.integrals.size() == 2);
    CHECK(e.integrals[0].copies == 3);
    const Vec base = vec({1.0, 0.0, 1.5, 0.5, 0.8, -0.3});
    Vec moved2 = base;
    moved2.segment(4, 2) = vec({1.2, 0.4});
    Vec moved1 = base;
    moved1.segment(2, 2) = vec({1.1, 0.1});
    CHECK(e.integrals[0].fn(moved2) == doctest::Approx(e.integrals[0].fn(base)));
    CHECK(e.integrals[0].fn(moved1) != doctest::Approx(e.integrals[0].fn(base)));
    CHECK(e.integrals[1].fn(moved1) == doctest::Approx(e.integrals[1].fn(base)));
    CHECK(e.integrals[1].fn(moved2) != doctest::Approx(e.integrals[1].fn(base)));
}
