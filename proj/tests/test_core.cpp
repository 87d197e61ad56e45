#include "support.hpp"

#include "lsde/errors.hpp"
#include "lsde/lie.hpp"

#include <doctest.h>

using namespace lsde;
using lsde::testing::vec;

TEST_CASE("domain membership")
{
    CHECK(Domain::full_space(2).contains(vec({-3, 5})));
    CHECK(Domain::positive_orthant(2).contains(vec({1, 2})));
    CHECK_FALSE(Domain::positive_orthant(2).contains(vec({1, 0})));
    CHECK_FALSE(Domain::positive_orthant(2).contains(vec({1, -1e-3})));
    CHECK_FALSE(Domain::full_space(1).contains(vec({NAN})));
    const Domain m = Domain::mixed({true, false});
    CHECK(m.contains(vec({0.5, -2})));
    CHECK_FALSE(m.contains(vec({-0.5, 2})));
    CHECK_THROWS_AS(StateVector::make(vec({0, 1}), Domain::positive_orthant(2)), DomainError);
    CHECK_THROWS_AS(StateVector::make(vec({1}), Domain::positive_orthant(2)), DomainError);
}

TEST_CASE("coefficient library")
{
    const std::vector<double> b{0.5, 2.0, -1.0};
    CHECK(CoefficientFn::constant(3)(b) == 3);
    CHECK(CoefficientFn::linear(1, 2)(b) == doctest::Approx(2.0));
    CHECK(CoefficientFn::sinusoid(1, 2, 3, 0)(b) == doctest::Approx(1 + 2 * std::sin(1.5)));
    CHECK(CoefficientFn::brownian(1, 2, 2)(b) == doctest::Approx(-1.0));
    CHECK(CoefficientFn::brownian(0, 1).uses_noise);
    CHECK_FALSE(CoefficientFn::linear(0, 1).uses_noise);
}

TEST_CASE("structure constants are antisymmetric and satisfy Jacobi for every catalog entry")
{
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_entry(name);
        CAPTURE(name);
        CHECK(e.sys.structure().antisymmetry_defect() == 0.0);
        CHECK(e.sys.structure().jacobi_defect() < 1e-12);
    }
}

TEST_CASE("a system rejects constants that break the Jacobi identity")
{
    const CatalogEntry e = make_entry("riccati");
    StructureConstants broken = e.sys.structure();
    broken.set(0, 2, 0, 1.0);
    broken.set(1, 2, 1, 1.0);
    CHECK(broken.jacobi_defect() > 1e-10);
    CHECK_THROWS_AS(e.sys.with_structure(broken), PreconditionError);
}

TEST_CASE("analytic field Jacobians match finite differences")
{
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = make_entry(name);
        for (const Vec& x : sample_points(e.sys, 20, 4)) {
            for (const auto& f : e.sys.fields()) {
                CAPTURE(name);
                CAPTURE(f.name);
                const Mat fd = finite_difference_jacobian(f.eval, x);
                CHECK((f.jacobian(x) - fd).lpNorm<Eigen::Infinity>() < 1e-6 * (1 + fd.lpNorm<Eigen::Infinity>()));
            }
        }
    }
}

TEST_CASE("operator assembly")
{
    const CatalogEntry e = make_entry("corona");
    const std::vector<double> b{0.0, 0.0};
    const Mat s = assemble_operator(e.sys, b, vec({1, 2}));
    // drift A M2 = 0.3 (-H, -R), noise -B M1 = -0.1 (H, -H)
    CHECK(s(0, 0) == doctest::Approx(-0.3));
    CHECK(s(0, 1) == doctest::Approx(-0.6));
    CHECK(s(1, 0) == doctest::Approx(-0.1));
    CHECK(s(1, 1) == doctest::Approx(0.1));
    CHECK_THROWS_AS(assemble_operator(e.sys, b, vec({-1, 2})), DomainError);
    const std::vector<double> short_driver{0.0};
    CHECK_THROWS_AS(e.sys.coefficients(short_driver), ShapeError);
}

TEST_CASE("non-finite coefficients are reported")
{
    RiccatiParams p;
    p.b0 = CoefficientFn::constant(NAN);
    const CatalogEntry e = riccati(p);
    const std::vector<double> b{0.0, 0.0};
    CHECK_THROWS_AS(e.sys.coefficients(b), NumericsError);
}
