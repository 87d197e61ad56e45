#include "support.hpp"

#include "lsde/errors.hpp"
#include "lsde/rules.hpp"
#include "lsde/superposition.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lsde;
using lsde::testing::vec;

TEST_CASE("Riccati rule spot values")
{
    CHECK(eval_riccati_rule(1, 2, 3, 2) == doctest::Approx(-1.0));
    CHECK(eval_riccati_rule(1, 2, 3, 0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(eval_riccati_rule(1, 2, 3, 1), SingularRuleError);
    CHECK_THROWS_AS(solve_riccati_constant(0.5, 1, 1, 3), SingularRuleError);
    CHECK_THROWS_AS(solve_riccati_constant(1.0, 1, 2, 3), SingularRuleError);
}

TEST_CASE("corona rule spot values")
{
    const Vec x = eval_corona_rule(2, 3, 2, 0.5);
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(8.0));
    CHECK_THROWS_AS(eval_corona_rule(1, 1, 1, 3), DomainError);
    CHECK_THROWS_AS(eval_corona_rule(-1, 1, 1, 1), DomainError);
    CHECK_THROWS_AS(solve_corona_constants(vec({1, -1}), vec({1, 1})), DomainError);
}

TEST_CASE("LV rule spot values")
{
    const Vec a = eval_lv_rule(vec({2, 1}), vec({3, 2}), 2, 1);
    CHECK(a[0] == doctest::Approx(3.0));
    CHECK(a[1] == doctest::Approx(2.0));
    const Vec b = eval_lv_rule(vec({2, 1}), vec({3, 2}), 1, 1);
    CHECK(b[0] == doctest::Approx(2.0));
    CHECK(b[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(eval_lv_rule(vec({2, 1}), vec({3, 1}), 1, 1), SingularRuleError);
    CHECK_THROWS_AS(solve_lv_constants(vec({1, 1}), vec({2, 1}), vec({3, 1})), SingularRuleError);
    CHECK_THROWS_AS(eval_lv_rule(vec({2, 1}), vec({3, 2}), -1, 1), DomainError);
}

TEST_CASE("rules invert their constant solvers on random generic data")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> real(-3.0, 3.0);
    std::uniform_real_distribution<double> pos(0.2, 3.0);
    std::size_t riccati_checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const double g1 = real(rng), g2 = real(rng), g3 = real(rng), x = real(rng);
        if (!is_generic({vec({g1}), vec({g2}), vec({g3}), vec({x})}, 1e-2)) {
            continue;
        }
        const double z = solve_riccati_constant(x, g1, g2, g3);
        CHECK(eval_riccati_rule(g1, g2, g3, z) == doctest::Approx(x).epsilon(1e-10));
        ++riccati_checked;

        const Vec target = vec({pos(rng), pos(rng)});
        const Vec p = vec({pos(rng), pos(rng)});
        const Vec k = solve_corona_constants(target, p);
        const Vec back = eval_corona_rule(p[0], p[1], k[0], k[1]);
        CHECK((back - target).norm() < 1e-10 * (1 + target.norm()));

        const Vec c1 = vec({pos(rng), pos(rng)});
        const Vec c2 = vec({pos(rng), pos(rng)});
        if (std::abs(c1[1] - c2[1]) < 1e-2) {
            continue;
        }
        const Vec xi = solve_lv_constants(target, c1, c2);
        const Vec lv = eval_lv_rule(c1, c2, xi[0], xi[1]);
        CHECK((lv - target).norm() < 1e-10 * (1 + target.norm()));
    }
    CHECK(riccati_checked > 900);
}

TEST_CASE("Riccati constant is invariant under a common Mobius map")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto mobius = [](double x) { return (2 * x + 1) / (x + 3); };
    for (int i = 0; i < 100; ++i) {
        const double g1 = u(rng), g2 = u(rng), g3 = u(rng), x = u(rng);
        if (!is_generic({vec({g1}), vec({g2}), vec({g3}), vec({x})}, 1e-2)) {
            continue;
        }
        const double z = solve_riccati_constant(x, g1, g2, g3);
        const double w = solve_riccati_constant(mobius(x), mobius(g1), mobius(g2), mobius(g3));
        CHECK(w == doctest::Approx(z).epsilon(1e-8));
    }
}

TEST_CASE("LV first integral inverts when its copies are swapped")
{
    const CatalogEntry e = make_entry("lv-diffusion");
    const FirstIntegral& f1 = e.integrals[0];
    REQUIRE(f1.copies == 2);
    const Vec ab = vec({1.3, 0.7, 2.1, 1.9});
    const Vec ba = vec({2.1, 1.9, 1.3, 0.7});
    CHECK(f1.fn(ab) * f1.fn(ba) == doctest::Approx(1.0));
}

TEST_CASE("solve_constants on catalog entries")
{
    const Vec k = solve_constants(make_entry("corona"), vec({2, 8}), {vec({2, 3})});
    CHECK(k[0] == doctest::Approx(2.0));
    CHECK(k[1] == doctest::Approx(0.5));

    const Vec z = solve_constants(make_entry("riccati"), vec({1}), {vec({-1}), vec({0}), vec({1})});
    CHECK(z[0] == doctest::Approx(0.0));

    const Vec xi = solve_constants(make_entry("lv-diffusion"), vec({2, 1}), {vec({2, 1}), vec({3, 2})});
    CHECK(xi[0] == doctest::Approx(1.0));
    CHECK(xi[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(solve_constants(make_entry("ermakov"), vec({1, 0}), {}), PreconditionError);
    CHECK_THROWS_AS(solve_constants(make_entry("corona"), vec({1, 1}), {}), PreconditionError);
}

TEST_CASE("rule metadata")
{
    CHECK(riccati_rule().m == 3);
    CHECK(corona_rule().m == 1);
    CHECK(lv_rule().m == 2);
    CHECK(corona_rule().const_dim == 2);
}
