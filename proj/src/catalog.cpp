#include "lsde/catalog.hpp"

#include "lsde/errors.hpp"
#include "lsde/lie.hpp"

#include <cmath>

namespace lsde {

namespace {

VectorField field(std::string name, std::size_t dim, std::function<Vec(const Vec&)> eval,
                  std::function<Mat(const Vec&)> jac)
{
    return VectorField{std::move(name), dim, std::move(eval), std::move(jac)};
}

Vec v1(double a)
{
    Vec v(1);
    v << a;
    return v;
}

Vec v2(double a, double b)
{
    Vec v(2);
    v << a, b;
    return v;
}

Mat m2(double a, double b, double c, double d)
{
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

SampleBox box2(double lo0, double hi0, double lo1, double hi1)
{
    return {v2(lo0, lo1), v2(hi0, hi1)};
}

ScalarFunction scalar(std::string name, std::size_t dim, std::function<double(const Vec&)> value,
                      std::function<Vec(const Vec&)> grad)
{
    return ScalarFunction{std::move(name), dim, std::move(value), std::move(grad)};
}

// Coefficient map from per-entry coefficient functions arranged as rows x r.
CoefficientMap coefficient_table(std::vector<std::vector<CoefficientFn>> table)
{
    return [table = std::move(table)](std::span<const double> b) {
        Mat out(static_cast<Eigen::Index>(table.size()), static_cast<Eigen::Index>(table.front().size()));
        for (std::size_t a = 0; a < table.size(); ++a) {
            for (std::size_t g = 0; g < table[a].size(); ++g) {
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(g)) = table[a][g](b);
            }
        }
        return out;
    };
}

bool noise_uses_driver(const std::vector<std::vector<CoefficientFn>>& table)
{
    for (std::size_t a = 1; a < table.size(); ++a) {
        for (const auto& c : table[a]) {
            if (c.uses_noise) {
                return true;
            }
        }
    }
    return false;
}

CoefficientFn zero()
{
    return CoefficientFn::constant(0.0);
}

CoefficientFn negated(const CoefficientFn& c)
{
    return {[c](std::span<const double> b) { return -c(b); }, c.uses_noise, "-" + c.description};
}

CoefficientFn squared(const CoefficientFn& c)
{
    return {[c](std::span<const double> b) {
                const double v = c(b);
                return v * v;
            },
            c.uses_noise, "(" + c.description + ")^2"};
}

CoefficientFn scaled(const CoefficientFn& c, double factor)
{
    return {[c, factor](std::span<const double> b) { return factor * c(b); }, c.uses_noise, c.description};
}

double real_value(const CoefficientFn& c, const std::string& slot)
{
    if (c.uses_noise) {
        throw PreconditionError("parameter " + slot + " must be a real constant");
    }
    const std::vector<double> probe0{0.0, 0.0, 0.0};
    const std::vector<double> probe1{1.0, 0.0, 0.0};
    const double v = c(probe0);
    if (c(probe1) != v) {
        throw PreconditionError("parameter " + slot + " must be a real constant");
    }
    return v;
}

// x^alpha d/dx for alpha = 0, 1, 2 with [X0,X1] = X0, [X0,X2] = 2 X1, [X1,X2] = X2.
std::vector<VectorField> riccati_fields()
{
    return {
        field("X0", 1, [](const Vec&) { return v1(1.0); }, [](const Vec&) { return Mat::Zero(1, 1).eval(); }),
        field("X1", 1, [](const Vec& x) { return v1(x[0]); }, [](const Vec&) { return Mat::Ones(1, 1).eval(); }),
        field("X2", 1, [](const Vec& x) { return v1(x[0] * x[0]); },
              [](const Vec& x) {
                  Mat j(1, 1);
                  j << 2.0 * x[0];
                  return j;
              }),
    };
}

StructureConstants sl2_constants()
{
    StructureConstants c(3);
    c.set(0, 1, 0, 1.0);
    c.set(0, 2, 1, 2.0);
    c.set(1, 2, 2, 1.0);
    return c;
}

// Lie-Hamilton table {h0,h1} = -h0, {h0,h2} = -2 h1, {h1,h2} = -h2.
StructureConstants sl2_hamilton_constants()
{
    return sl2_constants().scaled(-1.0);
}

// Hamiltonian structure of the Riccati fields on pairs (a, b) of the real line:
// omega = da ^ db / (a - b)^2, h0 = 1/(a-b), h1 = (a+b)/(2(a-b)), h2 = ab/(a-b).
HamiltonianStructure riccati_pair_structure()
{
    auto h0 = scalar(
        "h0", 2, [](const Vec& x) { return 1.0 / (x[0] - x[1]); },
        [](const Vec& x) {
            const double d = x[0] - x[1];
            return v2(-1.0 / (d * d), 1.0 / (d * d));
        });
    auto h1 = scalar(
        "h1", 2, [](const Vec& x) { return 0.5 * (x[0] + x[1]) / (x[0] - x[1]); },
        [](const Vec& x) {
            const double d = x[0] - x[1];
            return v2(-x[1] / (d * d), x[0] / (d * d));
        });
    auto h2 = scalar(
        "h2", 2, [](const Vec& x) { return x[0] * x[1] / (x[0] - x[1]); },
        [](const Vec& x) {
            const double d = x[0] - x[1];
            return v2(-x[1] * x[1] / (d * d), x[0] * x[0] / (d * d));
        });
    return HamiltonianStructure{
        "riccati-pair",
        SymplecticForm::planar([](const Vec& x) {
            const double d = x[0] - x[1];
            return 1.0 / (d * d);
        }),
        {h0, h1, h2},
        sl2_hamilton_constants(),
        Mat::Zero(3, 3),
        2,
        box2(0.5, 2.0, -2.0, -0.5),
    };
}

}  // namespace

std::vector<VectorField> CatalogEntry::hamiltonian_fields() const
{
    std::vector<VectorField> out;
    if (!ham) {
        return out;
    }
    for (const auto& f : sys.fields()) {
        out.push_back(prolong_field(f, ham->base_copies).as_field());
    }
    return out;
}

CatalogEntry riccati(const RiccatiParams& p)
{
    std::vector<std::vector<CoefficientFn>> table{{p.b0, p.b1, p.b2}, {p.bp0, p.bp1, p.bp2}};
    LieSystem sys({
        "riccati",
        Domain::full_space(1),
        riccati_fields(),
        sl2_constants(),
        2,
        coefficient_table(table),
        noise_uses_driver(table),
        {v1(-2.0), v1(2.0)},
        false,
    });

    const HamiltonianStructure pair = riccati_pair_structure();
    FirstIntegral casimir{"C", 4, casimir_constant(pair, Polynomial::sl2_casimir(0, 1, 2), 2, std::size_t{2})};
    casimir.fn.name = "C";

    CatalogEntry e{"riccati", std::move(sys), pair, {casimir}, riccati_rule(), 3, {}, v1(2.0),
                   {v1(-1.0), v1(0.0), v1(1.0)}, {v1(2.0), v1(-1.0), v1(0.0), v1(1.0)}};
    e.params = {{"b0", p.b0}, {"b1", p.b1}, {"b2", p.b2}, {"bp0", p.bp0}, {"bp1", p.bp1}, {"bp2", p.bp2}};
    return e;
}

CatalogEntry oscillator(const OscillatorParams& p)
{
    // gl(2) acting linearly on (x, v): E1 = x dx, E2 = v dx, E3 = x dv, E4 = v dv.
    std::vector<VectorField> fields{
        field("E1", 2, [](const Vec& x) { return v2(x[0], 0.0); }, [](const Vec&) { return m2(1, 0, 0, 0); }),
        field("E2", 2, [](const Vec& x) { return v2(x[1], 0.0); }, [](const Vec&) { return m2(0, 1, 0, 0); }),
        field("E3", 2, [](const Vec& x) { return v2(0.0, x[0]); }, [](const Vec&) { return m2(0, 0, 1, 0); }),
        field("E4", 2, [](const Vec& x) { return v2(0.0, x[1]); }, [](const Vec&) { return m2(0, 0, 0, 1); }),
    };
    StructureConstants c(4);
    c.set(0, 1, 1, -1.0);
    c.set(0, 2, 2, 1.0);
    c.set(1, 2, 3, 1.0);
    c.set(1, 2, 0, -1.0);
    c.set(1, 3, 1, -1.0);
    c.set(2, 3, 2, 1.0);

    std::vector<std::vector<CoefficientFn>> table{
        {zero(), CoefficientFn::constant(1.0), negated(p.omega2), negated(p.gamma)},
        {zero(), zero(), negated(p.omega_b2), negated(p.gamma_b)},
    };
    LieSystem sys({
        "oscillator",
        Domain::full_space(2),
        std::move(fields),
        c,
        2,
        coefficient_table(table),
        noise_uses_driver(table),
        box2(-2.0, 2.0, -2.0, 2.0),
        false,
    });
    CatalogEntry e{"oscillator", std::move(sys), std::nullopt, {}, std::nullopt, 2, {}, v2(1.0, 1.0), {}, {}};
    e.params = {{"omega2", p.omega2}, {"gamma", p.gamma}, {"omega_b2", p.omega_b2}, {"gamma_b", p.gamma_b}};
    return e;
}

CatalogEntry riccati_reduction(const OscillatorParams& p)
{
    RiccatiParams r;
    r.b0 = CoefficientFn::constant(1.0);
    r.b1 = p.gamma;
    r.b2 = p.omega2;
    r.bp0 = CoefficientFn::constant(0.0);
    r.bp1 = p.gamma_b;
    r.bp2 = p.omega_b2;
    CatalogEntry e = riccati(r);
    e.name = "riccati-reduction";
    return e;
}

CatalogEntry ermakov(const ErmakovParams& p)
{
    const double k = p.k;
    std::vector<VectorField> fields{
        field("X1", 2, [](const Vec& x) { return v2(0.0, -x[0]); }, [](const Vec&) { return m2(0, 0, -1, 0); }),
        field("X2", 2, [](const Vec& x) { return v2(-0.5 * x[0], 0.5 * x[1]); },
              [](const Vec&) { return m2(-0.5, 0, 0, 0.5); }),
        field("X3", 2, [k](const Vec& x) { return v2(x[1], k / (x[0] * x[0] * x[0])); },
              [k](const Vec& x) {
                  const double r2 = x[0] * x[0];
                  return m2(0, 1, -3.0 * k / (r2 * r2), 0);
              }),
    };
    std::vector<std::vector<CoefficientFn>> table{
        {squared(p.omega), zero(), CoefficientFn::constant(1.0)},
        {CoefficientFn::constant(-p.sigma), zero(), zero()},
    };
    LieSystem sys({
        "ermakov",
        Domain::mixed({true, false}),
        std::move(fields),
        sl2_constants(),
        2,
        coefficient_table(table),
        noise_uses_driver(table),
        box2(0.5, 2.0, -1.5, 1.5),
        false,
    });

    auto h1 = scalar(
        "h1", 2, [](const Vec& x) { return 0.5 * x[0] * x[0]; }, [](const Vec& x) { return v2(x[0], 0.0); });
    auto h2 = scalar(
        "h2", 2, [](const Vec& x) { return -0.5 * x[0] * x[1]; },
        [](const Vec& x) { return v2(-0.5 * x[1], -0.5 * x[0]); });
    auto h3 = scalar(
        "h3", 2, [k](const Vec& x) { return 0.5 * (x[1] * x[1] + k / (x[0] * x[0])); },
        [k](const Vec& x) { return v2(-k / (x[0] * x[0] * x[0]), x[1]); });
    HamiltonianStructure ham{
        "ermakov", SymplecticForm::planar([](const Vec&) { return 1.0; }), {h1, h2, h3}, sl2_hamilton_constants(),
        Mat::Zero(3, 3), 1, box2(0.5, 2.0, -1.5, 1.5),
    };

    const Polynomial c = Polynomial::sl2_casimir(0, 1, 2);
    FirstIntegral f1{"F1", 3, casimir_constant(ham, c, 3, std::vector<std::size_t>{0, 1})};
    FirstIntegral f2{"F2", 3, casimir_constant(ham, c, 3, std::vector<std::size_t>{0, 2})};
    f1.fn.name = "F1";
    f2.fn.name = "F2";

    CatalogEntry e{"ermakov", std::move(sys), ham, {f1, f2}, std::nullopt, 2, {}, v2(1.0, 0.0), {},
                   {v2(1.0, 0.0), v2(1.5, 0.5), v2(0.8, -0.3)}};
    e.params = {{"omega", p.omega}, {"sigma", CoefficientFn::constant(p.sigma), true},
                {"k", CoefficientFn::constant(p.k), true}};
    return e;
}

CatalogEntry corona(const CoronaParams& p)
{
    // M1 = H (dH - dR), M2 = -H dH - R dR; they commute ([M1, M2] = 0).
    std::vector<VectorField> fields{
        field("M1", 2, [](const Vec& x) { return v2(x[0], -x[0]); }, [](const Vec&) { return m2(1, 0, -1, 0); }),
        field("M2", 2, [](const Vec& x) { return v2(-x[0], -x[1]); }, [](const Vec&) { return m2(-1, 0, 0, -1); }),
    };
    // Noise row -B M1. Under the Ito reading the Stratonovich drift gains
    // -1/2 J_X X = -1/2 B^2 M1 for X = -B M1.
    CoefficientFn m1_drift = zero();
    if (p.ito_reading) {
        m1_drift = scaled(squared(p.b), -0.5);
    }
    std::vector<std::vector<CoefficientFn>> table{{m1_drift, p.a}, {negated(p.b), zero()}};
    LieSystem sys({
        p.ito_reading ? "corona-ito" : "corona",
        Domain::positive_orthant(2),
        std::move(fields),
        StructureConstants(2),
        2,
        coefficient_table(table),
        noise_uses_driver(table),
        box2(0.2, 3.0, 0.2, 3.0),
        true,
    });

    auto h1 = scalar(
        "h1", 2, [](const Vec& x) { return std::log(x[0] + x[1]); },
        [](const Vec& x) {
            const double s = x[0] + x[1];
            return v2(1.0 / s, 1.0 / s);
        });
    auto h2 = scalar(
        "h2", 2, [](const Vec& x) { return std::log(x[0] / (x[0] + x[1])); },
        [](const Vec& x) {
            const double s = x[0] + x[1];
            return v2(1.0 / x[0] - 1.0 / s, -1.0 / s);
        });
    Mat central = Mat::Zero(2, 2);
    central(0, 1) = -1.0;
    central(1, 0) = 1.0;
    HamiltonianStructure ham{
        "corona",
        SymplecticForm::planar([](const Vec& x) { return 1.0 / (x[1] * x[0] + x[0] * x[0]); }),
        {h1, h2},
        StructureConstants(2),
        central,
        1,
        box2(0.2, 3.0, 0.2, 3.0),
    };

    // F_a(x0, x1) = h_a(x0) - h_a(x1).
    auto difference = [](const ScalarFunction& h, std::string name) {
        return scalar(
            std::move(name), 4,
            [h](const Vec& x) { return h(x.head(2)) - h(x.tail(2)); },
            [h](const Vec& x) {
                Vec g(4);
                g << h.gradient(x.head(2)), -h.gradient(x.tail(2));
                return g;
            });
    };
    FirstIntegral f1{"F1", 2, difference(h1, "F1")};
    FirstIntegral f2{"F2", 2, difference(h2, "F2")};

    CatalogEntry e{"corona", std::move(sys), ham, {f1, f2}, corona_rule(), 1, {}, v2(1.0, 2.0), {v2(2.0, 1.0)},
                   {v2(1.0, 2.0), v2(2.0, 1.0)}};
    e.params = {{"A", p.a}, {"B", p.b}, {"ito_reading", CoefficientFn::constant(p.ito_reading ? 1.0 : 0.0), true}};
    return e;
}

CatalogEntry lv_diffusion(const LvDiffusionParams& p)
{
    std::vector<VectorField> fields{
        field("Z1", 2, [](const Vec& x) { return v2(x[0], 0.0); }, [](const Vec&) { return m2(1, 0, 0, 0); }),
        field("Z2", 2, [](const Vec& x) { return v2(0.0, x[1]); }, [](const Vec&) { return m2(0, 0, 0, 1); }),
        field("Z3", 2, [](const Vec& x) { return v2(x[0] * x[1], 0.0); },
              [](const Vec& x) { return m2(x[1], x[0], 0, 0); }),
    };
    StructureConstants c(3);
    c.set(1, 2, 2, 1.0);  // [Z2, Z3] = Z3; Z1 commutes with Z2 and Z3

    std::vector<std::vector<CoefficientFn>> table{
        {p.b1, CoefficientFn::constant(p.b2), negated(p.a1)},
        {p.sigma1, zero(), zero()},
        {zero(), CoefficientFn::constant(p.sigma2), zero()},
    };
    LieSystem sys({
        "lv-diffusion",
        Domain::positive_orthant(2),
        std::move(fields),
        c,
        3,
        coefficient_table(table),
        noise_uses_driver(table),
        box2(0.2, 3.0, 0.2, 3.0),
        true,
    });

    // omega = dN1 ^ dN2 / (N1 N2) with h1 = ln N2, h2 = -ln N1, h3 = N2.
    auto h1 = scalar(
        "h1", 2, [](const Vec& x) { return std::log(x[1]); }, [](const Vec& x) { return v2(0.0, 1.0 / x[1]); });
    auto h2 = scalar(
        "h2", 2, [](const Vec& x) { return -std::log(x[0]); }, [](const Vec& x) { return v2(-1.0 / x[0], 0.0); });
    auto h3 = scalar(
        "h3", 2, [](const Vec& x) { return x[1]; }, [](const Vec&) { return v2(0.0, 1.0); });
    StructureConstants lh(3);
    lh.set(1, 2, 2, -1.0);
    Mat central = Mat::Zero(3, 3);
    central(0, 1) = 1.0;
    central(1, 0) = -1.0;
    HamiltonianStructure ham{
        "lv-diffusion",
        SymplecticForm::planar([](const Vec& x) { return 1.0 / (x[0] * x[1]); }),
        {h1, h2, h3},
        lh,
        central,
        1,
        box2(0.2, 3.0, 0.2, 3.0),
    };

    // F1 = (N2)_0 / (N2)_1 on two copies.
    auto f1 = scalar(
        "F1", 4, [](const Vec& x) { return x[1] / x[3]; },
        [](const Vec& x) {
            Vec g = Vec::Zero(4);
            g[1] = 1.0 / x[3];
            g[3] = -x[1] / (x[3] * x[3]);
            return g;
        });
    // F2 = [((N2)_1 - (N2)_2) ln((N1)_0/(N1)_1) - ((N2)_0 - (N2)_1) ln((N1)_1/(N1)_2)] / (N2)_2
    auto f2 = scalar(
        "F2", 6,
        [](const Vec& x) {
            const double l01 = std::log(x[0] / x[2]);
            const double l12 = std::log(x[2] / x[4]);
            return ((x[3] - x[5]) * l01 - (x[1] - x[3]) * l12) / x[5];
        },
        [](const Vec& x) {
            const double l01 = std::log(x[0] / x[2]);
            const double l12 = std::log(x[2] / x[4]);
            const double num = (x[3] - x[5]) * l01 - (x[1] - x[3]) * l12;
            Vec g(6);
            g[0] = (x[3] - x[5]) / (x[0] * x[5]);
            g[1] = -l12 / x[5];
            g[2] = (-(x[3] - x[5]) / x[2] - (x[1] - x[3]) / x[2]) / x[5];
            g[3] = (l01 + l12) / x[5];
            g[4] = ((x[1] - x[3]) / x[4]) / x[5];
            g[5] = -l01 / x[5] - num / (x[5] * x[5]);
            return g;
        });

    CatalogEntry e{"lv-diffusion", std::move(sys), ham, {{"F1", 2, f1}, {"F2", 3, f2}}, lv_rule(), 2, {},
                   v2(1.0, 1.5), {v2(2.0, 1.0), v2(1.5, 2.0)}, {v2(1.0, 1.5), v2(2.0, 1.0), v2(1.5, 2.0)}};
    e.params = {{"b1", p.b1}, {"a1", p.a1}, {"sigma1", p.sigma1}, {"b2", CoefficientFn::constant(p.b2), true},
                {"sigma2", CoefficientFn::constant(p.sigma2), true}};
    return e;
}

CatalogEntry lv_additive(const LvAdditiveParams& p)
{
    std::vector<VectorField> fields{
        field("Z1", 2, [](const Vec& x) { return v2(x[0], 0.0); }, [](const Vec&) { return m2(1, 0, 0, 0); }),
        field("Z2", 2, [](const Vec& x) { return v2(0.0, x[1]); }, [](const Vec&) { return m2(0, 0, 0, 1); }),
        field("Z3", 2, [](const Vec& x) { return v2(x[0] * x[1], 0.0); },
              [](const Vec& x) { return m2(x[1], x[0], 0, 0); }),
        field("Z4", 2, [](const Vec&) { return v2(0.0, 1.0); }, [](const Vec&) { return m2(0, 0, 0, 0); }),
    };
    StructureConstants c(4);
    c.set(1, 2, 2, 1.0);   // [Z2, Z3] = Z3
    c.set(1, 3, 3, -1.0);  // [Z2, Z4] = -Z4
    c.set(2, 3, 0, -1.0);  // [Z3, Z4] = -Z1

    std::vector<std::vector<CoefficientFn>> table{
        {p.b1, p.b2, negated(p.a1), zero()},
        {zero(), zero(), zero(), p.sigma2},
    };
    // Additive noise can push N2 through zero; integrate in raw coordinates and truncate on exit.
    LieSystem sys({
        "lv-additive",
        Domain::positive_orthant(2),
        std::move(fields),
        c,
        2,
        coefficient_table(table),
        noise_uses_driver(table),
        box2(0.2, 3.0, 0.2, 3.0),
        false,
    });
    CatalogEntry e{"lv-additive", std::move(sys), std::nullopt, {}, std::nullopt, 2, {}, v2(1.0, 1.0), {}, {}};
    e.params = {{"b1", p.b1}, {"b2", p.b2}, {"a1", p.a1}, {"sigma2", p.sigma2}};
    return e;
}

LieSystem gbm(double mu, double sigma)
{
    std::vector<std::vector<CoefficientFn>> table{{CoefficientFn::constant(mu)}, {CoefficientFn::constant(sigma)}};
    return LieSystem({
        "gbm",
        Domain::full_space(1),
        {field("X1", 1, [](const Vec& x) { return v1(x[0]); }, [](const Vec&) { return Mat::Ones(1, 1).eval(); })},
        StructureConstants(1),
        2,
        coefficient_table(table),
        false,
        {v1(0.5), v1(2.0)},
        false,
    });
}

const std::vector<std::string>& catalog_names()
{
    static const std::vector<std::string> names{"riccati", "oscillator", "ermakov", "corona", "lv-diffusion",
                                                "lv-additive"};
    return names;
}

namespace {

const CoefficientFn& pick(const ParamOverrides& o, const std::string& key, const CoefficientFn& fallback)
{
    auto it = o.find(key);
    return it == o.end() ? fallback : it->second;
}

void reject_unknown(const std::string& name, const ParamOverrides& o, const std::vector<ParamSlot>& slots)
{
    for (const auto& [key, value] : o) {
        bool known = false;
        for (const auto& s : slots) {
            if (s.name == key) {
                known = true;
                if (s.real_only) {
                    real_value(value, key);
                }
            }
        }
        if (!known) {
            throw PreconditionError("system " + name + " has no parameter '" + key + "'");
        }
    }
}

CatalogEntry gbm_entry(double mu, double sigma)
{
    CatalogEntry e{"gbm", gbm(mu, sigma), std::nullopt, {}, std::nullopt, 1, {}, v1(1.0), {}, {}};
    e.params = {{"mu", CoefficientFn::constant(mu), true}, {"sigma", CoefficientFn::constant(sigma), true}};
    return e;
}

}  // namespace

std::vector<ParamSlot> default_params(const std::string& name)
{
    return make_entry(name).params;
}

CatalogEntry make_entry(const std::string& name, const ParamOverrides& o)
{
    if (name == "riccati") {
        RiccatiParams p;
        reject_unknown(name, o, riccati(p).params);
        p.b0 = pick(o, "b0", p.b0);
        p.b1 = pick(o, "b1", p.b1);
        p.b2 = pick(o, "b2", p.b2);
        p.bp0 = pick(o, "bp0", p.bp0);
        p.bp1 = pick(o, "bp1", p.bp1);
        p.bp2 = pick(o, "bp2", p.bp2);
        return riccati(p);
    }
    if (name == "oscillator") {
        OscillatorParams p;
        reject_unknown(name, o, oscillator(p).params);
        p.omega2 = pick(o, "omega2", p.omega2);
        p.gamma = pick(o, "gamma", p.gamma);
        p.omega_b2 = pick(o, "omega_b2", p.omega_b2);
        p.gamma_b = pick(o, "gamma_b", p.gamma_b);
        return oscillator(p);
    }
    if (name == "ermakov") {
        ErmakovParams p;
        reject_unknown(name, o, ermakov(p).params);
        p.omega = pick(o, "omega", p.omega);
        p.sigma = real_value(pick(o, "sigma", CoefficientFn::constant(p.sigma)), "sigma");
        p.k = real_value(pick(o, "k", CoefficientFn::constant(p.k)), "k");
        return ermakov(p);
    }
    if (name == "corona") {
        CoronaParams p;
        reject_unknown(name, o, corona(p).params);
        p.a = pick(o, "A", p.a);
        p.b = pick(o, "B", p.b);
        p.ito_reading = real_value(pick(o, "ito_reading", CoefficientFn::constant(0.0)), "ito_reading") != 0.0;
        return corona(p);
    }
    if (name == "lv-diffusion") {
        LvDiffusionParams p;
        reject_unknown(name, o, lv_diffusion(p).params);
        p.b1 = pick(o, "b1", p.b1);
        p.a1 = pick(o, "a1", p.a1);
        p.sigma1 = pick(o, "sigma1", p.sigma1);
        p.b2 = real_value(pick(o, "b2", CoefficientFn::constant(p.b2)), "b2");
        p.sigma2 = real_value(pick(o, "sigma2", CoefficientFn::constant(p.sigma2)), "sigma2");
        return lv_diffusion(p);
    }
    if (name == "lv-additive") {
        LvAdditiveParams p;
        reject_unknown(name, o, lv_additive(p).params);
        p.b1 = pick(o, "b1", p.b1);
        p.b2 = pick(o, "b2", p.b2);
        p.a1 = pick(o, "a1", p.a1);
        p.sigma2 = pick(o, "sigma2", p.sigma2);
        return lv_additive(p);
    }
    if (name == "gbm") {
        const auto defaults = gbm_entry(0.1, 0.2);
        reject_unknown(name, o, defaults.params);
        const double mu = real_value(pick(o, "mu", CoefficientFn::constant(0.1)), "mu");
        const double sigma = real_value(pick(o, "sigma", CoefficientFn::constant(0.2)), "sigma");
        return gbm_entry(mu, sigma);
    }
    throw PreconditionError("unknown system '" + name + "'");
}

}  // namespace lsde
