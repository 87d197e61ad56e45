#include "lsde/hamiltonian.hpp"

#include "lsde/errors.hpp"
#include "lsde/lie.hpp"
#include "lsde/parallel.hpp"

#include <cmath>

namespace lsde {

SymplecticForm::SymplecticForm(std::size_t dim, std::function<Mat(const Vec&)> upper)
    : dim_(dim), upper_(std::move(upper))
{
    if (dim_ == 0 || dim_ % 2 != 0) {
        throw ShapeError("symplectic forms live on even-dimensional spaces");
    }
}

SymplecticForm SymplecticForm::planar(std::function<double(const Vec&)> density)
{
    return SymplecticForm(2, [density = std::move(density)](const Vec& x) {
        Mat u = Mat::Zero(2, 2);
        u(0, 1) = density(x);
        return u;
    });
}

Mat SymplecticForm::matrix(const Vec& x) const
{
    if (static_cast<std::size_t>(x.size()) != dim_) {
        throw ShapeError("symplectic form evaluated at a point of the wrong dimension");
    }
    const Mat u = upper_(x);
    Mat w = Mat::Zero(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < u.cols(); ++j) {
            w(i, j) = u(i, j);
            w(j, i) = -u(i, j);
        }
    }
    return w;
}

Mat SymplecticForm::bivector(const Vec& x) const
{
    const Mat w = matrix(x);
    if (!w.allFinite()) {
        throw SingularFormError("symplectic form is not finite at the evaluation point");
    }
    Eigen::FullPivLU<Mat> lu(w.transpose());
    if (!lu.isInvertible()) {
        throw SingularFormError("symplectic form is degenerate at the evaluation point");
    }
    return lu.inverse();
}

SymplecticForm SymplecticForm::prolonged(std::size_t k) const
{
    if (k == 1) {
        return *this;
    }
    const auto n = static_cast<Eigen::Index>(dim_);
    auto base = *this;
    return SymplecticForm(dim_ * k, [base, n, k](const Vec& x) {
        Mat w = Mat::Zero(x.size(), x.size());
        for (std::size_t a = 0; a < k; ++a) {
            const auto off = static_cast<Eigen::Index>(a) * n;
            w.block(off, off, n, n) = base.matrix(x.segment(off, n));
        }
        return w;
    });
}

HamiltonianStructure HamiltonianStructure::prolonged(std::size_t k) const
{
    HamiltonianStructure out = *this;
    out.name = name + "^[" + std::to_string(k) + "]";
    out.form = form.prolonged(k);
    out.base_copies = base_copies * k;
    for (auto& h : out.hams) {
        h = prolong_function(h, k);
    }
    // Constants of a prolonged table scale with the copy count.
    out.central = central * static_cast<double>(k);
    out.box.lo = box.lo.replicate(static_cast<Eigen::Index>(k), 1);
    out.box.hi = box.hi.replicate(static_cast<Eigen::Index>(k), 1);
    return out;
}

double poisson_bracket(const SymplecticForm& form, const ScalarFunction& f, const ScalarFunction& g, const Vec& x)
{
    return f.gradient(x).dot(form.bivector(x) * g.gradient(x));
}

double poisson_bracket(const HamiltonianStructure& S, const ScalarFunction& f, const ScalarFunction& g, const Vec& x)
{
    return poisson_bracket(S.form, f, g, x);
}

ScalarFunction bracket_function(const SymplecticForm& form, const ScalarFunction& f, const ScalarFunction& g)
{
    ScalarFunction out;
    out.name = "{" + f.name + "," + g.name + "}";
    out.dim = form.dim();
    out.value = [form, f, g](const Vec& x) { return poisson_bracket(form, f, g, x); };
    return out;
}

VectorField hamiltonian_field(const SymplecticForm& form, const ScalarFunction& h)
{
    VectorField out;
    out.name = "X_" + h.name;
    out.dim = form.dim();
    out.eval = [form, h](const Vec& x) -> Vec { return form.bivector(x) * h.gradient(x); };
    out.jac = [form, h](const Vec& x) {
        return finite_difference_jacobian([&](const Vec& p) -> Vec { return form.bivector(p) * h.gradient(p); }, x);
    };
    return out;
}

namespace {

// Evaluates residual(x) at every point in parallel and keeps the worst one.
CheckReport worst_over_points(const std::vector<Vec>& points, double tol,
                              const std::function<double(const Vec&)>& residual)
{
    std::vector<double> values(points.size(), 0.0);
    for_each_index(points.size(), Execution::Parallel, [&](std::size_t p) { values[p] = residual(points[p]); });
    CheckReport rep;
    rep.tolerance = tol;
    rep.points = points.size();
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (p == 0 || !(values[p] <= rep.max_residual)) {
            rep.max_residual = values[p];
            rep.worst_point = points[p];
        }
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

}  // namespace

CheckReport check_hamiltonian_pair(const HamiltonianStructure& S, const VectorField& Y, const ScalarFunction& h,
                                   const std::vector<Vec>& points, double tol)
{
    if (Y.dim != S.form.dim() || h.dim != S.form.dim()) {
        throw ShapeError("check_hamiltonian_pair: dimensions of field, function and form differ");
    }
    auto rep = worst_over_points(points, tol, [&](const Vec& x) {
        return (S.form.matrix(x).transpose() * Y(x) - h.gradient(x)).lpNorm<Eigen::Infinity>();
    });
    rep.finite_difference = !h.has_analytic_gradient();
    rep.detail = Y.name + " / " + h.name;
    return rep;
}

CheckReport check_bracket_table(const HamiltonianStructure& S, const std::vector<Vec>& points, double tol)
{
    const std::size_t r = S.rank();
    auto rep = worst_over_points(points, tol, [&](const Vec& x) {
        std::vector<double> hv(r);
        for (std::size_t g = 0; g < r; ++g) {
            hv[g] = S.hams[g](x);
        }
        double worst = 0.0;
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = a + 1; b < r; ++b) {
                double expected = S.central(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                for (std::size_t g = 0; g < r; ++g) {
                    expected += S.lh_structure(a, b, g) * hv[g];
                }
                const double res = std::abs(poisson_bracket(S, S.hams[a], S.hams[b], x) - expected);
                if (!(res <= worst)) {
                    worst = res;
                }
            }
        }
        return worst;
    });
    for (const auto& h : S.hams) {
        rep.finite_difference = rep.finite_difference || !h.has_analytic_gradient();
    }
    rep.detail = S.name + " bracket table";
    return rep;
}

CheckReport check_casimir(const HamiltonianStructure& S, const ScalarFunction& candidate,
                          const std::vector<Vec>& points, double tol)
{
    auto rep = worst_over_points(points, tol, [&](const Vec& x) {
        double worst = 0.0;
        for (const auto& h : S.hams) {
            const double res = std::abs(poisson_bracket(S, h, candidate, x));
            if (!(res <= worst)) {
                worst = res;
            }
        }
        return worst;
    });
    rep.finite_difference = !candidate.has_analytic_gradient();
    rep.detail = candidate.name;
    return rep;
}

Polynomial& Polynomial::add(double coeff, std::vector<unsigned> powers)
{
    if (powers.size() != vars_) {
        throw ShapeError("polynomial term has the wrong number of exponents");
    }
    terms_.push_back({coeff, std::move(powers)});
    return *this;
}

double Polynomial::operator()(const Vec& v) const
{
    double s = 0.0;
    for (const auto& t : terms_) {
        double m = t.coeff;
        for (std::size_t i = 0; i < vars_; ++i) {
            for (unsigned p = 0; p < t.powers[i]; ++p) {
                m *= v[static_cast<Eigen::Index>(i)];
            }
        }
        s += m;
    }
    return s;
}

Vec Polynomial::gradient(const Vec& v) const
{
    Vec g = Vec::Zero(static_cast<Eigen::Index>(vars_));
    for (const auto& t : terms_) {
        for (std::size_t d = 0; d < vars_; ++d) {
            if (t.powers[d] == 0) {
                continue;
            }
            double m = t.coeff * t.powers[d];
            for (std::size_t i = 0; i < vars_; ++i) {
                const unsigned p = i == d ? t.powers[i] - 1 : t.powers[i];
                for (unsigned q = 0; q < p; ++q) {
                    m *= v[static_cast<Eigen::Index>(i)];
                }
            }
            g[static_cast<Eigen::Index>(d)] += m;
        }
    }
    return g;
}

Polynomial Polynomial::sl2_casimir(std::size_t a, std::size_t b, std::size_t c)
{
    Polynomial p(3);
    std::vector<unsigned> ac(3, 0);
    std::vector<unsigned> bb(3, 0);
    ac[a] += 1;
    ac[c] += 1;
    bb[b] = 2;
    p.add(1.0, ac).add(-1.0, bb);
    return p;
}

ScalarFunction casimir_constant(const HamiltonianStructure& S, const Polynomial& C, std::size_t m,
                                const std::vector<std::size_t>& copies)
{
    if (C.vars() != S.rank()) {
        throw ShapeError("Casimir polynomial must have one variable per Hamiltonian");
    }
    if (copies.empty()) {
        throw PreconditionError("Casimir constant needs at least one copy");
    }
    for (std::size_t a : copies) {
        if (a >= m) {
            throw PreconditionError("Casimir copy label exceeds the number of copies");
        }
    }
    const std::size_t n = S.form.dim();
    const std::size_t r = S.rank();
    auto coords = [S, copies, n, r](const Vec& x) {
        Vec v = Vec::Zero(static_cast<Eigen::Index>(r));
        for (std::size_t a : copies) {
            const Vec xa = x.segment(static_cast<Eigen::Index>(a * n), static_cast<Eigen::Index>(n));
            for (std::size_t g = 0; g < r; ++g) {
                v[static_cast<Eigen::Index>(g)] += S.hams[g](xa);
            }
        }
        return v;
    };
    ScalarFunction out;
    out.name = "casimir";
    out.dim = n * m;
    out.value = [C, coords](const Vec& x) { return C(coords(x)); };
    bool analytic = true;
    for (const auto& h : S.hams) {
        analytic = analytic && h.has_analytic_gradient();
    }
    if (analytic) {
        out.grad = [S, C, coords, copies, n, r](const Vec& x) {
            const Vec dC = C.gradient(coords(x));
            Vec g = Vec::Zero(x.size());
            for (std::size_t a : copies) {
                const auto off = static_cast<Eigen::Index>(a * n);
                const Vec xa = x.segment(off, static_cast<Eigen::Index>(n));
                for (std::size_t h = 0; h < r; ++h) {
                    g.segment(off, static_cast<Eigen::Index>(n)) += dC[static_cast<Eigen::Index>(h)] *
                                                                     S.hams[h].gradient(xa);
                }
            }
            return g;
        };
    }
    return out;
}

ScalarFunction casimir_constant(const HamiltonianStructure& S, const Polynomial& C, std::size_t m, std::size_t s)
{
    if (s < 1 || s > m) {
        throw PreconditionError("Casimir constant needs 1 <= s <= m");
    }
    std::vector<std::size_t> copies(s);
    for (std::size_t a = 0; a < s; ++a) {
        copies[a] = a;
    }
    return casimir_constant(S, C, m, copies);
}

}  // namespace lsde
