#include "lsde/lie.hpp"

#include "lsde/errors.hpp"
#include "lsde/parallel.hpp"

#include <cmath>
#include <random>

namespace lsde {

namespace {

void require_same_dim(const VectorField& X, const VectorField& Y, const Vec& x)
{
    if (X.dim != Y.dim || static_cast<std::size_t>(x.size()) != X.dim) {
        throw ShapeError("commutator of " + X.name + " and " + Y.name + ": dimension mismatch");
    }
}

Vec stack_copies(const std::function<Vec(const Vec&)>& f, std::size_t n, std::size_t k, const Vec& x)
{
    Vec out(x.size());
    for (std::size_t a = 0; a < k; ++a) {
        const auto off = static_cast<Eigen::Index>(a * n);
        const auto len = static_cast<Eigen::Index>(n);
        out.segment(off, len) = f(x.segment(off, len));
    }
    return out;
}

}  // namespace

Vec commutator(const VectorField& X, const VectorField& Y, const Vec& x)
{
    require_same_dim(X, Y, x);
    return Y.jacobian(x) * X(x) - X.jacobian(x) * Y(x);
}

Vec commutator_fd(const VectorField& X, const VectorField& Y, const Vec& x)
{
    require_same_dim(X, Y, x);
    return finite_difference_jacobian(Y.eval, x) * X(x) - finite_difference_jacobian(X.eval, x) * Y(x);
}

VectorField bracket_field(const VectorField& X, const VectorField& Y)
{
    VectorField out;
    out.name = "[" + X.name + "," + Y.name + "]";
    out.dim = X.dim;
    out.eval = [X, Y](const Vec& x) { return commutator(X, Y, x); };
    // Second derivatives are not carried by VectorField; nested brackets fall back to differences.
    out.jac = [X, Y](const Vec& x) {
        return finite_difference_jacobian([&](const Vec& p) { return commutator(X, Y, p); }, x);
    };
    return out;
}

VectorField combine(const std::vector<VectorField>& fields, const std::vector<double>& coeffs)
{
    if (fields.empty() || fields.size() != coeffs.size()) {
        throw ShapeError("combine: coefficient count must match the field count");
    }
    VectorField out;
    out.name = "combination";
    out.dim = fields.front().dim;
    out.eval = [fields, coeffs](const Vec& x) {
        Vec v = Vec::Zero(x.size());
        for (std::size_t a = 0; a < fields.size(); ++a) {
            v += coeffs[a] * fields[a](x);
        }
        return v;
    };
    out.jac = [fields, coeffs](const Vec& x) {
        Mat j = Mat::Zero(x.size(), x.size());
        for (std::size_t a = 0; a < fields.size(); ++a) {
            j += coeffs[a] * fields[a].jacobian(x);
        }
        return j;
    };
    return out;
}

std::vector<Vec> sample_points(const SampleBox& box, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Vec> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back(sample_point(box, rng));
    }
    return pts;
}

std::vector<Vec> sample_points(const LieSystem& sys, std::size_t count, std::uint64_t seed)
{
    return sample_points(sys.box(), count, seed);
}

StructureReport check_structure_constants(const LieSystem& sys, const std::vector<Vec>& points, double tol,
                                          Execution execution)
{
    const std::size_t r = sys.rank();
    const auto& c = sys.structure();

    struct Local {
        double residual = 0.0;
        std::size_t alpha = 0;
        std::size_t beta = 0;
    };
    std::vector<Local> per_point(points.size());

    for_each_index(points.size(), execution, [&](std::size_t p) {
        const Vec& x = points[p];
        std::vector<Vec> values(r);
        for (std::size_t g = 0; g < r; ++g) {
            values[g] = sys.field(g)(x);
        }
        Local best;
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = a + 1; b < r; ++b) {
                Vec expected = Vec::Zero(x.size());
                for (std::size_t g = 0; g < r; ++g) {
                    expected += c(a, b, g) * values[g];
                }
                const double res = (commutator(sys.field(a), sys.field(b), x) - expected).lpNorm<Eigen::Infinity>();
                if (!(res <= best.residual)) {
                    best = {res, a, b};
                }
            }
        }
        per_point[p] = best;
    });

    StructureReport rep;
    rep.tolerance = tol;
    rep.points = points.size();
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (p == 0 || !(per_point[p].residual <= rep.max_residual)) {
            rep.max_residual = per_point[p].residual;
            rep.worst_alpha = per_point[p].alpha;
            rep.worst_beta = per_point[p].beta;
            rep.worst_point = points[p];
        }
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

ProlongedField::ProlongedField(VectorField base, std::size_t copies) : base_(std::move(base)), copies_(copies)
{
    if (copies_ < 1) {
        throw PreconditionError("prolongation needs at least one copy");
    }
}

Vec ProlongedField::operator()(const Vec& x) const
{
    if (static_cast<std::size_t>(x.size()) != dim()) {
        throw ShapeError("prolonged field evaluated at a point of the wrong dimension");
    }
    return stack_copies(base_.eval, base_.dim, copies_, x);
}

Mat ProlongedField::jacobian(const Vec& x) const
{
    const auto n = static_cast<Eigen::Index>(base_.dim);
    Mat j = Mat::Zero(x.size(), x.size());
    for (std::size_t a = 0; a < copies_; ++a) {
        const auto off = static_cast<Eigen::Index>(a) * n;
        j.block(off, off, n, n) = base_.jacobian(x.segment(off, n));
    }
    return j;
}

VectorField ProlongedField::as_field() const
{
    if (copies_ == 1) {
        return base_;
    }
    VectorField out;
    out.name = base_.name + "^[" + std::to_string(copies_) + "]";
    out.dim = dim();
    auto self = *this;
    out.eval = [self](const Vec& x) { return self(x); };
    out.jac = [self](const Vec& x) { return self.jacobian(x); };
    return out;
}

ProlongedField prolong_field(const VectorField& X, std::size_t k)
{
    return ProlongedField(X, k);
}

ScalarFunction prolong_function(const ScalarFunction& f, std::size_t k)
{
    if (k < 1) {
        throw PreconditionError("prolongation needs at least one copy");
    }
    if (k == 1) {
        return f;
    }
    const std::size_t n = f.dim;
    ScalarFunction out;
    out.name = f.name + "^[" + std::to_string(k) + "]";
    out.dim = n * k;
    out.value = [f, n, k](const Vec& x) {
        double s = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            s += f(x.segment(static_cast<Eigen::Index>(a * n), static_cast<Eigen::Index>(n)));
        }
        return s;
    };
    out.grad = [f, n, k](const Vec& x) {
        Vec g(x.size());
        for (std::size_t a = 0; a < k; ++a) {
            const auto off = static_cast<Eigen::Index>(a * n);
            g.segment(off, static_cast<Eigen::Index>(n)) = f.gradient(x.segment(off, static_cast<Eigen::Index>(n)));
        }
        return g;
    };
    if (!f.has_analytic_gradient()) {
        out.grad = nullptr;
    }
    return out;
}

Mat wedge_matrix(const std::vector<VectorField>& fields, const Vec& point)
{
    if (fields.empty()) {
        throw ShapeError("wedge of an empty field list");
    }
    const std::size_t n = fields.front().dim;
    if (n == 0 || point.size() % static_cast<Eigen::Index>(n) != 0) {
        throw ShapeError("wedge point dimension is not a multiple of the field dimension");
    }
    const std::size_t k = static_cast<std::size_t>(point.size()) / n;
    Mat m(static_cast<Eigen::Index>(fields.size()), point.size());
    for (std::size_t a = 0; a < fields.size(); ++a) {
        if (fields[a].dim != n) {
            throw ShapeError("wedge fields must share one dimension");
        }
        m.row(static_cast<Eigen::Index>(a)) = stack_copies(fields[a].eval, n, k, point).transpose();
    }
    return m;
}

std::size_t numeric_rank(const Mat& m)
{
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Mat> svd(m);
    const Vec s = svd.singularValues();
    if (s.size() == 0 || !(s[0] > 0.0)) {
        return 0;
    }
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > 1e-10 * s[0]) {
            ++rank;
        }
    }
    return rank;
}

WedgeResult wedge_determinant(const std::vector<VectorField>& fields, const Vec& point)
{
    const Mat m = wedge_matrix(fields, point);
    WedgeResult out;
    out.scale = m.lpNorm<Eigen::Infinity>();
    out.rank = numeric_rank(m);
    const auto r = static_cast<std::size_t>(m.rows());
    if (m.rows() == m.cols()) {
        out.square = true;
        out.determinant = m.determinant();
        out.full_rank = std::abs(out.determinant) > 1e-10 * std::pow(out.scale, static_cast<double>(r));
    } else {
        out.full_rank = out.rank == r;
    }
    return out;
}

std::size_t minimal_prolongation_order(const LieSystem& sys, const ProlongationOptions& options)
{
    if (options.trials < 1) {
        throw PreconditionError("minimal_prolongation_order needs at least one trial");
    }
    const std::size_t n = sys.dim();
    const std::size_t r = sys.rank();
    std::mt19937_64 rng(options.seed);
    for (std::size_t k = 1; k <= options.cap; ++k) {
        if (r > k * n) {
            continue;
        }
        for (std::size_t t = 0; t < options.trials; ++t) {
            Vec point(static_cast<Eigen::Index>(k * n));
            for (std::size_t a = 0; a < k; ++a) {
                point.segment(static_cast<Eigen::Index>(a * n), static_cast<Eigen::Index>(n)) =
                    sample_point(sys.box(), rng);
            }
            if (wedge_determinant(sys.fields(), point).full_rank) {
                return k;
            }
        }
    }
    throw NoFullRank(sys.name() + ": no full-rank prolongation up to order " + std::to_string(options.cap));
}

}  // namespace lsde
