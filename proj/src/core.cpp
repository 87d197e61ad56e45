#include "lsde/core.hpp"

#include "lsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lsde {

Domain Domain::full_space(std::size_t n)
{
    return Domain(Kind::FullSpace, std::vector<bool>(n, false));
}

Domain Domain::positive_orthant(std::size_t n)
{
    return Domain(Kind::PositiveOrthant, std::vector<bool>(n, true));
}

Domain Domain::half_line()
{
    return Domain(Kind::HalfLine, std::vector<bool>{true});
}

Domain Domain::mixed(std::vector<bool> positive)
{
    return Domain(Kind::Mixed, std::move(positive));
}

bool Domain::any_positive() const
{
    return std::find(positive_.begin(), positive_.end(), true) != positive_.end();
}

bool Domain::contains(const Vec& x) const
{
    if (static_cast<std::size_t>(x.size()) != positive_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < positive_.size(); ++i) {
        const double xi = x[static_cast<Eigen::Index>(i)];
        if (!std::isfinite(xi)) {
            return false;
        }
        if (positive_[i] && !(xi > kPositivityMargin)) {
            return false;
        }
    }
    return true;
}

std::string Domain::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case Kind::FullSpace:
        os << "R^" << dim();
        break;
    case Kind::PositiveOrthant:
        os << "R+^" << dim();
        break;
    case Kind::HalfLine:
        os << "R+";
        break;
    case Kind::Mixed:
        for (std::size_t i = 0; i < positive_.size(); ++i) {
            os << (i ? " x " : "") << (positive_[i] ? "R+" : "R");
        }
        break;
    }
    return os.str();
}

StateVector StateVector::make(Vec coords, Domain domain)
{
    if (!domain.contains(coords)) {
        std::ostringstream os;
        os << "state (" << coords.transpose() << ") lies outside " << domain.describe();
        throw DomainError(os.str());
    }
    return StateVector(std::move(coords), std::move(domain));
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x)
{
    const Vec f0 = f(x);
    Mat J(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * (1.0 + std::abs(x[j]));
        Vec xp = x;
        Vec xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x)
{
    Vec g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * (1.0 + std::abs(x[j]));
        Vec xp = x;
        Vec xm = x;
        xp[j] += h;
        xm[j] -= h;
        g[j] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

Vec ScalarFunction::gradient(const Vec& x) const
{
    return grad ? grad(x) : finite_difference_gradient(value, x);
}

void StructureConstants::set(std::size_t a, std::size_t b, std::size_t g, double value)
{
    data_[index(a, b, g)] = value;
    data_[index(b, a, g)] = -value;
}

double StructureConstants::antisymmetry_defect() const
{
    double worst = 0.0;
    for (std::size_t a = 0; a < r_; ++a) {
        for (std::size_t b = 0; b < r_; ++b) {
            for (std::size_t g = 0; g < r_; ++g) {
                worst = std::max(worst, std::abs((*this)(a, b, g) + (*this)(b, a, g)));
            }
        }
    }
    return worst;
}

double StructureConstants::jacobi_defect() const
{
    // sum_d c^d_{ab} c^e_{dc} + cyclic(a, b, c) = 0 for every e.
    double worst = 0.0;
    for (std::size_t a = 0; a < r_; ++a) {
        for (std::size_t b = 0; b < r_; ++b) {
            for (std::size_t c = 0; c < r_; ++c) {
                for (std::size_t e = 0; e < r_; ++e) {
                    double s = 0.0;
                    for (std::size_t d = 0; d < r_; ++d) {
                        s += (*this)(a, b, d) * (*this)(d, c, e);
                        s += (*this)(b, c, d) * (*this)(d, a, e);
                        s += (*this)(c, a, d) * (*this)(d, b, e);
                    }
                    worst = std::max(worst, std::abs(s));
                }
            }
        }
    }
    return worst;
}

StructureConstants StructureConstants::scaled(double factor) const
{
    StructureConstants out = *this;
    for (double& v : out.data_) {
        v *= factor;
    }
    return out;
}

CoefficientFn CoefficientFn::constant(double value)
{
    return {[value](std::span<const double>) { return value; }, false, "constant(" + std::to_string(value) + ")"};
}

CoefficientFn CoefficientFn::linear(double offset, double slope)
{
    return {[offset, slope](std::span<const double> b) { return offset + slope * b[0]; }, false,
            "linear(" + std::to_string(offset) + "," + std::to_string(slope) + ")"};
}

CoefficientFn CoefficientFn::sinusoid(double offset, double amplitude, double frequency, double phase)
{
    return {[=](std::span<const double> b) { return offset + amplitude * std::sin(frequency * b[0] + phase); }, false,
            "sinusoid"};
}

CoefficientFn CoefficientFn::brownian(double offset, double scale, std::size_t component)
{
    return {[=](std::span<const double> b) { return offset + scale * b[component]; }, true,
            "brownian(" + std::to_string(component) + ")"};
}

LieSystem::LieSystem(Config config) : c_(std::move(config))
{
    const std::size_t n = c_.domain.dim();
    if (c_.fields.empty()) {
        throw ShapeError(c_.name + ": a Lie system needs at least one field");
    }
    for (const auto& f : c_.fields) {
        if (f.dim != n || !f.eval || !f.jac) {
            throw ShapeError(c_.name + ": field " + f.name + " does not match the manifold dimension");
        }
    }
    if (c_.structure.rank() != c_.fields.size()) {
        throw ShapeError(c_.name + ": structure constants rank differs from the number of fields");
    }
    if (c_.ell < 1 || !c_.coeffs) {
        throw ShapeError(c_.name + ": missing coefficient map");
    }
    if (static_cast<std::size_t>(c_.box.lo.size()) != n || static_cast<std::size_t>(c_.box.hi.size()) != n) {
        throw ShapeError(c_.name + ": sample box has the wrong dimension");
    }
    if (c_.structure.antisymmetry_defect() > 1e-12) {
        throw PreconditionError(c_.name + ": structure constants are not antisymmetric");
    }
    if (c_.structure.jacobi_defect() > 1e-10) {
        throw PreconditionError(c_.name + ": structure constants violate the Jacobi identity");
    }
}

Mat LieSystem::coefficients(std::span<const double> driver) const
{
    if (driver.size() != c_.ell) {
        throw ShapeError(c_.name + ": driver value has length " + std::to_string(driver.size()) + ", expected " +
                         std::to_string(c_.ell));
    }
    Mat b = c_.coeffs(driver);
    if (static_cast<std::size_t>(b.rows()) != c_.ell || static_cast<std::size_t>(b.cols()) != rank()) {
        throw ShapeError(c_.name + ": coefficient map returned the wrong shape");
    }
    if (!b.allFinite()) {
        throw NumericsError(c_.name + ": non-finite coefficient value");
    }
    return b;
}

LieSystem LieSystem::with_scaled_coefficients(double factor) const
{
    Config c = c_;
    auto inner = c_.coeffs;
    c.coeffs = [inner, factor](std::span<const double> b) -> Mat { return factor * inner(b); };
    return LieSystem(std::move(c));
}

LieSystem LieSystem::with_structure(StructureConstants structure) const
{
    Config c = c_;
    c.structure = std::move(structure);
    return LieSystem(std::move(c));
}

LieSystem LieSystem::with_coefficients(CoefficientMap coeffs, bool noise_uses_driver) const
{
    Config c = c_;
    c.coeffs = std::move(coeffs);
    c.noise_uses_driver = noise_uses_driver;
    return LieSystem(std::move(c));
}

Mat assemble_operator_unchecked(const LieSystem& sys, std::span<const double> driver, const Vec& x)
{
    const Mat b = sys.coefficients(driver);
    Mat rows = Mat::Zero(static_cast<Eigen::Index>(sys.ell()), static_cast<Eigen::Index>(sys.dim()));
    for (std::size_t alpha = 0; alpha < sys.rank(); ++alpha) {
        const auto col = b.col(static_cast<Eigen::Index>(alpha));
        if (col.isZero(0.0)) {
            continue;
        }
        const Vec y = sys.field(alpha)(x);
        rows.noalias() += col * y.transpose();
    }
    return rows;
}

Mat assemble_operator(const LieSystem& sys, std::span<const double> driver, const Vec& x)
{
    if (!sys.domain().contains(x)) {
        throw DomainError(sys.name() + ": operator evaluated outside " + sys.domain().describe());
    }
    Mat rows = assemble_operator_unchecked(sys, driver, x);
    if (!rows.allFinite()) {
        throw NumericsError(sys.name() + ": non-finite operator value");
    }
    return rows;
}

bool validate_state(const LieSystem& sys, const Vec& x)
{
    return sys.domain().contains(x);
}

}  // namespace lsde
