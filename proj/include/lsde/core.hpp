#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lsde {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Positive coordinates must exceed this margin to count as interior.
inline constexpr double kPositivityMargin = 1e-12;

/// Open subset of R^n described coordinatewise: each coordinate is either
/// unrestricted or strictly positive.
class Domain {
public:
    enum class Kind { FullSpace, PositiveOrthant, HalfLine, Mixed };

    static Domain full_space(std::size_t n);
    static Domain positive_orthant(std::size_t n);
    static Domain half_line();
    // Product domain with the given coordinates restricted to (0, inf).
    static Domain mixed(std::vector<bool> positive);

    std::size_t dim() const { return positive_.size(); }
    Kind kind() const { return kind_; }
    bool is_positive(std::size_t i) const { return positive_[i]; }
    bool any_positive() const;
    const std::vector<bool>& positive_mask() const { return positive_; }

    bool contains(const Vec& x) const;
    std::string describe() const;

private:
    Domain(Kind kind, std::vector<bool> positive) : kind_(kind), positive_(std::move(positive)) {}

    Kind kind_;
    std::vector<bool> positive_;
};

/// A point together with the domain it was validated against.
class StateVector {
public:
    // Throws DomainError unless coords lies strictly inside domain.
    static StateVector make(Vec coords, Domain domain);

    const Vec& coords() const { return coords_; }
    const Domain& domain() const { return domain_; }
    std::size_t dim() const { return static_cast<std::size_t>(coords_.size()); }

private:
    StateVector(Vec coords, Domain domain) : coords_(std::move(coords)), domain_(std::move(domain)) {}

    Vec coords_;
    Domain domain_;
};

/// Smooth vector field on an open subset of R^n with an analytic Jacobian.
struct VectorField {
    std::string name;
    std::size_t dim = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jac;

    Vec operator()(const Vec& x) const { return eval(x); }
    Mat jacobian(const Vec& x) const { return jac(x); }
};

// Central-difference Jacobian with step 1e-6 * (1 + |x_j|).
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x);

/// Smooth scalar map with an optional analytic gradient (finite differences otherwise).
struct ScalarFunction {
    std::string name;
    std::size_t dim = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;

    double operator()(const Vec& x) const { return value(x); }
    bool has_analytic_gradient() const { return static_cast<bool>(grad); }
    Vec gradient(const Vec& x) const;
};

Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x);

/// Structure constants c^g_{ab} of [Y_a, Y_b] = sum_g c^g_{ab} Y_g.
class StructureConstants {
public:
    StructureConstants() = default;
    explicit StructureConstants(std::size_t r) : r_(r), data_(r * r * r, 0.0) {}

    std::size_t rank() const { return r_; }
    double operator()(std::size_t a, std::size_t b, std::size_t g) const { return data_[index(a, b, g)]; }

    // Sets c^g_{ab} = value and c^g_{ba} = -value.
    void set(std::size_t a, std::size_t b, std::size_t g, double value);

    // Largest violation of antisymmetry and of the Jacobi identity.
    double antisymmetry_defect() const;
    double jacobi_defect() const;

    StructureConstants scaled(double factor) const;

private:
    std::size_t index(std::size_t a, std::size_t b, std::size_t g) const { return (a * r_ + b) * r_ + g; }

    std::size_t r_ = 0;
    std::vector<double> data_;
};

/// Scalar coefficient b(B) of a driver value B = (t, W^2, ..., W^l).
struct CoefficientFn {
    std::function<double(std::span<const double>)> fn;
    bool uses_noise = false;
    std::string description;

    double operator()(std::span<const double> driver) const { return fn(driver); }

    static CoefficientFn constant(double value);
    // offset + slope * t
    static CoefficientFn linear(double offset, double slope);
    // offset + amplitude * sin(frequency * t + phase)
    static CoefficientFn sinusoid(double offset, double amplitude, double frequency, double phase);
    // offset + scale * B[component]; component 1 is the first Brownian coordinate.
    static CoefficientFn brownian(double offset, double scale, std::size_t component = 1);
};

/// Maps a driver value to the l x r coefficient matrix b^a_alpha(B).
using CoefficientMap = std::function<Mat(std::span<const double>)>;

/// Axis-aligned box used to draw generic interior points.
struct SampleBox {
    Vec lo;
    Vec hi;
};

/// A stochastic Lie system: Stratonovich operator row a equals
/// sum_alpha b^a_alpha(B) Y_alpha(x). Row 0 multiplies dt.
class LieSystem {
public:
    struct Config {
        std::string name;
        Domain domain;
        std::vector<VectorField> fields;
        StructureConstants structure;
        std::size_t ell = 1;
        CoefficientMap coeffs;
        bool noise_uses_driver = false;
        SampleBox box;
        bool log_coordinates = false;
    };

    // Validates shapes, antisymmetry and the Jacobi identity of the constants.
    explicit LieSystem(Config config);

    const std::string& name() const { return c_.name; }
    std::size_t dim() const { return c_.domain.dim(); }
    std::size_t rank() const { return c_.fields.size(); }
    std::size_t ell() const { return c_.ell; }
    const Domain& domain() const { return c_.domain; }
    const std::vector<VectorField>& fields() const { return c_.fields; }
    const VectorField& field(std::size_t a) const { return c_.fields[a]; }
    const StructureConstants& structure() const { return c_.structure; }
    const SampleBox& box() const { return c_.box; }
    bool noise_uses_driver() const { return c_.noise_uses_driver; }
    bool log_coordinates() const { return c_.log_coordinates; }

    // l x r matrix; throws NumericsError on non-finite entries.
    Mat coefficients(std::span<const double> driver) const;

    // Same system with every coefficient multiplied by factor.
    LieSystem with_scaled_coefficients(double factor) const;
    LieSystem with_structure(StructureConstants structure) const;
    LieSystem with_coefficients(CoefficientMap coeffs, bool noise_uses_driver) const;

private:
    Config c_;
};

// Rows of the Stratonovich operator at (B, x): l x n.
Mat assemble_operator(const LieSystem& sys, std::span<const double> driver, const Vec& x);

// Operator without the domain check, used on internal predictor states.
Mat assemble_operator_unchecked(const LieSystem& sys, std::span<const double> driver, const Vec& x);

bool validate_state(const LieSystem& sys, const Vec& x);

// Uniform draw from the system sample box.
template <class Rng>
Vec sample_point(const SampleBox& box, Rng& rng);

}  // namespace lsde

#include "lsde/detail/sampling.hpp"
