#pragma once

#include "lsde/core.hpp"
#include "lsde/parallel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lsde {

// Lie bracket [X, Y](x) = J_Y(x) X(x) - J_X(x) Y(x), from analytic Jacobians.
Vec commutator(const VectorField& X, const VectorField& Y, const Vec& x);

// Same bracket with central-difference Jacobians; cross-check only.
Vec commutator_fd(const VectorField& X, const VectorField& Y, const Vec& x);

// Bracket as a field, so brackets can be nested or prolonged.
VectorField bracket_field(const VectorField& X, const VectorField& Y);

// Linear combination sum_a coeffs[a] * fields[a].
VectorField combine(const std::vector<VectorField>& fields, const std::vector<double>& coeffs);

struct StructureReport {
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::size_t worst_alpha = 0;
    std::size_t worst_beta = 0;
    Vec worst_point;
    std::size_t points = 0;
};

// max over points and pairs of ||[Y_a, Y_b] - sum_g c^g_ab Y_g||_inf.
StructureReport check_structure_constants(const LieSystem& sys, const std::vector<Vec>& points, double tol,
                                          Execution execution = Execution::Parallel);

// Seeded interior points from the system sample box.
std::vector<Vec> sample_points(const LieSystem& sys, std::size_t count, std::uint64_t seed);
std::vector<Vec> sample_points(const SampleBox& box, std::size_t count, std::uint64_t seed);

/// Diagonal prolongation X^[k] acting copywise on M^k.
class ProlongedField {
public:
    ProlongedField(VectorField base, std::size_t copies);

    const VectorField& base() const { return base_; }
    std::size_t copies() const { return copies_; }
    std::size_t dim() const { return copies_ * base_.dim; }

    Vec operator()(const Vec& x) const;
    Mat jacobian(const Vec& x) const;
    VectorField as_field() const;

private:
    VectorField base_;
    std::size_t copies_;
};

ProlongedField prolong_field(const VectorField& X, std::size_t k);

// f^[k](x_1, ..., x_k) = sum_a f(x_a).
ScalarFunction prolong_function(const ScalarFunction& f, std::size_t k);

/// Determinant of the stacked prolonged field values when r = k n, rank otherwise.
struct WedgeResult {
    bool square = false;
    double determinant = 0.0;
    std::size_t rank = 0;
    double scale = 0.0;  // infinity norm of the stacked matrix
    // The stacked values span an r-dimensional space (|det| above threshold when square).
    bool full_rank = false;
};

// Rows are X_a^[k](point) for the r fields.
Mat wedge_matrix(const std::vector<VectorField>& fields, const Vec& point);
WedgeResult wedge_determinant(const std::vector<VectorField>& fields, const Vec& point);

// Numeric rank with singular-value cutoff 1e-10 relative to the largest one.
std::size_t numeric_rank(const Mat& m);

struct ProlongationOptions {
    std::size_t trials = 32;
    std::uint64_t seed = 0;
    std::size_t cap = 6;
};

// Smallest k with a sampled point of M^k where the r prolonged fields are independent.
std::size_t minimal_prolongation_order(const LieSystem& sys, const ProlongationOptions& options = {});

}  // namespace lsde
