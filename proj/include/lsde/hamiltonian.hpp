#pragma once

#include "lsde/core.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lsde {

/// Symplectic form on an open subset of R^{2d}, stored as the matrix
/// W_ij = omega(e_i, e_j). Only the strict upper triangle of the supplied
/// map is read; W is antisymmetric by construction.
class SymplecticForm {
public:
    SymplecticForm(std::size_t dim, std::function<Mat(const Vec&)> upper);

    // f(x) dx^0 ^ dx^1 on a two-dimensional space.
    static SymplecticForm planar(std::function<double(const Vec&)> density);

    std::size_t dim() const { return dim_; }
    Mat matrix(const Vec& x) const;

    // Poisson bivector (W^T)^{-1}; throws SingularFormError when W(x) is singular.
    Mat bivector(const Vec& x) const;

    // Block-diagonal form omega^[k] on the k-fold product.
    SymplecticForm prolonged(std::size_t k) const;

private:
    std::size_t dim_;
    std::function<Mat(const Vec&)> upper_;
};

/// Symplectic form, Hamiltonian functions h_a of the VG fields, and the
/// Lie-Hamilton table {h_a, h_b} = sum_g c^g_ab h_g + central_ab.
struct HamiltonianStructure {
    std::string name;
    SymplecticForm form;
    std::vector<ScalarFunction> hams;
    StructureConstants lh_structure;
    Mat central;  // r x r, antisymmetric
    // Number of base-manifold copies the structure lives on (2 for the Riccati pair structure).
    std::size_t base_copies = 1;
    SampleBox box;  // generic points of the structure manifold

    std::size_t rank() const { return hams.size(); }

    // Structure on the k-fold product: block form and summed Hamiltonians.
    HamiltonianStructure prolonged(std::size_t k) const;
};

// {f, g}(x) = grad f . X_g with X_g = (W^T)^{-1} grad g.
double poisson_bracket(const HamiltonianStructure& S, const ScalarFunction& f, const ScalarFunction& g, const Vec& x);
double poisson_bracket(const SymplecticForm& form, const ScalarFunction& f, const ScalarFunction& g, const Vec& x);

// {f, g} as a scalar function (gradient by central differences).
ScalarFunction bracket_function(const SymplecticForm& form, const ScalarFunction& f, const ScalarFunction& g);

// Hamiltonian vector field X_h with W^T X_h = grad h.
VectorField hamiltonian_field(const SymplecticForm& form, const ScalarFunction& h);

struct CheckReport {
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Vec worst_point;
    std::size_t points = 0;
    bool finite_difference = false;  // a gradient had to be approximated
    std::string detail;
};

// max over points of ||W^T Y - grad h||_inf.
CheckReport check_hamiltonian_pair(const HamiltonianStructure& S, const VectorField& Y, const ScalarFunction& h,
                                   const std::vector<Vec>& points, double tol);

// max over points and pairs of |{h_a, h_b} - sum_g c^g_ab h_g - central_ab|.
CheckReport check_bracket_table(const HamiltonianStructure& S, const std::vector<Vec>& points, double tol);

// max over points and basis Hamiltonians of |{h_a, candidate}|.
CheckReport check_casimir(const HamiltonianStructure& S, const ScalarFunction& candidate,
                          const std::vector<Vec>& points, double tol);

/// Polynomial in r variables, sum of coeff * prod v_i^p_i.
class Polynomial {
public:
    explicit Polynomial(std::size_t vars) : vars_(vars) {}

    Polynomial& add(double coeff, std::vector<unsigned> powers);

    std::size_t vars() const { return vars_; }
    double operator()(const Vec& v) const;
    Vec gradient(const Vec& v) const;

    // v_a v_c - v_b^2 in the given variables (the sl2 Casimir in a standard basis).
    static Polynomial sl2_casimir(std::size_t a, std::size_t b, std::size_t c);

private:
    struct Term {
        double coeff;
        std::vector<unsigned> powers;
    };
    std::size_t vars_;
    std::vector<Term> terms_;
};

// C(sum_{a in copies} h_1(x_a), ..., sum_{a in copies} h_r(x_a)) on the m-fold product of
// the structure manifold. copies holds zero-based copy labels.
ScalarFunction casimir_constant(const HamiltonianStructure& S, const Polynomial& C, std::size_t m,
                                const std::vector<std::size_t>& copies);

// Copies 0..s-1.
ScalarFunction casimir_constant(const HamiltonianStructure& S, const Polynomial& C, std::size_t m, std::size_t s);

}  // namespace lsde
