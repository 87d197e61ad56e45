#pragma once

#include "lsde/core.hpp"
#include "lsde/hamiltonian.hpp"
#include "lsde/rules.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lsde {

/// Scalar function on a product of `copies` copies of the system manifold.
struct FirstIntegral {
    std::string name;
    std::size_t copies = 0;
    ScalarFunction fn;
};

/// A named coefficient slot of a catalog constructor. Real-only slots accept constants.
struct ParamSlot {
    std::string name;
    CoefficientFn value;
    bool real_only = false;
};

using ParamOverrides = std::map<std::string, CoefficientFn>;

struct CatalogEntry {
    std::string name;
    LieSystem sys;
    std::optional<HamiltonianStructure> ham;
    // Bracket relations are encoded in ham; the fields they pair with
    // live on ham->base_copies copies of the system manifold.
    std::vector<FirstIntegral> integrals;
    std::optional<SuperpositionRule> rule;
    std::size_t m = 0;
    std::vector<ParamSlot> params;

    // Generic initial data for verification protocols.
    Vec default_target;
    std::vector<Vec> default_particulars;
    std::vector<Vec> default_integral_copies;

    // VG fields prolonged to the manifold of ham (empty without ham).
    std::vector<VectorField> hamiltonian_fields() const;
};

/// Coefficient functions of the Riccati system
///   dx = (b2 x^2 + b1 x + b0) dt + (b2' x^2 + b1' x + b0') o dW.
struct RiccatiParams {
    CoefficientFn b0 = CoefficientFn::constant(1.0);
    CoefficientFn b1 = CoefficientFn::constant(0.0);
    CoefficientFn b2 = CoefficientFn::constant(-1.0);
    CoefficientFn bp0 = CoefficientFn::constant(0.0);
    CoefficientFn bp1 = CoefficientFn::constant(0.1);
    CoefficientFn bp2 = CoefficientFn::constant(0.0);
};

/// dx = v dt, dv = -(w2 x + g v) dt - (wB2 x + gB v) o dW.
struct OscillatorParams {
    CoefficientFn omega2 = CoefficientFn::constant(1.0);
    CoefficientFn gamma = CoefficientFn::constant(0.0);
    CoefficientFn omega_b2 = CoefficientFn::constant(0.0);
    CoefficientFn gamma_b = CoefficientFn::constant(0.1);
};

/// d rho = v dt, dv = (-omega^2 rho + k / rho^3) dt + sigma rho o dW.
struct ErmakovParams {
    CoefficientFn omega = CoefficientFn::constant(1.0);
    double sigma = 0.1;
    double k = 1.0;
};

/// dH = -A H dt - B H dW, dR = -A R dt + B H dW.
struct CoronaParams {
    CoefficientFn a = CoefficientFn::constant(0.3);
    CoefficientFn b = CoefficientFn::constant(0.1);
    // Read the noise as Ito and convert it to the equivalent Stratonovich drift.
    bool ito_reading = false;
};

/// dN1 = (b1 - a1 N2) N1 dt + s1 N1 o dW1, dN2 = b2 N2 dt + s2 N2 o dW2.
struct LvDiffusionParams {
    CoefficientFn b1 = CoefficientFn::constant(1.0);
    CoefficientFn a1 = CoefficientFn::constant(0.5);
    CoefficientFn sigma1 = CoefficientFn::constant(0.1);
    double b2 = 0.2;
    double sigma2 = 0.1;
};

/// dN1 = (b1 - a1 N2) N1 dt, dN2 = b2 N2 dt + s2 o dW.
struct LvAdditiveParams {
    CoefficientFn b1 = CoefficientFn::constant(1.0);
    CoefficientFn b2 = CoefficientFn::constant(0.2);
    CoefficientFn a1 = CoefficientFn::constant(0.5);
    CoefficientFn sigma2 = CoefficientFn::constant(0.1);
};

CatalogEntry riccati(const RiccatiParams& p = {});
CatalogEntry oscillator(const OscillatorParams& p = {});
// Riccati entry satisfied by x / v along oscillator solutions.
CatalogEntry riccati_reduction(const OscillatorParams& p = {});
CatalogEntry ermakov(const ErmakovParams& p = {});
CatalogEntry corona(const CoronaParams& p = {});
CatalogEntry lv_diffusion(const LvDiffusionParams& p = {});
CatalogEntry lv_additive(const LvAdditiveParams& p = {});

// Geometric Brownian motion dx = mu x dt + sigma x o dW on the real line
// (auxiliary system for convergence studies; not part of the catalog list).
LieSystem gbm(double mu, double sigma);

// Names accepted by make_entry, in listing order.
const std::vector<std::string>& catalog_names();

// Builds an entry by name; overrides replace named coefficient slots.
// Throws PreconditionError for unknown names or slots.
CatalogEntry make_entry(const std::string& name, const ParamOverrides& overrides = {});

// Default slots of an entry (used for config validation and echo).
std::vector<ParamSlot> default_params(const std::string& name);

}  // namespace lsde
