#pragma once

#include "anslab/spectral_field.hpp"

#include <stdexcept>

namespace anslab {

/// Exceeding e^{40} on any lattice mode is rejected.
inline constexpr Real kWeightExponentCap = 40.0;

struct WeightGuardError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when the analyticity radius would drop below alpha/2.
struct RadiusGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// f -> f_Phi: multiplier e^{radius |xi_n|} on the vertical frequency.
SpectralField apply_weight(const SpectralField& f, Real radius);
VectorField apply_weight(const VectorField& v, Real radius);

/// Squared weight e^{2 radius |xi_n|} per vertical lattice index, the form
/// consumed by the block-norm tables.
ArrayXr vertical_weight_sq(const Grid& grid, Real radius);

/// Analyticity bookkeeping: radius(t) = alpha - lambda * theta(t) with
/// theta the running time integral of the weighted vertical-component norm.
struct AnalyticityState {
    Real alpha = 1.0;
    Real lambda = 20.0;
    Real theta = 0.0;
    Real t = 0.0;

    Real radius() const { return alpha - lambda * theta; }
};

/// Left-rectangle accumulation theta += norm * dt. Throws RadiusGuardError
/// when the updated radius falls below alpha/2 (the continuation guard).
AnalyticityState theta_step(const AnalyticityState& state, Real vn_weighted_norm, Real dt);

/// Diagnostic mirror of the proof's per-block damping bookkeeping:
/// e^{-(2^{ks} + eps^s 2^{js}) dt} * e^{-lambda 2^j theta_increment}.
Real duhamel_weighted_step_factor(int k, int j, Real dt, Real s, Real eps, Real lambda,
                                  Real theta_increment);

}  // namespace anslab
