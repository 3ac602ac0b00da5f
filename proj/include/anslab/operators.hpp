#pragma once

#include "anslab/spectral_field.hpp"

namespace anslab {

/// d/dx_axis in spectral space (i*xi_axis). The self-paired Nyquist
/// plane is zeroed so the result stays real-valued.
SpectralField derivative(const SpectralField& f, int axis);

/// sum_i d_i v^i.
SpectralField divergence(const VectorField& v);

/// Zero every mode with |wave index| > N_i/3 on any axis (2/3 rule).
void dealias(SpectralField& f);
void dealias(VectorField& v);

/// Zero the xi_h = 0 and xi_n = 0 planes (the torus stand-in for working
/// modulo polynomials; these planes are invisible to the dyadic calculus).
void remove_excluded_planes(SpectralField& f);
void remove_excluded_planes(VectorField& v);

/// Pointwise product computed in physical space; inputs and output are
/// dealiased, so the result equals the truncated convolution exactly.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// v - grad Laplace^{-1} div v; the xi = 0 mode is untouched.
VectorField leray_project(const VectorField& v);

struct NonlinearResult {
    VectorField advection;      // v . grad v, dealiased
    bool divergence_warning;    // input divergence residual above tolerance
    Real divergence_residual;
};

/// Advection term v . grad v via dealiased pseudospectral products.
NonlinearResult nonlinear_term(const VectorField& v, Real div_tolerance = 1e-8);

struct PressureSplit {
    SpectralField q1, q2, q3;
    std::int64_t zero_symbol_modes;  // modes where (-Delta_eps)^{-1} was set to 0
};

/// Three-part pressure of the rescaled system: q1 from horizontal
/// products, q2 from the mixed terms, q3 = -2(-Delta_eps)^{-1} d_n (v^n div_h v^h).
/// At eps = 0 the inverse degenerates to -Delta_h and every xi_h = 0 mode
/// is zeroed and counted.
PressureSplit pressure_split(const VectorField& v, Real eps);

/// Inverse of |xi_h|^2 + eps^2 xi_n^2 applied modewise; zero-symbol modes
/// map to zero, count reported via out param if non-null.
SpectralField inverse_anisotropic_laplacian(const SpectralField& f, Real eps,
                                            std::int64_t* zero_modes = nullptr);

}  // namespace anslab
