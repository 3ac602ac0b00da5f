#pragma once

#include "anslab/spectral_field.hpp"

namespace anslab {

/// Inverse DFT to grid samples. Rejects fields whose Hermitian defect
/// exceeds 1e-10 (the field would not be real-valued).
ArrayXr to_physical(const SpectralField& f);

/// Forward DFT of grid samples; carries the 1/N_total normalization.
SpectralField to_spectral(const ArrayXr& samples, const std::shared_ptr<const Grid>& grid);

/// Complex-to-complex transforms on raw coefficient arrays (no
/// normalization applied by inverse; forward applies 1/N_total).
void dft_forward(const Grid& grid, ArrayXc& data);
void dft_inverse(const Grid& grid, ArrayXc& data);

/// Inverse transform over the horizontal axes only; the vertical axis
/// stays spectral. Used by the mixed-norm machinery, where the vertical
/// L^2 is taken by Parseval.
void dft_inverse_horizontal(const Grid& grid, ArrayXc& data);

}  // namespace anslab
