#pragma once

#include "anslab/dyadic.hpp"

#include <random>

namespace anslab {

/// One-direction Bony split: fg = T + Ttilde + R (minus the excluded
/// zero-frequency planes), each term dealiased.
struct AxisBonyTerms {
    SpectralField low_high;   // T  = sum_k S_{k-1} f Delta_k g
    SpectralField high_low;   // Tt = sum_k Delta_k f S_{k-1} g
    SpectralField remainder;  // R  = sum_k Delta_k f Dtilde_k g
};

AxisBonyTerms bony_split_axis(const SpectralField& f, const SpectralField& g, Axis axis,
                              const DyadicPartition& part);

/// The nine-term anisotropic decomposition (horizontal x vertical).
/// Index [h][v] with 0 = T, 1 = Ttilde, 2 = R in each direction.
struct BonyTerms {
    std::vector<SpectralField> terms;  // 9 fields, row-major [h*3+v]

    const SpectralField& at(int h, int v) const { return terms[h * 3 + v]; }
    SpectralField sum() const;
};

BonyTerms bony_split_2d(const SpectralField& f, const SpectralField& g,
                        const DyadicPartition& part);

/// Empirical constant of the product law: the norm of fg in
/// B^{sigma1+sigma2-(n-1)/p, 1/2}_{p,1} over the product of the factor
/// norms in B^{sigma_i, 1/2}_{p,1}.
Real product_law_ratio(const SpectralField& f, const SpectralField& g, Real sigma1, Real sigma2,
                       Real p, const DyadicPartition& part);

/// Same ratio with every norm taken after the vertical-analyticity weight
/// e^{radius |xi_n|}; radius 0 reduces exactly to the unweighted ratio.
Real weighted_product_law_ratio(const SpectralField& f, const SpectralField& g, Real sigma1,
                                Real sigma2, Real p, Real radius, const DyadicPartition& part);

/// A dyadically localized random bump: ring (k, j) modes with random
/// phases, Hermitian, dealiased, unit mixed norm.
SpectralField make_localized_bump(const std::shared_ptr<const Grid>& grid, int k, int j,
                                  std::mt19937_64& rng, const DyadicPartition& part);

/// Corpus member: a sum of 1-8 localized bumps with random rings and
/// phases, normalized to unit mixed norm.
SpectralField make_corpus_field(const std::shared_ptr<const Grid>& grid, std::mt19937_64& rng,
                                const DyadicPartition& part, Real p = 2);

}  // namespace anslab
