#pragma once

#include "anslab/spectral_field.hpp"

#include <limits>
#include <span>

namespace anslab {

inline constexpr Real kInf = std::numeric_limits<Real>::infinity();

enum class Axis { Horizontal, Vertical };

/// Smooth dyadic cutoff pair (chi, phi). chi = 1 on r <= 1, 0 on r >= 4/3
/// with a smooth bump-integral bridge; phi(r) = chi(r/2) - chi(r), so the
/// rings telescope exactly: sum_j phi(2^{-j} r) = 1 for r > 0.
Real dyadic_chi(Real r);
Real dyadic_phi(Real r);

/// Precomputed ring filters phi(2^{-k}|xi_h|), phi(2^{-j}|xi_n|) on a grid,
/// with the resolvable index ranges.
class DyadicPartition {
public:
    explicit DyadicPartition(std::shared_ptr<const Grid> grid);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int k_count() const { return k_max_ - k_min_ + 1; }
    int j_count() const { return j_max_ - j_min_ + 1; }

    /// phi(2^{-k}|xi_h|) over the flat lattice; zero array for k out of range.
    const ArrayXr& ring_h(int k) const;
    /// phi(2^{-j}|xi_n|) indexed by the vertical lattice position only.
    const ArrayXr& ring_v(int j) const;

    const ArrayXr& radius_h() const { return rh_; }        // |xi_h| per flat mode
    const ArrayXr& vertical_freq() const { return fn_; }   // |xi_n| per vertical index

private:
    std::shared_ptr<const Grid> grid_;
    int k_min_, k_max_, j_min_, j_max_;
    ArrayXr rh_;
    ArrayXr fn_;
    std::vector<ArrayXr> rings_h_;
    std::vector<ArrayXr> rings_v_;
    ArrayXr zero_flat_;
    ArrayXr zero_vert_;
};

/// Norm signature of an anisotropic Besov / Chemin-Lerner space.
struct BesovSpec {
    Real sigma = 0;   // horizontal regularity
    Real s = 0.5;     // vertical regularity
    Real p = 2;       // horizontal integrability in {1, 2, 4, inf}
    Real r = 1;       // summation exponent in {1, 2, inf}
    Real rho = kInf;  // time exponent for Chemin-Lerner norms

    void validate() const;
};

/// Delta_{k,j} f: ring filter in both directions.
SpectralField block(const SpectralField& f, int k, int j, const DyadicPartition& part);
/// Single-direction ring Delta_k^h or Delta_j^v.
SpectralField block_axis(const SpectralField& f, int k, Axis axis, const DyadicPartition& part);
/// S_l = sum of rings below l - 1 (multiplier chi(2^{-l} r), zero plane excluded).
SpectralField low_pass(const SpectralField& f, int l, Axis axis, const DyadicPartition& part);

/// ||f||_{L^p_h(L^2_v)}: discrete L^2 over the vertical axis per horizontal
/// point, then the discrete L^p over horizontal points (p = inf uses max).
Real mixed_norm(const SpectralField& f, Real p);
Real mixed_norm_physical(const Grid& grid, const ArrayXr& samples, Real p);

/// Table of per-(k,j) mixed norms ||Delta_{k,j} f||_{L^p_h(L^2_v)}.
struct BlockNormTable {
    int k0 = 0, j0 = 0;
    Eigen::MatrixXd value;  // k_count x j_count

    Real at(int k, int j) const { return value(k - k0, j - j0); }
};

/// Builds block-norm tables via one horizontal inverse transform per ring k;
/// the vertical direction stays spectral (Parseval). Each entry of
/// `vertical_weights_sq` is the square of a nonnegative vertical multiplier
/// w(|xi_n|), indexed by vertical lattice position, and yields the table of
/// the weighted field w(D_n) f. An empty span computes the plain table.
std::vector<BlockNormTable> block_norm_tables(const SpectralField& f, Real p,
                                              const DyadicPartition& part,
                                              std::span<const ArrayXr> vertical_weights_sq);
BlockNormTable block_norm_table(const SpectralField& f, Real p, const DyadicPartition& part);

/// sqrt of the entrywise sum of squares (vector field norm per block).
BlockNormTable combine_tables(std::span<const BlockNormTable> tables);

/// Weighted l^r sum: || 2^{k sigma} 2^{j s} T(k,j) ||_{l^r}.
Real besov_from_table(const BlockNormTable& table, const BesovSpec& spec);

Real besov_norm(const SpectralField& f, const BesovSpec& spec, const DyadicPartition& part);
Real besov_norm(const VectorField& v, const BesovSpec& spec, const DyadicPartition& part);

/// Definition clause (2): lift by kk horizontal and ll vertical derivatives
/// and sum the norms of the derivatives at the reduced indices.
Real derivative_lifted_besov_norm(const SpectralField& f, const BesovSpec& spec,
                                  int kk, int ll, const DyadicPartition& part);

/// Chemin-Lerner norm over uniformly spaced time samples: per-(k,j)
/// L^rho in time by left-rectangle quadrature (max for rho = inf), then
/// the weighted l^r sum.
Real chemin_lerner_norm(std::span<const BlockNormTable> samples, Real dt, const BesovSpec& spec);
Real chemin_lerner_norm(std::span<const SpectralField> samples, Real dt, const BesovSpec& spec,
                        const DyadicPartition& part);

}  // namespace anslab
