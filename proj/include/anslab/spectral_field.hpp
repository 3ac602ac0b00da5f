#pragma once

#include "anslab/grid.hpp"

#include <functional>
#include <memory>
#include <string>

namespace anslab {

/// A real scalar field on the periodic box, stored as its Fourier
/// coefficients on the full complex lattice. Coefficients follow the
/// Fourier-series convention: the forward transform carries 1/N_total,
/// so a mode with coefficient c contributes c * e^{i xi.x}.
class SpectralField {
public:
    explicit SpectralField(Grid grid)
        : grid_(std::make_shared<Grid>(std::move(grid))),
          coeffs_(ArrayXc::Zero(grid_->total())) {}

    SpectralField(std::shared_ptr<const Grid> grid, ArrayXc coeffs)
        : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != grid_->total())
            throw std::invalid_argument("SpectralField: coefficient count mismatch");
    }

    explicit SpectralField(std::shared_ptr<const Grid> grid)
        : grid_(std::move(grid)), coeffs_(ArrayXc::Zero(grid_->total())) {}

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }

    ArrayXc& coeffs() { return coeffs_; }
    const ArrayXc& coeffs() const { return coeffs_; }

    Complex& at(std::int64_t flat) { return coeffs_[flat]; }
    Complex at(std::int64_t flat) const { return coeffs_[flat]; }

    /// Max |coeffs(-xi) - conj(coeffs(xi))| over the lattice.
    Real hermitian_defect() const;

    /// Project onto the Hermitian (real-field) subspace.
    void symmetrize();

    /// sqrt(volume factor) weighted l2 of coefficients; equals the
    /// physical-space L2 norm by Parseval.
    Real l2_norm() const;

    bool same_grid(const SpectralField& o) const { return *grid_ == o.grid(); }

private:
    std::shared_ptr<const Grid> grid_;
    ArrayXc coeffs_;
};

/// Velocity field v = (v^h, v^n): dim() scalar components on one grid.
class VectorField {
public:
    explicit VectorField(const std::shared_ptr<const Grid>& grid) {
        for (int i = 0; i < grid->dim(); ++i) components_.emplace_back(grid);
    }
    explicit VectorField(const Grid& grid)
        : VectorField(std::make_shared<Grid>(grid)) {}

    int dim() const { return static_cast<int>(components_.size()); }
    const Grid& grid() const { return components_.front().grid(); }
    std::shared_ptr<const Grid> grid_ptr() const { return components_.front().grid_ptr(); }

    SpectralField& operator[](int i) { return components_[i]; }
    const SpectralField& operator[](int i) const { return components_[i]; }

    /// Vertical component v^n.
    SpectralField& vertical() { return components_.back(); }
    const SpectralField& vertical() const { return components_.back(); }

    Real l2_norm() const {
        Real s = 0;
        for (const auto& c : components_) { const Real x = c.l2_norm(); s += x * x; }
        return std::sqrt(s);
    }

private:
    std::vector<SpectralField> components_;
};

/// Fourier multiplier m(xi). Evaluated on physical frequencies, so the
/// same symbol is correct on rescaled boxes.
struct MultiplierSymbol {
    std::string tag;
    std::function<Complex(const std::vector<Real>& xi)> eval;

    static MultiplierSymbol fractional_laplacian(Real s);          // |xi|^s
    static MultiplierSymbol horizontal_fractional(Real s);         // |xi_h|^s
    static MultiplierSymbol anisotropic_fractional(Real s, Real eps);  // (|xi_h|^2+eps^2 xi_n^2)^{s/2}
    static MultiplierSymbol vertical_exponential(Real radius);     // e^{radius |xi_n|}
    static MultiplierSymbol heat_semigroup(Real t);                // e^{-t |xi|^2}
};

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m);

/// Precompute m(xi) over the lattice for hot loops.
ArrayXr multiplier_table(const Grid& grid, const std::function<Real(const std::vector<Real>&)>& m);

}  // namespace anslab
