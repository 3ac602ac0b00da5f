#include "anslab/spectral_field.hpp"

#include <cmath>

namespace anslab {

Real SpectralField::hermitian_defect() const {
    Real worst = 0;
    const Grid& g = *grid_;
    for (std::int64_t i = 0; i < g.total(); ++i) {
        const std::int64_t j = g.conjugate_index(i);
        if (j < i) continue;
        worst = std::max(worst, std::abs(coeffs_[i] - std::conj(coeffs_[j])));
    }
    return worst;
}

void SpectralField::symmetrize() {
    const Grid& g = *grid_;
    for (std::int64_t i = 0; i < g.total(); ++i) {
        const std::int64_t j = g.conjugate_index(i);
        if (j < i) continue;
        if (j == i) {
            coeffs_[i] = coeffs_[i].real();
        } else {
            const Complex avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[j]));
            coeffs_[i] = avg;
            coeffs_[j] = std::conj(avg);
        }
    }
}

Real SpectralField::l2_norm() const {
    // Parseval with the series convention: ||f||_L2^2 = vol * sum |c|^2.
    const Real s = (coeffs_ * coeffs_.conjugate()).real().sum();
    return std::sqrt(grid_->box_volume() * s);
}

namespace {

Real norm_h(const std::vector<Real>& xi) {
    Real s = 0;
    for (std::size_t a = 0; a + 1 < xi.size(); ++a) s += xi[a] * xi[a];
    return std::sqrt(s);
}

Real norm_full(const std::vector<Real>& xi) {
    Real s = 0;
    for (Real x : xi) s += x * x;
    return std::sqrt(s);
}

}  // namespace

MultiplierSymbol MultiplierSymbol::fractional_laplacian(Real s) {
    return {"|xi|^" + std::to_string(s), [s](const std::vector<Real>& xi) -> Complex {
                const Real r = norm_full(xi);
                return r == 0 ? 0.0 : std::pow(r, s);
            }};
}

MultiplierSymbol MultiplierSymbol::horizontal_fractional(Real s) {
    return {"|xi_h|^" + std::to_string(s), [s](const std::vector<Real>& xi) -> Complex {
                const Real r = norm_h(xi);
                return r == 0 ? 0.0 : std::pow(r, s);
            }};
}

MultiplierSymbol MultiplierSymbol::anisotropic_fractional(Real s, Real eps) {
    return {"(|xi_h|^2+eps^2 xi_n^2)^{s/2}",
            [s, eps](const std::vector<Real>& xi) -> Complex {
                const Real rh = norm_h(xi);
                const Real rn = eps * xi.back();
                const Real r2 = rh * rh + rn * rn;
                return r2 == 0 ? 0.0 : std::pow(r2, 0.5 * s);
            }};
}

MultiplierSymbol MultiplierSymbol::vertical_exponential(Real radius) {
    return {"e^{r|xi_n|}", [radius](const std::vector<Real>& xi) -> Complex {
                return std::exp(radius * std::abs(xi.back()));
            }};
}

MultiplierSymbol MultiplierSymbol::heat_semigroup(Real t) {
    return {"e^{-t|xi|^2}", [t](const std::vector<Real>& xi) -> Complex {
                const Real r = norm_full(xi);
                return std::exp(-t * r * r);
            }};
}

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m) {
    const Grid& g = f.grid();
    ArrayXc out(g.total());
    std::vector<int> idx;
    std::vector<Real> xi(g.dim());
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, idx);
        for (int a = 0; a < g.dim(); ++a) xi[a] = g.frequency(a, idx[a]);
        const Complex v = m.eval(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("apply_multiplier: symbol not finite on lattice (" + m.tag + ")");
        out[i] = v * f.at(i);
    }
    return SpectralField(f.grid_ptr(), std::move(out));
}

ArrayXr multiplier_table(const Grid& g, const std::function<Real(const std::vector<Real>&)>& m) {
    ArrayXr out(g.total());
    std::vector<int> idx;
    std::vector<Real> xi(g.dim());
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, idx);
        for (int a = 0; a < g.dim(); ++a) xi[a] = g.frequency(a, idx[a]);
        out[i] = m(xi);
    }
    return out;
}

}  // namespace anslab
