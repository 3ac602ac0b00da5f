#pragma once

#include "anslab/operators.hpp"
#include "anslab/transforms.hpp"

#include <random>

namespace anslab::testutil {

inline std::shared_ptr<const Grid> make_grid(std::vector<int> sizes) {
    return std::make_shared<Grid>(std::move(sizes));
}

inline Real rel_err(const ArrayXc& got, const ArrayXc& want) {
    const Real scale = std::sqrt(want.abs2().sum());
    if (scale == 0) return std::sqrt(got.abs2().sum());
    return std::sqrt((got - want).abs2().sum()) / scale;
}

inline Real rel_err(const SpectralField& got, const SpectralField& want) {
    return rel_err(got.coeffs(), want.coeffs());
}

/// L2 inner product via Parseval.
inline Real inner(const SpectralField& f, const SpectralField& g) {
    return f.grid().box_volume() * (f.coeffs().conjugate() * g.coeffs()).sum().real();
}

inline Real inner(const VectorField& a, const VectorField& b) {
    Real s = 0;
    for (int c = 0; c < a.dim(); ++c) s += inner(a[c], b[c]);
    return s;
}

inline SpectralField random_field(const std::shared_ptr<const Grid>& grid, std::mt19937_64& rng,
                                  bool strip_planes = true) {
    std::normal_distribution<Real> gauss(0.0, 1.0);
    SpectralField f(grid);
    for (std::int64_t i = 0; i < grid->total(); ++i)
        f.at(i) = Complex(gauss(rng), gauss(rng));
    f.symmetrize();
    dealias(f);
    if (strip_planes) remove_excluded_planes(f);
    return f;
}

inline VectorField random_divfree(const std::shared_ptr<const Grid>& grid, std::mt19937_64& rng,
                                  Real amplitude = 1.0) {
    VectorField v(grid);
    for (int c = 0; c < v.dim(); ++c) {
        v[c] = random_field(grid, rng);
        v[c].coeffs() *= amplitude;
    }
    v = leray_project(v);
    dealias(v);
    remove_excluded_planes(v);
    return v;
}

/// Sets the conjugate mode pair for cos(xi . x) with the given amplitude.
inline void add_cos_mode(SpectralField& f, const std::vector<int>& wave, Real amp) {
    const Grid& g = f.grid();
    std::int64_t flat = 0;
    for (int a = 0; a < g.dim(); ++a) {
        const int n = g.size(a);
        const int idx = wave[a] >= 0 ? wave[a] : wave[a] + n;
        flat += static_cast<std::int64_t>(idx) * g.stride(a);
    }
    f.at(flat) += Complex(0.5 * amp, 0);
    f.at(g.conjugate_index(flat)) += Complex(0.5 * amp, 0);
}

/// Same for sin(xi . x).
inline void add_sin_mode(SpectralField& f, const std::vector<int>& wave, Real amp) {
    const Grid& g = f.grid();
    std::int64_t flat = 0;
    for (int a = 0; a < g.dim(); ++a) {
        const int n = g.size(a);
        const int idx = wave[a] >= 0 ? wave[a] : wave[a] + n;
        flat += static_cast<std::int64_t>(idx) * g.stride(a);
    }
    f.at(flat) += Complex(0, -0.5 * amp);
    f.at(g.conjugate_index(flat)) += Complex(0, 0.5 * amp);
}

}  // namespace anslab::testutil
