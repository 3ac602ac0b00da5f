#include "anslab/operators.hpp"

#include "anslab/transforms.hpp"

#include <cmath>

namespace anslab {
namespace {

// Per-mode geometry walker. Calls fn(flat, xi) with physical frequencies.
template <class F>
void for_each_mode(const Grid& g, F&& fn) {
    std::vector<int> idx;
    std::vector<Real> xi(g.dim());
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, idx);
        for (int a = 0; a < g.dim(); ++a) xi[a] = g.frequency(a, idx[a]);
        fn(i, idx, xi);
    }
}

Real horizontal_sq(const std::vector<Real>& xi) {
    Real s = 0;
    for (std::size_t a = 0; a + 1 < xi.size(); ++a) s += xi[a] * xi[a];
    return s;
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
    const Grid& g = f.grid();
    ArrayXc out(g.total());
    const int nyq = g.size(axis) / 2;
    for_each_mode(g, [&](std::int64_t i, const std::vector<int>& idx, const std::vector<Real>& xi) {
        out[i] = (g.wave_index(axis, idx[axis]) == nyq)
                     ? Complex(0, 0)
                     : Complex(0, xi[axis]) * f.at(i);
    });
    return SpectralField(f.grid_ptr(), std::move(out));
}

SpectralField divergence(const VectorField& v) {
    const Grid& g = v.grid();
    SpectralField out(v.grid_ptr());
    for (int c = 0; c < g.dim(); ++c) out.coeffs() += derivative(v[c], c).coeffs();
    return out;
}

void dealias(SpectralField& f) {
    const Grid& g = f.grid();
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, idx);
        for (int a = 0; a < g.dim(); ++a) {
            if (3 * std::abs(g.wave_index(a, idx[a])) > g.size(a)) {
                f.at(i) = 0;
                break;
            }
        }
    }
}

void dealias(VectorField& v) {
    for (int c = 0; c < v.dim(); ++c) dealias(v[c]);
}

void remove_excluded_planes(SpectralField& f) {
    const Grid& g = f.grid();
    const int d = g.dim();
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, idx);
        bool h_zero = true;
        for (int a = 0; a < d - 1 && h_zero; ++a) h_zero = idx[a] == 0;
        if (h_zero || idx[d - 1] == 0) f.at(i) = 0;
    }
}

void remove_excluded_planes(VectorField& v) {
    for (int c = 0; c < v.dim(); ++c) remove_excluded_planes(v[c]);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    SpectralField ft = f, gt = g;
    dealias(ft);
    dealias(gt);
    const ArrayXr pf = to_physical(ft);
    const ArrayXr pg = to_physical(gt);
    SpectralField out = to_spectral(pf * pg, f.grid_ptr());
    dealias(out);
    return out;
}

VectorField leray_project(const VectorField& v) {
    const Grid& g = v.grid();
    const int d = g.dim();
    VectorField out = v;
    for_each_mode(g, [&](std::int64_t i, const std::vector<int>&, const std::vector<Real>& xi) {
        Real norm2 = 0;
        for (Real x : xi) norm2 += x * x;
        if (norm2 == 0) return;  // mean mode untouched
        Complex dot = 0;
        for (int c = 0; c < d; ++c) dot += xi[c] * v[c].at(i);
        dot /= norm2;
        for (int c = 0; c < d; ++c) out[c].at(i) -= xi[c] * dot;
    });
    return out;
}

NonlinearResult nonlinear_term(const VectorField& v, Real div_tolerance) {
    const Grid& g = v.grid();
    const int d = g.dim();

    const Real div_res = divergence(v).l2_norm();
    const Real scale = 1.0 + v.l2_norm();

    VectorField vt = v;
    dealias(vt);
    std::vector<ArrayXr> vp(d);
    for (int c = 0; c < d; ++c) vp[c] = to_physical(vt[c]);

    VectorField adv(v.grid_ptr());
    for (int c = 0; c < d; ++c) {
        ArrayXr acc = ArrayXr::Zero(g.total());
        for (int a = 0; a < d; ++a) {
            SpectralField dva = derivative(vt[c], a);
            acc += vp[a] * to_physical(dva);
        }
        adv[c] = to_spectral(acc, v.grid_ptr());
        dealias(adv[c]);
    }
    return {std::move(adv), div_res > div_tolerance * scale, div_res};
}

SpectralField inverse_anisotropic_laplacian(const SpectralField& f, Real eps,
                                            std::int64_t* zero_modes) {
    const Grid& g = f.grid();
    ArrayXc out(g.total());
    std::int64_t zeros = 0;
    for_each_mode(g, [&](std::int64_t i, const std::vector<int>&, const std::vector<Real>& xi) {
        const Real sym = horizontal_sq(xi) + eps * eps * xi.back() * xi.back();
        if (sym == 0) {
            out[i] = 0;
            ++zeros;
        } else {
            out[i] = f.at(i) / sym;
        }
    });
    if (zero_modes) *zero_modes = zeros;
    return SpectralField(f.grid_ptr(), std::move(out));
}

PressureSplit pressure_split(const VectorField& v, Real eps) {
    if (eps < 0) throw std::invalid_argument("pressure_split: eps must be >= 0");
    const Grid& g = v.grid();
    const int d = g.dim();
    const int h = d - 1;

    // q1: horizontal-horizontal products.
    SpectralField rhs1(v.grid_ptr());
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            SpectralField w = dealiased_product(v[i], v[j]);
            rhs1.coeffs() += derivative(derivative(w, i), j).coeffs();
        }
    // q2: mixed products, factor 2.
    SpectralField rhs2(v.grid_ptr());
    for (int i = 0; i < h; ++i) {
        SpectralField w = dealiased_product(v[i], v.vertical());
        rhs2.coeffs() += 2.0 * derivative(derivative(w, i), d - 1).coeffs();
    }
    // q3: -2 d_n (v^n div_h v^h).
    SpectralField divh(v.grid_ptr());
    for (int i = 0; i < h; ++i) divh.coeffs() += derivative(v[i], i).coeffs();
    SpectralField w3 = dealiased_product(v.vertical(), divh);
    SpectralField rhs3(v.grid_ptr());
    rhs3.coeffs() = -2.0 * derivative(w3, d - 1).coeffs();

    std::int64_t z1 = 0, z2 = 0, z3 = 0;
    PressureSplit out{inverse_anisotropic_laplacian(rhs1, eps, &z1),
                      inverse_anisotropic_laplacian(rhs2, eps, &z2),
                      inverse_anisotropic_laplacian(rhs3, eps, &z3), 0};
    out.zero_symbol_modes = std::max({z1, z2, z3});
    return out;
}

}  // namespace anslab
