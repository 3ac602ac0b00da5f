#include "doctest.h"
#include "test_util.hpp"

#include "anslab/operators.hpp"
#include "anslab/transforms.hpp"

#include <numbers>

using namespace anslab;
using namespace anslab::testutil;

namespace {
constexpr Real kPi = std::numbers::pi;
}

TEST_CASE("grid validation and lattice conventions") {
    CHECK_THROWS_AS(Grid({4, 8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(Grid({8, 12, 8}), std::invalid_argument);
    Grid g({8, 8, 16});
    CHECK(g.total() == 8 * 8 * 16);
    CHECK(g.wave_index(0, 0) == 0);
    CHECK(g.wave_index(0, 4) == 4);   // Nyquist kept positive
    CHECK(g.wave_index(0, 5) == -3);
    CHECK(g.frequency(0, 1) == doctest::Approx(1.0));
    CHECK(g.max_vertical_frequency() == doctest::Approx(8.0));
}

TEST_CASE("to_physical: DC mode gives the constant field") {
    auto grid = make_grid({8, 8, 8});
    SpectralField f(grid);
    f.at(0) = Complex(1, 0);
    const ArrayXr phys = to_physical(f);
    CHECK((phys - 1.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("to_physical: cos(x1) mode reproduces grid samples") {
    auto grid = make_grid({16, 16, 16});
    SpectralField f(grid);
    add_cos_mode(f, {1, 0, 0}, 1.0);
    const ArrayXr phys = to_physical(f);
    std::vector<int> idx;
    Real worst = 0;
    for (std::int64_t i = 0; i < grid->total(); ++i) {
        grid->unflatten(i, idx);
        worst = std::max(worst, std::abs(phys[i] - std::cos(2 * kPi * idx[0] / 16.0)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("round-trip and Parseval on random Hermitian fields") {
    auto grid = make_grid({16, 8, 16});
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        SpectralField f = random_field(grid, rng, false);
        const ArrayXr phys = to_physical(f);
        SpectralField back = to_spectral(phys, grid);
        CHECK(rel_err(back, f) < 1e-12);

        const Real phys_l2 = std::sqrt((phys.square()).sum() * grid->cell_volume());
        CHECK(f.l2_norm() == doctest::Approx(phys_l2).epsilon(1e-12));
    }
}

TEST_CASE("hermitian defect rejection") {
    auto grid = make_grid({8, 8, 8});
    SpectralField f(grid);
    f.at(1) = Complex(1, 1);  // no conjugate partner
    CHECK(f.hermitian_defect() > 1e-10);
    CHECK_THROWS_AS(to_physical(f), std::invalid_argument);
    f.symmetrize();
    CHECK(f.hermitian_defect() < 1e-15);
}

TEST_CASE("apply_multiplier: symbol examples") {
    auto grid = make_grid({16, 16, 16});

    SpectralField c1(grid);
    add_cos_mode(c1, {1, 0, 0}, 1.0);
    SpectralField lap = apply_multiplier(c1, MultiplierSymbol::fractional_laplacian(2.0));
    CHECK(rel_err(lap, c1) < 1e-14);  // |xi|^2 = 1 on the mode

    SpectralField cn(grid);
    add_cos_mode(cn, {0, 0, 1}, 1.0);
    SpectralField dead = apply_multiplier(cn, MultiplierSymbol::anisotropic_fractional(1.5, 0.0));
    CHECK(std::sqrt(dead.coeffs().abs2().sum()) < 1e-14);

    SpectralField mixed(grid);
    add_cos_mode(mixed, {2, 0, 5}, 1.0);
    SpectralField lifted = apply_multiplier(mixed, MultiplierSymbol::horizontal_fractional(1.5));
    CHECK(rel_err(lifted.coeffs(), (mixed.coeffs() * std::pow(2.0, 1.5)).eval()) < 1e-13);
}

TEST_CASE("apply_multiplier composes pointwise") {
    auto grid = make_grid({8, 8, 8});
    std::mt19937_64 rng(11);
    SpectralField f = random_field(grid, rng, false);
    const auto m1 = MultiplierSymbol::fractional_laplacian(1.0);
    const auto m2 = MultiplierSymbol::horizontal_fractional(0.5);
    SpectralField ab = apply_multiplier(apply_multiplier(f, m1), m2);
    MultiplierSymbol prod{"product", [&](const std::vector<Real>& xi) {
                              return m1.eval(xi) * m2.eval(xi);
                          }};
    SpectralField direct = apply_multiplier(f, prod);
    // (f*m1)*m2 vs f*(m1*m2): only rounding-order noise allowed.
    CHECK(rel_err(ab, direct) < 1e-15);
}

TEST_CASE("divergence examples") {
    auto grid = make_grid({16, 16, 16});

    VectorField shear(grid);
    add_sin_mode(shear[0], {0, 1, 0}, 1.0);
    CHECK(divergence(shear).l2_norm() < 1e-14);

    VectorField constant(grid);
    for (int c = 0; c < 3; ++c) constant[c].at(0) = Complex(c + 1, 0);
    CHECK(divergence(constant).l2_norm() < 1e-15);

    VectorField vx(grid);
    add_sin_mode(vx[0], {1, 0, 0}, 1.0);
    SpectralField want(grid);
    add_cos_mode(want, {1, 0, 0}, 1.0);
    CHECK(rel_err(divergence(vx), want) < 1e-13);
}

TEST_CASE("leray projection") {
    auto grid = make_grid({16, 16, 16});
    std::mt19937_64 rng(3);

    VectorField v(grid);
    for (int c = 0; c < 3; ++c) v[c] = random_field(grid, rng, false);
    VectorField pv = leray_project(v);
    CHECK(divergence(pv).l2_norm() < 1e-12);

    VectorField ppv = leray_project(pv);
    for (int c = 0; c < 3; ++c) CHECK(rel_err(ppv[c], pv[c]) < 1e-12);

    // Pure gradient of sin(x1) is annihilated (mean modes aside).
    VectorField grad(grid);
    add_cos_mode(grad[0], {1, 0, 0}, 1.0);  // d1 sin(x1)
    VectorField killed = leray_project(grad);
    Real total = 0;
    for (int c = 0; c < 3; ++c) total += killed[c].coeffs().abs2().sum();
    CHECK(std::sqrt(total) < 1e-13);

    // Self-adjointness on the lattice inner product.
    VectorField a(grid), b(grid);
    for (int c = 0; c < 3; ++c) {
        a[c] = random_field(grid, rng, false);
        b[c] = random_field(grid, rng, false);
    }
    const Real lhs = inner(leray_project(a), b);
    const Real rhs_ip = inner(a, leray_project(b));
    CHECK(lhs == doctest::Approx(rhs_ip).epsilon(1e-12));
}

TEST_CASE("nonlinear term trivial cases") {
    auto grid = make_grid({16, 16, 16});

    VectorField shear(grid);
    add_sin_mode(shear[0], {0, 1, 0}, 1.0);
    auto res = nonlinear_term(shear);
    Real total = 0;
    for (int c = 0; c < 3; ++c) total += res.advection[c].coeffs().abs2().sum();
    CHECK(std::sqrt(total) < 1e-14);
    CHECK(!res.divergence_warning);

    VectorField constant(grid);
    for (int c = 0; c < 3; ++c) constant[c].at(0) = Complex(1, 0);
    auto cres = nonlinear_term(constant);
    total = 0;
    for (int c = 0; c < 3; ++c) total += cres.advection[c].coeffs().abs2().sum();
    CHECK(std::sqrt(total) < 1e-14);
}

namespace {

/// Direct convolution-sum v . grad v on a small lattice, dealiased output.
VectorField convolution_oracle(const VectorField& v) {
    const auto grid = v.grid_ptr();
    const Grid& g = *grid;
    const int d = g.dim();
    VectorField vt = v;
    dealias(vt);

    std::vector<std::int64_t> nz;
    std::vector<std::vector<int>> wave;
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.total(); ++i) {
        bool any = false;
        for (int c = 0; c < d; ++c) any = any || vt[c].at(i) != Complex(0);
        if (!any) continue;
        nz.push_back(i);
        g.unflatten(i, idx);
        std::vector<int> w(d);
        for (int a = 0; a < d; ++a) w[a] = g.wave_index(a, idx[a]);
        wave.push_back(w);
    }

    VectorField out(grid);
    for (std::size_t i1 = 0; i1 < nz.size(); ++i1)
        for (std::size_t i2 = 0; i2 < nz.size(); ++i2) {
            std::int64_t flat = 0;
            bool keep = true;
            for (int a = 0; a < d; ++a) {
                const int w = wave[i1][a] + wave[i2][a];
                if (std::abs(w) * 3 > g.size(a)) { keep = false; break; }
                const int pos = w >= 0 ? w : w + g.size(a);
                flat += static_cast<std::int64_t>(pos) * g.stride(a);
            }
            if (!keep) continue;
            for (int c = 0; c < d; ++c) {
                Complex acc = 0;
                for (int a = 0; a < d; ++a)
                    acc += vt[a].at(nz[i1]) * Complex(0, wave[i2][a]) * vt[c].at(nz[i2]);
                out[c].at(flat) += acc;
            }
        }
    return out;
}

}  // namespace

TEST_CASE("nonlinear term matches the brute-force convolution oracle") {
    auto grid = make_grid({8, 8, 8});
    std::mt19937_64 rng(17);
    VectorField v = random_divfree(grid, rng, 0.3);

    const VectorField oracle = convolution_oracle(v);
    const auto res = nonlinear_term(v);
    Real num = 0, den = 0;
    for (int c = 0; c < 3; ++c) {
        num += (res.advection[c].coeffs() - oracle[c].coeffs()).abs2().sum();
        den += oracle[c].coeffs().abs2().sum();
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("advection is energy-neutral on divergence-free fields") {
    auto grid = make_grid({16, 16, 16});
    std::mt19937_64 rng(23);
    VectorField v = random_divfree(grid, rng);
    const auto res = nonlinear_term(v);
    const Real cube = std::pow(v.l2_norm(), 3);
    CHECK(std::abs(inner(res.advection, v)) / cube < 1e-10);
}

TEST_CASE("pressure split trivial and residual cases") {
    auto grid = make_grid({16, 16, 16});

    VectorField shear(grid);
    add_sin_mode(shear[0], {0, 1, 0}, 1.0);
    auto ps = pressure_split(shear, 1.0);
    CHECK(std::sqrt(ps.q1.coeffs().abs2().sum()) < 1e-14);
    CHECK(std::sqrt(ps.q2.coeffs().abs2().sum()) < 1e-14);
    CHECK(std::sqrt(ps.q3.coeffs().abs2().sum()) < 1e-14);

    // v^n = 0 kills q2 and q3 identically.
    std::mt19937_64 rng(31);
    VectorField flat_v(grid);
    flat_v[0] = random_field(grid, rng);
    flat_v[1] = random_field(grid, rng);
    auto ps2 = pressure_split(flat_v, 1.0);
    CHECK(std::sqrt(ps2.q2.coeffs().abs2().sum()) == 0.0);
    CHECK(std::sqrt(ps2.q3.coeffs().abs2().sum()) == 0.0);
}

TEST_CASE("pressure split solves the anisotropic Poisson problem") {
    auto grid = make_grid({16, 16, 16});
    std::mt19937_64 rng(37);
    VectorField v = random_divfree(grid, rng);

    for (Real eps : {1.0, 0.5, 0.0}) {
        auto ps = pressure_split(v, eps);
        SpectralField q = ps.q1;
        q.coeffs() += ps.q2.coeffs() + ps.q3.coeffs();

        // Directly assembled right-hand side sum d_i d_j (v^i v^j).
        SpectralField rhs_sum(grid);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                SpectralField w = dealiased_product(v[i], v[j]);
                rhs_sum.coeffs() += derivative(derivative(w, i), j).coeffs();
            }

        // -Delta_eps q should match on every nonzero-symbol mode.
        Real num = 0, den = 0;
        std::vector<int> idx;
        for (std::int64_t m = 0; m < grid->total(); ++m) {
            grid->unflatten(m, idx);
            Real sym = 0;
            for (int a = 0; a < 2; ++a) {
                const Real f = grid->frequency(a, idx[a]);
                sym += f * f;
            }
            const Real fn = grid->frequency(2, idx[2]);
            sym += eps * eps * fn * fn;
            if (sym == 0) continue;
            const Complex got = sym * q.at(m);
            num += std::norm(got - rhs_sum.at(m));
            den += std::norm(rhs_sum.at(m));
        }
        CHECK(std::sqrt(num / den) < 1e-10);
    }
}

TEST_CASE("pressure split counts zero-symbol modes at eps = 0") {
    auto grid = make_grid({16, 16, 16});
    std::mt19937_64 rng(41);
    VectorField v = random_divfree(grid, rng);
    auto ps0 = pressure_split(v, 0.0);
    auto ps1 = pressure_split(v, 1.0);
    CHECK(ps0.zero_symbol_modes > ps1.zero_symbol_modes);
    CHECK(ps1.zero_symbol_modes >= 1);  // at least the mean mode
}

TEST_CASE("dealiased product equals truncated convolution") {
    auto grid = make_grid({8, 8, 8});
    std::mt19937_64 rng(43);
    SpectralField f = random_field(grid, rng, false);
    SpectralField g = random_field(grid, rng, false);
    SpectralField fg = dealiased_product(f, g);

    SpectralField ft = f, gt = g;
    dealias(ft);
    dealias(gt);
    // Reuse the vector oracle through a scalar embedding: direct double sum.
    SpectralField want(grid);
    std::vector<int> ia, ib;
    for (std::int64_t m1 = 0; m1 < grid->total(); ++m1) {
        if (ft.at(m1) == Complex(0)) continue;
        grid->unflatten(m1, ia);
        for (std::int64_t m2 = 0; m2 < grid->total(); ++m2) {
            if (gt.at(m2) == Complex(0)) continue;
            grid->unflatten(m2, ib);
            std::int64_t flat = 0;
            bool keep = true;
            for (int a = 0; a < 3; ++a) {
                const int w = grid->wave_index(a, ia[a]) + grid->wave_index(a, ib[a]);
                if (std::abs(w) * 3 > grid->size(a)) { keep = false; break; }
                flat += static_cast<std::int64_t>(w >= 0 ? w : w + grid->size(a)) *
                        grid->stride(a);
            }
            if (keep) want.at(flat) += ft.at(m1) * gt.at(m2);
        }
    }
    CHECK(rel_err(fg, want) < 1e-11);
}
