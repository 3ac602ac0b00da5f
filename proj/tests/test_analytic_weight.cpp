#include "doctest.h"
#include "test_util.hpp"

#include "anslab/analytic_weight.hpp"
#include "anslab/dyadic.hpp"

#include <cmath>

using namespace anslab;
using namespace anslab::testutil;

TEST_CASE("radius zero is the identity") {
    auto grid = make_grid({16, 16, 16});
    std::mt19937_64 rng(41);
    SpectralField f = random_field(grid, rng);
    SpectralField w = apply_weight(f, 0.0);
    CHECK(rel_err(w, f) == 0.0);
}

TEST_CASE("single mode picks up e^{radius |xi_n|}") {
    auto grid = make_grid({16, 16, 16});
    SpectralField f(grid);
    add_cos_mode(f, {1, 2, 3}, 1.0);
    SpectralField w = apply_weight(f, 0.5);
    // |xi_n| = 3 on both conjugate modes.
    const Real want = std::exp(1.5);
    CHECK(std::abs(std::sqrt(w.coeffs().abs2().sum() / f.coeffs().abs2().sum()) - want) <
          1e-12 * want);

    // Purely vertical scaling: a mode with xi_n = 0 is untouched.
    SpectralField h(grid);
    add_cos_mode(h, {2, 1, 0}, 1.0);
    CHECK(rel_err(apply_weight(h, 0.5), h) == 0.0);
}

TEST_CASE("apply_weight round trips") {
    auto grid = make_grid({16, 16, 32});
    std::mt19937_64 rng(43);
    SpectralField f = random_field(grid, rng);
    SpectralField back = apply_weight(apply_weight(f, 0.7), -0.7);
    CHECK(rel_err(back, f) < 1e-10);

    VectorField v = random_divfree(grid, rng);
    VectorField vback = apply_weight(apply_weight(v, 0.3), -0.3);
    for (int c = 0; c < v.dim(); ++c) CHECK(rel_err(vback[c], v[c]) < 1e-10);
}

TEST_CASE("overflow guard names the offending mode") {
    auto grid = make_grid({16, 16, 16});  // max |xi_n| = 8
    std::mt19937_64 rng(47);
    SpectralField f = random_field(grid, rng);
    CHECK_NOTHROW(apply_weight(f, 40.0 / 8.0));
    CHECK_THROWS_AS(apply_weight(f, 6.0), WeightGuardError);
    try {
        apply_weight(f, 6.0);
    } catch (const WeightGuardError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("48") != std::string::npos);  // 6 * 8
        CHECK(msg.find("|xi_n|") != std::string::npos);
    }
    CHECK_THROWS_AS(vertical_weight_sq(*grid, -6.0), WeightGuardError);
}

TEST_CASE("vertical_weight_sq matches apply_weight mode by mode") {
    auto grid = make_grid({8, 8, 16});
    const ArrayXr wsq = vertical_weight_sq(*grid, 0.4);
    const int nv = grid->size(2);
    REQUIRE(wsq.size() == nv);
    for (int i = 0; i < nv; ++i) {
        const Real f = grid->frequency(2, i);
        CHECK(std::abs(wsq[i] - std::exp(0.8 * std::abs(f))) < 1e-12 * wsq[i]);
    }
}

TEST_CASE("theta_step: zero norm leaves theta alone, constant norm integrates") {
    AnalyticityState st{1.0, 20.0, 0.0, 0.0};
    st = theta_step(st, 0.0, 0.25);
    CHECK(st.theta == 0.0);
    CHECK(st.t == 0.25);
    CHECK(st.radius() == 1.0);

    for (int i = 0; i < 10; ++i) st = theta_step(st, 0.002, 0.1);
    CHECK(std::abs(st.theta - 0.002) < 1e-15);
    CHECK(std::abs(st.radius() - (1.0 - 20.0 * 0.002)) < 1e-12);
}

TEST_CASE("theta_step: left-rectangle quadrature of e^{-t}") {
    AnalyticityState st{1.0, 0.02, 0.0, 0.0};  // tiny lambda: guard stays clear
    const Real dt = 1e-3;
    for (int i = 0; i < 1000; ++i) st = theta_step(st, std::exp(-st.t), dt);
    CHECK(std::abs(st.theta - (1.0 - std::exp(-1.0))) < 1e-3);
}

TEST_CASE("continuation guard fires below alpha/2") {
    AnalyticityState st{1.0, 20.0, 0.0, 0.0};
    // radius = 1 - 20 theta; alpha/2 reached at theta = 0.025.
    st = theta_step(st, 0.024, 1.0);
    CHECK(st.radius() > 0.5);
    CHECK_THROWS_AS(theta_step(st, 0.002, 1.0), RadiusGuardError);
    CHECK_THROWS_AS(theta_step(st, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_step(st, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("duhamel step factor closed forms") {
    // Dissipation 1 + eps^s 2^{js} = 1.7 at k = j = 0, s = 1, eps = 0.7;
    // damping e^{-lambda 2^j theta} = e^{-0.2} at lambda = 20, theta = 0.01.
    const Real got = duhamel_weighted_step_factor(0, 0, 1.0, 1.0, 0.7, 20.0, 0.01);
    CHECK(std::abs(got - std::exp(-1.9)) < 1e-14);

    // dt = 0 and theta = 0: no decay at all.
    CHECK(duhamel_weighted_step_factor(3, 2, 0.0, 1.5, 0.5, 20.0, 0.0) == 1.0);

    // eps = 0 removes the vertical dissipation entirely.
    const Real limit = duhamel_weighted_step_factor(1, 5, 0.5, 1.5, 0.0, 0.0, 0.0);
    CHECK(std::abs(limit - std::exp(-std::exp2(1.5) * 0.5)) < 1e-14);

    CHECK_THROWS_AS(duhamel_weighted_step_factor(0, 0, -1.0, 1.0, 1.0, 20.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("weighted Besov norms grow with the radius") {
    auto grid = make_grid({16, 16, 16});
    DyadicPartition part(grid);
    std::mt19937_64 rng(53);
    SpectralField f = random_field(grid, rng);
    const BesovSpec spec{2.0 / 1.0, 0.5, 1, 1, kInf};
    Real prev = besov_norm(f, spec, part);
    for (Real r : {0.1, 0.2, 0.4}) {
        const Real cur = besov_norm(apply_weight(f, r), spec, part);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("weight subadditivity on the lattice") {
    // e^{r|a+b|} <= e^{r|a|} e^{r|b|}: the triangle inequality that makes the
    // weighted product laws work, checked on a frequency range.
    const Real r = 0.37;
    for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b) {
            const Real lhs = std::exp(r * std::abs(a + b));
            const Real rhs = std::exp(r * std::abs(a)) * std::exp(r * std::abs(b));
            CHECK(lhs <= rhs * (1 + 1e-15));
        }
}

