#include "doctest.h"
#include "test_util.hpp"

#include "anslab/paraproduct.hpp"

using namespace anslab;
using namespace anslab::testutil;

TEST_CASE("axis split: constant g yields nothing") {
    auto grid = make_grid({16, 16, 16});
    DyadicPartition part(grid);
    std::mt19937_64 rng(3);
    SpectralField f = random_field(grid, rng);
    SpectralField g(grid);
    g.at(0) = Complex(2, 0);  // excluded-plane content only

    auto terms = bony_split_axis(f, g, Axis::Horizontal, part);
    CHECK(terms.low_high.coeffs().abs2().sum() == 0.0);
    CHECK(terms.high_low.coeffs().abs2().sum() == 0.0);
    CHECK(terms.remainder.coeffs().abs2().sum() == 0.0);
}

TEST_CASE("axis split: widely separated rings land in the paraproduct only") {
    auto grid = make_grid({128, 128, 8});
    DyadicPartition part(grid);
    std::mt19937_64 rng(5);
    const int k0 = 0;
    REQUIRE(part.k_max() >= k0 + 5);
    SpectralField f = make_localized_bump(grid, k0, 0, rng, part);
    SpectralField g = make_localized_bump(grid, k0 + 5, 0, rng, part);
    REQUIRE(f.coeffs().abs2().sum() > 0);
    REQUIRE(g.coeffs().abs2().sum() > 0);

    auto terms = bony_split_axis(f, g, Axis::Horizontal, part);
    const SpectralField fg = dealiased_product(f, g);
    CHECK(rel_err(terms.low_high, fg) < 1e-10);
    CHECK(terms.high_low.coeffs().abs2().sum() == 0.0);
    CHECK(terms.remainder.coeffs().abs2().sum() == 0.0);
}

TEST_CASE("axis split: swap symmetry Ttilde(f,g) = T(g,f)") {
    auto grid = make_grid({32, 32, 16});
    DyadicPartition part(grid);
    std::mt19937_64 rng(7);
    SpectralField f = random_field(grid, rng);
    SpectralField g = random_field(grid, rng);
    auto fg = bony_split_axis(f, g, Axis::Horizontal, part);
    auto gf = bony_split_axis(g, f, Axis::Horizontal, part);
    CHECK(rel_err(fg.high_low, gf.low_high) < 1e-12);
}

TEST_CASE("axis split reconstructs the dealiased product") {
    auto grid = make_grid({32, 32, 16});
    DyadicPartition part(grid);
    std::mt19937_64 rng(9);
    for (Axis axis : {Axis::Horizontal, Axis::Vertical}) {
        SpectralField f = random_field(grid, rng);
        SpectralField g = random_field(grid, rng);
        auto terms = bony_split_axis(f, g, axis, part);
        SpectralField sum = terms.low_high;
        sum.coeffs() += terms.high_low.coeffs() + terms.remainder.coeffs();
        SpectralField want = dealiased_product(f, g);
        remove_excluded_planes(want);
        SpectralField got = sum;
        remove_excluded_planes(got);
        CHECK(rel_err(got, want) < 1e-10);
    }
}

TEST_CASE("nine-term split: trivial and localized cases") {
    auto grid = make_grid({32, 32, 32});
    DyadicPartition part(grid);
    std::mt19937_64 rng(11);

    SpectralField zero(grid);
    SpectralField g = random_field(grid, rng);
    auto z = bony_split_2d(zero, g, part);
    for (const auto& t : z.terms) CHECK(t.coeffs().abs2().sum() == 0.0);

    // f low in both directions, g high in both: only T^h T^v survives.
    // Radii sqrt(2)*2^m sit in exactly one horizontal ring (phi = 1 there),
    // and vertical frequencies 1 and 3 in exactly one vertical ring each,
    // so the support arithmetic is exact rather than approximate.
    SpectralField flow(grid);
    add_cos_mode(flow, {1, 1, 1}, 1.0);  // (k, j) = (0, -1)
    SpectralField ghigh(grid);
    add_cos_mode(ghigh, {4, 4, 3}, 1.0);  // (k, j) = (2, 1)
    auto loc = bony_split_2d(flow, ghigh, part);
    const SpectralField fg = dealiased_product(flow, ghigh);
    CHECK(rel_err(loc.at(0, 0), fg) < 1e-10);
    for (int h = 0; h < 3; ++h)
        for (int v = 0; v < 3; ++v) {
            if (h == 0 && v == 0) continue;
            CHECK(loc.at(h, v).coeffs().abs2().sum() == 0.0);
        }
}

TEST_CASE("nine terms reconstruct random products") {
    std::mt19937_64 rng(13);
    for (int sizes : {16, 32}) {
        auto grid = make_grid({sizes, sizes, sizes});
        DyadicPartition part(grid);
        for (int trial = 0; trial < 3; ++trial) {
            SpectralField f = random_field(grid, rng);
            SpectralField g = random_field(grid, rng);
            SpectralField sum = bony_split_2d(f, g, part).sum();
            SpectralField want = dealiased_product(f, g);
            remove_excluded_planes(want);
            remove_excluded_planes(sum);
            CHECK(rel_err(sum, want) < 1e-10);
        }
    }
}

TEST_CASE("paraproduct output blocks stay within the summation window") {
    auto grid = make_grid({32, 32, 32});
    DyadicPartition part(grid);
    std::mt19937_64 rng(17);
    const int k0 = 2, j0 = 2;
    SpectralField f = make_localized_bump(grid, k0, j0, rng, part);
    SpectralField g = make_localized_bump(grid, k0, j0, rng, part);
    auto terms = bony_split_2d(f, g, part);
    const SpectralField& tt = terms.at(0, 0);
    for (int k = part.k_min(); k <= part.k_max(); ++k)
        for (int j = part.j_min(); j <= part.j_max(); ++j) {
            if (std::abs(k - k0) <= 4 && std::abs(j - j0) <= 4) continue;
            CHECK(std::sqrt(block(tt, k, j, part).coeffs().abs2().sum()) < 1e-14);
        }
}

TEST_CASE("product law ratio: admissibility and baseline") {
    auto grid = make_grid({32, 32, 32});
    DyadicPartition part(grid);
    std::mt19937_64 rng(19);

    SpectralField f = make_localized_bump(grid, 2, 1, rng, part);
    SpectralField g = make_localized_bump(grid, 2, 1, rng, part);

    // sigma_i above (n-1)/p rejected; sum below the admissible line rejected.
    CHECK_THROWS_AS(product_law_ratio(f, g, 1.5, 1.0, 2, part), std::invalid_argument);
    CHECK_THROWS_AS(product_law_ratio(f, g, -1.0, 0.5, 1, part), std::invalid_argument);
    CHECK_THROWS_AS(product_law_ratio(SpectralField(grid), g, 1.0, 1.0, 2, part),
                    std::invalid_argument);

    const Real ratio = product_law_ratio(f, g, 1.0, 1.0, 2, part);
    CHECK(ratio > 0);
    CHECK(ratio < 50.0);  // frozen regression ceiling for single-bump pairs
}

TEST_CASE("product law ratio is stable under grid doubling (small corpus)") {
    std::mt19937_64 rng(23);
    Real max32 = 0, max64 = 0;
    {
        auto grid = make_grid({32, 32, 32});
        DyadicPartition part(grid);
        std::mt19937_64 local(101);
        for (int i = 0; i < 10; ++i) {
            SpectralField f = make_corpus_field(grid, local, part, 2);
            SpectralField g = make_corpus_field(grid, local, part, 2);
            max32 = std::max(max32, product_law_ratio(f, g, 1.0, 1.0, 2, part));
        }
    }
    {
        auto grid = make_grid({64, 64, 64});
        DyadicPartition part(grid);
        std::mt19937_64 local(101);
        for (int i = 0; i < 10; ++i) {
            SpectralField f = make_corpus_field(grid, local, part, 2);
            SpectralField g = make_corpus_field(grid, local, part, 2);
            max64 = std::max(max64, product_law_ratio(f, g, 1.0, 1.0, 2, part));
        }
    }
    CHECK(max64 < 2.0 * max32);
    CHECK(max32 < 2.0 * max64);
}

TEST_CASE("weighted ratio: radius 0 exact, small radius finite") {
    auto grid = make_grid({32, 32, 32});
    DyadicPartition part(grid);
    std::mt19937_64 rng(29);
    SpectralField f = make_corpus_field(grid, rng, part, 2);
    SpectralField g = make_corpus_field(grid, rng, part, 2);

    const Real plain = product_law_ratio(f, g, 1.0, 1.0, 2, part);
    CHECK(weighted_product_law_ratio(f, g, 1.0, 1.0, 2, 0.0, part) == plain);

    const Real weighted = weighted_product_law_ratio(f, g, 1.0, 1.0, 2, 0.1, part);
    CHECK(std::isfinite(weighted));
    CHECK(weighted < 4.0 * plain);
    CHECK(weighted > plain / 4.0);
}

TEST_CASE("sharpness demo: inadmissible exponent pair grows with localization") {
    // sigma1 + sigma2 < 0 at p = 2: ratio computed directly (the guarded
    // entry point rejects it) grows with the ring index.
    auto grid = make_grid({64, 64, 16});
    DyadicPartition part(grid);
    std::mt19937_64 rng(31);
    const Real sigma = -0.5;
    Real prev = 0;
    bool grew = false;
    for (int k = 1; k <= 4; ++k) {
        SpectralField f = make_localized_bump(grid, k, 0, rng, part);
        if (f.coeffs().abs2().sum() == 0) continue;
        const SpectralField ff = dealiased_product(f, f);
        const Real nf = besov_norm(f, {sigma, 0.5, 2, 1}, part);
        const Real np = besov_norm(ff, {2 * sigma - 1.0, 0.5, 2, 1}, part);
        if (nf == 0 || np == 0) continue;
        const Real ratio = np / (nf * nf);
        if (prev > 0 && ratio > prev) grew = true;
        prev = ratio;
    }
    CHECK(grew);  // demonstration, not a bound
}
