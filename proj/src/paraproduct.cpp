#include "anslab/paraproduct.hpp"

#include "anslab/analytic_weight.hpp"
#include "anslab/operators.hpp"
#include "anslab/transforms.hpp"

#include <cmath>

namespace anslab {
namespace {

SpectralField spectral_of(const ArrayXr& phys, const std::shared_ptr<const Grid>& grid) {
    SpectralField out = to_spectral(phys, grid);
    dealias(out);
    return out;
}

// Physical samples of the (k, j) blocks of a dealiased field, with prefix
// sums along each ring index for the S_{k-1} low-pass factors.
struct BlockGrid {
    int kc, jc, k0, j0;
    std::vector<ArrayXr> b;    // Delta_k^h Delta_j^v
    std::vector<ArrayXr> pk;   // prefix over k
    std::vector<ArrayXr> pj;   // prefix over j
    std::vector<ArrayXr> pkj;  // 2D prefix
    ArrayXr zero;

    BlockGrid(const SpectralField& f, const DyadicPartition& part) {
        const Grid& g = f.grid();
        kc = part.k_count();
        jc = part.j_count();
        k0 = part.k_min();
        j0 = part.j_min();
        zero = ArrayXr::Zero(g.total());
        b.resize(kc * jc);
        for (int ki = 0; ki < kc; ++ki)
            for (int ji = 0; ji < jc; ++ji)
                b[ki * jc + ji] = to_physical(block(f, k0 + ki, j0 + ji, part));
        pk = b;
        for (int ki = 1; ki < kc; ++ki)
            for (int ji = 0; ji < jc; ++ji) pk[ki * jc + ji] += pk[(ki - 1) * jc + ji];
        pj = b;
        for (int ki = 0; ki < kc; ++ki)
            for (int ji = 1; ji < jc; ++ji) pj[ki * jc + ji] += pj[ki * jc + ji - 1];
        pkj = pk;
        for (int ki = 0; ki < kc; ++ki)
            for (int ji = 1; ji < jc; ++ji) pkj[ki * jc + ji] += pkj[ki * jc + ji - 1];
    }

    const ArrayXr& blk(int ki, int ji) const {
        if (ki < 0 || ki >= kc || ji < 0 || ji >= jc) return zero;
        return b[ki * jc + ji];
    }
    // sum over k' <= ki at fixed ji
    const ArrayXr& pre_k(int ki, int ji) const {
        if (ji < 0 || ji >= jc || ki < 0) return zero;
        return pk[std::min(ki, kc - 1) * jc + ji];
    }
    const ArrayXr& pre_j(int ki, int ji) const {
        if (ki < 0 || ki >= kc || ji < 0) return zero;
        return pj[ki * jc + std::min(ji, jc - 1)];
    }
    const ArrayXr& pre_kj(int ki, int ji) const {
        if (ki < 0 || ji < 0) return zero;
        return pkj[std::min(ki, kc - 1) * jc + std::min(ji, jc - 1)];
    }
};

enum Op { T = 0, Tt = 1, R = 2 };

}  // namespace

AxisBonyTerms bony_split_axis(const SpectralField& f, const SpectralField& g, Axis axis,
                              const DyadicPartition& part) {
    SpectralField ft = f, gt = g;
    dealias(ft);
    dealias(gt);
    const Grid& grid = f.grid();
    const int lo = axis == Axis::Horizontal ? part.k_min() : part.j_min();
    const int hi = axis == Axis::Horizontal ? part.k_max() : part.j_max();
    const int n = hi - lo + 1;

    std::vector<ArrayXr> bf(n), bg(n);
    for (int i = 0; i < n; ++i) {
        bf[i] = to_physical(block_axis(ft, lo + i, axis, part));
        bg[i] = to_physical(block_axis(gt, lo + i, axis, part));
    }
    std::vector<ArrayXr> pf = bf, pg = bg;
    for (int i = 1; i < n; ++i) {
        pf[i] += pf[i - 1];
        pg[i] += pg[i - 1];
    }
    auto pre = [&](const std::vector<ArrayXr>& p, int i) -> ArrayXr {
        if (i < 0) return ArrayXr::Zero(grid.total());
        return p[std::min(i, n - 1)];
    };
    auto blk = [&](const std::vector<ArrayXr>& b, int i) -> ArrayXr {
        if (i < 0 || i >= n) return ArrayXr::Zero(grid.total());
        return b[i];
    };

    ArrayXr t = ArrayXr::Zero(grid.total());
    ArrayXr tt = ArrayXr::Zero(grid.total());
    ArrayXr r = ArrayXr::Zero(grid.total());
    for (int i = 0; i < n; ++i) {
        t += pre(pf, i - 2) * bg[i];
        tt += bf[i] * pre(pg, i - 2);
        r += bf[i] * (blk(bg, i - 1) + bg[i] + blk(bg, i + 1));
    }
    return {spectral_of(t, f.grid_ptr()), spectral_of(tt, f.grid_ptr()),
            spectral_of(r, f.grid_ptr())};
}

SpectralField BonyTerms::sum() const {
    SpectralField out = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) out.coeffs() += terms[i].coeffs();
    return out;
}

BonyTerms bony_split_2d(const SpectralField& f, const SpectralField& g,
                        const DyadicPartition& part) {
    SpectralField ft = f, gt = g;
    dealias(ft);
    dealias(gt);
    const Grid& grid = f.grid();
    BlockGrid F(ft, part), G(gt, part);

    // f-side factor for the (op_h, op_v) term at block (ki, ji).
    auto f_factor = [&](Op oh, Op ov, int ki, int ji) -> ArrayXr {
        const bool sh = oh == T;  // S^h_{k-1}, otherwise Delta^h_k
        const bool sv = ov == T;
        if (sh && sv) return F.pre_kj(ki - 2, ji - 2);
        if (sh) return F.pre_k(ki - 2, ji);
        if (sv) return F.pre_j(ki, ji - 2);
        return F.blk(ki, ji);
    };
    // g-side factor: T -> Delta, Ttilde -> S_{-1}, R -> Delta-tilde.
    auto g_factor = [&](Op oh, Op ov, int ki, int ji) -> ArrayXr {
        ArrayXr acc = ArrayXr::Zero(grid.total());
        const int klo = oh == R ? ki - 1 : ki, khi = oh == R ? ki + 1 : ki;
        const int jlo = ov == R ? ji - 1 : ji, jhi = ov == R ? ji + 1 : ji;
        for (int a = klo; a <= khi; ++a)
            for (int c = jlo; c <= jhi; ++c) {
                if (oh == Tt && ov == Tt)
                    acc += G.pre_kj(a - 2, c - 2);
                else if (oh == Tt)
                    acc += G.pre_k(a - 2, c);
                else if (ov == Tt)
                    acc += G.pre_j(a, c - 2);
                else
                    acc += G.blk(a, c);
            }
        return acc;
    };

    BonyTerms out;
    for (int oh = 0; oh < 3; ++oh)
        for (int ov = 0; ov < 3; ++ov) {
            ArrayXr acc = ArrayXr::Zero(grid.total());
            for (int ki = 0; ki < F.kc; ++ki)
                for (int ji = 0; ji < F.jc; ++ji)
                    acc += f_factor(Op(oh), Op(ov), ki, ji) * g_factor(Op(oh), Op(ov), ki, ji);
            out.terms.push_back(spectral_of(acc, f.grid_ptr()));
        }
    return out;
}

Real product_law_ratio(const SpectralField& f, const SpectralField& g, Real sigma1, Real sigma2,
                       Real p, const DyadicPartition& part) {
    const int n = f.grid().dim();
    const Real limit = (n - 1) / p;
    if (sigma1 > limit || sigma2 > limit)
        throw std::invalid_argument("product_law_ratio: sigma_i must be <= (n-1)/p");
    if (sigma1 + sigma2 <= (n - 1) * std::max(0.0, 2.0 / p - 1.0))
        throw std::invalid_argument("product_law_ratio: sigma1+sigma2 below the admissible line");

    const Real nf = besov_norm(f, {sigma1, 0.5, p, 1}, part);
    const Real ng = besov_norm(g, {sigma2, 0.5, p, 1}, part);
    if (nf * ng < 1e-14)
        throw std::invalid_argument("product_law_ratio: factor norms vanish");
    const SpectralField fg = dealiased_product(f, g);
    const Real np = besov_norm(fg, {sigma1 + sigma2 - limit, 0.5, p, 1}, part);
    return np / (nf * ng);
}

Real weighted_product_law_ratio(const SpectralField& f, const SpectralField& g, Real sigma1,
                                Real sigma2, Real p, Real radius, const DyadicPartition& part) {
    if (radius < 0) throw std::invalid_argument("weighted_product_law_ratio: radius must be >= 0");
    if (radius == 0) return product_law_ratio(f, g, sigma1, sigma2, p, part);

    const int n = f.grid().dim();
    const Real limit = (n - 1) / p;
    const SpectralField fw = apply_weight(f, radius);
    const SpectralField gw = apply_weight(g, radius);
    const Real nf = besov_norm(fw, {sigma1, 0.5, p, 1}, part);
    const Real ng = besov_norm(gw, {sigma2, 0.5, p, 1}, part);
    if (nf * ng < 1e-14)
        throw std::invalid_argument("weighted_product_law_ratio: factor norms vanish");
    const SpectralField fgw = apply_weight(dealiased_product(f, g), radius);
    const Real np = besov_norm(fgw, {sigma1 + sigma2 - limit, 0.5, p, 1}, part);
    return np / (nf * ng);
}

SpectralField make_localized_bump(const std::shared_ptr<const Grid>& grid, int k, int j,
                                  std::mt19937_64& rng, const DyadicPartition& part) {
    SpectralField f(grid);
    std::normal_distribution<Real> gauss(0.0, 1.0);
    const int nv = grid->size(grid->dim() - 1);
    const ArrayXr& rk = part.ring_h(k);
    const ArrayXr& rj = part.ring_v(j);
    for (std::int64_t i = 0; i < grid->total(); ++i) {
        const Real w = rk[i] * rj[static_cast<int>(i % nv)];
        if (w == 0) continue;
        f.at(i) = w * Complex(gauss(rng), gauss(rng));
    }
    f.symmetrize();
    dealias(f);
    const Real norm = mixed_norm(f, 2);
    if (norm > 0) f.coeffs() /= norm;
    return f;
}

SpectralField make_corpus_field(const std::shared_ptr<const Grid>& grid, std::mt19937_64& rng,
                                const DyadicPartition& part, Real p) {
    const int k_lo = std::max(0, part.k_min());
    const int k_hi = std::max(k_lo, part.k_max() - 2);
    const int j_lo = std::max(part.j_min(), std::min(0, part.j_max() - 2));
    const int j_hi = std::max(j_lo, part.j_max() - 2);
    std::uniform_int_distribution<int> nbumps(1, 8);
    std::uniform_int_distribution<int> pick_k(k_lo, k_hi);
    std::uniform_int_distribution<int> pick_j(j_lo, j_hi);
    std::uniform_real_distribution<Real> amp(0.5, 2.0);

    SpectralField f(grid);
    const int m = nbumps(rng);
    for (int b = 0; b < m; ++b) {
        SpectralField bump = make_localized_bump(grid, pick_k(rng), pick_j(rng), rng, part);
        f.coeffs() += amp(rng) * bump.coeffs();
    }
    const Real norm = mixed_norm(f, p);
    if (norm > 0) f.coeffs() /= norm;
    return f;
}

}  // namespace anslab
