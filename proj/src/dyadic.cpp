#include "anslab/dyadic.hpp"

#include "anslab/operators.hpp"
#include "anslab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace anslab {
namespace {

// Cumulative integral of the bump exp(1 - 1/(1-t^2)) across the bridge
// interval (1, 4/3), normalized to [0, 1]. Dense trapezoid table; the
// partition-of-unity identity telescopes exactly for any fixed bridge.
class Bridge {
public:
    static const Bridge& instance() {
        static Bridge b;
        return b;
    }

    // 1 at r <= 1 decreasing to 0 at r >= 4/3.
    Real chi(Real r) const {
        if (r <= 1.0) return 1.0;
        if (r >= 4.0 / 3.0) return 0.0;
        const Real x = (r - 1.0) / (1.0 / 3.0) * (kPoints - 1);
        const int i = std::min(static_cast<int>(x), kPoints - 2);
        const Real frac = x - i;
        return 1.0 - ((1.0 - frac) * cum_[i] + frac * cum_[i + 1]);
    }

private:
    static constexpr int kPoints = 1 << 14;

    Bridge() {
        auto bump = [](Real u) {  // u in (0,1) mapped to t in (-1,1)
            const Real t = 2.0 * u - 1.0;
            const Real d = 1.0 - t * t;
            return d <= 0 ? 0.0 : std::exp(1.0 - 1.0 / d);
        };
        cum_.resize(kPoints);
        cum_[0] = 0;
        const Real h = 1.0 / (kPoints - 1);
        for (int i = 1; i < kPoints; ++i) {
            const Real a = (i - 1) * h, b = i * h;
            cum_[i] = cum_[i - 1] + 0.5 * h * (bump(a) + bump(b));
        }
        const Real total = cum_.back();
        for (auto& c : cum_) c /= total;
    }

    std::vector<Real> cum_;
};

int horizontal_points(const Grid& g) {
    return static_cast<int>(g.total() / g.size(g.dim() - 1));
}

Real horizontal_cell_volume(const Grid& g) {
    Real v = 1;
    for (int a = 0; a < g.dim() - 1; ++a) v *= g.length(a) / g.size(a);
    return v;
}

Real lp_of_samples(const Eigen::VectorXd& vals_sq, Real p, Real cell) {
    // vals_sq holds squared sample values.
    if (p == kInf) return std::sqrt(vals_sq.maxCoeff());
    if (p == 2.0) return std::sqrt(cell * vals_sq.sum());
    if (p == 1.0) return cell * vals_sq.array().sqrt().sum();
    return std::pow(cell * vals_sq.array().pow(0.5 * p).sum(), 1.0 / p);
}

}  // namespace

Real dyadic_chi(Real r) { return Bridge::instance().chi(r); }

Real dyadic_phi(Real r) { return dyadic_chi(0.5 * r) - dyadic_chi(r); }

DyadicPartition::DyadicPartition(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
    const Grid& g = *grid_;
    const int d = g.dim();

    rh_.resize(g.total());
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.total(); ++i) {
        g.unflatten(i, idx);
        Real s = 0;
        for (int a = 0; a < d - 1; ++a) {
            const Real f = g.frequency(a, idx[a]);
            s += f * f;
        }
        rh_[i] = std::sqrt(s);
    }
    const int nv = g.size(d - 1);
    fn_.resize(nv);
    for (int i = 0; i < nv; ++i) fn_[i] = std::abs(g.frequency(d - 1, i));

    Real rh_min = kInf;
    for (std::int64_t i = 0; i < g.total(); ++i)
        if (rh_[i] > 0) rh_min = std::min(rh_min, rh_[i]);
    Real fn_min = kInf;
    for (int i = 0; i < nv; ++i)
        if (fn_[i] > 0) fn_min = std::min(fn_min, fn_[i]);

    const Real rh_max = g.max_horizontal_frequency();
    const Real fn_max = g.max_vertical_frequency();

    // Ring k touches radii in (2^k, 2^k * 8/3); keep exactly the indices
    // whose ring meets a nonzero lattice radius.
    k_min_ = static_cast<int>(std::ceil(std::log2(rh_min * 3.0 / 8.0)));
    k_max_ = static_cast<int>(std::floor(std::log2(rh_max)));
    j_min_ = static_cast<int>(std::ceil(std::log2(fn_min * 3.0 / 8.0)));
    j_max_ = static_cast<int>(std::floor(std::log2(fn_max)));

    rings_h_.reserve(k_count());
    for (int k = k_min_; k <= k_max_; ++k) {
        const Real scale = std::pow(2.0, -k);
        ArrayXr ring(g.total());
        for (std::int64_t i = 0; i < g.total(); ++i) ring[i] = dyadic_phi(scale * rh_[i]);
        rings_h_.push_back(std::move(ring));
    }
    rings_v_.reserve(j_count());
    for (int j = j_min_; j <= j_max_; ++j) {
        const Real scale = std::pow(2.0, -j);
        ArrayXr ring(nv);
        for (int i = 0; i < nv; ++i) ring[i] = dyadic_phi(scale * fn_[i]);
        rings_v_.push_back(std::move(ring));
    }
    zero_flat_ = ArrayXr::Zero(g.total());
    zero_vert_ = ArrayXr::Zero(nv);
}

const ArrayXr& DyadicPartition::ring_h(int k) const {
    if (k < k_min_ || k > k_max_) return zero_flat_;
    return rings_h_[k - k_min_];
}

const ArrayXr& DyadicPartition::ring_v(int j) const {
    if (j < j_min_ || j > j_max_) return zero_vert_;
    return rings_v_[j - j_min_];
}

void BesovSpec::validate() const {
    if (p != 1.0 && p != 2.0 && p != 4.0 && p != kInf)
        throw std::invalid_argument("BesovSpec: p must be in {1, 2, 4, inf}");
    if (r != 1.0 && r != 2.0 && r != kInf)
        throw std::invalid_argument("BesovSpec: r must be in {1, 2, inf}");
    if (rho < 1.0) throw std::invalid_argument("BesovSpec: rho must be >= 1");
}

SpectralField block(const SpectralField& f, int k, int j, const DyadicPartition& part) {
    const Grid& g = f.grid();
    const ArrayXr& rk = part.ring_h(k);
    const ArrayXr& rj = part.ring_v(j);
    const int nv = g.size(g.dim() - 1);
    ArrayXc out(g.total());
    for (std::int64_t i = 0; i < g.total(); ++i)
        out[i] = f.at(i) * rk[i] * rj[static_cast<int>(i % nv)];
    return SpectralField(f.grid_ptr(), std::move(out));
}

SpectralField block_axis(const SpectralField& f, int k, Axis axis, const DyadicPartition& part) {
    const Grid& g = f.grid();
    ArrayXc out(g.total());
    if (axis == Axis::Horizontal) {
        const ArrayXr& rk = part.ring_h(k);
        out = f.coeffs() * rk;
    } else {
        const ArrayXr& rj = part.ring_v(k);
        const int nv = g.size(g.dim() - 1);
        for (std::int64_t i = 0; i < g.total(); ++i)
            out[i] = f.at(i) * rj[static_cast<int>(i % nv)];
    }
    return SpectralField(f.grid_ptr(), std::move(out));
}

SpectralField low_pass(const SpectralField& f, int l, Axis axis, const DyadicPartition& part) {
    const Grid& g = f.grid();
    const int lo = axis == Axis::Horizontal ? part.k_min() : part.j_min();
    ArrayXc out = ArrayXc::Zero(g.total());
    if (l <= lo) return SpectralField(f.grid_ptr(), std::move(out));
    const Real scale = std::pow(2.0, -l);
    const int nv = g.size(g.dim() - 1);
    if (axis == Axis::Horizontal) {
        const ArrayXr& r = part.radius_h();
        for (std::int64_t i = 0; i < g.total(); ++i)
            out[i] = r[i] == 0 ? Complex(0) : f.at(i) * dyadic_chi(scale * r[i]);
    } else {
        const ArrayXr& fv = part.vertical_freq();
        for (std::int64_t i = 0; i < g.total(); ++i) {
            const Real r = fv[static_cast<int>(i % nv)];
            out[i] = r == 0 ? Complex(0) : f.at(i) * dyadic_chi(scale * r);
        }
    }
    return SpectralField(f.grid_ptr(), std::move(out));
}

Real mixed_norm_physical(const Grid& g, const ArrayXr& samples, Real p) {
    const int d = g.dim();
    const int nv = g.size(d - 1);
    const int nh = horizontal_points(g);
    const Real wv = g.length(d - 1) / nv;
    Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        samples.data(), nh, nv);
    Eigen::VectorXd vert_sq = wv * m.array().square().matrix().rowwise().sum();
    return lp_of_samples(vert_sq, p, horizontal_cell_volume(g));
}

Real mixed_norm(const SpectralField& f, Real p) {
    return mixed_norm_physical(f.grid(), to_physical(f), p);
}

std::vector<BlockNormTable> block_norm_tables(const SpectralField& f, Real p,
                                              const DyadicPartition& part,
                                              std::span<const ArrayXr> vertical_weights_sq) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int nv = g.size(d - 1);
    const int nh = horizontal_points(g);
    const Real ln = g.length(d - 1);
    const Real cell = horizontal_cell_volume(g);

    const std::size_t nw = std::max<std::size_t>(1, vertical_weights_sq.size());
    std::vector<BlockNormTable> out(nw);
    for (auto& t : out) {
        t.k0 = part.k_min();
        t.j0 = part.j_min();
        t.value = Eigen::MatrixXd::Zero(part.k_count(), part.j_count());
    }

    ArrayXc work(g.total());
    using RowMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    for (int k = part.k_min(); k <= part.k_max(); ++k) {
        const ArrayXr& rk = part.ring_h(k);
        work = f.coeffs() * rk;
        if (work.abs2().sum() == 0) continue;
        dft_inverse_horizontal(g, work);

        ArrayXr asq = work.abs2();
        Eigen::Map<const RowMat> m(asq.data(), nh, nv);
        const Eigen::VectorXd colsum = m.colwise().sum();

        for (int j = part.j_min(); j <= part.j_max(); ++j) {
            const ArrayXr& rj = part.ring_v(j);
            for (std::size_t w = 0; w < nw; ++w) {
                Eigen::VectorXd coef(nv);
                if (vertical_weights_sq.empty())
                    coef = (ln * rj.square()).matrix();
                else
                    coef = (ln * rj.square() * vertical_weights_sq[w]).matrix();
                if (coef.dot(colsum) == 0) continue;
                Eigen::VectorXd vert_sq = m * coef;
                out[w].value(k - part.k_min(), j - part.j_min()) =
                    lp_of_samples(vert_sq, p, cell);
            }
        }
    }
    return out;
}

BlockNormTable block_norm_table(const SpectralField& f, Real p, const DyadicPartition& part) {
    return block_norm_tables(f, p, part, {}).front();
}

BlockNormTable combine_tables(std::span<const BlockNormTable> tables) {
    BlockNormTable out = tables.front();
    out.value = out.value.array().square().matrix();
    for (std::size_t i = 1; i < tables.size(); ++i)
        out.value += tables[i].value.array().square().matrix();
    out.value = out.value.array().sqrt().matrix();
    return out;
}

Real besov_from_table(const BlockNormTable& table, const BesovSpec& spec) {
    spec.validate();
    Real acc = 0;
    for (int ki = 0; ki < table.value.rows(); ++ki)
        for (int ji = 0; ji < table.value.cols(); ++ji) {
            const Real v = table.value(ki, ji);
            if (v == 0) continue;
            const Real w =
                std::exp2((table.k0 + ki) * spec.sigma + (table.j0 + ji) * spec.s) * v;
            if (spec.r == 1.0)
                acc += w;
            else if (spec.r == 2.0)
                acc += w * w;
            else
                acc = std::max(acc, w);
        }
    return spec.r == 2.0 ? std::sqrt(acc) : acc;
}

Real besov_norm(const SpectralField& f, const BesovSpec& spec, const DyadicPartition& part) {
    return besov_from_table(block_norm_table(f, spec.p, part), spec);
}

Real besov_norm(const VectorField& v, const BesovSpec& spec, const DyadicPartition& part) {
    std::vector<BlockNormTable> tabs;
    tabs.reserve(v.dim());
    for (int c = 0; c < v.dim(); ++c) tabs.push_back(block_norm_table(v[c], spec.p, part));
    return besov_from_table(combine_tables(tabs), spec);
}

Real derivative_lifted_besov_norm(const SpectralField& f, const BesovSpec& spec,
                                  int kk, int ll, const DyadicPartition& part) {
    const Grid& g = f.grid();
    const int dh = g.dim() - 1;
    BesovSpec reduced = spec;
    reduced.sigma -= kk;
    reduced.s -= ll;

    // Enumerate horizontal multi-indices beta with |beta| = kk.
    std::vector<int> beta(dh, 0);
    Real acc = 0;
    std::function<void(int, int)> walk = [&](int axis, int remaining) {
        if (axis == dh - 1) {
            beta[axis] = remaining;
            SpectralField df = f;
            for (int a = 0; a < dh; ++a)
                for (int c = 0; c < beta[a]; ++c) df = derivative(df, a);
            for (int c = 0; c < ll; ++c) df = derivative(df, g.dim() - 1);
            acc += besov_norm(df, reduced, part);
            return;
        }
        for (int take = 0; take <= remaining; ++take) {
            beta[axis] = take;
            walk(axis + 1, remaining - take);
        }
    };
    walk(0, kk);
    return acc;
}

Real chemin_lerner_norm(std::span<const BlockNormTable> samples, Real dt, const BesovSpec& spec) {
    spec.validate();
    if (samples.empty()) throw std::invalid_argument("chemin_lerner_norm: no samples");
    if (spec.rho != kInf && samples.size() < 2)
        throw std::invalid_argument("chemin_lerner_norm: need >= 2 samples for finite rho");

    BlockNormTable time_norm = samples.front();
    const auto rows = time_norm.value.rows(), cols = time_norm.value.cols();
    if (spec.rho == kInf) {
        for (const auto& s : samples)
            time_norm.value = time_norm.value.cwiseMax(s.value);
    } else {
        // Left-rectangle rule: the final sample is the interval endpoint.
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows, cols);
        for (std::size_t i = 0; i + 1 < samples.size(); ++i)
            acc += samples[i].value.array().pow(spec.rho).matrix() * dt;
        time_norm.value = acc.array().pow(1.0 / spec.rho).matrix();
    }
    return besov_from_table(time_norm, spec);
}

Real chemin_lerner_norm(std::span<const SpectralField> samples, Real dt, const BesovSpec& spec,
                        const DyadicPartition& part) {
    std::vector<BlockNormTable> tabs;
    tabs.reserve(samples.size());
    for (const auto& f : samples) tabs.push_back(block_norm_table(f, spec.p, part));
    return chemin_lerner_norm(std::span<const BlockNormTable>(tabs), dt, spec);
}

}  // namespace anslab
