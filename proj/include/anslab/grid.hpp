#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace anslab {

using Real = double;
using Complex = std::complex<Real>;
using ArrayXr = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;

/// Periodic box discretization. Axis n-1 is the distinguished vertical
/// direction; axes 0..n-2 are horizontal. Frequencies on axis i are
/// (2*pi/L_i) * m with integer m in {-N_i/2+1, ..., N_i/2}.
class Grid {
public:
    Grid(std::vector<int> points, std::vector<Real> lengths);

    explicit Grid(std::vector<int> points)
        : Grid(points, std::vector<Real>(points.size(), 2.0 * std::numbers::pi)) {}

    int dim() const { return static_cast<int>(points_.size()); }
    int size(int axis) const { return points_[axis]; }
    Real length(int axis) const { return lengths_[axis]; }
    std::int64_t total() const { return total_; }
    std::int64_t stride(int axis) const { return strides_[axis]; }
    const std::vector<int>& points() const { return points_; }
    const std::vector<Real>& lengths() const { return lengths_; }

    /// Integer wavenumber index for lattice position idx on an axis.
    int wave_index(int axis, int idx) const {
        const int n = points_[axis];
        return idx <= n / 2 ? idx : idx - n;
    }

    /// Physical frequency (2*pi/L)*m.
    Real frequency(int axis, int idx) const {
        return freq_unit_[axis] * wave_index(axis, idx);
    }

    Real frequency_unit(int axis) const { return freq_unit_[axis]; }

    /// Lattice position of the conjugate mode -xi.
    std::int64_t conjugate_index(std::int64_t flat) const;

    void unflatten(std::int64_t flat, std::vector<int>& idx) const;

    Real cell_volume() const { return cell_volume_; }
    Real box_volume() const { return box_volume_; }

    bool operator==(const Grid& o) const {
        return points_ == o.points_ && lengths_ == o.lengths_;
    }

    /// Largest |xi_h| and |xi_n| representable on the lattice.
    Real max_horizontal_frequency() const;
    Real max_vertical_frequency() const;

private:
    std::vector<int> points_;
    std::vector<Real> lengths_;
    std::vector<std::int64_t> strides_;
    std::vector<Real> freq_unit_;
    std::int64_t total_ = 0;
    Real cell_volume_ = 0;
    Real box_volume_ = 0;
};

inline Grid::Grid(std::vector<int> points, std::vector<Real> lengths)
    : points_(std::move(points)), lengths_(std::move(lengths)) {
    if (points_.size() < 2) throw std::invalid_argument("Grid: need dim >= 2");
    if (points_.size() != lengths_.size())
        throw std::invalid_argument("Grid: points/lengths size mismatch");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const int n = points_[i];
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: points per axis must be a power of two >= 8");
        if (lengths_[i] <= 0) throw std::invalid_argument("Grid: box length must be positive");
    }
    const int d = dim();
    strides_.assign(d, 1);
    for (int a = d - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * points_[a + 1];
    total_ = strides_[0] * points_[0];
    freq_unit_.resize(d);
    cell_volume_ = 1.0;
    box_volume_ = 1.0;
    for (int a = 0; a < d; ++a) {
        freq_unit_[a] = 2.0 * std::numbers::pi / lengths_[a];
        cell_volume_ *= lengths_[a] / points_[a];
        box_volume_ *= lengths_[a];
    }
}

inline std::int64_t Grid::conjugate_index(std::int64_t flat) const {
    std::int64_t out = 0;
    for (int a = 0; a < dim(); ++a) {
        const int n = points_[a];
        const int i = static_cast<int>(flat / strides_[a]) % n;
        const int j = i == 0 ? 0 : n - i;
        out += static_cast<std::int64_t>(j) * strides_[a];
    }
    return out;
}

inline void Grid::unflatten(std::int64_t flat, std::vector<int>& idx) const {
    idx.resize(dim());
    for (int a = 0; a < dim(); ++a)
        idx[a] = static_cast<int>(flat / strides_[a]) % points_[a];
}

inline Real Grid::max_horizontal_frequency() const {
    Real r2 = 0;
    for (int a = 0; a < dim() - 1; ++a) {
        const Real f = freq_unit_[a] * (points_[a] / 2);
        r2 += f * f;
    }
    return std::sqrt(r2);
}

inline Real Grid::max_vertical_frequency() const {
    const int a = dim() - 1;
    return freq_unit_[a] * (points_[a] / 2);
}

}  // namespace anslab
