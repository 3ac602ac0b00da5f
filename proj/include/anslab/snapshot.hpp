#pragma once

#include "anslab/spectral_field.hpp"

#include <string>
#include <utility>

namespace anslab {

/// Binary state file: 8-byte magic "ANSLAB1\n", then little-endian
/// uint32 n, uint32 sizes[n], float64 lengths[n], float64 t, eps, s,
/// radius, theta, then per component the (re, im) float64 coefficient
/// pairs in row-major lattice order.
inline constexpr char kSnapshotMagic[8] = {'A', 'N', 'S', 'L', 'A', 'B', '1', '\n'};

struct SnapshotHeader {
    std::vector<int> sizes;
    std::vector<Real> lengths;
    Real t = 0, eps = 1, s = 1.5, radius = 0, theta = 0;
};

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const VectorField& v);

/// Throws std::runtime_error on a bad magic, header, or truncated payload.
std::pair<SnapshotHeader, VectorField> read_snapshot(const std::string& path);

}  // namespace anslab
