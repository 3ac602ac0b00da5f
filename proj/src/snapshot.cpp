#include "anslab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace anslab {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& what) {
    T value;
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("snapshot read: truncated " + what);
    return value;
}

}  // namespace

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const VectorField& v) {
    const Grid& g = v.grid();
    if (header.sizes != g.points() || header.lengths != g.lengths())
        throw std::invalid_argument("write_snapshot: header grid does not match field");

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    os.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
    for (int sz : header.sizes) put<std::uint32_t>(os, static_cast<std::uint32_t>(sz));
    for (Real l : header.lengths) put<double>(os, l);
    put<double>(os, header.t);
    put<double>(os, header.eps);
    put<double>(os, header.s);
    put<double>(os, header.radius);
    put<double>(os, header.theta);
    for (int c = 0; c < v.dim(); ++c)
        for (std::int64_t i = 0; i < g.total(); ++i) {
            const Complex z = v[c].at(i);
            put<double>(os, z.real());
            put<double>(os, z.imag());
        }
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

std::pair<SnapshotHeader, VectorField> read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);

    char magic[sizeof(kSnapshotMagic)];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);

    const auto n = get<std::uint32_t>(is, "dimension");
    if (n < 2 || n > 8) throw std::runtime_error("read_snapshot: implausible dimension");
    SnapshotHeader header;
    for (std::uint32_t a = 0; a < n; ++a) {
        const auto sz = get<std::uint32_t>(is, "grid size");
        if (sz < 8 || sz > (1u << 20) || (sz & (sz - 1)) != 0)
            throw std::runtime_error("read_snapshot: bad grid size");
        header.sizes.push_back(static_cast<int>(sz));
    }
    for (std::uint32_t a = 0; a < n; ++a) {
        const double l = get<double>(is, "box length");
        if (!(l > 0)) throw std::runtime_error("read_snapshot: bad box length");
        header.lengths.push_back(l);
    }
    header.t = get<double>(is, "time");
    header.eps = get<double>(is, "eps");
    header.s = get<double>(is, "dissipation order");
    header.radius = get<double>(is, "radius");
    header.theta = get<double>(is, "theta");

    auto grid = std::make_shared<Grid>(header.sizes, header.lengths);
    VectorField v(grid);
    for (std::uint32_t c = 0; c < n; ++c)
        for (std::int64_t i = 0; i < grid->total(); ++i) {
            const double re = get<double>(is, "coefficient");
            const double im = get<double>(is, "coefficient");
            v[static_cast<int>(c)].at(i) = Complex(re, im);
        }
    return {std::move(header), std::move(v)};
}

}  // namespace anslab
