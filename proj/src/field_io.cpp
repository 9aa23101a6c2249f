#include "landau/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace landau {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping not implemented");

namespace {
constexpr std::size_t kHeaderBytes = 64;
constexpr char kMagic[4] = {'L', 'C', 'L', 'F'};
}  // namespace

void write_snapshot(const std::string& path, const Field& f, double timestamp) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    char header[kHeaderBytes] = {};
    std::memcpy(header, kMagic, 4);
    std::uint32_t version = kSnapshotVersion, n = std::uint32_t(f.grid.n);
    std::memcpy(header + 4, &version, 4);
    std::memcpy(header + 8, &n, 4);
    std::memcpy(header + 12, &f.grid.extent, 8);
    std::memcpy(header + 20, &timestamp, 8);
    out.write(header, kHeaderBytes);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              std::streamsize(f.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write on snapshot file: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    char header[kHeaderBytes];
    in.read(header, kHeaderBytes);
    if (!in || std::memcmp(header, kMagic, 4) != 0)
        throw std::runtime_error("not a field snapshot (bad magic): " + path);
    std::uint32_t version, n;
    double extent, timestamp;
    std::memcpy(&version, header + 4, 4);
    std::memcpy(&n, header + 8, 4);
    std::memcpy(&extent, header + 12, 8);
    std::memcpy(&timestamp, header + 20, 8);
    if (version != kSnapshotVersion)
        throw std::runtime_error("unsupported snapshot version in " + path);
    Snapshot snap;
    snap.field = Field(build_grid(extent, int(n)));
    snap.timestamp = timestamp;
    in.read(reinterpret_cast<char*>(snap.field.values.data()),
            std::streamsize(snap.field.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated snapshot file: " + path);
    return snap;
}

}  // namespace landau
