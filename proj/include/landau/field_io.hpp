#pragma once

#include <string>

#include "landau/grid.hpp"

namespace landau {

/// Snapshot file layout: 64-byte header followed by N³ little-endian f64
/// values in x-fastest order. Header: magic "LCLF", version u32, N u32,
/// L f64, timestamp f64, zero padding up to byte 64.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Field& f, double timestamp = 0.0);

struct Snapshot {
    Field field;
    double timestamp = 0.0;
};

Snapshot read_snapshot(const std::string& path);

}  // namespace landau
