#pragma once

#include "vsg/evolution.hpp"
#include "vsg/spectral.hpp"

#include <filesystem>

namespace vsg {

/// Binary snapshot of one real-space field.
///
/// Layout (all little-endian):
///   5 bytes   magic "VSGV1"
///   uint32    endianness tag 0x01020304
///   uint32    d
///   uint32    n
///   uint32    rank (0 scalar, 1 vector, 2 matrix)
///   float64   t
///   float64   samples, grid point major then component, n^d * components values
struct Snapshot {
    RealField field;
    double t = 0.0;
};

constexpr std::size_t snapshot_header_bytes = 29;

void write_snapshot(const RealField& field, double t, const std::filesystem::path& path);
/// Throws FormatError on a bad magic or tag, a truncated or oversized payload,
/// RankMismatch when (d, n) differ from `grid`.
Snapshot read_snapshot(const std::filesystem::path& path, const SpectralGrid& grid);

/// A state is stored as two vector snapshots, <stem>_y.vsg and <stem>_u.vsg.
void write_state(const State& state, const std::filesystem::path& stem);
State read_state(const std::filesystem::path& stem, const SpectralGrid& grid);

}  // namespace vsg
