#pragma once

// Binary snapshots: "TMSB", then u32 format_version, n, q, N, then f64 L, t,
// then f and v (q * N^n little-endian f64 each, field-major, row-major).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tms/grid.hpp"

namespace tms {

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 4 + 4 * 4 + 2 * 8;

std::vector<std::byte> encode_snapshot(const FieldState& state);

/// Throws ValidationError on a bad magic, unknown version, bad header or a
/// payload of the wrong length.
FieldState decode_snapshot(std::span<const std::byte> bytes);

/// Throws IoError with the path on failure.
void write_snapshot(const FieldState& state, const std::filesystem::path& path);
FieldState read_snapshot(const std::filesystem::path& path);

}  // namespace tms
