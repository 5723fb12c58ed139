#include "tms/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace tms {
namespace {

template <typename T>
void put(std::vector<std::byte>& out, T value) {
  auto bits = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.insert(out.end(), bits.begin(), bits.end());
}

template <typename T>
T get(std::span<const std::byte> bytes, std::size_t& pos) {
  std::array<std::byte, sizeof(T)> bits;
  std::memcpy(bits.data(), bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<std::byte> encode_snapshot(const FieldState& s) {
  std::vector<std::byte> out;
  out.reserve(kSnapshotHeaderBytes + 8 * (s.f.size() + s.v.size()));
  for (char ch : {'T', 'M', 'S', 'B'}) out.push_back(static_cast<std::byte>(ch));
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid.n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid.q));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid.points));
  put<double>(out, s.grid.half_width);
  put<double>(out, s.t);
  for (double x : s.f) put<double>(out, x);
  for (double x : s.v) put<double>(out, x);
  return out;
}

FieldState decode_snapshot(std::span<const std::byte> bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) throw ValidationError("snapshot", "shorter than the header");
  if (std::memcmp(bytes.data(), "TMSB", 4) != 0) throw ValidationError("snapshot", "bad magic");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion)
    throw ValidationError("snapshot", "unsupported format_version " + std::to_string(version));
  GridSpec g;
  g.n = static_cast<int>(get<std::uint32_t>(bytes, pos));
  g.q = static_cast<int>(get<std::uint32_t>(bytes, pos));
  g.points = static_cast<int>(get<std::uint32_t>(bytes, pos));
  g.half_width = get<double>(bytes, pos);
  const double t = get<double>(bytes, pos);
  g.validate();
  const std::size_t count = g.cells() * static_cast<std::size_t>(g.q);
  if (bytes.size() - kSnapshotHeaderBytes != 2 * count * 8)
    throw ValidationError("snapshot", "payload length does not match the header");
  FieldState s(g, t);
  for (double& x : s.f) x = get<double>(bytes, pos);
  for (double& x : s.v) x = get<double>(bytes, pos);
  return s;
}

void write_snapshot(const FieldState& state, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

FieldState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(std::as_bytes(std::span(raw)));
  } catch (const ValidationError& e) {
    throw IoError(path.string(), e.what());
  }
}

}  // namespace tms
