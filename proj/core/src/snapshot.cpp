#include "vsg/snapshot.hpp"

#include "vsg/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace vsg {

namespace {

constexpr char magic[5] = {'V', 'S', 'G', 'V', '1'};
constexpr std::uint32_t endian_tag = 0x01020304u;

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

template <class T>
void put(std::vector<char>& buf, T value) {
    const auto* p = reinterpret_cast<const char*>(&value);
    buf.insert(buf.end(), p, p + sizeof(T));
}

template <class T>
T get(const std::vector<char>& buf, std::size_t& pos) {
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
    return stem.parent_path() / (stem.filename().string() + suffix);
}

}  // namespace

void write_snapshot(const RealField& field, double t, const std::filesystem::path& path) {
    std::vector<char> buf;
    buf.reserve(snapshot_header_bytes + field.samples.size() * sizeof(double));
    buf.insert(buf.end(), magic, magic + 5);
    put<std::uint32_t>(buf, endian_tag);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(field.grid.dim()));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(field.grid.n()));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(field.rank));
    put<double>(buf, t);
    for (double v : field.samples) put<double>(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

Snapshot read_snapshot(const std::filesystem::path& path, const SpectralGrid& grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot '" + path.string() + "'");
    const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < snapshot_header_bytes) throw FormatError(path.string() + ": truncated header");
    if (std::memcmp(buf.data(), magic, 5) != 0) throw FormatError(path.string() + ": bad magic");
    std::size_t pos = 5;
    if (get<std::uint32_t>(buf, pos) != endian_tag) throw FormatError(path.string() + ": bad endianness tag");
    const auto d = get<std::uint32_t>(buf, pos);
    const auto n = get<std::uint32_t>(buf, pos);
    const auto rank = get<std::uint32_t>(buf, pos);
    const double t = get<double>(buf, pos);
    if (rank > 2) throw FormatError(path.string() + ": bad rank tag");
    if (static_cast<int>(d) != grid.dim() || static_cast<int>(n) != grid.n())
        throw RankMismatch(path.string() + ": snapshot grid (d=" + std::to_string(d) + ", n=" + std::to_string(n) +
                           ") differs from expected (d=" + std::to_string(grid.dim()) +
                           ", n=" + std::to_string(grid.n()) + ")");
    Snapshot snap{RealField(grid, static_cast<Rank>(rank)), t};
    const std::size_t expected = snap.field.samples.size() * sizeof(double);
    if (buf.size() - pos != expected)
        throw FormatError(path.string() + ": payload has " + std::to_string(buf.size() - pos) + " bytes, expected " +
                          std::to_string(expected));
    std::memcpy(snap.field.samples.data(), buf.data() + pos, expected);
    return snap;
}

void write_state(const State& state, const std::filesystem::path& stem) {
    write_snapshot(inverse_transform(state.y_hat), state.t, with_suffix(stem, "_y.vsg"));
    write_snapshot(inverse_transform(state.u_hat), state.t, with_suffix(stem, "_u.vsg"));
}

State read_state(const std::filesystem::path& stem, const SpectralGrid& grid) {
    Snapshot y = read_snapshot(with_suffix(stem, "_y.vsg"), grid);
    Snapshot u = read_snapshot(with_suffix(stem, "_u.vsg"), grid);
    if (y.field.rank != Rank::vector || u.field.rank != Rank::vector)
        throw FormatError(stem.string() + ": state snapshots must hold vector fields");
    State s(y.t, forward_transform(y.field), forward_transform(u.field));
    s.y_hat.grid = grid;
    s.u_hat.grid = grid;
    return s;
}

}  // namespace vsg
