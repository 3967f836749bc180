#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavecrit/grid.hpp"

// Snapshot layout (all little-endian):
//   uint32 d, uint32 n, float64 L, then n^d float64 samples, row-major, last axis fastest.

namespace wavecrit::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes to `path.tmp` and renames over `path`, so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path() && !path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

template <class T>
void put_le(std::string& buf, T value) {
    static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf.append(bytes, sizeof(T));
}

template <class T>
T get_le(const std::string& buf, std::size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw IoError("snapshot truncated");
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

}  // namespace detail

inline std::string encode_snapshot(const RealField& f) {
    std::string buf;
    buf.reserve(16 + 8 * f.size());
    detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.d));
    detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.n));
    detail::put_le<double>(buf, f.grid.L);
    for (double v : f.data) detail::put_le<double>(buf, v);
    return buf;
}

inline RealField decode_snapshot(const std::string& buf) {
    std::size_t pos = 0;
    auto d = detail::get_le<std::uint32_t>(buf, pos);
    auto n = detail::get_le<std::uint32_t>(buf, pos);
    auto L = detail::get_le<double>(buf, pos);
    GridSpec g(static_cast<int>(d), static_cast<int>(n), L);
    if (buf.size() != 16 + 8 * g.size()) throw IoError("snapshot payload size does not match header");
    std::vector<double> samples(g.size());
    for (auto& v : samples) v = detail::get_le<double>(buf, pos);
    return RealField(g, std::move(samples));
}

inline void write_snapshot(const std::filesystem::path& path, const RealField& f) {
    write_atomic(path, encode_snapshot(f));
}

inline RealField read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

/// CSV with columns x1..xd,value; intended for small grids.
inline std::string encode_csv(const RealField& f) {
    std::ostringstream out;
    out.precision(17);
    for (int a = 0; a < f.grid.d; ++a) out << 'x' << (a + 1) << ',';
    out << "value\n";
    std::vector<int> idx(f.grid.d);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.grid.unflatten(i, idx.data());
        for (int a = 0; a < f.grid.d; ++a) out << f.grid.coord(idx[a]) << ',';
        out << f.data[i] << '\n';
    }
    return out.str();
}

inline void write_csv(const std::filesystem::path& path, const RealField& f) { write_atomic(path, encode_csv(f)); }

}  // namespace wavecrit::io
