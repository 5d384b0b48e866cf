#pragma once
//
// CNSF snapshot format (shared repo-wide):
//   magic "CNSF", u32 version = 1, u64 n, f64 box_length, f64 time,
//   f64 omega, u8 flags (bit0 = divergence_free), then 3 n^3 complex
//   coefficients as little-endian f64 (re, im) pairs in row-major standard
//   FFT frequency order, components concatenated.
//

#include <bit>
#include <cstring>
#include <fstream>

#include "cnsf/field.hpp"

namespace cnsf {

struct SnapshotHeader {
    double time = 0;
    double omega = 0;
};

namespace detail {

template <class T>
void put(std::string& out, const T& v) {
    // Little-endian host assumed (x86-64); keep the byte contract explicit.
    static_assert(std::endian::native == std::endian::little,
                  "CNSF snapshots are little-endian");
    out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& off) {
    if (off + sizeof(T) > in.size()) throw std::runtime_error("snapshot truncated");
    T v;
    std::memcpy(&v, in.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

} // namespace detail

inline std::string encode_snapshot(const SpectralVectorField& u, double time, double omega) {
    std::string out;
    out.reserve(41 + 48 * u.grid.size());
    out.append("CNSF", 4);
    detail::put(out, std::uint32_t{1});
    detail::put(out, std::uint64_t{u.grid.n()});
    detail::put(out, u.grid.box_length());
    detail::put(out, time);
    detail::put(out, omega);
    detail::put(out, static_cast<std::uint8_t>(u.divergence_free ? 1 : 0));
    for (int c = 0; c < 3; ++c)
        for (const cplx& z : u.comp[c]) {
            detail::put(out, z.real());
            detail::put(out, z.imag());
        }
    return out;
}

inline SpectralVectorField decode_snapshot(const std::string& in, SnapshotHeader* hdr = nullptr) {
    std::size_t off = 0;
    if (in.size() < 41 || in.compare(0, 4, "CNSF") != 0)
        throw std::runtime_error("not a CNSF snapshot");
    off = 4;
    auto version = detail::get<std::uint32_t>(in, off);
    if (version != 1) throw std::runtime_error("unsupported CNSF version");
    auto n = detail::get<std::uint64_t>(in, off);
    double box = detail::get<double>(in, off);
    double time = detail::get<double>(in, off);
    double omega = detail::get<double>(in, off);
    auto flags = detail::get<std::uint8_t>(in, off);

    SpectralVectorField u(GridSpec(static_cast<std::size_t>(n), box));
    u.divergence_free = (flags & 1u) != 0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < u.grid.size(); ++i) {
            double re = detail::get<double>(in, off);
            double im = detail::get<double>(in, off);
            u.comp[c][i] = cplx{re, im};
        }
    if (hdr) *hdr = SnapshotHeader{time, omega};
    return u;
}

inline void write_snapshot_file(const std::string& path, const SpectralVectorField& u,
                                double time, double omega) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::string bytes = encode_snapshot(u, time, omega);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("short write to " + path);
}

inline SpectralVectorField read_snapshot_file(const std::string& path,
                                              SnapshotHeader* hdr = nullptr) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes, hdr);
}

} // namespace cnsf
