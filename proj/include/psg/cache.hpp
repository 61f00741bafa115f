// On-disk bitset caches (PSGC format).
//
// Layout, all little-endian:
//   magic   "PSGC"  (4 bytes)
//   version u16     (currently 1)
//   limit   u64
//   num     u32     (0 for prime caches)
//   den     u32     (0 for prime caches)
//   bitset  ceil((limit+1)/8) bytes, bit i = membership of integer i
//   check   u64     FNV-1a over every preceding byte
//
// A cache that fails any structural or checksum test raises CacheCorruptError;
// callers recompute and warn instead of failing.
#ifndef PSG_CACHE_HPP
#define PSG_CACHE_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "common.hpp"

namespace psg {

// Directory for cache files; disabled (no caching) when empty.
inline std::optional<std::filesystem::path>& cache_directory() {
    static std::optional<std::filesystem::path> dir;
    return dir;
}

inline void set_cache_directory(std::optional<std::filesystem::path> dir) {
    cache_directory() = std::move(dir);
}

namespace detail {

inline void put_bytes(std::string& out, const void* p, std::size_t n) {
    out.append(static_cast<const char*>(p), n);
}
inline void put_u16(std::string& out, u16 v) {
    u8 b[2] = {u8(v), u8(v >> 8)};
    put_bytes(out, b, 2);
}
inline void put_u32(std::string& out, u32 v) {
    u8 b[4];
    for (int i = 0; i < 4; ++i) b[i] = u8(v >> (8 * i));
    put_bytes(out, b, 4);
}
inline void put_u64(std::string& out, u64 v) {
    u8 b[8];
    for (int i = 0; i < 8; ++i) b[i] = u8(v >> (8 * i));
    put_bytes(out, b, 8);
}

inline u16 get_u16(const u8* p) { return u16(p[0]) | u16(p[1]) << 8; }
inline u32 get_u32(const u8* p) {
    u32 v = 0;
    for (int i = 0; i < 4; ++i) v |= u32(p[i]) << (8 * i);
    return v;
}
inline u64 get_u64(const u8* p) {
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64(p[i]) << (8 * i);
    return v;
}

}  // namespace detail

inline constexpr u16 kCacheFormatVersion = 1;

struct PsgcRecord {
    u64 limit = 0;
    u32 num = 0;
    u32 den = 0;
    DenseBitset bits;
};

inline void write_psgc(const std::filesystem::path& path, u64 limit, u32 num, u32 den,
                       const DenseBitset& bits) {
    if (bits.size() != limit + 1)
        throw LengthMismatchError("write_psgc: bitset must cover [0, limit]");
    std::string buf;
    buf.reserve(26 + bits.bytes().size() + 8);
    detail::put_bytes(buf, "PSGC", 4);
    detail::put_u16(buf, kCacheFormatVersion);
    detail::put_u64(buf, limit);
    detail::put_u32(buf, num);
    detail::put_u32(buf, den);
    detail::put_bytes(buf, bits.bytes().data(), bits.bytes().size());
    detail::put_u64(buf, fnv1a64(buf.data(), buf.size()));
    // Write to a temp name first so a crash never leaves a truncated cache.
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            return;  // cache writes are best-effort
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

// Returns nullopt when the file does not exist; throws CacheCorruptError when
// it exists but fails validation.
inline std::optional<PsgcRecord> read_psgc(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 22 + 8) throw CacheCorruptError("cache file too short: " + path.string());
    const auto* p = reinterpret_cast<const u8*>(buf.data());
    if (std::memcmp(p, "PSGC", 4) != 0)
        throw CacheCorruptError("bad cache magic: " + path.string());
    if (detail::get_u16(p + 4) != kCacheFormatVersion)
        throw CacheCorruptError("unsupported cache version: " + path.string());
    PsgcRecord rec;
    rec.limit = detail::get_u64(p + 6);
    rec.num = detail::get_u32(p + 14);
    rec.den = detail::get_u32(p + 18);
    const u64 n_bytes = (rec.limit + 1 + 7) / 8;
    if (buf.size() != 22 + n_bytes + 8)
        throw CacheCorruptError("cache size mismatch: " + path.string());
    const u64 stored = detail::get_u64(p + 22 + n_bytes);
    const u64 actual = fnv1a64(buf.data(), buf.size() - 8);
    if (stored != actual) throw CacheCorruptError("cache checksum mismatch: " + path.string());
    std::vector<u8> bytes(p + 22, p + 22 + n_bytes);
    rec.bits = DenseBitset(rec.limit + 1, std::move(bytes));
    return rec;
}

// Load-or-compute helper shared by the sieve and PS-membership caches.
// compute() must return a DenseBitset of size limit+1.
template <typename ComputeFn>
inline DenseBitset cached_bitset(u64 limit, u32 num, u32 den, const std::string& stem,
                                 ComputeFn&& compute) {
    const auto& dir = cache_directory();
    if (!dir) return compute();
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    char name[128];
    std::snprintf(name, sizeof(name), "%s_%llu_%u_%u.psgc", stem.c_str(),
                  static_cast<unsigned long long>(limit), num, den);
    const auto path = *dir / name;
    try {
        if (auto rec = read_psgc(path)) {
            if (rec->limit == limit && rec->num == num && rec->den == den)
                return std::move(rec->bits);
            warn("cache key mismatch, recomputing: " + path.string());
        }
    } catch (const CacheCorruptError& e) {
        warn(std::string(e.what()) + " (recomputing)");
    }
    DenseBitset bits = compute();
    write_psgc(path, limit, num, den, bits);
    return bits;
}

}  // namespace psg

#endif  // PSG_CACHE_HPP
