// Shared plumbing: integer aliases, error types, diagnostics stream,
// deterministic chunked parallelism, seeded RNG, FNV-1a checksum.
#ifndef PSG_COMMON_HPP
#define PSG_COMMON_HPP

#include <atomic>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace psg {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// ---- error types -----------------------------------------------------------

struct OutOfRangeError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ZeroDenominatorError : std::domain_error {
    using std::domain_error::domain_error;
};
struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};
struct CacheCorruptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridTooSmallError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfBoundsError : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct LengthMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DominationViolatedError : std::domain_error {
    using std::domain_error::domain_error;
};
struct NoSolutionError : std::logic_error {
    using std::logic_error::logic_error;
};

// ---- diagnostics ------------------------------------------------------------

// Non-fatal warnings (corrupt caches, ...) go here; tests may redirect.
inline std::ostream*& diagnostics_stream() {
    static std::ostream* s = &std::cerr;
    return s;
}

inline void warn(const std::string& msg) {
    if (auto* s = diagnostics_stream()) (*s) << "psg: warning: " << msg << '\n';
}

// ---- thread control ---------------------------------------------------------

inline std::atomic<unsigned>& thread_count_ref() {
    static std::atomic<unsigned> n{std::max(1u, std::thread::hardware_concurrency())};
    return n;
}

inline unsigned thread_count() { return std::max(1u, thread_count_ref().load()); }
inline void set_thread_count(unsigned n) { thread_count_ref() = n ? n : 1; }

// Chunked parallel-for. The chunk grid is fixed by chunk_size (independent of
// the worker count), so any writes keyed by chunk index are deterministic.
// fn(chunk_index, lo, hi) must only touch state owned by its chunk.
template <typename Fn>
inline void parallel_chunks(u64 lo, u64 hi, u64 chunk_size, Fn&& fn) {
    if (hi <= lo) return;
    if (chunk_size == 0) chunk_size = 1;
    const u64 n_chunks = (hi - lo + chunk_size - 1) / chunk_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<u64>(thread_count(), n_chunks));
    auto run_chunk = [&](u64 ci) {
        const u64 a = lo + ci * chunk_size;
        const u64 b = std::min(hi, a + chunk_size);
        fn(ci, a, b);
    };
    if (workers <= 1) {
        for (u64 ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
        return;
    }
    std::atomic<u64> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const u64 ci = next.fetch_add(1);
            if (ci >= n_chunks) return;
            try {
                run_chunk(ci);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Map over fixed chunks, combine per-chunk results in ascending chunk order.
// Deterministic regardless of the thread count.
template <typename T, typename MapFn, typename CombineFn>
inline T parallel_map_reduce(u64 lo, u64 hi, u64 chunk_size, T init, MapFn&& map,
                             CombineFn&& combine) {
    if (hi <= lo) return init;
    if (chunk_size == 0) chunk_size = 1;
    const u64 n_chunks = (hi - lo + chunk_size - 1) / chunk_size;
    std::vector<T> partial(n_chunks, init);
    parallel_chunks(lo, hi, chunk_size,
                    [&](u64 ci, u64 a, u64 b) { partial[ci] = map(a, b); });
    T acc = init;
    for (u64 ci = 0; ci < n_chunks; ++ci) acc = combine(acc, partial[ci]);
    return acc;
}

// ---- seeded RNG --------------------------------------------------------------

// Documented default seed for every sampling routine in the library.
inline constexpr u64 kDefaultSeed = 0x5053474CULL;

// splitmix64; stable across platforms, unlike std::uniform_int_distribution.
struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed = kDefaultSeed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, n); modulo bias is irrelevant for the sampling here.
    u64 next_below(u64 n) { return n ? next() % n : 0; }
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }
};

// ---- checksums ----------------------------------------------------------------

inline u64 fnv1a64(const void* data, std::size_t len, u64 seed = 0xCBF29CE484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    u64 h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

// ---- dense bitset --------------------------------------------------------------

// Bit i of byte i/8 (little-endian bit order); matches the on-disk cache layout.
class DenseBitset {
  public:
    DenseBitset() = default;
    explicit DenseBitset(u64 n_bits) : n_bits_(n_bits), bytes_((n_bits + 7) / 8, 0) {}
    DenseBitset(u64 n_bits, std::vector<u8> bytes)
        : n_bits_(n_bits), bytes_(std::move(bytes)) {
        if (bytes_.size() != (n_bits_ + 7) / 8)
            throw LengthMismatchError("DenseBitset: byte count does not match bit count");
    }

    u64 size() const { return n_bits_; }
    bool test(u64 i) const { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
    void set(u64 i) { bytes_[i >> 3] |= u8(1u << (i & 7)); }
    void reset(u64 i) { bytes_[i >> 3] &= u8(~(1u << (i & 7))); }

    u64 count() const {
        u64 c = 0;
        for (u8 b : bytes_) c += static_cast<u64>(__builtin_popcount(b));
        return c;
    }

    const std::vector<u8>& bytes() const { return bytes_; }
    std::vector<u8>& bytes() { return bytes_; }

    bool operator==(const DenseBitset& o) const {
        return n_bits_ == o.n_bits_ && bytes_ == o.bytes_;
    }

  private:
    u64 n_bits_ = 0;
    std::vector<u8> bytes_;
};

}  // namespace psg

#endif  // PSG_COMMON_HPP
