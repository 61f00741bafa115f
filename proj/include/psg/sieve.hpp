// Segmented sieve of Eratosthenes.
#ifndef PSG_SIEVE_HPP
#define PSG_SIEVE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "cache.hpp"
#include "common.hpp"

namespace psg {

inline constexpr u64 kDefaultSegmentSize = u64(1) << 20;

namespace detail {

// Odd-only simple sieve for the base primes <= sqrt(limit).
inline std::vector<u64> base_primes(u64 root) {
    std::vector<u8> is_p(root + 1, 1);
    std::vector<u64> primes;
    for (u64 i = 2; i <= root; ++i) {
        if (!is_p[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= root; j += i) is_p[j] = 0;
    }
    return primes;
}

inline DenseBitset sieve_bits(u64 limit, u64 segment_size) {
    // Segment boundaries stay byte-aligned so segments write disjoint bytes.
    segment_size = std::max<u64>(64, segment_size & ~u64(7));
    DenseBitset bits(limit + 1);
    const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 1;
    const auto primes = base_primes(std::min(root, limit));

    parallel_chunks(0, limit + 1, segment_size, [&](u64, u64 low, u64 high) {
        std::vector<u8> seg(high - low, 1);
        for (u64 p : primes) {
            if (p * p >= high) break;
            u64 start = std::max(p * p, ((low + p - 1) / p) * p);
            for (u64 j = start; j < high; j += p) seg[j - low] = 0;
        }
        if (low == 0) {
            seg[0] = 0;
            if (high > 1) seg[1] = 0;
        }
        for (u64 i = low; i < high; ++i)
            if (seg[i - low]) bits.set(i);
    });
    // Base primes below sqrt were crossed off by their own squares only; they
    // are marked prime correctly by the segment logic (p*p >= p never strikes p).
    return bits;
}

}  // namespace detail

// All primes <= limit as a bitset, with an optional prime list view.
class PrimeSet {
  public:
    PrimeSet() = default;
    PrimeSet(u64 limit, DenseBitset bits) : limit_(limit), bits_(std::move(bits)) {}

    u64 limit() const { return limit_; }
    bool is_prime(u64 n) const { return n <= limit_ && bits_.test(n); }
    u64 count() const { return bits_.count(); }
    const DenseBitset& bits() const { return bits_; }

    std::vector<u64> to_vector() const {
        std::vector<u64> out;
        for (u64 n = 2; n <= limit_; ++n)
            if (bits_.test(n)) out.push_back(n);
        return out;
    }

  private:
    u64 limit_ = 0;
    DenseBitset bits_;
};

inline PrimeSet sieve_primes(u64 limit, u64 segment_size = kDefaultSegmentSize) {
    if (limit < 2) throw OutOfRangeError("sieve_primes: limit must be >= 2");
    DenseBitset bits = cached_bitset(limit, 0, 0, "primes", [&] {
        return detail::sieve_bits(limit, segment_size);
    });
    return PrimeSet(limit, std::move(bits));
}

}  // namespace psg

#endif  // PSG_SIEVE_HPP
