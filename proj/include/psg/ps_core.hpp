// Exact floor-power arithmetic for Piatetski-Shapiro sets.
//
// Everything that decides membership of the set {floor(n^c)} runs on exact
// integer arithmetic (GMP): c is a reduced fraction num/den with 1 < c < 2,
// and floor(n^c) is the integer den-th root of n^num. Floating point only
// enters as a root seed (corrected exactly) and in the stored prime weights.
#ifndef PSG_PS_CORE_HPP
#define PSG_PS_CORE_HPP

#include <gmpxx.h>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "common.hpp"
#include "cache.hpp"
#include "sieve.hpp"

namespace psg {

using BigInt = mpz_class;

// ---- RationalExponent -------------------------------------------------------

// Reduced fraction num/den with den < num < 2*den, i.e. c in (1, 2).
class RationalExponent {
  public:
    static RationalExponent make(u64 num, u64 den) {
        if (den == 0) throw ZeroDenominatorError("exponent denominator is zero");
        if (num == 0) throw OutOfRangeError("exponent must satisfy 1 < c < 2");
        const u64 g = std::gcd(num, den);
        num /= g;
        den /= g;
        if (!(den < num && num < 2 * den))
            throw OutOfRangeError("exponent " + std::to_string(num) + "/" +
                                  std::to_string(den) + " outside (1, 2)");
        return RationalExponent(num, den);
    }

    u64 num() const { return num_; }
    u64 den() const { return den_; }
    double value() const { return double(num_) / double(den_); }
    double inverse() const { return double(den_) / double(num_); }
    // 1 - 1/c = (num - den)/num
    double one_minus_inverse() const { return double(num_ - den_) / double(num_); }
    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    friend bool operator==(const RationalExponent& a, const RationalExponent& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

  private:
    RationalExponent(u64 n, u64 d) : num_(n), den_(d) {}
    u64 num_, den_;
};

inline RationalExponent make_exponent(u64 num, u64 den) {
    return RationalExponent::make(num, den);
}

// ---- exact integer roots ------------------------------------------------------

namespace detail {

inline BigInt pow_big(const BigInt& base, unsigned long k) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), k);
    return r;
}

inline BigInt pow_u64(u64 base, unsigned long k) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), k);
    return r;
}

}  // namespace detail

// Largest r with r^k <= a. Newton iteration on integers from an overestimate,
// then an exact +-1 correction.
inline BigInt iroot(const BigInt& a, unsigned long k) {
    if (k == 0) throw OutOfRangeError("iroot: k must be >= 1");
    if (sgn(a) < 0) throw OutOfRangeError("iroot: negative radicand");
    if (k == 1 || a <= 1) return a;

    const std::size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
    BigInt x;
    if (bits <= 62 * k) {
        // Root fits u64: seed from a float estimate, padded above the root.
        signed long e2;
        const double d = mpz_get_d_2exp(&e2, a.get_mpz_t());
        const long double lg = static_cast<long double>(e2) + log2l(static_cast<long double>(d));
        const unsigned long long est =
            static_cast<unsigned long long>(llroundl(exp2l(lg / static_cast<long double>(k))));
        x = BigInt(static_cast<unsigned long>(est + (est >> 40) + 2));
    } else {
        x = BigInt(1) << static_cast<unsigned long>((bits + k - 1) / k);
    }

    for (;;) {
        const BigInt y = ((k - 1) * x + a / detail::pow_big(x, k - 1)) / k;
        if (y >= x) break;
        x = (y >= 1) ? y : BigInt(1);
        if (x == 1) break;
    }
    while (detail::pow_big(x, k) > a) --x;
    while (detail::pow_big(x + 1, k) <= a) ++x;
    return x;
}

// Smallest r with r^k >= a (a >= 1).
inline BigInt ceil_root(const BigInt& a, unsigned long k) {
    if (a <= 1) return a;
    return iroot(a - 1, k) + 1;
}

// ---- floor powers and PS membership -------------------------------------------

// floor(n^c) as the exact integer den-th root of n^num.
inline u64 floor_pow(u64 n, const RationalExponent& c) {
    if (n == 0) throw OutOfRangeError("floor_pow: n must be >= 1");
    const BigInt a = detail::pow_u64(n, static_cast<unsigned long>(c.num()));
    const BigInt r = iroot(a, static_cast<unsigned long>(c.den()));
    if (!r.fits_ulong_p()) throw OverflowError("floor_pow: result exceeds 64 bits");
    return static_cast<u64>(r.get_ui());
}

// Smallest k with k^c >= m, i.e. the preimage candidate for m.
inline u64 ps_preimage_candidate(u64 m, const RationalExponent& c) {
    const BigInt k = ceil_root(detail::pow_u64(m, static_cast<unsigned long>(c.den())),
                               static_cast<unsigned long>(c.num()));
    if (!k.fits_ulong_p()) throw OverflowError("ps_preimage_candidate: k exceeds 64 bits");
    return static_cast<u64>(k.get_ui());
}

// m belongs to {floor(n^c)} iff floor(k^c) = m for the smallest k with k^c >= m.
inline bool is_ps_member(u64 m, const RationalExponent& c) {
    if (m == 0) throw OutOfRangeError("is_ps_member: m must be >= 1");
    return floor_pow(ps_preimage_candidate(m, c), c) == m;
}

// |{floor(n^c)} ∩ [1, limit]| = the largest n with floor(n^c) <= limit,
// i.e. n^num < (limit+1)^den.
inline u64 ps_count(u64 limit, const RationalExponent& c) {
    if (limit == 0) return 0;
    const BigInt bound = detail::pow_u64(limit + 1, static_cast<unsigned long>(c.den()));
    const BigInt last = ceil_root(bound, static_cast<unsigned long>(c.num())) - 1;
    if (!last.fits_ulong_p()) throw OverflowError("ps_count: count exceeds 64 bits");
    return static_cast<u64>(last.get_ui());
}

// {floor(n^c)} ∩ [1, limit], strictly increasing (strict since c > 1).
inline std::vector<u64> ps_sequence(u64 limit, const RationalExponent& c) {
    if (limit == 0) throw OutOfRangeError("ps_sequence: limit must be >= 1");
    const u64 n_end = ps_count(limit, c);
    std::vector<u64> seq(n_end);
    parallel_chunks(1, n_end + 1, 1 << 14, [&](u64, u64 lo, u64 hi) {
        for (u64 n = lo; n < hi; ++n) seq[n - 1] = floor_pow(n, c);
    });
    return seq;
}

// Membership bitset for [0, limit]; cached on disk when a cache dir is set.
inline DenseBitset ps_membership_bits(u64 limit, const RationalExponent& c) {
    if (limit == 0) throw OutOfRangeError("ps_membership_bits: limit must be >= 1");
    return cached_bitset(limit, static_cast<u32>(c.num()), static_cast<u32>(c.den()),
                         "psmem", [&] {
        DenseBitset bits(limit + 1);
        const u64 n_end = ps_count(limit, c);
        const u64 chunk = 1 << 14;
        const u64 n_chunks = (n_end + chunk - 1) / chunk;
        std::vector<std::vector<u64>> values(n_chunks);
        parallel_chunks(1, n_end + 1, chunk, [&](u64 ci, u64 lo, u64 hi) {
            auto& v = values[ci];
            v.reserve(hi - lo);
            for (u64 n = lo; n < hi; ++n) v.push_back(floor_pow(n, c));
        });
        for (const auto& v : values)
            for (u64 m : v) bits.set(m);
        return bits;
    });
}

// ---- PS primes -------------------------------------------------------------------

// A prime p = floor(preimage^c), carrying the weight c * p^(1-1/c) and log p.
struct PsPrime {
    u64 p = 0;
    double weight = 0.0;
    double logp = 0.0;
    u64 preimage = 0;
};

// c * p^(1-1/c), evaluated in extended precision before narrowing.
inline double ps_weight(u64 p, const RationalExponent& c) {
    const long double e = static_cast<long double>(c.num() - c.den()) / c.num();
    const long double w = (static_cast<long double>(c.num()) / c.den()) *
                          expl(e * logl(static_cast<long double>(p)));
    return static_cast<double>(w);
}

inline std::vector<PsPrime> ps_primes(u64 limit, const RationalExponent& c) {
    std::vector<PsPrime> out;
    if (limit < 2) return out;
    const PrimeSet primes = sieve_primes(limit);
    const u64 n_end = ps_count(limit, c);
    for (u64 n = 1; n <= n_end; ++n) {
        const u64 m = floor_pow(n, c);
        if (!primes.is_prime(m)) continue;
        out.push_back(PsPrime{m, ps_weight(m, c),
                              std::log(static_cast<double>(m)), n});
    }
    return out;
}

}  // namespace psg

#endif  // PSG_PS_CORE_HPP
