#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include "psg/ps_core.hpp"
#include "psg/sieve.hpp"

using namespace psg;

namespace {

// Independent root oracle: GMP's own mpz_root, no shared code path with iroot.
BigInt gmp_root(const BigInt& a, unsigned long k) {
    BigInt r;
    mpz_root(r.get_mpz_t(), a.get_mpz_t(), k);
    return r;
}

}  // namespace

TEST_CASE("make_exponent reduces and validates") {
    auto c = make_exponent(11, 10);
    CHECK(c.num() == 11);
    CHECK(c.den() == 10);

    auto c2 = make_exponent(3, 2);
    CHECK(c2.num() == 3);
    CHECK(c2.den() == 2);

    auto c3 = make_exponent(22, 20);  // reduces to 11/10
    CHECK(c3 == c);

    CHECK_THROWS_AS(make_exponent(4, 2), OutOfRangeError);   // = 2, boundary excluded
    CHECK_THROWS_AS(make_exponent(1, 1), OutOfRangeError);   // = 1
    CHECK_THROWS_AS(make_exponent(1, 2), OutOfRangeError);   // < 1
    CHECK_THROWS_AS(make_exponent(7, 3), OutOfRangeError);   // > 2
    CHECK_THROWS_AS(make_exponent(3, 0), ZeroDenominatorError);
}

TEST_CASE("floor_pow matches hand values") {
    CHECK(floor_pow(10, make_exponent(11, 10)) == 12);  // 12^10 <= 10^11 < 13^10
    CHECK(floor_pow(1, make_exponent(11, 10)) == 1);
    CHECK(floor_pow(1, make_exponent(3, 2)) == 1);
    CHECK(floor_pow(2, make_exponent(3, 2)) == 2);  // floor(sqrt(8))
    CHECK(floor_pow(4, make_exponent(3, 2)) == 8);  // exact power
}

TEST_CASE("iroot agrees with the GMP oracle and brackets exactly") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 400; ++trial) {
        BigInt a = 1;
        const int words = 1 + static_cast<int>(rng.next_below(4));
        for (int w = 0; w < words; ++w) {
            a <<= 64;
            a += BigInt(static_cast<unsigned long>(rng.next()));
        }
        const unsigned long k = 1 + static_cast<unsigned long>(rng.next_below(64));
        const BigInt r = iroot(a, k);
        CHECK(r == gmp_root(a, k));
        BigInt rk, rk1;
        mpz_pow_ui(rk.get_mpz_t(), r.get_mpz_t(), k);
        mpz_pow_ui(rk1.get_mpz_t(), BigInt(r + 1).get_mpz_t(), k);
        CHECK(rk <= a);
        CHECK(rk1 > a);
    }
    // Small exhaustive corner: every (a, k) with a <= 200, k <= 6.
    for (unsigned long a = 1; a <= 200; ++a)
        for (unsigned long k = 1; k <= 6; ++k)
            CHECK(iroot(BigInt(a), k) == gmp_root(BigInt(a), k));
}

TEST_CASE("floor_pow cross-checked against the GMP root oracle") {
    SplitMix64 rng(7);
    for (auto [num, den] : {std::pair<u64, u64>{11, 10}, {21, 20}, {3, 2}, {1999, 1000}}) {
        const auto c = make_exponent(num, den);
        for (int trial = 0; trial < 300; ++trial) {
            const u64 n = 1 + rng.next_below(1000000000ULL);
            BigInt a;
            mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(n),
                          static_cast<unsigned long>(c.num()));
            CHECK(BigInt(static_cast<unsigned long>(floor_pow(n, c))) ==
                  gmp_root(a, static_cast<unsigned long>(c.den())));
        }
    }
}

TEST_CASE("is_ps_member matches hand values") {
    const auto c = make_exponent(3, 2);
    CHECK(is_ps_member(5, c));   // floor(3^1.5) = 5
    CHECK(!is_ps_member(3, c));  // the sequence 1, 2, 5 skips 3 and 4
    CHECK(!is_ps_member(4, c));
    CHECK(is_ps_member(1, c));
    CHECK(is_ps_member(1, make_exponent(11, 10)));
}

TEST_CASE("ps_sequence matches direct enumeration") {
    CHECK(ps_sequence(15, make_exponent(3, 2)) == std::vector<u64>{1, 2, 5, 8, 11, 14});
    CHECK(ps_sequence(12, make_exponent(11, 10)) ==
          std::vector<u64>{1, 2, 3, 4, 5, 7, 8, 9, 11, 12});
    CHECK(ps_sequence(1, make_exponent(3, 2)) == std::vector<u64>{1});
    CHECK(ps_sequence(1, make_exponent(11, 10)) == std::vector<u64>{1});
}

TEST_CASE("membership, enumeration and counting are consistent") {
    for (auto [num, den] : {std::pair<u64, u64>{11, 10}, {3, 2}, {21, 20}}) {
        const auto c = make_exponent(num, den);
        const u64 limit = 10000;
        const auto seq = ps_sequence(limit, c);

        // Strictly increasing and within bounds.
        for (std::size_t i = 1; i < seq.size(); ++i) REQUIRE(seq[i] > seq[i - 1]);
        REQUIRE(seq.back() <= limit);

        // Monotone counting: the sequence length is the largest n with
        // floor_pow(n) <= limit.
        CHECK(seq.size() == ps_count(limit, c));
        CHECK(floor_pow(seq.size(), c) <= limit);
        CHECK(floor_pow(seq.size() + 1, c) > limit);

        // Membership <-> enumeration, every m up to the limit.
        const DenseBitset bits = ps_membership_bits(limit, c);
        std::size_t idx = 0;
        for (u64 m = 1; m <= limit; ++m) {
            const bool in_seq = idx < seq.size() && seq[idx] == m;
            if (in_seq) ++idx;
            CHECK(is_ps_member(m, c) == in_seq);
            CHECK(bits.test(m) == in_seq);
        }
    }
}

TEST_CASE("ceiling-root characterization of membership") {
    // m in N^c  iff  ceil(m^(1/c)) != ceil((m+1)^(1/c)), both roots exact.
    for (auto [num, den] : {std::pair<u64, u64>{11, 10}, {3, 2}}) {
        const auto c = make_exponent(num, den);
        const unsigned long cn = c.num(), cd = c.den();
        for (u64 m = 1; m <= 100000; ++m) {
            const BigInt k1 = ceil_root(detail::pow_u64(m, cd), cn);
            const BigInt k2 = ceil_root(detail::pow_u64(m + 1, cd), cn);
            CHECK(is_ps_member(m, c) == (k1 != k2));
        }
    }
}

TEST_CASE("exactness bracketing for a large-denominator exponent") {
    // c = 73/64 - 1/1000 = 9117/8000; sampled sweep (the full sweep of the
    // small exponents runs in the acceptance suite).
    const auto c = make_exponent(9117, 8000);
    REQUIRE(c.num() == 9117);
    REQUIRE(c.den() == 8000);
    SplitMix64 rng(kDefaultSeed);
    std::vector<u64> ns;
    for (u64 n = 1; n <= 64; ++n) ns.push_back(n);
    for (int i = 0; i < 1500; ++i) ns.push_back(1 + rng.next_below(1000000));
    for (u64 n : ns) {
        const u64 k = floor_pow(n, c);
        const BigInt npow = detail::pow_u64(n, 9117);
        CHECK(detail::pow_u64(k, 8000) <= npow);
        CHECK(detail::pow_u64(k + 1, 8000) > npow);
    }
}

TEST_CASE("sieve_primes basics") {
    const auto small = sieve_primes(10);
    CHECK(small.to_vector() == std::vector<u64>{2, 3, 5, 7});

    const auto p30 = sieve_primes(30);
    CHECK(p30.count() == 10);
    CHECK(p30.to_vector().back() == 29);

    CHECK_THROWS_AS(sieve_primes(1), OutOfRangeError);
}

TEST_CASE("segment size does not change the sieve") {
    const auto a = sieve_primes(100000, 512);
    const auto b = sieve_primes(100000, 1 << 16);
    CHECK(a.bits() == b.bits());
}

TEST_CASE("sieve agrees with an independent simple sieve") {
    const u64 limit = 2000000;
    std::vector<char> is_p(limit + 1, 1);
    is_p[0] = is_p[1] = 0;
    for (u64 i = 2; i * i <= limit; ++i)
        if (is_p[i])
            for (u64 j = i * i; j <= limit; j += i) is_p[j] = 0;
    const auto sieved = sieve_primes(limit);
    u64 count = 0;
    for (u64 n = 0; n <= limit; ++n) {
        REQUIRE(sieved.is_prime(n) == static_cast<bool>(is_p[n]));
        count += is_p[n];
    }
    CHECK(sieved.count() == count);
    CHECK(count == 148933);  // pi(2*10^6)
}

TEST_CASE("prime counting at 10^8", "[slow]") {
    CHECK(sieve_primes(100000000).count() == 5761455);
}

TEST_CASE("ps_primes carries exact primes with consistent weights") {
    const auto c11 = make_exponent(11, 10);
    const auto pp = ps_primes(12, c11);
    std::vector<u64> ps;
    for (const auto& q : pp) ps.push_back(q.p);
    CHECK(ps == std::vector<u64>{2, 3, 5, 7, 11});

    const auto c32 = make_exponent(3, 2);
    const auto pp2 = ps_primes(14, c32);
    std::vector<u64> ps2;
    for (const auto& q : pp2) ps2.push_back(q.p);
    CHECK(ps2 == std::vector<u64>{2, 5, 11});

    CHECK(ps_primes(1, c32).empty());

    for (const auto& q : ps_primes(5000, c11)) {
        CHECK(floor_pow(q.preimage, c11) == q.p);
        CHECK(is_ps_member(q.p, c11));
        // Weight within a few ulps of the extended-precision value.
        const long double w = (11.0L / 10.0L) * expl((1.0L / 11.0L) * logl((long double)q.p));
        CHECK(q.weight == Catch::Approx(static_cast<double>(w)).epsilon(1e-14));
        CHECK(q.logp == Catch::Approx(std::log(static_cast<double>(q.p))).epsilon(1e-14));
    }
}

TEST_CASE("density of the weighted PS count approaches one") {
    const auto c = make_exponent(11, 10);
    const u64 N = 1000000;
    long double sum = 0.0L;
    for (u64 m : ps_sequence(N, c)) sum += ps_weight(m, c);
    const double ratio = static_cast<double>(sum) / static_cast<double>(N);
    CHECK(ratio == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("floor_pow rejects n = 0") {
    CHECK_THROWS_AS(floor_pow(0, make_exponent(3, 2)), OutOfRangeError);
    CHECK_THROWS_AS(is_ps_member(0, make_exponent(3, 2)), OutOfRangeError);
}
