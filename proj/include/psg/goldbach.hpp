// Ternary Goldbach verification over Piatetski-Shapiro primes: triple
// convolutions, exact representation counts, range verification, the
// transference-hypothesis checker and the twisted positivity functional.
#ifndef PSG_GOLDBACH_HPP
#define PSG_GOLDBACH_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "common.hpp"
#include "fft.hpp"
#include "ps_core.hpp"
#include "spectral.hpp"
#include "weights.hpp"

namespace psg {

struct GoldbachConfig {
    RationalExponent c1, c2, c3;
    u64 X = 0;          // ambient scale; primes are taken from [1, X]
    u64 W = 2;          // primorial for the twisted weights
    bool use_fft = true;

    static GoldbachConfig uniform(const RationalExponent& c, u64 X, u64 W = 2,
                                  bool use_fft = true) {
        return GoldbachConfig{c, c, c, X, W, use_fft};
    }
};

// ---- PS-prime tables ----------------------------------------------------------

struct PsPrimeTable {
    u64 limit = 0;
    DenseBitset bits;       // bit p set iff p is a PS prime <= limit
    std::vector<u64> list;  // the same primes, ascending
};

inline PsPrimeTable ps_prime_table(u64 limit, const RationalExponent& c) {
    PsPrimeTable t;
    t.limit = limit;
    t.bits = DenseBitset(limit + 1);
    if (limit < 2) return t;
    const PrimeSet primes = sieve_primes(limit);
    const DenseBitset member = ps_membership_bits(limit, c);
    for (u64 p = 2; p <= limit; ++p)
        if (primes.is_prime(p) && member.test(p)) {
            t.bits.set(p);
            t.list.push_back(p);
        }
    return t;
}

// 1 at every PS prime <= limit.
inline WeightedSequence ps_prime_indicator(u64 limit, const RationalExponent& c) {
    const PsPrimeTable t = ps_prime_table(limit, c);
    WeightedSequence f(std::max<u64>(limit, 1), SeqKind::custom);
    for (u64 p : t.list) f.at(p) = 1.0;
    return f;
}

// ---- triple convolution ----------------------------------------------------------

// out[n] = sum_{x1+x2+x3=n} f1(x1) f2(x2) f3(x3), indices 0..3N (support 3..3N).
inline std::vector<double> triple_convolution(const WeightedSequence& f1,
                                              const WeightedSequence& f2,
                                              const WeightedSequence& f3,
                                              bool use_fft = true) {
    const u64 N = f1.n_max();
    if (f2.n_max() != N || f3.n_max() != N)
        throw LengthMismatchError("triple_convolution: sequences must share n_max");
    if (use_fft) {
        auto out = fft::convolve3(f1.raw(), f2.raw(), f3.raw());
        out.resize(3 * N + 1, 0.0);
        return out;
    }
    // Direct path: the oracle the FFT route is validated against.
    const auto a = f1.raw(), b = f2.raw(), c = f3.raw();
    std::vector<double> pair(2 * N + 1, 0.0);
    for (u64 i = 1; i <= N; ++i) {
        if (a[i] == 0.0) continue;
        for (u64 j = 1; j <= N; ++j) pair[i + j] += a[i] * b[j];
    }
    std::vector<double> out(3 * N + 1, 0.0);
    for (u64 s = 2; s <= 2 * N; ++s) {
        if (pair[s] == 0.0) continue;
        for (u64 k = 1; k <= N; ++k) out[s + k] += pair[s] * c[k];
    }
    return out;
}

// ---- exact representation counts ----------------------------------------------------

// Ordered triples (p1, p2, p3) of PS primes with p_i <= X summing to n.
// Exact integer enumeration; cost O(|P1| * |P2|).
inline u64 count_representations(u64 n, const GoldbachConfig& cfg) {
    if (n < 6) throw OutOfRangeError("count_representations: n must be >= 6");
    const u64 bound = std::min(cfg.X, n);
    const PsPrimeTable t1 = ps_prime_table(bound, cfg.c1);
    const PsPrimeTable t2 = ps_prime_table(bound, cfg.c2);
    const PsPrimeTable t3 = ps_prime_table(bound, cfg.c3);
    u64 count = 0;
    for (u64 p1 : t1.list) {
        if (p1 + 4 > n) break;
        const u64 rest = n - p1;
        for (u64 p2 : t2.list) {
            if (p2 + 2 > rest) break;
            const u64 p3 = rest - p2;
            if (p3 <= t3.limit && t3.bits.test(p3)) ++count;
        }
    }
    return count;
}

// Lexicographically smallest witness, if any.
inline std::optional<std::array<u64, 3>> find_representation(u64 n,
                                                             const GoldbachConfig& cfg) {
    if (n < 6) throw OutOfRangeError("find_representation: n must be >= 6");
    const u64 bound = std::min(cfg.X, n);
    const PsPrimeTable t1 = ps_prime_table(bound, cfg.c1);
    const PsPrimeTable t2 = ps_prime_table(bound, cfg.c2);
    const PsPrimeTable t3 = ps_prime_table(bound, cfg.c3);
    for (u64 p1 : t1.list) {
        if (p1 + 4 > n) break;
        const u64 rest = n - p1;
        for (u64 p2 : t2.list) {
            if (p2 + 2 > rest) break;
            const u64 p3 = rest - p2;
            if (p3 <= t3.limit && t3.bits.test(p3))
                return std::array<u64, 3>{p1, p2, p3};
        }
    }
    return std::nullopt;
}

// ---- range verification -----------------------------------------------------------------

struct VerifyResult {
    u64 lo = 0, hi = 0;
    std::vector<u64> counts;      // ordered counts for odd n, indexed (n - lo_odd)/2
    std::vector<u64> exceptions;  // odd n with count 0
    u64 largest_exception = 0;    // 0 when there are none

    u64 lo_odd = 0;
    u64 count_for(u64 n) const {
        if (n < lo_odd || n > hi || (n - lo_odd) % 2 != 0)
            throw OutOfBoundsError("VerifyResult: n outside verified range");
        return counts[(n - lo_odd) / 2];
    }
};

// Exact pair-sum table: pair[s] = #{(p2, p3) in P2 x P3 : p2 + p3 = s}.
// Pure integer arithmetic; the FFT-independent side of the count validation.
inline std::vector<u32> pair_sum_counts(const PsPrimeTable& t2, const PsPrimeTable& t3,
                                        u64 max_sum) {
    std::vector<u32> pair(max_sum + 1, 0);
    for (u64 p2 : t2.list) {
        if (p2 + 2 > max_sum) break;
        const u64 cap = max_sum - p2;
        for (u64 p3 : t3.list) {
            if (p3 > cap) break;
            ++pair[p2 + p3];
        }
    }
    return pair;
}

namespace detail {

inline u64 exact_count_via_pairs(u64 n, const PsPrimeTable& t1,
                                 const std::vector<u32>& pair) {
    u64 c = 0;
    for (u64 p1 : t1.list) {
        if (p1 + 4 > n) break;
        c += pair[n - p1];
    }
    return c;
}

}  // namespace detail

// Counts every odd n in [lo, hi] with one shared triple convolution of the
// PS-prime indicators on [1, X]. FFT counts are rounded to integers and spot
// checked against an exact integer pair-table count (all n below 10^4 in the
// range, plus up to 1000 sampled n above).
inline VerifyResult verify_range(u64 lo, u64 hi, const GoldbachConfig& cfg,
                                 u64 seed = kDefaultSeed) {
    if (lo > hi) throw OutOfRangeError("verify_range: lo > hi");
    if (hi > 3 * cfg.X) throw OutOfRangeError("verify_range: hi exceeds 3X");
    VerifyResult res;
    res.lo = lo;
    res.hi = hi;
    res.lo_odd = lo % 2 ? lo : lo + 1;
    if (res.lo_odd > hi) return res;

    const WeightedSequence f1 = ps_prime_indicator(cfg.X, cfg.c1);
    const WeightedSequence f2 = ps_prime_indicator(cfg.X, cfg.c2);
    const WeightedSequence f3 = ps_prime_indicator(cfg.X, cfg.c3);
    const auto conv = triple_convolution(f1, f2, f3, cfg.use_fft);

    const u64 n_odd = (hi - res.lo_odd) / 2 + 1;
    res.counts.resize(n_odd);
    for (u64 i = 0; i < n_odd; ++i) {
        const u64 n = res.lo_odd + 2 * i;
        const double raw = n < conv.size() ? conv[n] : 0.0;
        const u64 rounded = raw <= 0.5 ? 0 : static_cast<u64>(std::llround(raw));
        res.counts[i] = rounded;
        if (rounded == 0) {
            res.exceptions.push_back(n);
            res.largest_exception = n;
        }
    }

    // Drift guard: exact integer recount on a deterministic subset.
    {
        const PsPrimeTable t1 = ps_prime_table(cfg.X, cfg.c1);
        const PsPrimeTable t2 = ps_prime_table(cfg.X, cfg.c2);
        const PsPrimeTable t3 = ps_prime_table(cfg.X, cfg.c3);
        const auto pair = pair_sum_counts(t2, t3, hi);
        std::vector<u64> sample;
        for (u64 n = res.lo_odd; n <= std::min<u64>(hi, 10000); n += 2)
            sample.push_back(n);
        SplitMix64 rng(seed);
        for (u64 k = 0; k < 1000 && n_odd > 0; ++k)
            sample.push_back(res.lo_odd + 2 * rng.next_below(n_odd));
        for (u64 n : sample) {
            const u64 exact = detail::exact_count_via_pairs(n, t1, pair);
            if (exact != res.count_for(n))
                throw OverflowError("verify_range: FFT count drift at n = " +
                                    std::to_string(n));
        }
    }
    return res;
}

// ---- per-n report ---------------------------------------------------------------------------

struct RepresentationReport {
    u64 n = 0;
    std::optional<std::array<u64, 3>> witness;
    u64 ordered_count = 0;
    double weighted_value = 0.0;  // nu^(c1) * nu^(c2) * nu^(c3) (1,0)-convolution at n
};

namespace detail {

// Exact (no FFT) evaluation of g1*g2*g3 at a single point.
inline double convolution_at(const WeightedSequence& g1, const WeightedSequence& g2,
                             const WeightedSequence& g3, u64 n) {
    std::vector<u64> s1, s2;
    for (u64 i = 1; i <= g1.n_max(); ++i)
        if (g1[i] != 0.0) s1.push_back(i);
    for (u64 i = 1; i <= g2.n_max(); ++i)
        if (g2[i] != 0.0) s2.push_back(i);
    long double total = 0.0L;
    for (u64 x1 : s1) {
        if (x1 + 2 > n) break;
        const u64 rest = n - x1;
        long double inner = 0.0L;
        for (u64 x2 : s2) {
            if (x2 + 1 > rest) break;
            const u64 x3 = rest - x2;
            if (x3 >= 1 && x3 <= g3.n_max() && g3[x3] != 0.0)
                inner += static_cast<long double>(g2[x2]) * g3[x3];
        }
        total += g1[x1] * inner;
    }
    return static_cast<double>(total);
}

}  // namespace detail

inline RepresentationReport representation_report(u64 n, const GoldbachConfig& cfg) {
    RepresentationReport rep;
    rep.n = n;
    rep.ordered_count = count_representations(n, cfg);
    rep.witness = find_representation(n, cfg);
    const WtrickContext untwisted = WtrickContext::with_threshold(cfg.X, 0, 0);
    rep.weighted_value = detail::convolution_at(nu_seq(untwisted, cfg.c1),
                                                nu_seq(untwisted, cfg.c2),
                                                nu_seq(untwisted, cfg.c3), n);
    return rep;
}

// ---- transference hypothesis checker -----------------------------------------------------------

struct TransferenceReport {
    double eta = 0.0;
    double epsilon = 0.0;
    double q_exponent = 0.0;
    double K = 0.0;
    bool cond_i_pass = false;
    double cond_i_worst_mean = 0.0;
    double cond_ii_value = 0.0;   // ||nu_hat - 1_hat||_inf / N
    double cond_iii_ratio = 0.0;  // ||f_hat||_q / N^(1-1/q)

    bool passed() const {
        return cond_i_pass && cond_ii_value <= eta && cond_iii_ratio <= K;
    }
};

// Checks Green's three hypotheses on (f, nu) over [1..N]:
//  (i)   every sampled AP P with |P| >= eta*N and step <= ap_step_max has
//        mean f >= 1/3 + epsilon (worst sampled mean is reported),
//  (ii)  ||nu_hat - 1_hat||_inf <= eta * N on the default grid,
//  (iii) ||f_hat||_q <= K * N^(1-1/q).
// AP starting points are sampled deterministically from `seed`; the maximal AP
// for every residue class of each step is always included.
inline TransferenceReport check_transference(const WeightedSequence& f,
                                             const WeightedSequence& nu, double eta,
                                             double epsilon, double q_exponent, double K,
                                             u64 ap_step_max, u64 ap_samples,
                                             u64 seed = kDefaultSeed) {
    const u64 N = f.n_max();
    if (nu.n_max() != N)
        throw LengthMismatchError("check_transference: f and nu must share n_max");
    if (!(q_exponent > 2.0 && q_exponent < 3.0))
        throw OutOfRangeError("check_transference: need 2 < q < 3");
    for (u64 n = 1; n <= N; ++n)
        if (f[n] > nu[n] + 1e-12 * std::max(1.0, nu[n]))
            throw DominationViolatedError("check_transference: f > nu at n = " +
                                          std::to_string(n));

    TransferenceReport rep;
    rep.eta = eta;
    rep.epsilon = epsilon;
    rep.q_exponent = q_exponent;
    rep.K = K;

    // Condition (i): AP means.
    const u64 L_min = std::max<u64>(1, static_cast<u64>(std::ceil(eta * static_cast<double>(N))));
    double worst = std::numeric_limits<double>::infinity();
    SplitMix64 rng(seed);
    for (u64 q = 1; q <= std::max<u64>(1, ap_step_max); ++q) {
        if ((L_min - 1) * q + 1 > N) continue;  // no AP of this step is long enough
        const u64 r_max = N - (L_min - 1) * q;
        // Canonical maximal APs, one per residue class.
        for (u64 r = 1; r <= std::min(q, r_max); ++r) {
            const u64 L = (N - r) / q + 1;
            worst = std::min(worst, ap_mean(f, Progression{r, q, L}));
        }
        for (u64 s = 0; s < ap_samples; ++s) {
            const u64 r = 1 + rng.next_below(r_max);
            const u64 L_max = (N - r) / q + 1;
            const u64 L = L_min + rng.next_below(L_max - L_min + 1);
            worst = std::min(worst, ap_mean(f, Progression{r, q, L}));
        }
    }
    rep.cond_i_worst_mean = std::isfinite(worst) ? worst : 0.0;
    rep.cond_i_pass = rep.cond_i_worst_mean >= 1.0 / 3.0 + epsilon;

    // Condition (ii): sup-norm closeness of nu_hat to the interval transform.
    const u64 M = default_grid_size(N);
    const SpectrumGrid g_nu = dft_grid(nu, M);
    const SpectrumGrid g_one = dft_grid(indicator_seq(N), M);
    rep.cond_ii_value = sup_discrepancy(g_nu, g_one) / static_cast<double>(N);

    // Condition (iii): restriction moment of f_hat.
    const SpectrumGrid g_f = dft_grid(f, M);
    const MomentReport mom = lq_moment(g_f, q_exponent, static_cast<double>(N));
    rep.cond_iii_ratio = std::pow(mom.integral_estimate, 1.0 / q_exponent) /
                         std::pow(static_cast<double>(N), 1.0 - 1.0 / q_exponent);
    return rep;
}

// ---- twisted positivity ------------------------------------------------------------------------

// f1*f2*f3(n) for f_i = nu^(c_i)_{W, b_i}, with (b_1, b_2, b_3, n) chosen by
// residue_select(m, W). Exact summation over the sequence supports; a positive
// value reconstructs primes p_i = W x_i - b_i with p_1 + p_2 + p_3 = m.
inline double weighted_positivity(u64 m, const GoldbachConfig& cfg) {
    if (m % 2 == 0) throw OutOfRangeError("weighted_positivity: m must be odd");
    if (m > cfg.X) throw OutOfRangeError("weighted_positivity: m exceeds X");
    const ResidueTriple rs = residue_select(m, cfg.W);
    const WtrickContext ctx1 = WtrickContext::with_modulus(cfg.X, cfg.W, rs.b1);
    const WtrickContext ctx2 = WtrickContext::with_modulus(cfg.X, cfg.W, rs.b2);
    const WtrickContext ctx3 = WtrickContext::with_modulus(cfg.X, cfg.W, rs.b3);
    // For m in [X/2, X] the selected index must land in [N/2, N].
    if (2 * m >= cfg.X) {
        if (!(2 * rs.n >= ctx1.N && rs.n <= ctx1.N))
            throw OutOfRangeError("weighted_positivity: selected n outside [N/2, N]");
    }
    return detail::convolution_at(nu_seq(ctx1, cfg.c1), nu_seq(ctx2, cfg.c2),
                                  nu_seq(ctx3, cfg.c3), rs.n);
}

}  // namespace psg

#endif  // PSG_GOLDBACH_HPP
