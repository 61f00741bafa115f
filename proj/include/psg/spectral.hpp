// Fourier side: sampled transforms f_hat(j/M) with e(x) = exp(2*pi*i*x),
// exponential-sum oracles, twist identities, sawtooth and van der Corput
// checks, Farey arcs, L^u moments and large-spectrum measurements.
#ifndef PSG_SPECTRAL_HPP
#define PSG_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "common.hpp"
#include "fft.hpp"
#include "weights.hpp"

namespace psg {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance to the nearest integer.
inline double circle_norm(double x) {
    const double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

// ---- spectrum grids ---------------------------------------------------------

// Sampled transform values[j] = f_hat(j/M) = sum_n f(n) e(n j / M).
struct SpectrumGrid {
    u64 M = 0;
    std::vector<std::complex<double>> values;
    double total_mass = 0.0;  // f_hat(0)

    double theta(u64 j) const { return static_cast<double>(j) / static_cast<double>(M); }
};

// Oversampled power-of-two grid; 4x keeps the grid sup close to the true sup
// for degree-N trigonometric polynomials.
inline u64 default_grid_size(u64 n_max) { return 4 * fft::next_pow2(n_max); }

inline SpectrumGrid dft_grid(const WeightedSequence& f, u64 M) {
    if (M < f.n_max() + 1)
        throw GridTooSmallError("dft_grid: need M >= n_max to avoid wraparound");
    SpectrumGrid g;
    g.M = M;
    g.values = fft::dft(f.raw(), M, +1);
    g.total_mass = g.values[0].real();
    return g;
}

// Direct summation oracle for f_hat(theta); skips zero entries, so it is fast
// on sparse prime-supported sequences. Periodic in theta.
inline std::complex<double> weighted_exp_sum(const WeightedSequence& f, double theta) {
    long double re = 0.0L, im = 0.0L;
    const auto vals = f.raw();
    for (u64 n = 1; n < vals.size(); ++n) {
        const double v = vals[n];
        if (v == 0.0) continue;
        const double x = static_cast<double>(n) * theta;
        const double ph = kTwoPi * (x - std::floor(x));
        re += v * std::cos(ph);
        im += v * std::sin(ph);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

inline double sup_discrepancy(const SpectrumGrid& g1, const SpectrumGrid& g2) {
    if (g1.M != g2.M) throw GridMismatchError("sup_discrepancy: grid sizes differ");
    return parallel_map_reduce(
        u64(0), g1.M, u64(1) << 16, 0.0,
        [&](u64 lo, u64 hi) {
            double m = 0.0;
            for (u64 j = lo; j < hi; ++j)
                m = std::max(m, std::abs(g1.values[j] - g2.values[j]));
            return m;
        },
        [](double a, double b) { return std::max(a, b); });
}

// ---- twist identity ------------------------------------------------------------

enum class TwistKind : u8 { nu = 0, lambda = 1 };

// |LHS - RHS| of the exact identity relating the (W,b)-twisted transform to the
// untwisted one:
//   S_{W,b}(theta) = phi(W)/W^2 * sum_{k=1..W} e((theta+k) b/W) S_{1,0}((theta+k)/W).
// Both sides are evaluated by direct summation, so the residual is float noise.
inline double twist_identity_residual(const WeightedSequence& twisted,
                                      const WeightedSequence& untwisted, u64 W, u64 b,
                                      double theta) {
    const std::complex<double> lhs = weighted_exp_sum(twisted, theta);
    std::complex<double> rhs = 0.0;
    for (u64 k = 1; k <= W; ++k) {
        const double x = (theta + static_cast<double>(k)) / static_cast<double>(W);
        const double ph = kTwoPi * (x * static_cast<double>(b) -
                                    std::floor(x * static_cast<double>(b)));
        rhs += std::polar(1.0, ph) * weighted_exp_sum(untwisted, x);
    }
    rhs *= static_cast<double>(euler_phi(W)) / (static_cast<double>(W) * static_cast<double>(W));
    return std::abs(lhs - rhs);
}

inline double twist_identity_residual(const WtrickContext& ctx, const RationalExponent& c,
                                      double theta, TwistKind kind) {
    const WtrickContext untwisted_ctx = WtrickContext::with_threshold(ctx.X, 0, 0);
    if (kind == TwistKind::nu) {
        return twist_identity_residual(nu_seq(ctx, c), nu_seq(untwisted_ctx, c), ctx.W,
                                       ctx.b, theta);
    }
    return twist_identity_residual(lambda_seq(ctx), lambda_seq(untwisted_ctx), ctx.W,
                                   ctx.b, theta);
}

// ---- natural-number comparison ---------------------------------------------------

// Sup over the M-grid of | sum_{n<=N, n in N^c} c n^{1-1/c} e(n theta)
//                          - sum_{n<=N} e(n theta) |.
inline double natural_ps_discrepancy(u64 N, const RationalExponent& c, u64 M) {
    if (M < N + 1) throw GridTooSmallError("natural_ps_discrepancy: need M > N");
    const DenseBitset member = ps_membership_bits(N, c);
    std::vector<double> diff(N + 1, 0.0);
    for (u64 n = 1; n <= N; ++n)
        diff[n] = (member.test(n) ? ps_weight(n, c) : 0.0) - 1.0;
    const auto spec = fft::dft(diff, M, +1);
    return parallel_map_reduce(
        u64(0), M, u64(1) << 16, 0.0,
        [&](u64 lo, u64 hi) {
            double m = 0.0;
            for (u64 j = lo; j < hi; ++j) m = std::max(m, std::abs(spec[j]));
            return m;
        },
        [](double a, double b) { return std::max(a, b); });
}

// ---- sawtooth ---------------------------------------------------------------------

inline double psi(double t) { return (t - std::floor(t)) - 0.5; }

// | psi(t) + (1/(2 pi i)) sum_{0<|h|<=H} e(ht)/h |; the +-h terms pair up into
// (1/pi) sum_{h<=H} sin(2 pi h t)/h.
inline double psi_fourier_error(double t, unsigned H) {
    if (H < 2) throw OutOfRangeError("psi_fourier_error: H must be >= 2");
    long double s = 0.0L;
    for (unsigned h = 1; h <= H; ++h)
        s += std::sin(kTwoPi * h * t) / static_cast<long double>(h);
    return std::abs(psi(t) + static_cast<double>(s / std::numbers::pi));
}

// ---- van der Corput ratio ------------------------------------------------------------

// |sum_{ceil(X0) <= n <= floor(X0+Y)} e(phase(n))| / (Y sqrt(Delta) + 1/sqrt(Delta)).
// The caller certifies |phase''| ~ Delta on the window.
template <typename Phase>
inline double vdc_ratio(Phase&& phase, double X0, u64 Y, double Delta) {
    if (!(Delta > 0.0)) throw OutOfRangeError("vdc_ratio: Delta must be positive");
    const i64 lo = static_cast<i64>(std::ceil(X0));
    const i64 hi = static_cast<i64>(std::floor(X0 + static_cast<double>(Y)));
    long double re = 0.0L, im = 0.0L;
    for (i64 n = lo; n <= hi; ++n) {
        const double v = phase(static_cast<double>(n));
        const double ph = kTwoPi * (v - std::floor(v));
        re += std::cos(ph);
        im += std::sin(ph);
    }
    const double mag = std::hypot(static_cast<double>(re), static_cast<double>(im));
    const double bound =
        static_cast<double>(Y) * std::sqrt(Delta) + 1.0 / std::sqrt(Delta);
    return mag / bound;
}

// ---- Farey arcs -------------------------------------------------------------------------

struct Arc {
    u64 a = 0, q = 1;
    double center = 0.0;  // a/q
};

struct ArcPartition {
    u64 N = 0;
    double B = 1.0;
    u64 q_max = 1;     // floor((log N)^B), natural log
    double radius = 0;  // (log N)^B / N
    std::vector<Arc> arcs;  // reduced a/q, 1 <= a <= q <= q_max, by (q, a)
};

inline ArcPartition arc_partition(u64 N, double B) {
    if (N < 16) throw OutOfRangeError("arc_partition: N must be >= 16");
    ArcPartition part;
    part.N = N;
    part.B = B;
    const double logB = std::pow(std::log(static_cast<double>(N)), B);
    part.q_max = std::max<u64>(1, static_cast<u64>(std::floor(logB)));
    part.radius = logB / static_cast<double>(N);
    for (u64 q = 1; q <= part.q_max; ++q)
        for (u64 a = 1; a <= q; ++a)
            if (std::gcd(a, q) == 1)
                part.arcs.push_back(
                    Arc{a, q, static_cast<double>(a) / static_cast<double>(q)});
    return part;
}

struct ArcClass {
    bool major = false;
    u64 a = 0, q = 0;
};

// First containing arc in (q, a) order; arcs may overlap at small N, so the
// smallest denominator wins deterministically.
inline ArcClass classify_theta(const ArcPartition& part, double theta) {
    for (const Arc& arc : part.arcs)
        if (circle_norm(theta - arc.center) <= part.radius)
            return ArcClass{true, arc.a, arc.q};
    return ArcClass{false, 0, 0};
}

// ---- moments and large spectrum -----------------------------------------------------------

struct MomentReport {
    double u = 0.0;
    double integral_estimate = 0.0;  // (1/M) sum_j |f_hat(j/M)|^u
    double normalized_ratio = 0.0;   // integral / N^(u-1)
    u64 M = 0;
};

// Left-endpoint Riemann sum of |f_hat|^u over the grid. The theorem needs
// u > v0 > 2, but any u >= 1 is meaningful (u = 2 is Parseval).
inline MomentReport lq_moment(const SpectrumGrid& g, double u, double N_scale) {
    if (!(u >= 1.0)) throw OutOfRangeError("lq_moment: u must be >= 1");
    const long double total = parallel_map_reduce(
        u64(0), g.M, u64(1) << 16, 0.0L,
        [&](u64 lo, u64 hi) {
            long double s = 0.0L;
            for (u64 j = lo; j < hi; ++j) {
                const double a2 = std::norm(g.values[j]);
                s += static_cast<long double>(std::pow(a2, 0.5 * u));
            }
            return s;
        },
        [](long double a, long double b) { return a + b; });
    MomentReport rep;
    rep.u = u;
    rep.M = g.M;
    rep.integral_estimate = static_cast<double>(total / static_cast<long double>(g.M));
    rep.normalized_ratio = rep.integral_estimate / std::pow(N_scale, u - 1.0);
    return rep;
}

inline double v0_threshold(const RationalExponent& c) {
    const double v = c.value();
    return 2.0 + 4.0 * (v - 1.0) / (2.0 - v);
}

struct LargeSpectrumReport {
    double delta = 0.0;
    double measure_estimate = 0.0;  // grid measure of {theta : |f_hat| > delta N}
    u64 spaced_count = 0;           // R: greedy 1/N-spaced subset size
};

// Grid scan of R_delta = { j/M : |values[j]| > delta * N }. The greedy pass
// selects ascending grid points at least 1/N apart, so every point of R_delta
// lies within 1/N of a selected one and measure <= 2R/N + 2/M holds for M >= N.
inline LargeSpectrumReport large_spectrum(const SpectrumGrid& g, double delta,
                                          double N_scale) {
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("large_spectrum: delta must be in (0, 1)");
    const double threshold = delta * N_scale;
    u64 count = 0, selected = 0;
    bool have_last = false;
    u64 last_j = 0;
    const double min_gap = static_cast<double>(g.M) / N_scale;  // grid steps per 1/N
    for (u64 j = 0; j < g.M; ++j) {
        if (!(std::abs(g.values[j]) > threshold)) continue;
        ++count;
        if (!have_last || static_cast<double>(j - last_j) >= min_gap) {
            ++selected;
            last_j = j;
            have_last = true;
        }
    }
    LargeSpectrumReport rep;
    rep.delta = delta;
    rep.measure_estimate = static_cast<double>(count) / static_cast<double>(g.M);
    rep.spaced_count = selected;
    return rep;
}

}  // namespace psg

#endif  // PSG_SPECTRAL_HPP
