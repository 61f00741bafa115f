// W-tricked weight systems over [1..N], N = floor(X/W) + 1.
//
// lambda_{W,b}(n) = (phi(W)/W) * log p          when Wn - b = p prime in [1,X]
// nu^{(c)}_{W,b}(n) = (phi(W)/W) * c p^{1-1/c} log p  when additionally p in N^c
// tau^{(c)}_{W,b}(n) = c m^{1-1/c}               when Wn - b = m in N^c ∩ [1,X]
#ifndef PSG_WEIGHTS_HPP
#define PSG_WEIGHTS_HPP

#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "common.hpp"
#include "ps_core.hpp"
#include "sieve.hpp"

namespace psg {

// ---- weighted sequences -------------------------------------------------------

enum class SeqKind : u8 { lambda = 0, nu = 1, tau = 2, indicator = 3, custom = 4 };

inline const char* seq_kind_name(SeqKind k) {
    switch (k) {
        case SeqKind::lambda: return "lambda";
        case SeqKind::nu: return "nu";
        case SeqKind::tau: return "tau";
        case SeqKind::indicator: return "indicator";
        default: return "custom";
    }
}

// Nonnegative reals on [1..n_max]; slot 0 is kept zero so that index n means n.
class WeightedSequence {
  public:
    explicit WeightedSequence(u64 n_max, SeqKind kind = SeqKind::custom)
        : values_(n_max + 1, 0.0), kind_(kind) {
        if (n_max == 0) throw OutOfRangeError("WeightedSequence: n_max must be >= 1");
    }

    u64 n_max() const { return values_.size() - 1; }
    SeqKind kind() const { return kind_; }
    double operator[](u64 n) const { return values_[n]; }
    double& at(u64 n) {
        if (n == 0 || n >= values_.size())
            throw OutOfBoundsError("WeightedSequence: index out of range");
        return values_[n];
    }

    // Includes the zero slot; raw() [n] == value at n for n in [1..n_max].
    std::span<const double> raw() const { return values_; }
    std::vector<double>& mutable_raw() { return values_; }

    double sum() const {
        long double s = 0.0L;
        for (double v : values_) s += v;
        return static_cast<double>(s);
    }

    void validate() const {
        for (double v : values_)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw OutOfRangeError("WeightedSequence: negative or non-finite value");
    }

  private:
    std::vector<double> values_;
    SeqKind kind_;
};

// ---- W-trick context ------------------------------------------------------------

// Product of primes <= w_threshold (empty product = 1); must fit in 63 bits.
inline u64 primorial_w(u32 w_threshold) {
    u64 w = 1;
    if (w_threshold < 2) return 1;
    const PrimeSet ps = sieve_primes(w_threshold);
    for (u64 p = 2; p <= w_threshold; ++p) {
        if (!ps.is_prime(p)) continue;
        if (w > (u64(1) << 63) / p)
            throw OverflowError("primorial_w: primorial exceeds 2^63");
        w *= p;
    }
    return w;
}

inline bool is_primorial(u64 W) {
    if (W == 0) return false;
    if (W == 1) return true;
    u64 acc = 1;
    for (u64 p = 2; acc < W; ++p) {
        bool prime = true;
        for (u64 d = 2; d * d <= p; ++d)
            if (p % d == 0) { prime = false; break; }
        if (!prime) continue;
        if (acc > W / p) return false;
        acc *= p;
        if (acc == W) return true;
    }
    return acc == W;
}

inline u64 euler_phi(u64 n) {
    u64 result = n;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

struct WtrickContext {
    u64 X = 0;            // ambient scale
    u32 w_threshold = 0;  // W = product of primes <= w_threshold
    u64 W = 1;
    u64 b = 0;            // residue, coprime to W; 0 only when W = 1
    u64 N = 0;            // floor(X/W) + 1

    static WtrickContext with_threshold(u64 X, u32 w_threshold, u64 b) {
        return finish(X, w_threshold, primorial_w(w_threshold), b);
    }

    // W given directly; it must be a primorial (1, 2, 6, 30, 210, ...).
    static WtrickContext with_modulus(u64 X, u64 W, u64 b) {
        if (!is_primorial(W))
            throw OutOfRangeError("WtrickContext: W must be a primorial");
        // The threshold of a primorial is its largest prime factor.
        u64 t = W, largest = 0;
        for (u64 p = 2; p * p <= t; ++p)
            while (t % p == 0) { largest = p; t /= p; }
        if (t > 1) largest = t;
        return finish(X, static_cast<u32>(largest), W, b);
    }

  private:
    static WtrickContext finish(u64 X, u32 w_threshold, u64 W, u64 b) {
        if (X == 0) throw OutOfRangeError("WtrickContext: X must be >= 1");
        if (W == 1) {
            if (b != 0) throw OutOfRangeError("WtrickContext: b must be 0 when W = 1");
        } else {
            if (b == 0 || b >= W || std::gcd(b, W) != 1)
                throw OutOfRangeError("WtrickContext: need 1 <= b < W with gcd(b, W) = 1");
        }
        WtrickContext ctx;
        ctx.X = X;
        ctx.w_threshold = w_threshold;
        ctx.W = W;
        ctx.b = b;
        ctx.N = X / W + 1;
        return ctx;
    }
};

// ---- sequence builders -----------------------------------------------------------

inline WeightedSequence indicator_seq(u64 N) {
    WeightedSequence f(N, SeqKind::indicator);
    for (u64 n = 1; n <= N; ++n) f.at(n) = 1.0;
    return f;
}

inline WeightedSequence lambda_seq(const WtrickContext& ctx) {
    const PrimeSet primes = sieve_primes(std::max<u64>(ctx.X, 2));
    const double scale = double(euler_phi(ctx.W)) / double(ctx.W);
    WeightedSequence f(ctx.N, SeqKind::lambda);
    for (u64 n = 1; n <= ctx.N; ++n) {
        const u64 p = ctx.W * n - ctx.b;
        if (p >= 1 && p <= ctx.X && primes.is_prime(p))
            f.at(n) = scale * std::log(static_cast<double>(p));
    }
    return f;
}

inline WeightedSequence nu_seq(const WtrickContext& ctx, const RationalExponent& c) {
    const PrimeSet primes = sieve_primes(std::max<u64>(ctx.X, 2));
    const DenseBitset member = ps_membership_bits(ctx.X, c);
    const double scale = double(euler_phi(ctx.W)) / double(ctx.W);
    WeightedSequence f(ctx.N, SeqKind::nu);
    for (u64 n = 1; n <= ctx.N; ++n) {
        const u64 p = ctx.W * n - ctx.b;
        if (p >= 1 && p <= ctx.X && primes.is_prime(p) && member.test(p))
            f.at(n) = scale * ps_weight(p, c) * std::log(static_cast<double>(p));
    }
    return f;
}

inline WeightedSequence tau_seq(const WtrickContext& ctx, const RationalExponent& c) {
    const DenseBitset member = ps_membership_bits(ctx.X, c);
    WeightedSequence f(ctx.N, SeqKind::tau);
    for (u64 n = 1; n <= ctx.N; ++n) {
        const u64 m = ctx.W * n - ctx.b;
        if (m >= 1 && m <= ctx.X && member.test(m)) f.at(n) = ps_weight(m, c);
    }
    return f;
}

// ---- arithmetic-progression means --------------------------------------------------

struct Progression {
    u64 start = 1;   // r
    u64 step = 1;    // q
    u64 length = 1;  // L
};

inline double ap_mean(const WeightedSequence& f, const Progression& P) {
    if (P.start == 0 || P.step == 0 || P.length == 0)
        throw OutOfBoundsError("ap_mean: start, step and length must be >= 1");
    const u64 last = P.start + (P.length - 1) * P.step;
    if (last > f.n_max()) throw OutOfBoundsError("ap_mean: progression leaves [1, n_max]");
    long double s = 0.0L;
    for (u64 j = 0, n = P.start; j < P.length; ++j, n += P.step) s += f[n];
    return static_cast<double>(s / P.length);
}

// ---- residue selection ----------------------------------------------------------------

struct ResidueTriple {
    u64 b1 = 0, b2 = 0, b3 = 0;
    u64 n = 0;  // (m + b1 + b2 + b3) / W
};

// Lexicographically first coprime triple with m = -(b1+b2+b3) mod W.
inline ResidueTriple residue_select(u64 m, u64 W) {
    if (m % 2 == 0) throw OutOfRangeError("residue_select: m must be odd");
    if (!is_primorial(W)) throw OutOfRangeError("residue_select: W must be a primorial");
    if (W == 1) return ResidueTriple{0, 0, 0, m};

    std::vector<u64> res;
    for (u64 r = 1; r < W; ++r)
        if (std::gcd(r, W) == 1) res.push_back(r);

    const u64 target = (W - m % W) % W;  // need b1+b2+b3 = target (mod W)
    for (u64 b1 : res)
        for (u64 b2 : res) {
            const u64 b3 = (target + 2 * W - (b1 + b2) % W) % W;
            if (b3 == 0 || std::gcd(b3, W) != 1) continue;
            const u64 s = b1 + b2 + b3;
            if ((m + s) % W != 0)
                throw NoSolutionError("residue_select: internal arithmetic error");
            return ResidueTriple{b1, b2, b3, (m + s) / W};
        }
    throw NoSolutionError("residue_select: no coprime triple exists");
}

}  // namespace psg

#endif  // PSG_WEIGHTS_HPP
