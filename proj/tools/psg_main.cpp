// psg: command-line driver. Every subcommand is a thin shell over the library;
// all numeric output is reproducible from the corresponding library call.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psg/psg.hpp"

namespace {

using namespace psg;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Exponents are "num/den" strings only; decimals would break exactness.
RationalExponent parse_exponent_arg(const std::string& s, const std::string& flag) {
    const auto pos = s.find('/');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
        throw CLI::ValidationError(flag, "exponent must be \"num/den\", e.g. 11/10");
    auto parse_u64 = [&](const std::string& part) -> u64 {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw CLI::ValidationError(flag, "exponent parts must be positive integers");
        return std::strtoull(part.c_str(), nullptr, 10);
    };
    const u64 num = parse_u64(s.substr(0, pos));
    const u64 den = parse_u64(s.substr(pos + 1));
    try {
        return make_exponent(num, den);
    } catch (const std::exception& e) {
        throw CLI::ValidationError(flag, e.what());
    }
}

// "a:b" or "a:b:step", inclusive.
std::vector<unsigned> parse_log2_range(const std::string& s, const std::string& flag) {
    unsigned a = 0, b = 0, step = 1;
    const int got = std::sscanf(s.c_str(), "%u:%u:%u", &a, &b, &step);
    if (got < 2 || step == 0 || a > b || b > 40)
        throw CLI::ValidationError(flag, "expected \"a:b\" or \"a:b:step\" with a <= b <= 40");
    std::vector<unsigned> out;
    for (unsigned k = a; k <= b; k += step) out.push_back(k);
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        try {
            out.push_back(std::stod(s.substr(pos, next - pos)));
        } catch (...) {
            throw CLI::ValidationError(flag, "expected a comma-separated list of numbers");
        }
        pos = next + 1;
    }
    if (out.empty()) throw CLI::ValidationError(flag, "empty list");
    return out;
}

std::vector<u64> parse_u64_list(const std::string& s, const std::string& flag) {
    std::vector<u64> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        const std::string part = s.substr(pos, next - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw CLI::ValidationError(flag, "expected a comma-separated list of integers");
        out.push_back(std::strtoull(part.c_str(), nullptr, 10));
        pos = next + 1;
    }
    if (out.empty()) throw CLI::ValidationError(flag, "empty list");
    return out;
}

WtrickContext make_ctx(u64 X, u64 W, std::optional<u64> b) {
    const u64 residue = b ? *b : (W == 1 ? 0 : 1);
    return WtrickContext::with_modulus(X, W, residue);
}

WeightedSequence build_kind(const std::string& kind, const WtrickContext& ctx,
                            const RationalExponent& c) {
    if (kind == "nu") return nu_seq(ctx, c);
    if (kind == "lambda") return lambda_seq(ctx);
    if (kind == "tau") return tau_seq(ctx, c);
    if (kind == "indicator") return indicator_seq(ctx.N);
    throw CLI::ValidationError("--kind", "expected nu|lambda|tau|indicator");
}

struct GlobalOpts {
    std::string cache_dir;
    unsigned threads = 0;
    u64 seed = kDefaultSeed;
    bool no_timestamp = false;

    void apply() const {
        const char* env = std::getenv("PSG_CACHE_DIR");
        if (env && *env)
            set_cache_directory(std::filesystem::path(env));  // env overrides the flag
        else if (!cache_dir.empty())
            set_cache_directory(std::filesystem::path(cache_dir));
        if (threads) set_thread_count(threads);
    }
};

// ---- subcommand runners --------------------------------------------------------

int run_primes(const RationalExponent& c, u64 limit) {
    std::cout << "p,weight,logp,preimage\n";
    for (const PsPrime& q : ps_primes(limit, c))
        std::cout << q.p << ',' << fmt(q.weight) << ',' << fmt(q.logp) << ','
                  << q.preimage << '\n';
    return 0;
}

int run_members(const RationalExponent& c, const std::vector<u64>& values) {
    std::cout << "m,is_member\n";
    for (u64 m : values) std::cout << m << ',' << (is_ps_member(m, c) ? 1 : 0) << '\n';
    return 0;
}

int run_expsum(const WeightedSequence& f, const std::vector<double>& thetas,
               std::optional<u64> grid) {
    if (grid) {
        spectrum_to_csv(dft_grid(f, *grid), std::cout);
        return 0;
    }
    std::cout << "theta,re,im,modulus\n";
    for (double t : thetas) {
        const auto v = weighted_exp_sum(f, t);
        std::cout << fmt(t) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ','
                  << fmt(std::abs(v)) << '\n';
    }
    return 0;
}

int run_discrepancy(const std::string& kind, const RationalExponent& c,
                    const std::vector<unsigned>& log2xs, u64 W, std::optional<u64> b) {
    if (kind == "natural") {
        std::cout << "N,M,D\n";
        for (unsigned k : log2xs) {
            const u64 N = u64(1) << k;
            const u64 M = default_grid_size(N);
            std::cout << N << ',' << M << ',' << fmt(natural_ps_discrepancy(N, c, M))
                      << '\n';
        }
        return 0;
    }
    std::cout << "X,N,M,D,D_over_N\n";
    for (unsigned k : log2xs) {
        const u64 X = u64(1) << k;
        const WtrickContext ctx = make_ctx(X, W, b);
        const u64 M = default_grid_size(ctx.N);
        SpectrumGrid g1, g2;
        if (kind == "nu-lambda") {
            g1 = dft_grid(nu_seq(ctx, c), M);
            g2 = dft_grid(lambda_seq(ctx), M);
        } else if (kind == "nu-indicator") {
            g1 = dft_grid(nu_seq(ctx, c), M);
            g2 = dft_grid(indicator_seq(ctx.N), M);
        } else if (kind == "lambda-indicator") {
            g1 = dft_grid(lambda_seq(ctx), M);
            g2 = dft_grid(indicator_seq(ctx.N), M);
        } else {
            throw CLI::ValidationError(
                "--kind", "expected nu-lambda|nu-indicator|lambda-indicator|natural");
        }
        const double d = sup_discrepancy(g1, g2);
        std::cout << X << ',' << ctx.N << ',' << M << ',' << fmt(d) << ','
                  << fmt(d / static_cast<double>(ctx.N)) << '\n';
    }
    return 0;
}

int run_moments(const RationalExponent& c, double u, const std::vector<unsigned>& log2xs,
                u64 W, std::optional<u64> b, bool as_json) {
    if (!as_json) std::cout << "N,ratio\n";
    for (unsigned k : log2xs) {
        const WtrickContext ctx = make_ctx(u64(1) << k, W, b);
        const WeightedSequence f = nu_seq(ctx, c);
        const SpectrumGrid g = dft_grid(f, default_grid_size(ctx.N));
        const MomentReport rep = lq_moment(g, u, static_cast<double>(ctx.N));
        if (as_json)
            std::cout << to_json(rep, ctx.N).dump() << '\n';
        else
            std::cout << ctx.N << ',' << fmt(rep.normalized_ratio) << '\n';
    }
    return 0;
}

int run_spectrum(const RationalExponent& c, u64 X, u64 W, std::optional<u64> b,
                 const std::vector<double>& deltas, std::optional<u64> grid) {
    const WtrickContext ctx = make_ctx(X, W, b);
    const WeightedSequence f = nu_seq(ctx, c);
    const u64 M = grid ? *grid : default_grid_size(ctx.N);
    const SpectrumGrid g = dft_grid(f, M);
    const double bound_exp = v0_threshold(c) + 0.2;
    for (double d : deltas) {
        const auto rep = large_spectrum(g, d, static_cast<double>(ctx.N));
        std::cout << to_json(rep, M, ctx.N, bound_exp).dump() << '\n';
    }
    return 0;
}

int run_arcs(u64 X, double B) {
    const WtrickContext ctx = make_ctx(X, 1, std::nullopt);
    const u64 M = default_grid_size(ctx.N);
    const SpectrumGrid g = dft_grid(lambda_seq(ctx), M);
    const ArcPartition part = arc_partition(ctx.N, B);
    std::cout << "a,q,center,sup_modulus\n";
    for (const Arc& arc : part.arcs) {
        double sup = 0.0;
        // Grid points within the arc radius of a/q, both sides.
        const double lo = arc.center - part.radius;
        const double hi = arc.center + part.radius;
        const i64 jlo = static_cast<i64>(std::floor(lo * static_cast<double>(M)));
        const i64 jhi = static_cast<i64>(std::ceil(hi * static_cast<double>(M)));
        for (i64 j = jlo; j <= jhi; ++j) {
            const u64 jj = static_cast<u64>(((j % static_cast<i64>(M)) + static_cast<i64>(M)) %
                                            static_cast<i64>(M));
            if (circle_norm(g.theta(jj) - arc.center) <= part.radius)
                sup = std::max(sup, std::abs(g.values[jj]));
        }
        std::cout << arc.a << ',' << arc.q << ',' << fmt(arc.center) << ',' << fmt(sup)
                  << '\n';
    }
    return 0;
}

int run_psi_check(const std::vector<u64>& Hs, u64 grid_points) {
    std::cout << "H,max_ratio,max_error\n";
    for (u64 H : Hs) {
        double max_ratio = 0.0, max_err = 0.0;
        for (u64 i = 0; i < grid_points; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(grid_points);
            const double err = psi_fourier_error(t, static_cast<unsigned>(H));
            const double nt = circle_norm(t);
            const double bound = nt == 0.0 ? 1.0 : std::min(1.0, 1.0 / (static_cast<double>(H) * nt));
            max_ratio = std::max(max_ratio, err / bound);
            max_err = std::max(max_err, err);
        }
        std::cout << H << ',' << fmt(max_ratio) << ',' << fmt(max_err) << '\n';
    }
    return 0;
}

int run_vdc_check() {
    std::cout << "family,h_or_alpha,theta,ratio\n";
    for (double alpha : {1e-3, 2e-3, 5e-3, 1e-2, 5e-2}) {
        const double ratio = vdc_ratio([alpha](double x) { return alpha * x * x; }, 1.0,
                                       1000, 2.0 * alpha);
        std::cout << "quadratic," << fmt(alpha) << ",0," << fmt(ratio) << '\n';
    }
    const RationalExponent c = make_exponent(11, 10);
    const double X0 = 4096.0, u = 0.5;
    const u64 Y = 4096;
    for (int h : {1, 2, 3, 5, 8}) {
        for (double theta : {0.3, 0.7}) {
            const double delta = (c.value() - 1.0) / (c.value() * c.value()) *
                                 static_cast<double>(h) /
                                 std::pow(X0, 2.0 - c.inverse());
            const double ratio = vdc_ratio(
                [&](double x) { return theta * x - h * std::pow(x + u, c.inverse()); },
                X0, Y, delta);
            std::cout << "floor-phase," << h << ',' << fmt(theta) << ',' << fmt(ratio)
                      << '\n';
        }
    }
    return 0;
}

int run_verify(const GoldbachConfig& cfg, u64 lo, u64 hi, u64 floor_n,
               const std::string& jsonl, u64 seed, bool no_timestamp) {
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyResult res = verify_range(lo, hi, cfg, seed);

    if (!jsonl.empty()) {
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (jsonl != "-") {
            file.open(jsonl);
            if (!file) throw std::runtime_error("cannot open " + jsonl);
            out = &file;
        }
        // Witnesses for every n from one shared exact pair table.
        const PsPrimeTable t1 = ps_prime_table(cfg.X, cfg.c1);
        const PsPrimeTable t2 = ps_prime_table(cfg.X, cfg.c2);
        const PsPrimeTable t3 = ps_prime_table(cfg.X, cfg.c3);
        const auto pair = pair_sum_counts(t2, t3, hi);
        for (u64 n = res.lo_odd; n <= hi; n += 2) {
            std::optional<std::array<u64, 3>> witness;
            if (res.count_for(n) > 0) {
                for (u64 p1 : t1.list) {
                    if (p1 + 4 > n) break;
                    if (pair[n - p1] == 0) continue;
                    const u64 rest = n - p1;
                    for (u64 p2 : t2.list) {
                        if (p2 + 2 > rest) break;
                        const u64 p3 = rest - p2;
                        if (p3 <= t3.limit && t3.bits.test(p3)) {
                            witness = {p1, p2, p3};
                            break;
                        }
                    }
                    if (witness) break;
                }
            }
            (*out) << verify_line_json(n, res.count_for(n), witness).dump() << '\n';
        }
    }

    const auto t1_clock = std::chrono::steady_clock::now();
    std::optional<u64> runtime_ms;
    if (!no_timestamp)
        runtime_ms = static_cast<u64>(
            std::chrono::duration_cast<std::chrono::milliseconds>(t1_clock - t0).count());
    std::cout << verify_summary_json(res, floor_n, runtime_ms).dump() << '\n';

    for (u64 n : res.exceptions)
        if (n > floor_n) return 2;
    return 0;
}

int run_transference(const RationalExponent& c, u64 X, u64 W, std::optional<u64> b,
                     double eta, double epsilon, double q, double K, u64 ap_step_max,
                     u64 ap_samples, u64 seed) {
    const WtrickContext ctx = make_ctx(X, W, b);
    const WeightedSequence f = nu_seq(ctx, c);
    const TransferenceReport rep =
        check_transference(f, f, eta, epsilon, q, K, ap_step_max, ap_samples, seed);
    std::cout << to_json(rep).dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piatetski-Shapiro ternary Goldbach toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "psg 1.0.0");

    GlobalOpts gopts;
    app.add_option("--cache-dir", gopts.cache_dir,
                   "directory for sieve/membership caches (PSG_CACHE_DIR overrides)");
    app.add_option("--threads", gopts.threads, "worker threads (default: all cores)");
    app.add_option("--seed", gopts.seed, "seed for sampled checks");
    app.add_flag("--no-timestamp", gopts.no_timestamp,
                 "suppress runtime fields for byte-identical reruns");

    int rc = 0;

    // primes
    std::string c_str = "11/10", c1_str, c2_str, c3_str, kind = "nu";
    u64 limit = 100, X = 1 << 16, W = 2, from = 0, to = 0, floor_n = 0;
    std::optional<u64> b_opt, grid_opt;
    std::string theta_str, values_str, log2_str = "14:18", delta_str = "0.05,0.1,0.2,0.4";
    std::string jsonl, H_str = "2,8,64,256";
    double u_exp = 2.6, B_param = 1.0;
    double eta = 0.3, epsilon = 0.1, q_exp = 2.6, K = 50.0;
    u64 ap_step_max = 2, ap_samples = 64, grid_points = 10000;
    bool direct = false, as_json = false;

    auto* primes = app.add_subcommand("primes", "list PS primes with their weights");
    primes->add_option("--c", c_str, "exponent num/den")->required();
    primes->add_option("--limit", limit, "upper bound")->required();
    primes->callback([&] { rc = run_primes(parse_exponent_arg(c_str, "--c"), limit); });

    auto* members = app.add_subcommand("members", "batch floor-power membership tests");
    members->add_option("--c", c_str)->required();
    members->add_option("--values", values_str, "comma list of m");
    members->add_option("--from", from);
    members->add_option("--to", to);
    members->callback([&] {
        const auto c = parse_exponent_arg(c_str, "--c");
        std::vector<u64> vals;
        if (!values_str.empty()) vals = parse_u64_list(values_str, "--values");
        else if (from >= 1 && to >= from)
            for (u64 m = from; m <= to; ++m) vals.push_back(m);
        else
            throw CLI::ValidationError("members", "need --values or --from/--to");
        rc = run_members(c, vals);
    });

    auto* expsum = app.add_subcommand("expsum", "exponential sums / spectrum export");
    expsum->add_option("--c", c_str);
    expsum->add_option("--x", X, "ambient scale X")->required();
    expsum->add_option("--W", W);
    expsum->add_option("--b", b_opt);
    expsum->add_option("--kind", kind, "nu|lambda|tau|indicator");
    expsum->add_option("--theta", theta_str, "comma list of theta values");
    expsum->add_option("--grid", grid_opt, "export full spectrum on an M-grid");
    expsum->callback([&] {
        const auto c = parse_exponent_arg(c_str, "--c");
        const auto ctx = make_ctx(X, W, b_opt);
        const auto f = build_kind(kind, ctx, c);
        std::vector<double> thetas;
        if (!theta_str.empty()) thetas = parse_double_list(theta_str, "--theta");
        if (thetas.empty() && !grid_opt) grid_opt = default_grid_size(f.n_max());
        rc = run_expsum(f, thetas, grid_opt);
    });

    auto* disc = app.add_subcommand("discrepancy", "sup-norm discrepancies per scale");
    disc->add_option("--kind", kind, "nu-lambda|nu-indicator|lambda-indicator|natural")
        ->required();
    disc->add_option("--c", c_str)->required();
    disc->add_option("--log2x", log2_str, "scales as powers of two, a:b[:step]");
    disc->add_option("--W", W);
    disc->add_option("--b", b_opt);
    disc->callback([&] {
        rc = run_discrepancy(kind, parse_exponent_arg(c_str, "--c"),
                             parse_log2_range(log2_str, "--log2x"),
                             kind == "natural" ? 1 : W, b_opt);
    });

    auto* moments = app.add_subcommand("moments", "L^u moment ratios per scale");
    moments->add_option("--c", c_str)->required();
    moments->add_option("--u", u_exp, "moment exponent")->required();
    moments->add_option("--log2n", log2_str, "scales as powers of two, a:b[:step]");
    moments->add_option("--W", W);
    moments->add_option("--b", b_opt);
    moments->add_flag("--json", as_json, "JSON records instead of CSV");
    moments->callback([&] {
        rc = run_moments(parse_exponent_arg(c_str, "--c"), u_exp,
                         parse_log2_range(log2_str, "--log2n"), W, b_opt, as_json);
    });

    auto* spectrum = app.add_subcommand("spectrum", "large-spectrum measure per delta");
    spectrum->add_option("--c", c_str)->required();
    spectrum->add_option("--x", X)->required();
    spectrum->add_option("--W", W);
    spectrum->add_option("--b", b_opt);
    spectrum->add_option("--delta", delta_str, "comma list of thresholds");
    spectrum->add_option("--grid", grid_opt);
    spectrum->callback([&] {
        rc = run_spectrum(parse_exponent_arg(c_str, "--c"), X, W, b_opt,
                          parse_double_list(delta_str, "--delta"), grid_opt);
    });

    auto* arcs = app.add_subcommand("arcs", "Farey arcs with per-arc spectral sups");
    arcs->add_option("--x", X)->required();
    arcs->add_option("--B", B_param, "arc parameter");
    arcs->callback([&] { rc = run_arcs(X, B_param); });

    auto* psi_check = app.add_subcommand("psi-check", "sawtooth Fourier error sweep");
    psi_check->add_option("--H", H_str, "comma list of truncations");
    psi_check->add_option("--grid-points", grid_points);
    psi_check->callback(
        [&] { rc = run_psi_check(parse_u64_list(H_str, "--H"), grid_points); });

    auto* vdc_check = app.add_subcommand("vdc-check", "van der Corput ratio sweep");
    vdc_check->callback([&] { rc = run_vdc_check(); });

    auto* verify = app.add_subcommand("verify", "ternary verification over a range");
    verify->add_option("--c", c_str, "exponent for all three primes");
    verify->add_option("--c1", c1_str);
    verify->add_option("--c2", c2_str);
    verify->add_option("--c3", c3_str);
    verify->add_option("--from", from)->required();
    verify->add_option("--to", to)->required();
    verify->add_option("--x", X, "ambient prime bound (default: to)");
    verify->add_option("--W", W);
    verify->add_option("--floor", floor_n, "ignore exceptions at or below this");
    verify->add_option("--jsonl", jsonl, "per-n JSON lines to a file, or - for stdout");
    verify->add_flag("--direct", direct, "direct convolution instead of FFT");
    verify->callback([&] {
        const auto c1 = parse_exponent_arg(c1_str.empty() ? c_str : c1_str, "--c1");
        const auto c2 = parse_exponent_arg(c2_str.empty() ? c_str : c2_str, "--c2");
        const auto c3 = parse_exponent_arg(c3_str.empty() ? c_str : c3_str, "--c3");
        GoldbachConfig cfg{c1, c2, c3, verify->count("--x") ? X : to, W, !direct};
        rc = run_verify(cfg, from, to, floor_n, jsonl, gopts.seed, gopts.no_timestamp);
    });

    auto* transference = app.add_subcommand("transference", "Green-hypothesis checker");
    transference->add_option("--c", c_str)->required();
    transference->add_option("--x", X)->required();
    transference->add_option("--W", W);
    transference->add_option("--b", b_opt);
    transference->add_option("--eta", eta);
    transference->add_option("--epsilon", epsilon);
    transference->add_option("--q", q_exp);
    transference->add_option("--K", K);
    transference->add_option("--ap-step-max", ap_step_max);
    transference->add_option("--ap-samples", ap_samples);
    transference->callback([&] {
        rc = run_transference(parse_exponent_arg(c_str, "--c"), X, W, b_opt, eta, epsilon,
                              q_exp, K, ap_step_max, ap_samples, gopts.seed);
    });

    // Runs before any subcommand callback once the full parse has completed.
    app.parse_complete_callback([&gopts] { gopts.apply(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "psg: error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
