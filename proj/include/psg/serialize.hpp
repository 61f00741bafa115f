// Serialization: WeightedSequence CSV and PSWS binary, spectrum CSV, and the
// JSON record shapes used by the reporting subcommands.
//
// PSWS layout (little-endian): magic "PSWS", n_max u64, kind u8, then n_max
// f64 values for n = 1..n_max.
#ifndef PSG_SERIALIZE_HPP
#define PSG_SERIALIZE_HPP

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "common.hpp"
#include "goldbach.hpp"
#include "spectral.hpp"
#include "weights.hpp"

namespace psg {

namespace detail {

// %.17g round-trips doubles exactly and is locale-independent.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// ---- WeightedSequence -----------------------------------------------------------

inline void sequence_to_csv(const WeightedSequence& f, std::ostream& out) {
    out << "n,value\n";
    for (u64 n = 1; n <= f.n_max(); ++n)
        out << n << ',' << detail::fmt_double(f[n]) << '\n';
}

inline void sequence_to_binary(const WeightedSequence& f, std::ostream& out) {
    out.write("PSWS", 4);
    const u64 n_max = f.n_max();
    u8 hdr[9];
    for (int i = 0; i < 8; ++i) hdr[i] = u8(n_max >> (8 * i));
    hdr[8] = static_cast<u8>(f.kind());
    out.write(reinterpret_cast<const char*>(hdr), 9);
    for (u64 n = 1; n <= n_max; ++n) {
        const double v = f[n];
        u64 bits;
        std::memcpy(&bits, &v, 8);
        u8 b[8];
        for (int i = 0; i < 8; ++i) b[i] = u8(bits >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 8);
    }
}

inline WeightedSequence sequence_from_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PSWS", 4) != 0)
        throw CacheCorruptError("sequence_from_binary: bad magic");
    u8 hdr[9];
    in.read(reinterpret_cast<char*>(hdr), 9);
    if (!in) throw CacheCorruptError("sequence_from_binary: truncated header");
    u64 n_max = 0;
    for (int i = 0; i < 8; ++i) n_max |= u64(hdr[i]) << (8 * i);
    if (n_max == 0 || hdr[8] > 4)
        throw CacheCorruptError("sequence_from_binary: invalid header");
    WeightedSequence f(n_max, static_cast<SeqKind>(hdr[8]));
    for (u64 n = 1; n <= n_max; ++n) {
        u8 b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        if (!in) throw CacheCorruptError("sequence_from_binary: truncated payload");
        u64 bits = 0;
        for (int i = 0; i < 8; ++i) bits |= u64(b[i]) << (8 * i);
        double v;
        std::memcpy(&v, &bits, 8);
        f.at(n) = v;
    }
    f.validate();
    return f;
}

// ---- spectra ---------------------------------------------------------------------

inline void spectrum_to_csv(const SpectrumGrid& g, std::ostream& out) {
    out << "j,theta,re,im,modulus\n";
    for (u64 j = 0; j < g.M; ++j) {
        const auto v = g.values[j];
        out << j << ',' << detail::fmt_double(g.theta(j)) << ','
            << detail::fmt_double(v.real()) << ',' << detail::fmt_double(v.imag()) << ','
            << detail::fmt_double(std::abs(v)) << '\n';
    }
}

// ---- JSON records -------------------------------------------------------------------

inline nlohmann::json to_json(const MomentReport& rep, u64 N) {
    return {{"u", rep.u},
            {"estimate", rep.integral_estimate},
            {"ratio", rep.normalized_ratio},
            {"M", rep.M},
            {"N", N}};
}

inline nlohmann::json to_json(const LargeSpectrumReport& rep, u64 M, u64 N,
                              double bound_exponent) {
    return {{"delta", rep.delta},
            {"estimate", rep.measure_estimate},
            {"ratio", rep.measure_estimate * static_cast<double>(N) *
                          std::pow(rep.delta, bound_exponent)},
            {"spaced_count", rep.spaced_count},
            {"M", M},
            {"N", N}};
}

inline nlohmann::json to_json(const TransferenceReport& rep) {
    return {{"eta", rep.eta},
            {"epsilon", rep.epsilon},
            {"q", rep.q_exponent},
            {"K", rep.K},
            {"cond_i_pass", rep.cond_i_pass},
            {"cond_i_worst_mean", rep.cond_i_worst_mean},
            {"cond_ii_value", rep.cond_ii_value},
            {"cond_iii_ratio", rep.cond_iii_ratio},
            {"passed", rep.passed()}};
}

// One report line per verified n: {"n":..., "count":..., "witness":[...]|null}.
inline nlohmann::json verify_line_json(u64 n, u64 count,
                                       const std::optional<std::array<u64, 3>>& witness) {
    nlohmann::json j{{"n", n}, {"count", count}};
    if (witness)
        j["witness"] = {(*witness)[0], (*witness)[1], (*witness)[2]};
    else
        j["witness"] = nullptr;
    return j;
}

inline nlohmann::json verify_summary_json(const VerifyResult& res, u64 floor,
                                          std::optional<u64> runtime_ms) {
    nlohmann::json j{{"range", {res.lo, res.hi}},
                     {"exceptions", res.exceptions},
                     {"largest_exception",
                      res.exceptions.empty() ? nlohmann::json(nullptr)
                                             : nlohmann::json(res.largest_exception)},
                     {"floor", floor}};
    if (runtime_ms) j["runtime_ms"] = *runtime_ms;
    return j;
}

}  // namespace psg

#endif  // PSG_SERIALIZE_HPP
