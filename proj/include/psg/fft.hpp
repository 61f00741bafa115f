// Thin FFTW wrapper: zero-padded DFTs and linear convolutions.
//
// Plans use FFTW_ESTIMATE so planning is a pure function of the size and the
// outputs are bit-stable run to run; plan creation is serialized (FFTW's
// planner is not thread-safe).
#ifndef PSG_FFT_HPP
#define PSG_FFT_HPP

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "common.hpp"

namespace psg::fft {

inline u64 next_pow2(u64 n) {
    u64 m = 1;
    while (m < n) m <<= 1;
    return m;
}

namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    fftw_complex* data = nullptr;
    explicit FftwBuffer(u64 n) {
        data = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// In-place c2c transform of buf[0..M); sign +1 gives e(+nj/M) kernels.
inline void transform(fftw_complex* buf, u64 M, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(M), buf, buf,
                                sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace detail

// out[j] = sum_n in[n] * e(sign * n j / M), input zero-padded to length M.
// in[n] is indexed from 0; callers that keep 1-based sequences simply leave
// slot 0 at zero.
inline std::vector<std::complex<double>> dft(std::span<const double> in, u64 M,
                                             int sign = +1) {
    if (M < in.size()) throw GridTooSmallError("fft::dft: M smaller than input length");
    detail::FftwBuffer buf(M);
    for (u64 n = 0; n < in.size(); ++n) {
        buf.data[n][0] = in[n];
        buf.data[n][1] = 0.0;
    }
    for (u64 n = in.size(); n < M; ++n) buf.data[n][0] = buf.data[n][1] = 0.0;
    detail::transform(buf.data, M, sign);
    std::vector<std::complex<double>> out(M);
    for (u64 j = 0; j < M; ++j) out[j] = {buf.data[j][0], buf.data[j][1]};
    return out;
}

// Linear convolution: out[k] = sum_i a[i] b[k-i], length |a|+|b|-1.
inline std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    const u64 out_len = a.size() + b.size() - 1;
    const u64 L = next_pow2(out_len);
    detail::FftwBuffer fa(L), fb(L);
    for (u64 i = 0; i < L; ++i) {
        fa.data[i][0] = i < a.size() ? a[i] : 0.0;
        fa.data[i][1] = 0.0;
        fb.data[i][0] = i < b.size() ? b[i] : 0.0;
        fb.data[i][1] = 0.0;
    }
    detail::transform(fa.data, L, -1);
    detail::transform(fb.data, L, -1);
    for (u64 i = 0; i < L; ++i) {
        const double re = fa.data[i][0] * fb.data[i][0] - fa.data[i][1] * fb.data[i][1];
        const double im = fa.data[i][0] * fb.data[i][1] + fa.data[i][1] * fb.data[i][0];
        fa.data[i][0] = re;
        fa.data[i][1] = im;
    }
    detail::transform(fa.data, L, +1);
    std::vector<double> out(out_len);
    for (u64 k = 0; k < out_len; ++k) out[k] = fa.data[k][0] / static_cast<double>(L);
    return out;
}

// Linear convolution of three equal-length inputs in one grid pass.
inline std::vector<double> convolve3(std::span<const double> a, std::span<const double> b,
                                     std::span<const double> c) {
    const u64 out_len = a.size() + b.size() + c.size() - 2;
    const u64 L = next_pow2(out_len);
    detail::FftwBuffer fa(L), fb(L), fc(L);
    auto load = [L](detail::FftwBuffer& buf, std::span<const double> src) {
        for (u64 i = 0; i < L; ++i) {
            buf.data[i][0] = i < src.size() ? src[i] : 0.0;
            buf.data[i][1] = 0.0;
        }
    };
    load(fa, a);
    load(fb, b);
    load(fc, c);
    detail::transform(fa.data, L, -1);
    detail::transform(fb.data, L, -1);
    detail::transform(fc.data, L, -1);
    for (u64 i = 0; i < L; ++i) {
        const std::complex<double> va(fa.data[i][0], fa.data[i][1]);
        const std::complex<double> vb(fb.data[i][0], fb.data[i][1]);
        const std::complex<double> vc(fc.data[i][0], fc.data[i][1]);
        const std::complex<double> v = va * vb * vc;
        fa.data[i][0] = v.real();
        fa.data[i][1] = v.imag();
    }
    detail::transform(fa.data, L, +1);
    std::vector<double> out(out_len);
    for (u64 k = 0; k < out_len; ++k) out[k] = fa.data[k][0] / static_cast<double>(L);
    return out;
}

}  // namespace psg::fft

#endif  // PSG_FFT_HPP
