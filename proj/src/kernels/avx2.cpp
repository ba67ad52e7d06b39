#include "surge/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace surge::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i + 4,
                         _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

// Vectorized over four consecutive outputs; the first taps-1 outputs see a
// truncated kernel and go through the scalar loop.
void causal_convolve_avx2(const double* signal, std::size_t n, const double* kernel,
                          std::size_t taps, double* out) {
    if (taps == 0) {
        for (std::size_t t = 0; t < n; ++t) out[t] = 0.0;
        return;
    }
    const std::size_t head = taps - 1 < n ? taps - 1 : n;
    for (std::size_t t = 0; t < head; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= t; ++k) acc += kernel[k] * signal[t - k];
        out[t] = acc;
    }
    std::size_t t = head;
    for (; t + 4 <= n; t += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < taps; ++k)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(kernel[k]), _mm256_loadu_pd(signal + t - k), acc);
        _mm256_storeu_pd(out + t, acc);
    }
    for (; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) acc += kernel[k] * signal[t - k];
        out[t] = acc;
    }
}

double max_abs_avx2(const double* x, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) best = _mm256_max_pd(best, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double m = lanes[0];
    for (int k = 1; k < 4; ++k) m = lanes[k] > m ? lanes[k] : m;
    for (; i < n; ++i) {
        const double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

void scale_avx2(double alpha, double* x, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable t{Isa::avx2,           dot_avx2,     axpy_avx2,
                               causal_convolve_avx2, max_abs_avx2, scale_avx2};
    return t;
}

}  // namespace surge::kernels::detail
