#pragma once

// Dense double-precision kernels used by the projection arithmetic and the
// simplex inner loops. Every kernel has a portable scalar reference and, where
// the CPU supports it, an AVX2+FMA variant. The variant is chosen once at
// first use; SURGE_SIMD=scalar in the environment pins the scalar path.

#include <cstddef>
#include <span>
#include <string_view>

namespace surge::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[t] = sum_{k=0}^{min(t, taps-1)} kernel[k] * signal[t-k], t in [0, n)
    void (*causal_convolve)(const double* signal, std::size_t n, const double* kernel,
                            std::size_t taps, double* out);
    // max_i |x[i]|, 0 for an empty range
    double (*max_abs)(const double* x, std::size_t n);
    // x[i] *= alpha
    void (*scale)(double alpha, double* x, std::size_t n);
};

/// True when the running CPU can execute the given variant.
bool isa_supported(Isa isa);

/// Kernel table for a specific variant. Throws std::invalid_argument when the
/// variant was not compiled in or the CPU lacks support.
const KernelTable& table(Isa isa);

/// Table selected for this process.
const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline void causal_convolve(std::span<const double> signal, std::span<const double> kernel,
                            std::span<double> out) {
    active().causal_convolve(signal.data(), out.size() < signal.size() ? out.size() : signal.size(),
                             kernel.data(), kernel.size(), out.data());
}

inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

inline void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }

namespace detail {
const KernelTable& scalar_table();
#if defined(SURGE_HAVE_AVX2_TU)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace surge::kernels
