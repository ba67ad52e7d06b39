#include "surge/kernels.hpp"

#include <cmath>

namespace surge::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void causal_convolve_scalar(const double* signal, std::size_t n, const double* kernel,
                            std::size_t taps, double* out) {
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t reach = t + 1 < taps ? t + 1 : taps;
        double acc = 0.0;
        for (std::size_t k = 0; k < reach; ++k) acc += kernel[k] * signal[t - k];
        out[t] = acc;
    }
}

double max_abs_scalar(const double* x, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(x[i]);
        if (v > best) best = v;
    }
    return best;
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{Isa::scalar,           dot_scalar,     axpy_scalar,
                               causal_convolve_scalar, max_abs_scalar, scale_scalar};
    return t;
}

}  // namespace surge::kernels::detail
