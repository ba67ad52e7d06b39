#include "surge/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace surge::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(SURGE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa))
        throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
#if defined(SURGE_HAVE_AVX2_TU)
    if (isa == Isa::avx2) return detail::avx2_table();
#endif
    return detail::scalar_table();
}

namespace {

const KernelTable& select() {
    if (const char* env = std::getenv("SURGE_SIMD"); env && std::string(env) == "scalar")
        return detail::scalar_table();
    if (isa_supported(Isa::avx2)) return table(Isa::avx2);
    return detail::scalar_table();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace surge::kernels
