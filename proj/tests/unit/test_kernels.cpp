#include <random>
#include <vector>

#include "doctest.h"
#include "surge/kernels.hpp"

using namespace surge::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar convolution matches the definition") {
    const std::vector<double> signal{4, 0, 0, 1};
    const std::vector<double> kernel{0.0, 0.5, 0.5};
    std::vector<double> out(4);
    table(Isa::scalar).causal_convolve(signal.data(), 4, kernel.data(), 3, out.data());
    CHECK(out == std::vector<double>{0, 2, 2, 0});
}

TEST_CASE("vector variants agree with the scalar reference") {
    if (!isa_supported(Isa::avx2)) {
        MESSAGE("AVX2 not available; equivalence skipped");
        return;
    }
    const auto& ref = table(Isa::scalar);
    const auto& vec = table(Isa::avx2);
    std::mt19937_64 rng(5);
    for (std::size_t n = 0; n < 70; ++n) {
        const auto x = random_vector(rng, n);
        const auto y = random_vector(rng, n);
        CHECK(vec.dot(x.data(), y.data(), n) == doctest::Approx(ref.dot(x.data(), y.data(), n)).epsilon(1e-12));
        CHECK(vec.max_abs(x.data(), n) == ref.max_abs(x.data(), n));

        auto y1 = y, y2 = y;
        ref.axpy(0.7, x.data(), y1.data(), n);
        vec.axpy(0.7, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-14));

        auto s1 = x, s2 = x;
        ref.scale(-1.5, s1.data(), n);
        vec.scale(-1.5, s2.data(), n);
        CHECK(s1 == s2);

        for (std::size_t taps : {std::size_t{1}, std::size_t{3}, std::size_t{11}, std::size_t{40}}) {
            const auto k = random_vector(rng, taps);
            std::vector<double> o1(n), o2(n);
            ref.causal_convolve(x.data(), n, k.data(), taps, o1.data());
            vec.causal_convolve(x.data(), n, k.data(), taps, o2.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(o2[i] == doctest::Approx(o1[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("active table is one of the compiled variants") {
    const auto& t = active();
    CHECK((t.isa == Isa::scalar || t.isa == Isa::avx2));
    CHECK(isa_supported(Isa::scalar));
}

}
