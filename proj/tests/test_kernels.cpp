#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "iit/kernels.hpp"

using namespace iit;

TEST_CASE("simd variants agree with scalar reference") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.001, 1.0);
    for (size_t n : {1u, 3u, 4u, 7u, 16u, 64u, 255u, 1024u}) {
        std::vector<double> a(n), b(n);
        for (auto& x : a) x = dist(rng);
        for (auto& x : b) x = dist(rng);

        std::vector<double> y_ref(a), y_act(a);
        kernels::scalar::mul_inplace(y_ref.data(), b.data(), n);
        kernels::active().mul_inplace(y_act.data(), b.data(), n);
        CHECK(y_ref == y_act);

        CHECK(kernels::scalar::sum(a.data(), n) == kernels::active().sum(a.data(), n));

        double id_ref = kernels::scalar::id_sum(a.data(), b.data(), n);
        double id_act = kernels::active().id_sum(a.data(), b.data(), n);
        CHECK(std::abs(id_ref - id_act) < 1e-12);
    }
}

TEST_CASE("fold_stride halves a distribution axis") {
    std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> y(4);
    kernels::active().fold_stride(y.data(), x.data(), 2, 2);
    CHECK(y == std::vector<double>{2.0, 3.0, 6.0, 7.0});
}

TEST_CASE("variant selection") {
    std::string original = kernels::active().name;
    CHECK(kernels::select("scalar"));
    CHECK(std::string(kernels::active().name) == "scalar");
    CHECK_FALSE(kernels::select("not-a-variant"));
    kernels::select(original);
}
