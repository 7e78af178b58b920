#include "doctest.h"

#include "dhtlab/kernels.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace dhtlab;
using oracle::pi;

TEST_CASE("classical kernels") {
    CHECK(hilbert_kernel(0) == 0.0);
    CHECK(hilbert_kernel(3) == doctest::Approx(1.0 / (3.0 * pi)));
    CHECK(hilbert_kernel(-3) == -hilbert_kernel(3));
    CHECK(rt_kernel(0) == doctest::Approx(2.0 / pi));
    CHECK(rt_kernel(-1) == doctest::Approx(-2.0 / pi));
    CHECK(rt_kernel(2) == doctest::Approx(1.0 / (2.5 * pi)));
    CHECK(kak_kernel(1) == doctest::Approx(2.0 / pi));
    CHECK(kak_kernel(-3) == doctest::Approx(-2.0 / (3.0 * pi)));
    for (long n = -10; n <= 10; n += 2) CHECK(kak_kernel(n) == 0.0);
    CHECK(adp_kernel(0) == 0.0);
    CHECK(adp_kernel(1) == doctest::Approx(4.0 / (3.0 * pi)));
    CHECK(adp_kernel(2) == doctest::Approx(2.0 / (pi * 3.75)));
}

TEST_CASE("J and F against high-precision values") {
    CHECK(j_kernel(0) == 0.0);
    CHECK(j_kernel(1) == doctest::Approx(oracle::J1).epsilon(1e-14));
    CHECK(j_kernel(2) == doctest::Approx(oracle::J2).epsilon(1e-14));
    CHECK(j_kernel(5) == doctest::Approx(oracle::J5).epsilon(1e-14));
    CHECK(f_kernel(1) == doctest::Approx(oracle::F1).epsilon(1e-13));
    CHECK(f_kernel(2) == doctest::Approx(oracle::F2).epsilon(1e-13));
    CHECK(f_kernel(5) == doctest::Approx(oracle::F5).epsilon(1e-12));
    CHECK(j_correction_integral(1) == doctest::Approx(oracle::I_corr1).epsilon(1e-14));
    for (long n = 1; n <= 50; ++n) {
        CHECK(j_kernel(-n) == -j_kernel(n));
        CHECK(j_kernel(n) > hilbert_kernel(n));
    }
    // F decays like 3 zeta(3) / (pi^3 n^3)
    const double c = 3.0 * 1.2020569031595942 / (pi * pi * pi);
    CHECK(f_kernel(400) * std::pow(400.0, 3) == doctest::Approx(c).epsilon(1e-4));
}

TEST_CASE("E kernel against nested quadrature") {
    CHECK(e_kernel(0) == doctest::Approx(oracle::E0).epsilon(1e-14));
    CHECK(e_kernel(1) == doctest::Approx(oracle::E1).epsilon(1e-14));
    for (long n : {0L, 2L, 5L, 40L}) {
        const auto v = e_kernel_with_error(n);
        const double ref = oracle::e_kernel(n);
        CHECK(std::abs(v.value - ref) <= 1e-13 * std::abs(ref) + 1e-17);
        CHECK(v.abs_error_estimate > 0.0);
    }
    CHECK(e_kernel(-7) == e_kernel(7));
    for (long n = 1; n <= 50; ++n) {
        CHECK(e_kernel(n) < 0.0);
        CHECK(-e_kernel(n) * double(n * n) <= kE2);
    }
    CHECK(-e_kernel(3000) * 9e6 == doctest::Approx(kE2).epsilon(1e-6));
    CHECK(kE2 == doctest::Approx(1.0 / (pi * pi)).epsilon(1e-16));
}

TEST_CASE("Kernel cache and metadata") {
    const Kernel j = j_operator();
    for (long n : {-4100L, -4096L, -1L, 0L, 7L, 4096L, 5000L}) CHECK(j(n) == j.generate(n));
    const Eigen::VectorXd w = j.window(-3, 3);
    REQUIRE(w.size() == 7);
    CHECK(w[3] == 0.0);
    CHECK(w[4] == j(1));
    for (const char* name : {"H", "RT", "K", "ADP", "J", "F", "E"}) {
        const Kernel k = kernel_by_name(name);
        CHECK(k.name() == name);
        for (long r : {1L, 5L, 100L, 1000L}) CHECK(std::abs(k(r)) <= k.tail_bound(r) * (1 + 1e-12));
        for (long r : {1L, 5L, 100L}) CHECK(std::abs(k(-r)) <= k.tail_bound(r) * (1 + 1e-12));
    }
    CHECK(kernel_by_name("I")(0) == 1.0);
    CHECK(kernel_by_name("I")(1) == 0.0);
    CHECK_THROWS_AS(kernel_by_name("Q"), std::invalid_argument);
    CHECK(scaled(hilbert(), 2.0)(1) == doctest::Approx(2.0 / pi));
    CHECK(adjoint_kernel(riesz_titchmarsh())(1) == rt_kernel(-1));
    CHECK(hilbert().parity() == Parity::odd);
    CHECK(e_operator().parity() == Parity::even);
}
