#include "doctest.h"

#include "dhtlab/identities.hpp"
#include "dhtlab/kernels.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <random>

using namespace dhtlab;
using oracle::pi;

TEST_CASE("harmonic functions: closed forms") {
    CHECK(poisson_p(0, {0.0, 1.0}) == doctest::Approx(1.0 / pi));
    for (double y : {0.1, 1.0, 5.0})
        CHECK(h_func({pi, y}) == doctest::Approx(std::tanh(y / 2) / (2 * pi)).epsilon(1e-14));
    CHECK(green_G({0.0, 1.0}, 0.0, 2.0) == doctest::Approx(std::log(9.0) / (2 * pi)).epsilon(1e-15));
    CHECK(h_inverse({0.7, 0.4}) * h_func({0.7, 0.4}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(poisson_p(0, {0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(green_G({0.0, 2.0}, 0.0, 2.0), std::domain_error);
    // green_ratio is G / p_n(0, y0)
    const PlanePoint z{1.3, 0.8};
    CHECK(green_ratio(z, 1, 20.0) ==
          doctest::Approx(green_G(z, 0.0, 20.0) / poisson_p(1, {0.0, 20.0})).epsilon(1e-13));
}

TEST_CASE("gradients against central differences; orthogonality") {
    std::mt19937 g(3);
    std::uniform_real_distribution<double> ux(-7.0, 7.0), uy(0.05, 4.0);
    const double d = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const PlanePoint z{ux(g), uy(g)};
        auto num = [&](auto f) {
            return Eigen::Vector2d((f({z.x + d, z.y}) - f({z.x - d, z.y})) / (2 * d),
                                   (f({z.x, z.y + d}) - f({z.x, z.y - d})) / (2 * d));
        };
        const Eigen::Vector2d gh = grad_h(z);
        CHECK((gh - num(h_func)).norm() <= 1e-6 * (1 + gh.norm()));
        const Eigen::Vector2d ghi = grad_h_inverse(z);
        CHECK((ghi - num(h_inverse)).norm() <= 1e-6 * (1 + ghi.norm()));
        const Eigen::Vector2d gp = grad_p(2, z);
        CHECK((gp - num([](PlanePoint q) { return poisson_p(2, q); })).norm() <= 1e-6 * (1 + gp.norm()));
        CHECK(std::abs(rot(gp).dot(gp)) <= 1e-12 * gp.squaredNorm());
        CHECK(std::abs(rot(gh).dot(gh)) <= 1e-12 * gh.squaredNorm());
        CHECK(gh.norm() <= h_func(z) / z.y * (1 + 1e-12));
    }
}

TEST_CASE("lattice sum of Poisson kernels") {
    const auto r = verify_poisson_sum({0.0, 1.0}, 1000);
    CHECK(r.pass);
    CHECK(r.abs_diff < 1e-3);
    CHECK(r.abs_diff == verify_poisson_sum({-0.0, 1.0}, 1000).abs_diff);
    const auto a = verify_poisson_sum({0.9, 0.5}, 500), b = verify_poisson_sum({-0.9, 0.5}, 500);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-15));
    const auto c = verify_poisson_sum({0.9 + 2 * pi, 0.5}, 500);
    CHECK(a.lhs == doctest::Approx(c.lhs).epsilon(1e-13));
    CHECK(c.pass);
    // without the 1/(2 pi) factor the identity is off by 2 pi
    CHECK_FALSE(verify_poisson_sum_unnormalized({0.0, 1.0}, 1000).pass);
    CHECK_THROWS(verify_poisson_sum({0.0, 1.0}, 0));
}

TEST_CASE("bounds on h") {
    CHECK(verify_h_bounds({0.3, 2.0}).pass);
    CHECK(verify_h_bounds({pi, 3.0}).pass);
    CHECK(verify_h_bounds({0.0, 1e-3}).pass);
    // The stated lower bound y/(2 pi (y+1)) fails where cos x = -1 and y is small:
    // h(pi, y) = tanh(y/2)/(2 pi) < y/(2 pi (y+1)) for y below about 1.5.
    CHECK_FALSE(verify_h_bounds({pi, 0.05}).pass);
    CHECK_FALSE(verify_h_bounds({pi, 1.0}).pass);
    // the upper bound is never the one violated
    for (double y : {1e-3, 0.1, 1.0, 10.0}) CHECK(h_func({0.0, y}) <= (y + 2) / (2 * pi * y));
}

TEST_CASE("Green ratio limit") {
    const auto r = verify_green_limit({1.0, 1.0}, 1, {8 * pi, 100.0, 1000.0, 1e4});
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - 2.0) < 1e-3);
    // envelope y0 log(1 + 4t/(t-1)^2) at y0 = 8 pi n
    const double y0 = 8 * pi, t = 1.0 / y0;
    CHECK(green_ratio({1.0, 1.0}, 1, y0) <= y0 * std::log1p(4 * t / ((t - 1) * (t - 1))));
    CHECK_THROWS_AS(verify_green_limit({1.0, 1.0}, 1, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(verify_green_limit({1.0, 1.0}, 0, {20.0, 10.0}), std::invalid_argument);
}

TEST_CASE("residue integrals") {
    CHECK(closed_I(1, 1, pi) == doctest::Approx(1.0 / (4 * pi * pi * pi)).epsilon(1e-14));
    CHECK(closed_I(4, 1, 1.0) == doctest::Approx(-pi / ((1 + pi * pi) * (1 + pi * pi))).epsilon(1e-14));
    for (int k = 1; k <= 5; ++k)
        for (long n : {1L, 2L, -3L})
            for (double y : {0.5, 1.0, 2.0}) {
                const auto q = quad_I(k, n, y);
                CHECK(std::abs(q.value - closed_I(k, n, y)) < 1e-8);
                CHECK(verify_I(k, n, y).pass);
            }
    for (long n : {1L, 2L, 3L}) {
        CHECK(closed_I(1, -n, 0.7) == doctest::Approx(-closed_I(1, n, 0.7)));
        CHECK(closed_I(4, -n, 0.7) == doctest::Approx(-closed_I(4, n, 0.7)));
        CHECK(quad_I(1, -n, 0.7).value == doctest::Approx(-quad_I(1, n, 0.7).value).epsilon(1e-10));
    }
    CHECK_THROWS(closed_I(6, 1, 1.0));
    CHECK_THROWS(closed_I(1, 0, 1.0));
}

TEST_CASE("I6 and I7 decompose through I1..I5") {
    for (long n : {1L, 2L, -3L})
        for (double y : {0.5, 1.0, 2.0}) {
            const double s = std::sinh(y), c = std::cosh(y);
            const double i6 = c / s * closed_I(1, n, y) - closed_I(2, n, y) / s;
            const double i7 = closed_I(3, n, y) / s + c / (s * s) * closed_I(5, n, y) - closed_I(4, n, y) / (s * s);
            CHECK(closed_I6(n, y) == doctest::Approx(i6).epsilon(1e-12));
            CHECK(closed_I7(n, y) == doctest::Approx(i7).epsilon(1e-12));
            CHECK(int6_rhs(n, y) == doctest::Approx(i6 + 2 * i7).epsilon(1e-12));
            CHECK(verify_int6(n, y).pass);
        }
    // the exponent 3 on (y^2 + pi^2 n^2) in the second term does not match
    CHECK_FALSE(verify_int6(1, 1.0, 3).pass);
    for (long n = 1; n <= 5; ++n) CHECK(verify_int7(n).pass);
    CHECK(std::abs(verify_int7(3).lhs - 1 / (3 * pi)) < 1e-10);
}

TEST_CASE("J_n as a double integral") {
    const auto r = verify_jn_double_integral(1, 1e-6, true);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(oracle::J1).epsilon(1e-8));
    CHECK(jn_double_integral(2, false).value == doctest::Approx(oracle::J2).epsilon(1e-9));
    CHECK(jn_double_integral(0, true).value == 0.0);

    // third term equals minus the second (reflection x -> 2 pi (n+m) - x)
    const auto t = mdht_terms(1, 0);
    CHECK(t.third.value == doctest::Approx(-t.second.value).epsilon(1e-7));
    CHECK(t.first.value + t.second.value - t.third.value == doctest::Approx(oracle::J1).epsilon(1e-7));

    // finite starting height: approaches J_1 as y0 grows
    const double t10 = conditional_transform_entry(1, 0, 10.0).value;
    const double t50 = conditional_transform_entry(1, 0, 50.0).value;
    CHECK(std::abs(t50 - oracle::J1) < std::abs(t10 - oracle::J1));
    CHECK(std::abs(t50 - oracle::J1) < 3e-3);
}

TEST_CASE("discrete Hilbert transform identities") {
    CHECK(verify_hp(1, 1.0, 10000).pass);
    CHECK(verify_hp(1, 1.0, 10000).abs_diff <= 1e-7);
    CHECK(verify_ihq(0, 2.0, 10000).pass);
    CHECK(ihq_closed(0, 2.0) == 0.0);
    CHECK(verify_ihq(3, 0.5, 10000).pass);
    CHECK(verify_ihj(2, 2000).pass);
    CHECK(c_sequence(0, 1.0).value == doctest::Approx(1.0572508753757285).epsilon(1e-14));  // Shi(1)
    CHECK_THROWS(verify_hp(5, 1.0, 5));
}

TEST_CASE("suites") {
    for (const auto& r : run_suite("quick")) CHECK_MESSAGE(r.pass, r.name);
    CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
}
