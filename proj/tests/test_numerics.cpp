#include "doctest.h"

#include "dhtlab/numerics.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace dhtlab;

TEST_CASE("exponent and its dual") {
    const Exponent e(4.0);
    CHECK(e.q() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(e.pstar() == 4.0);
    CHECK(e.dual().pstar() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(Exponent(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Exponent(0.5), std::invalid_argument);
    CHECK_THROWS_AS(Exponent{INFINITY}, std::invalid_argument);
}

TEST_CASE("pichorides and burkholder constants") {
    CHECK(pichorides_constant(Exponent(2.0)) == 1.0);
    CHECK(std::abs(pichorides_constant(Exponent(4.0)) - (1.0 + std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(pichorides_constant(Exponent(4.0 / 3.0)) - (1.0 + std::sqrt(2.0))) < 1e-12);
    // cot(pi/(2p*)) <= p* - 1
    for (double p : {1.1, 1.5, 3.0, 6.0, 20.0}) {
        const Exponent e(p);
        CHECK(pichorides_constant(e) <= burkholder_constant(e) + 1e-15);
    }
    CHECK(burkholder_constant(Exponent(3.0)) == 2.0);
}

TEST_CASE("catalan constant") {
    CHECK(std::abs(catalan_beta2() - oracle::catalan) < 2e-16);
    // alternating partial sums bracket the limit
    CHECK(catalan_partial_sum(100) > catalan_beta2());
    CHECK(catalan_partial_sum(101) < catalan_beta2());
}

TEST_CASE("gauss-legendre exactness") {
    const auto r = gauss_legendre(10);
    double s = 0.0, s1 = 0.0;
    for (int i = 0; i < 10; ++i) {
        s += r.weights[i] * std::pow(r.nodes[i], 18);
        s1 += r.weights[i];
    }
    CHECK(s == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
    CHECK(s1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, kInf).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, -kInf, kInf).value ==
          doctest::Approx(oracle::pi).epsilon(1e-12));
    // integrable endpoint singularity
    CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value == doctest::Approx(-1.0).epsilon(1e-10));
    // reversed limits
    CHECK(integrate([](double x) { return x; }, 1.0, 0.0, 1e-12).value == doctest::Approx(-0.5));
    // breaks at a kink
    const auto q = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, std::vector<double>{0.3});
    CHECK(q.value == doctest::Approx(0.29).epsilon(1e-14));
    CHECK(q.evaluations == 42);

    QuadOptions tight;
    tight.max_subdivisions = 3;
    tight.rel_tol = 1e-14;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 0.0, 1.0, tight), QuadratureError);
}
