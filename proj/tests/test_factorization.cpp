#include "doctest.h"

#include "dhtlab/factorization.hpp"
#include "dhtlab/kernels.hpp"
#include "support/oracles.hpp"

#include <random>

using namespace dhtlab;

TEST_CASE("G kernel") {
    const auto kit = build_G(512);
    CHECK(kit.alpha == doctest::Approx(oracle::alpha).epsilon(1e-14));
    CHECK(kit.G[0] == 0.0);
    CHECK(kit.G.values.minCoeff() >= 0.0);
    CHECK(kit.G[3] == kit.G[-3]);
    // sum of G over Z is 1 - alpha; the window misses at most g_tail_bound of it
    CHECK(kit.g_mass <= 1.0 - kit.alpha + kit.e_quad_error);
    CHECK(1.0 - kit.alpha - kit.g_mass <= kit.g_tail_bound + kit.e_quad_error);
    CHECK_THROWS_AS(build_G(8), std::invalid_argument);
}

TEST_CASE("K is a probability kernel up to the budget") {
    const auto kit = build_K(2048, 1e-8);
    CHECK(kit.neumann_terms == neumann_terms_for(kit.alpha, 1e-8));
    CHECK(kit.neumann_terms == 13);
    CHECK(kit.K.values.minCoeff() >= 0.0);
    CHECK(std::abs(kit.mass_defect) <= 1e-8 + kit.truncation_budget);
    CHECK(kit.K[0] >= kit.alpha);
    CHECK(kit.K[5] == doctest::Approx(kit.K[-5]).epsilon(1e-12));
    CHECK(kit.discarded.size() == std::size_t(kit.neumann_terms - 1));

    SUBCASE("H a = K * J a") {
        const auto d = verify_factorization(kit, Seq::delta(0));
        CHECK(d.pass);
        CHECK(d.max_abs_residual <= d.budget);
        CHECK(d.budget <= 1e-3);

        std::mt19937 g(11);
        Seq r = Seq::zeros(-16, 16);
        for (long i = 0; i < r.size(); ++i) r.values[i] = (g() & 1) ? 1.0 : -1.0;
        const auto rr = verify_factorization(kit, r);
        CHECK(rr.pass);
        CHECK(rr.budget <= 1e-3);

        CHECK_THROWS_AS(verify_factorization(kit, Seq::delta(600)), std::invalid_argument);
        CHECK(verify_factorization(kit, Seq::zeros(0, 3)).pass);
    }
    CHECK_THROWS_AS(verify_factorization(build_G(64), Seq::delta(0)), std::invalid_argument);
}

TEST_CASE("H applied to E gives F") {
    const auto rep = verify_j_equals_h_plus_he(20, 4096);
    CHECK(rep.pass);
    CHECK(rep.max_abs_diff < 1e-10);
}
