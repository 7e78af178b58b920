#pragma once

#include "dhtlab/seqops.hpp"

#include <vector>

namespace dhtlab {

/// G_n = -alpha E_n (n != 0) and the probability kernel K = alpha sum_k G^{*k}
/// on [-window, window], with a ledger of every piece of mass the truncations drop.
struct FactorizationKit {
    long window = 0;
    double e0 = 0;
    double alpha = 0;  ///< 1 / (1 + E_0)
    Seq G;
    double g_mass = 0;        ///< windowed sum of G
    double g_tail_bound = 0;  ///< bound on the G mass outside the window, 2 alpha E2 / window
    double e_quad_error = 0;  ///< summed E quadrature error estimates on the window

    // Filled by build_K.
    Seq K;
    int neumann_terms = 0;
    double mass_tol = 0;
    double geometric_remainder = 0;  ///< (1 - alpha)^terms
    std::vector<double> discarded;   ///< mass cut off when re-truncating each power
    double truncation_budget = 0;    ///< bound on mass lost to window truncation
    double mass_defect = 0;          ///< 1 - sum K

    bool has_K() const noexcept { return neumann_terms > 0; }
};

FactorizationKit build_G(long window);
FactorizationKit build_K(long window, double mass_tol);
/// Adds K to a kit from build_G.
FactorizationKit build_K(FactorizationKit kit, double mass_tol);
/// ceil(log(mass_tol) / log(1 - alpha)).
int neumann_terms_for(double alpha, double mass_tol);

struct FactorizationReport {
    double max_abs_residual = 0;
    double budget = 0;
    long checked_radius = 0;
    bool pass = false;
};

/// max_{|n| <= window/4} |H a_n - (K * J a)_n| against a computed budget. Requires
/// a supported in [-window/4, window/4] and a kit from build_K.
FactorizationReport verify_factorization(const FactorizationKit& kit, const Seq& a);
FactorizationReport verify_factorization(const Seq& a, long window, double mass_tol = 1e-8);

/// J_n - H_n - (H * E)_n for |n| <= n_max with E truncated to |m| <= window.
struct ConvolutionIdentityReport {
    double max_abs_diff = 0;
    double budget = 0;
    bool pass = false;
};
ConvolutionIdentityReport verify_j_equals_h_plus_he(long n_max, long window);

}  // namespace dhtlab
