#include "dhtlab/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dhtlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// E_0..E_w with their quadrature error estimates.
void e_table(long w, Eigen::VectorXd& values, Eigen::VectorXd& errors) {
    values.resize(w + 1);
    errors.resize(w + 1);
    for (long n = 0; n <= w; ++n) {
        const auto e = e_kernel_with_error(n);
        values[n] = e.value;
        errors[n] = e.abs_error_estimate;
    }
}

}  // namespace

int neumann_terms_for(double alpha, double mass_tol) {
    return int(std::ceil(std::log(mass_tol) / std::log(1.0 - alpha)));
}

FactorizationKit build_G(long window) {
    if (window < 16) throw std::invalid_argument("build_G: window must be at least 16");
    Eigen::VectorXd e, err;
    e_table(window, e, err);
    FactorizationKit kit;
    kit.window = window;
    kit.e0 = e[0];
    kit.alpha = 1.0 / (1.0 + e[0]);
    kit.G = Seq::zeros(-window, window);
    for (long n = 1; n <= window; ++n) {
        const double g = -kit.alpha * e[n];
        kit.G.values[window + n] = g;
        kit.G.values[window - n] = g;
    }
    kit.g_mass = kit.G.values.sum();
    kit.g_tail_bound = 2.0 * kit.alpha * kE2 / double(window);
    kit.e_quad_error = err[0] + 2.0 * err.tail(window).sum();
    return kit;
}

FactorizationKit build_K(FactorizationKit kit, double mass_tol) {
    const double q = 1.0 - kit.alpha;
    if (!(q > 0.0 && q < 1.0)) throw std::logic_error("build_K: need 0 < 1 - alpha < 1");
    if (!(mass_tol > 0.0 && mass_tol < 1.0)) throw std::invalid_argument("build_K: mass_tol out of range");
    const long w = kit.window, d = 2 * w + 1;

    Eigen::VectorXd power = Eigen::VectorXd::Zero(d);
    power[w] = 1.0;
    Eigen::VectorXd k = kit.alpha * power;
    kit.discarded.clear();
    double cumulative_discard = 0.0, discard_budget = 0.0, remainder = q;
    int terms = 1;
    while (remainder >= mass_tol) {
        const Eigen::VectorXd full = linear_convolve(power, kit.G.values);  // on [-2w, 2w]
        power = full.segment(w, d);
        // FFT roundoff can leave entries of order 1e-17 below zero; the true powers are >= 0.
        power = power.cwiseMax(0.0);
        const double cut = full.head(w).sum() + full.tail(w).sum();
        kit.discarded.push_back(cut);
        cumulative_discard += cut;
        discard_budget += kit.alpha * cumulative_discard;
        k += kit.alpha * power;
        ++terms;
        remainder *= q;
    }
    kit.K = Seq(-w, k);
    kit.neumann_terms = terms;
    kit.mass_tol = mass_tol;
    kit.geometric_remainder = remainder;
    // Each power loses at most k (1-alpha)^{k-1} tau of mass to the clipped G tail,
    // tau <= g_tail_bound + alpha * e_quad_error; summed with weight alpha this is tau/alpha.
    const double tau = kit.g_tail_bound + kit.alpha * kit.e_quad_error;
    kit.truncation_budget = tau / kit.alpha + discard_budget + 8.0 * terms * d * kEps;
    kit.mass_defect = 1.0 - k.sum();
    return kit;
}

FactorizationKit build_K(long window, double mass_tol) { return build_K(build_G(window), mass_tol); }

FactorizationReport verify_factorization(const FactorizationKit& kit, const Seq& a) {
    if (!kit.has_K()) throw std::invalid_argument("verify_factorization: kit has no K");
    const long w = kit.window, r = w / 4;
    FactorizationReport rep;
    rep.checked_radius = r;
    const Seq sa = a.trimmed();
    if (sa.empty()) {
        rep.pass = true;
        return rep;
    }
    if (sa.first() < -r || sa.last() > r)
        throw std::invalid_argument("verify_factorization: sequence must lie in [-window/4, window/4]");

    const Seq ha = convolve(hilbert(), sa, r);
    const long jr = w + r;
    const Seq ja = convolve(j_operator(), sa, jr);
    // (K * Ja)_n for |n| <= r; K on [-w, w], Ja on [-jr, jr] so full index s = n + w + jr.
    const Eigen::VectorXd kja = linear_convolve(kit.K.values, ja.values);
    for (long n = -r; n <= r; ++n)
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(ha[n] - kja[n + w + jr]));

    // H a - K~ * J a = (K - K~) * J a with K - K~ >= 0 up to quadrature noise, so the
    // residual is at most the l1 defect times sup |J a|. The sup is taken over the
    // computed window and, beyond it, |J a_m| <= ||a||_1 J_1 / (|m| - r).
    const double l1 = lp_norm(sa, 1.0);
    const double sup_ja = std::max(lp_norm(ja, kInfNorm), l1 * j_kernel(1) / double(jr + 1 - r));
    const double noise = 2.0 * (kit.e_quad_error + kit.neumann_terms * (2 * w + 1) * kEps);
    const double rounding = 4.0 * double(2 * w + 1) * kEps * l1 * j_kernel(1);
    rep.budget = (std::max(kit.mass_defect, 0.0) + noise) * sup_ja + rounding;
    rep.pass = rep.max_abs_residual <= rep.budget;
    return rep;
}

FactorizationReport verify_factorization(const Seq& a, long window, double mass_tol) {
    return verify_factorization(build_K(window, mass_tol), a);
}

ConvolutionIdentityReport verify_j_equals_h_plus_he(long n_max, long window) {
    Eigen::VectorXd e, err;
    e_table(window, e, err);
    ConvolutionIdentityReport rep;
    rep.pass = true;
    for (long n = -n_max; n <= n_max; ++n) {
        double he = 0.0, quad = 0.0, mag = 0.0;
        for (long m = -window; m <= window; ++m) {
            const double h = hilbert_kernel(n - m);
            he += h * e[std::abs(m)];
            quad += std::abs(h) * err[std::abs(m)];
            mag += std::abs(h * e[std::abs(m)]);
        }
        const double f = j_kernel(n) - hilbert_kernel(n);
        const long an = std::abs(n);
        const double gap = double(window - an);
        const double tail = 4.0 * double(an) * kE2 / (3.0 * std::numbers::pi * gap * gap * gap);
        const double budget = tail + quad + 1e-12 * std::abs(f) + 4.0 * double(2 * window + 1) * kEps * mag;
        rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(f - he));
        rep.budget = std::max(rep.budget, budget);
        if (std::abs(f - he) > budget) rep.pass = false;
    }
    return rep;
}

}  // namespace dhtlab
