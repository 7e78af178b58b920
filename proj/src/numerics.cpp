#include "dhtlab/numerics.hpp"

#include <cmath>
#include <numbers>

namespace dhtlab {

Exponent::Exponent(double p) : p_(p), q_(p / (p - 1.0)) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("Exponent: p must lie in (1, inf), got " + std::to_string(p));
}

double pichorides_constant(const Exponent& e) {
    if (e.p() == 2.0) return 1.0;
    return 1.0 / std::tan(std::numbers::pi / (2.0 * e.pstar()));
}

double burkholder_constant(const Exponent& e) { return e.pstar() - 1.0; }

double catalan_beta2() {
    // Accelerated alternating series; 24 terms give an error below 10^-18.
    constexpr int n = 24;
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = (d + 1.0 / d) / 2.0;
    double b = -1.0, c = -d, s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        const double a = 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        s += c * a;
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

double catalan_partial_sum(int last) {
    double s = 0.0;
    for (int k = 0; k <= last; ++k) {
        const double t = 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        s += (k % 2 == 0) ? t : -t;
    }
    return s;
}

GaussLegendreRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        long double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        long double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1, p1 = 0;
            for (int j = 1; j <= order; ++j) {
                const long double p2 = p1;
                p1 = p0;
                p0 = ((2.0L * j - 1) * x * p1 - (j - 1.0L) * p2) / j;
            }
            dp = order * (x * p0 - p1) / (x * x - 1);
            const long double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        const long double w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -static_cast<double>(x);
        rule.nodes[order - 1 - i] = static_cast<double>(x);
        rule.weights[i] = rule.weights[order - 1 - i] = static_cast<double>(w);
    }
    return rule;
}

}  // namespace dhtlab
