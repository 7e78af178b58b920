#include "dhtlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dhtlab {

double test_vector_bound(const ConvOperator& op, const Seq& a, const Exponent& e) {
    const long N = op.radius();
    const Seq t = a.trimmed();
    if (t.empty()) throw std::invalid_argument("test_vector_bound: zero input");
    if (t.first() < -N || t.last() > N) throw std::invalid_argument("test_vector_bound: input leaves the window");
    const Eigen::VectorXd x = t.on(-N, N);
    return lp_norm(op.apply(x), e.p()) / lp_norm(x, e.p());
}

Eigen::VectorXd duality_map(const Eigen::VectorXd& x, double r) {
    if (r == 2.0) return x;
    Eigen::VectorXd y(x.size());
    for (long i = 0; i < x.size(); ++i) {
        const double v = x[i];
        y[i] = v == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v), r - 1.0), v);
    }
    return y;
}

Eigen::VectorXd seed_vector(long radius, double r, std::uint64_t seed, double perturbation) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * std::uint64_t(radius + 1)));
    Eigen::VectorXd v(2 * radius + 1);
    for (long n = -radius; n <= radius; ++n) {
        // Uniform in [-1, 1) from the top 53 bits (portable, unlike std distributions).
        const double u = double(rng() >> 11) * 0x1.0p-52 - 1.0;
        const double x = double(n) + 0.5;
        v[n + radius] = std::copysign(std::pow(std::abs(x), -1.0 / r), x) * (1.0 + perturbation * u);
    }
    return v;
}

NormEstimate power_iteration(const ConvOperator& op, const Exponent& e, Eigen::VectorXd a, int max_iter,
                             double tol) {
    const double p = e.p(), q = e.q();
    NormEstimate est;
    est.p = p;
    est.window_radius = op.radius();
    double na = lp_norm(a, p);
    if (na == 0.0) throw std::invalid_argument("power_iteration: zero start");
    a /= na;
    Eigen::VectorXd ta = op.apply(a);
    double value = lp_norm(ta, p);
    est.history.push_back(value);
    Eigen::VectorXd best = a;
    double best_value = value;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd next = duality_map(op.apply_adjoint(duality_map(ta, p)), q);
        na = lp_norm(next, p);
        if (na == 0.0) break;  // T a = 0: nothing to improve on
        next /= na;
        const Eigen::VectorXd tn = op.apply(next);
        const double v = lp_norm(tn, p);
        est.history.push_back(v);
        est.iterations = it;
        est.residual = v - value;
        a = std::move(next);
        ta = tn;
        value = v;
        if (v > best_value) {
            best_value = v;
            best = a;
        }
        if (std::abs(est.residual) < tol) {
            est.converged = true;
            break;
        }
    }
    // The iteration is monotone up to rounding; keep the best iterate regardless.
    est.certificate = Seq(-op.radius(), best);
    est.value = lp_norm(op.apply(best), p) / lp_norm(best, p);
    return est;
}

namespace {

NormEstimate best_of(std::vector<NormEstimate> runs) {
    auto it = std::max_element(runs.begin(), runs.end(),
                               [](const NormEstimate& x, const NormEstimate& y) { return x.value < y.value; });
    return *it;
}

std::vector<NormEstimate> seeded_runs(const ConvOperator& op, const Exponent& e, const PowerOptions& o) {
    const Eigen::VectorXd sp = seed_vector(op.radius(), e.p(), o.seed, o.perturbation);
    const Eigen::VectorXd sq = seed_vector(op.radius(), e.q(), o.seed, o.perturbation);
    Eigen::VectorXd dual_start = duality_map(op.apply_adjoint(sq), e.q());
    if (dual_start.isZero(0.0)) dual_start = sp;
    return {power_iteration(op, e, sp, o.max_iter, o.tol), power_iteration(op, e, dual_start, o.max_iter, o.tol)};
}

}  // namespace

NormEstimate estimate_norm(const ConvOperator& op, const Exponent& e, const PowerOptions& opts) {
    return best_of(seeded_runs(op, e, opts));
}

NormEstimate estimate_norm(const ConvOperator& op, const Exponent& e, const PowerOptions& opts, const Seq& warm) {
    auto runs = seeded_runs(op, e, opts);
    const Eigen::VectorXd w = warm.on(-op.radius(), op.radius());
    if (!w.isZero(0.0)) runs.push_back(power_iteration(op, e, w, opts.max_iter, opts.tol));
    return best_of(std::move(runs));
}

std::vector<SweepEntry> norm_sweep(const Kernel& k, const Exponent& e, const std::vector<long>& radii,
                                   const PowerOptions& opts) {
    std::vector<long> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    std::vector<SweepEntry> out;
    Seq warm;
    double previous = 0.0;
    for (long N : sorted) {
        const ConvOperator op(k, N);
        SweepEntry entry{warm.empty() ? estimate_norm(op, e, opts) : estimate_norm(op, e, opts, warm)};
        entry.non_monotone = entry.estimate.value < previous;
        previous = std::max(previous, entry.estimate.value);
        warm = entry.estimate.certificate;
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace dhtlab
