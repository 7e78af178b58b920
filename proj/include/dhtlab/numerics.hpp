#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dhtlab {

template <typename Scalar>
struct BasicQuadResult {
    Scalar value{0};
    Scalar abs_error_estimate{0};
    long evaluations{0};
};
using QuadResult = BasicQuadResult<double>;

/// Raised when adaptive quadrature exhausts its subdivision budget. Carries the
/// best estimate reached so callers can report it.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadResult& best() const noexcept { return best_; }

private:
    QuadResult best_;
};

template <typename Scalar>
struct BasicQuadOptions {
    Scalar rel_tol = Scalar(1e-10);
    Scalar abs_tol = Scalar(1e-15);
    int max_subdivisions = 4000;
    /// Length scale of the map x = c +- s t/(1-t) used on infinite pieces.
    Scalar tail_scale = Scalar(1);
};
using QuadOptions = BasicQuadOptions<double>;

/// Exponent p in (1, inf) with its dual q = p/(p-1) and p* = max(p, q).
class Exponent {
public:
    explicit Exponent(double p);
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double pstar() const noexcept { return std::max(p_, q_); }
    Exponent dual() const { return Exponent(q_); }

private:
    double p_;
    double q_;
};

/// cot(pi / (2 p*)), the norm of the continuous Hilbert transform on L^p.
double pichorides_constant(const Exponent& e);
/// p* - 1.
double burkholder_constant(const Exponent& e);

/// Catalan's constant beta(2) = sum_k (-1)^k / (2k+1)^2, via
/// Cohen-Rodriguez Villegas-Zagier acceleration.
double catalan_beta2();
/// Plain partial sum over k = 0..last (brackets beta(2) from alternate sides).
double catalan_partial_sum(int last);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int order);

namespace detail {

// Kronrod 21 / Gauss 10 (QUADPACK qk21).
inline constexpr std::array<long double, 11> kGk21Nodes = {
    0.995657163025808080735527280689003L, 0.973906528517171720077964012084452L,
    0.930157491355708226001207180059508L, 0.865063366688984510732096688423493L,
    0.780817726586416897063717578345042L, 0.679409568299024406234327365114874L,
    0.562757134668604683339000099272694L, 0.433395394129247190799265943165784L,
    0.294392862701460198131126603103866L, 0.148874338981631210884826001129720L,
    0.000000000000000000000000000000000L};
inline constexpr std::array<long double, 11> kGk21Weights = {
    0.011694638867371874278064396062192L, 0.032558162307964727478818972459390L,
    0.054755896574351996031381300244580L, 0.075039674810919952767043140916190L,
    0.093125454583697605535065465083366L, 0.109387158802297641899210590325805L,
    0.123491976262065851077958109831074L, 0.134709217311473325928054001771707L,
    0.142775938577060080797094273138717L, 0.147739104901338491374841515972068L,
    0.149445554002916905664936468389821L};
inline constexpr std::array<long double, 5> kGauss10Weights = {
    0.066671344308688137593568809893332L, 0.149451349150580593145776339657697L,
    0.219086362515982043995534934228163L, 0.269266719309996355091226921569469L,
    0.295524224714752870173892994651338L};

enum class PieceMap { finite, right_tail, left_tail };

template <typename Scalar>
struct Piece {
    PieceMap map;
    Scalar anchor;  // left end (finite / right_tail) or right end (left_tail)
    Scalar scale;
};

template <typename Scalar>
struct Segment {
    Scalar lo, hi;
    Scalar value, error;
    int piece;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// f(x(t)) * x'(t) on the piece's parameter interval.
template <typename Scalar, typename F>
Scalar mapped_value(F& f, const Piece<Scalar>& pc, Scalar t) {
    switch (pc.map) {
    case PieceMap::finite:
        return f(t);
    case PieceMap::right_tail: {
        const Scalar u = Scalar(1) - t;
        return f(pc.anchor + pc.scale * t / u) * pc.scale / (u * u);
    }
    case PieceMap::left_tail: {
        const Scalar u = Scalar(1) - t;
        return f(pc.anchor - pc.scale * t / u) * pc.scale / (u * u);
    }
    }
    return Scalar(0);
}

template <typename Scalar, typename F>
Segment<Scalar> gk21(F& f, const Piece<Scalar>& pc, int piece, Scalar lo, Scalar hi,
                     Scalar& resabs) {
    const Scalar center = (lo + hi) / 2;
    const Scalar half = (hi - lo) / 2;
    const Scalar fc = mapped_value(f, pc, center);
    Scalar kronrod = fc * Scalar(kGk21Weights[10]);
    Scalar gauss = 0;
    resabs = std::abs(kronrod);
    for (int j = 0; j < 10; ++j) {
        const Scalar dx = half * Scalar(kGk21Nodes[j]);
        const Scalar f1 = mapped_value(f, pc, center - dx);
        const Scalar f2 = mapped_value(f, pc, center + dx);
        kronrod += Scalar(kGk21Weights[j]) * (f1 + f2);
        resabs += Scalar(kGk21Weights[j]) * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += Scalar(kGauss10Weights[j / 2]) * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    resabs *= std::abs(half);
    const Scalar roundoff = 50 * std::numeric_limits<Scalar>::epsilon() * resabs;
    return {lo, hi, kronrod, std::max(std::abs(kronrod - gauss), roundoff), piece};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (21-point) quadrature over a union of pieces
/// split at `breaks`. Either end may be +-infinity; infinite pieces are mapped
/// onto [0, 1) with x = c +- s t/(1-t). Nodes never touch the endpoints, so
/// integrable endpoint singularities are tolerated.
///
/// Converges when the summed error estimate is below
/// max(rel_tol |I|, abs_tol, roundoff floor); otherwise throws QuadratureError.
template <typename Scalar = double, typename F>
BasicQuadResult<Scalar> integrate(F&& f, Scalar a, Scalar b, std::vector<Scalar> breaks,
                                  const BasicQuadOptions<Scalar>& opts = {}) {
    using namespace detail;
    if (a == b) return {};
    Scalar sign = 1;
    if (a > b) {
        std::swap(a, b);
        sign = -1;
    }
    std::vector<Scalar> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (Scalar x : breaks)
        if (x > pts.back() && x < b) pts.push_back(x);
    pts.push_back(b);
    if (std::isinf(a) && std::isinf(b) && pts.size() == 2) pts.insert(pts.begin() + 1, Scalar(0));

    std::vector<Piece<Scalar>> pieces;
    std::vector<std::pair<Scalar, Scalar>> ranges;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Scalar lo = pts[i], hi = pts[i + 1];
        if (std::isinf(lo)) {
            pieces.push_back({PieceMap::left_tail, hi, opts.tail_scale});
            ranges.emplace_back(Scalar(0), Scalar(1));
        } else if (std::isinf(hi)) {
            pieces.push_back({PieceMap::right_tail, lo, opts.tail_scale});
            ranges.emplace_back(Scalar(0), Scalar(1));
        } else {
            pieces.push_back({PieceMap::finite, Scalar(0), Scalar(1)});
            ranges.emplace_back(lo, hi);
        }
    }

    std::priority_queue<Segment<Scalar>> heap;
    Scalar total = 0, total_err = 0, total_abs = 0;
    long evals = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        Scalar resabs = 0;
        auto seg = gk21(f, pieces[i], static_cast<int>(i), ranges[i].first, ranges[i].second, resabs);
        evals += 21;
        total += seg.value;
        total_err += seg.error;
        total_abs += resabs;
        heap.push(seg);
    }
    auto converged = [&] {
        const Scalar floor = 50 * std::numeric_limits<Scalar>::epsilon() * total_abs;
        return total_err <= std::max({opts.rel_tol * std::abs(total), opts.abs_tol, floor});
    };
    int splits = 0;
    while (!converged()) {
        if (splits >= opts.max_subdivisions) {
            QuadResult best{double(sign * total), double(total_err), evals};
            throw QuadratureError("integrate: subdivision budget exhausted", best);
        }
        const Segment<Scalar> worst = heap.top();
        heap.pop();
        const Scalar mid = (worst.lo + worst.hi) / 2;
        Scalar abs_l = 0, abs_r = 0;
        auto left = gk21(f, pieces[worst.piece], worst.piece, worst.lo, mid, abs_l);
        auto right = gk21(f, pieces[worst.piece], worst.piece, mid, worst.hi, abs_r);
        evals += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += abs_l + abs_r;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum from the leaves so the result does not carry cancellation from the
    // running updates.
    total = 0;
    total_err = 0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    return {sign * total, total_err, evals};
}

template <typename Scalar = double, typename F>
BasicQuadResult<Scalar> integrate(F&& f, Scalar a, Scalar b, const BasicQuadOptions<Scalar>& opts = {}) {
    return integrate<Scalar>(std::forward<F>(f), a, b, std::vector<Scalar>{}, opts);
}

template <typename Scalar = double, typename F>
BasicQuadResult<Scalar> integrate(F&& f, Scalar a, Scalar b, Scalar rel_tol) {
    BasicQuadOptions<Scalar> opts;
    opts.rel_tol = rel_tol;
    return integrate<Scalar>(std::forward<F>(f), a, b, std::vector<Scalar>{}, opts);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace dhtlab
