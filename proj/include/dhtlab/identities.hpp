#pragma once

#include "dhtlab/numerics.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dhtlab {

/// Point of the open upper half-plane.
struct PlanePoint {
    double x;
    double y;
};

// Harmonic functions on the half-plane. h = sum_n p_n is the 2 pi-periodic
// Poisson kernel; G is the Green function of -Delta/2 with pole (x0, y0).

double poisson_p(long n, PlanePoint pt);
Eigen::Vector2d grad_p(long n, PlanePoint pt);
double h_func(PlanePoint pt);
Eigen::Vector2d grad_h(PlanePoint pt);
double h_inverse(PlanePoint pt);
Eigen::Vector2d grad_h_inverse(PlanePoint pt);
double green_G(PlanePoint pt, double x0, double y0);
/// G(x, y) / p_n(0, y0) with x0 = 0, written as c log1p(u) to avoid cancellation.
double green_ratio(PlanePoint pt, long n, double y0);
/// Rotation by a quarter turn: (v_x, v_y) -> (-v_y, v_x).
inline Eigen::Vector2d rot(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

struct IdentityReport {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double abs_diff = 0;
    double tolerance = 0;
    bool pass = false;
};
IdentityReport make_report(std::string name, double lhs, double rhs, double tolerance);

/// sum over |n - c| <= N of p_n against h, with c = round(x / 2 pi); the tail
/// is at most y / (pi^3 (2N - 1)).
IdentityReport verify_poisson_sum(PlanePoint pt, long N);
/// Whether the lattice sum carries the 1/(2 pi) factor: compares the partial sum
/// with sinh y / (cosh y - cos x) itself (expected to fail).
IdentityReport verify_poisson_sum_unnormalized(PlanePoint pt, long N);
/// y/(2 pi (y+1)) <= h <= (y+2)/(2 pi y); lhs = h, rhs = the violated bound or
/// the nearer one, pass iff both hold.
IdentityReport verify_h_bounds(PlanePoint pt);
/// Ratio G/p_n(0, y0) at the last y0 against 2y, with the envelope
/// y0 log(1 + 4t/(t-1)^2), t = y/y0, checked at every y0 and |ratio - 2y|
/// required to shrink along the list.
IdentityReport verify_green_limit(PlanePoint pt, long n, const std::vector<double>& y0_list);

/// Closed forms of the five x-integrals (k = 1..5, n != 0).
double closed_I(int k, long n, double y);
/// The defining x-integrands, integrated over the real line.
double I_integrand(int k, long n, double y, double x);
QuadResult quad_I(int k, long n, double y, double rel_tol = 1e-12);
IdentityReport verify_I(int k, long n, double y);

/// Closed forms of I6 = int h^{-1} H grad p0 . grad p_n dx and
/// I7 = int p_n H grad p0 . grad h^{-1} dx.
double closed_I6(long n, double y);
double closed_I7(long n, double y);
/// Right-hand side of I6 + 2 I7; `exponent` is the power of (y^2 + pi^2 n^2) in
/// the second term (1 is correct, 3 is the misprinted variant).
double int6_rhs(long n, double y, int exponent = 1);
/// x-integrand of I6 + 2 I7.
double int6_integrand(long n, double y, double x);
QuadResult quad_int6(long n, double y, double rel_tol = 1e-12);
IdentityReport verify_int6(long n, double y, int exponent = 1);
/// int_0^inf 2y pi n (3y^2 - pi^2 n^2)/(y^2 + pi^2 n^2)^3 dy = 1/(pi n).
IdentityReport verify_int7(long n);

/// J_n as the double integral of 2y (h^{-1} H grad p0 . grad p_n + 2 p_n H grad p0 . grad h^{-1}).
/// naive = true integrates over x numerically for every y; otherwise the closed
/// x-integral I6 + 2 I7 is used and only the y-integral is numerical.
QuadResult jn_double_integral(long n, bool naive, double rel_tol = 1e-9);
IdentityReport verify_jn_double_integral(long n, double rel_tol = 1e-6, bool naive = true);

/// The three weight-2y double integrals whose sum is J_nm (before the reflection
/// x -> 2 pi (n+m) - x merges the last two).
struct MdhtTerms {
    QuadResult first, second, third;
};
MdhtTerms mdht_terms(long n, long m, double rel_tol = 1e-9);

/// T_nm at the finite starting point (0, y0): the double integral with weight
/// G(x, y) / p_n(0, y0) instead of its limit 2y.
QuadResult conditional_transform_entry(long n, long m, double y0, double rel_tol = 1e-8);

/// B_n(y): the discrete Hilbert transform of A_n(y) = 1/(y^2 + pi^2 n^2).
double hp_closed(long n, double y);
/// D_n(y): the transform of C_n(y) = int_0^y t sinh t/(t^2 + pi^2 n^2) dt.
double ihq_closed(long n, double y);
/// C_n(y), with C_0(y) = Shi(y).
QuadResult c_sequence(long n, double y);

/// Truncated transforms sum_{0<|m|<=M} (source)_{n-m} / (pi m) against the closed
/// forms; tolerance = tail bound + quadrature budget + rounding.
IdentityReport verify_hp(long n, double y, long M);
IdentityReport verify_ihq(long n, double y, long M);
IdentityReport verify_ihj(long n, long M);

/// Named collections for the CLI: "section3" (everything) and "quick".
std::vector<IdentityReport> run_suite(const std::string& suite);

}  // namespace dhtlab
