#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>

namespace dhtlab {

// Scalar kernel entries. All are pure functions of n.

double hilbert_kernel(long n);  ///< 1/(pi n), 0 at n = 0
double rt_kernel(long n);       ///< 1/(pi (n + 1/2))
double kak_kernel(long n);      ///< 2/(pi n) on odd n, 0 on even n
double adp_kernel(long n);      ///< n / (pi (n^2 - 1/4))
double j_kernel(long n);        ///< hilbert_kernel(n) + f_kernel(n)
double f_kernel(long n);
double e_kernel(long n);

/// The y-integral  int_0^inf 2 y^3 / ((y^2 + pi^2 n^2) sinh^2 y) dy  shared by
/// the J and F kernels. n != 0.
double j_correction_integral(long n);

/// Tabulated nested quadrature for the E kernel. Evaluates
///   E_n = int_0^inf 2y/sinh^3(y) (delta_{n0} sinh y - C_n(y)) dy,
///   C_n(y) = int_0^y t sinh t/(t^2 + pi^2 n^2) dt   (sinh t / t for n = 0),
/// on fixed Gauss-Legendre panels whose inner antiderivatives are reused across
/// the outer nodes. Two panel orders are run and their gap is the error estimate.
struct EKernelValue {
    double value;
    double abs_error_estimate;
};
EKernelValue e_kernel_with_error(long n);

/// Outer integrand of E_n at y, with the small-y series branch. Exposed for the
/// naive nested-quadrature cross-check.
double e_outer_integrand(long n, double y, double inner);
/// Inner integrand of C_n at t (n = 0 uses cosh t - sinh t / t, so that
/// the n = 0 bracket  sinh y - Shi(y)  is integrated without cancellation).
double e_inner_integrand(long n, double t);

/// Constant in |E_n| <= kE2 / n^2:  int 2y (y cosh y - sinh y)/(pi^2 sinh^3 y) dy.
/// The integral evaluates to 1, so the constant is 1/pi^2.
inline constexpr double kE2 = 0.101321183642337771443879463209727;

enum class Parity { odd, even, none };

/// A doubly infinite real sequence given by a closed-form generator, with a
/// lazily filled cache on |n| <= cache_radius and tail-decay metadata
/// (|k_n| <= tail_constant * |n|^-tail_exponent for n != 0).
class Kernel {
public:
    using Generator = std::function<double(long)>;

    Kernel(std::string name, Generator generator, Parity parity, double tail_exponent,
           double tail_constant, long cache_radius = 4096);

    double operator()(long n) const;
    /// Entries k(lo), ..., k(hi).
    Eigen::VectorXd window(long lo, long hi) const;

    const std::string& name() const noexcept { return name_; }
    Parity parity() const noexcept { return parity_; }
    double tail_exponent() const noexcept { return tail_exponent_; }
    double tail_constant() const noexcept { return tail_constant_; }
    long cache_radius() const noexcept { return cache_radius_; }
    /// sup_{|m| >= r} |k_m| from the tail metadata (r >= 1).
    double tail_bound(long r) const;
    /// Raw generator, bypassing the cache.
    double generate(long n) const { return generator_(n); }

private:
    struct Cache;
    std::string name_;
    Generator generator_;
    Parity parity_;
    double tail_exponent_;
    double tail_constant_;
    long cache_radius_;
    std::shared_ptr<Cache> cache_;
};

Kernel hilbert();
Kernel riesz_titchmarsh();
Kernel kak();
Kernel adp();
Kernel j_operator();
Kernel f_operator();
Kernel e_operator();
/// delta_0: the identity convolution.
Kernel identity();
/// Kernel by CLI name: H, RT, K, ADP, J, F, E, I.
Kernel kernel_by_name(const std::string& name);

Kernel scaled(const Kernel& k, double c);
/// n -> k(-n): the kernel of the transpose operator.
Kernel adjoint_kernel(const Kernel& k);

}  // namespace dhtlab
