#include "dhtlab/kernels.hpp"

#include "dhtlab/numerics.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dhtlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr long kBlock = 256;
}  // namespace

double hilbert_kernel(long n) { return n == 0 ? 0.0 : 1.0 / (kPi * double(n)); }

double rt_kernel(long n) { return 1.0 / (kPi * (double(n) + 0.5)); }

double kak_kernel(long n) { return (n % 2 == 0) ? 0.0 : 2.0 / (kPi * double(n)); }

double adp_kernel(long n) {
    const double x = double(n);
    return x / (kPi * (x * x - 0.25));
}

double j_correction_integral(long n) {
    const double c = kPi * kPi * double(n) * double(n);
    // 1/sinh^2 y written as 4 e^{-2y} / (1 - e^{-2y})^2 to stay finite for all y.
    auto integrand = [c](double y) {
        if (y < 1e-4) return 2.0 * y / c;  // 2y^3/(c y^2) + O(y^3)
        const double e = std::exp(-2.0 * y);
        const double d = -std::expm1(-2.0 * y);
        return 2.0 * y * y * y / (y * y + c) * 4.0 * e / (d * d);
    };
    QuadOptions opts;
    opts.rel_tol = 1e-13;
    opts.abs_tol = 1e-300;
    return integrate(integrand, 0.0, kInf, opts).value;
}

double f_kernel(long n) {
    if (n == 0) return 0.0;
    if (n < 0) return -f_kernel(-n);
    return j_correction_integral(n) / (kPi * double(n));
}

double j_kernel(long n) { return hilbert_kernel(n) + f_kernel(n); }

double e_kernel(long n) { return e_kernel_with_error(n).value; }

struct Kernel::Cache {
    std::vector<std::once_flag> flags;
    std::vector<double> values;  // index n + radius
};

Kernel::Kernel(std::string name, Generator generator, Parity parity, double tail_exponent,
               double tail_constant, long cache_radius)
    : name_(std::move(name)),
      generator_(std::move(generator)),
      parity_(parity),
      tail_exponent_(tail_exponent),
      tail_constant_(tail_constant),
      cache_radius_(std::max(0L, cache_radius)),
      cache_(std::make_shared<Cache>()) {
    const long size = 2 * cache_radius_ + 1;
    cache_->values.assign(size, 0.0);
    cache_->flags = std::vector<std::once_flag>((size + kBlock - 1) / kBlock);
}

double Kernel::operator()(long n) const {
    if (n < -cache_radius_ || n > cache_radius_) return generator_(n);
    const long idx = n + cache_radius_;
    const long block = idx / kBlock;
    std::call_once(cache_->flags[block], [&] {
        const long lo = block * kBlock;
        const long hi = std::min<long>(lo + kBlock, long(cache_->values.size()));
        for (long i = lo; i < hi; ++i) cache_->values[i] = generator_(i - cache_radius_);
    });
    return cache_->values[idx];
}

Eigen::VectorXd Kernel::window(long lo, long hi) const {
    Eigen::VectorXd out(std::max(0L, hi - lo + 1));
    for (long n = lo; n <= hi; ++n) out[n - lo] = (*this)(n);
    return out;
}

double Kernel::tail_bound(long r) const {
    if (r < 1) r = 1;
    return tail_constant_ * std::pow(double(r), -tail_exponent_);
}

Kernel hilbert() { return {"H", hilbert_kernel, Parity::odd, 1.0, 1.0 / kPi}; }

Kernel riesz_titchmarsh() { return {"RT", rt_kernel, Parity::none, 1.0, 2.0 / kPi}; }

Kernel kak() { return {"K", kak_kernel, Parity::odd, 1.0, 2.0 / kPi}; }

Kernel adp() { return {"ADP", adp_kernel, Parity::odd, 1.0, 4.0 / (3.0 * kPi)}; }

Kernel j_operator() {
    // n J_n decreases in n, so |J_n| <= J_1 / |n|.
    return {"J", j_kernel, Parity::odd, 1.0, j_kernel(1)};
}

Kernel f_operator() {
    // n^3 F_n increases to (1/pi^3) int 2y^3/sinh^2 y dy = 3 zeta(3) / pi^3.
    const double c = 3.0 * 1.2020569031595942854 / (kPi * kPi * kPi);
    return {"F", f_kernel, Parity::odd, 3.0, c};
}

Kernel e_operator() { return {"E", e_kernel, Parity::even, 2.0, kE2}; }

Kernel identity() {
    return {"I", [](long n) { return n == 0 ? 1.0 : 0.0; }, Parity::even, 1e9, 0.0, 0};
}

Kernel kernel_by_name(const std::string& name) {
    if (name == "H") return hilbert();
    if (name == "RT") return riesz_titchmarsh();
    if (name == "K") return kak();
    if (name == "ADP") return adp();
    if (name == "J") return j_operator();
    if (name == "F") return f_operator();
    if (name == "E") return e_operator();
    if (name == "I") return identity();
    throw std::invalid_argument("unknown kernel '" + name + "' (expected H, RT, K, ADP, J, F, E, I)");
}

Kernel scaled(const Kernel& k, double c) {
    return {std::to_string(c) + "*" + k.name(), [k, c](long n) { return c * k(n); }, k.parity(),
            k.tail_exponent(), std::abs(c) * k.tail_constant(), k.cache_radius()};
}

Kernel adjoint_kernel(const Kernel& k) {
    return {"adj(" + k.name() + ")", [k](long n) { return k(-n); }, k.parity(), k.tail_exponent(),
            k.tail_constant(), k.cache_radius()};
}

}  // namespace dhtlab
