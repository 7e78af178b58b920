#pragma once

#include "dhtlab/kernels.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <limits>
#include <string>

namespace dhtlab {

/// Finitely supported sequence on Z: values[i] is the entry at index offset + i.
struct Seq {
    long offset = 0;
    Eigen::VectorXd values;

    Seq() = default;
    Seq(long offset_, Eigen::VectorXd values_) : offset(offset_), values(std::move(values_)) {}

    static Seq delta(long at, double weight = 1.0);
    /// Zero sequence stored on [lo, hi].
    static Seq zeros(long lo, long hi);

    long size() const noexcept { return long(values.size()); }
    long first() const noexcept { return offset; }
    long last() const noexcept { return offset + size() - 1; }
    bool empty() const noexcept { return values.size() == 0; }
    /// Entry at n (zero outside the stored range).
    double operator[](long n) const {
        return (n < first() || n > last()) ? 0.0 : values[n - offset];
    }
    Seq shifted(long s) const { return {offset + s, values}; }
    /// Copy with leading and trailing zeros removed.
    Seq trimmed() const;
    /// Entries on [lo, hi] as a dense vector.
    Eigen::VectorXd on(long lo, long hi) const;
};

Seq operator+(const Seq& a, const Seq& b);
Seq operator*(double c, const Seq& a);

/// (sum |a_n|^p)^{1/p}; p = 1 and p = infinity are accepted.
double lp_norm(const Seq& a, double p);
double lp_norm(const Eigen::VectorXd& a, double p);
inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

double inner(const Seq& a, const Seq& b);

/// Supports above this length use the FFT path.
inline constexpr long kFastConvolutionThreshold = 512;

/// Full linear convolution of two dense vectors (length |u| + |v| - 1).
Eigen::VectorXd linear_convolve(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
Eigen::VectorXd linear_convolve_direct(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
Eigen::VectorXd linear_convolve_fft(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// (k * a)_n = sum_m k_m a_{n-m} on [lo, hi].
Seq convolve(const Kernel& k, const Seq& a, long lo, long hi);
/// Same, on [-out_radius, out_radius].
Seq convolve(const Kernel& k, const Seq& a, long out_radius);
enum class ConvPath { automatic, direct, fast };
Seq convolve(const Kernel& k, const Seq& a, long lo, long hi, ConvPath path);

/// Truncated operator P_N T P_N acting on coefficient vectors indexed -N..N.
/// Reads kernel entries only on [-2N, 2N]; transforms of the kernel window are
/// precomputed so repeated application costs two FFTs.
class ConvOperator {
public:
    ConvOperator(Kernel kernel, long radius);

    const Kernel& kernel() const noexcept { return kernel_; }
    long radius() const noexcept { return radius_; }
    long dim() const noexcept { return 2 * radius_ + 1; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    /// Transpose: kernel n -> k(-n).
    Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& x) const;
    Seq apply(const Seq& a) const;
    /// Dense (2N+1) x (2N+1) Toeplitz matrix, entry (i, j) = k(i - j).
    Eigen::MatrixXd matrix() const;

private:
    Eigen::VectorXd apply_impl(const Eigen::VectorXd& x, bool adjoint) const;

    Kernel kernel_;
    long radius_;
    Eigen::VectorXd window_;  // k(-2N..2N)
    Eigen::VectorXcd spectrum_, adjoint_spectrum_;
    long fft_size_ = 0;
};

// CSV rows "n,value" (with an "n,value" header) and JSON {"offset": .., "values": [..]}.
void write_csv(std::ostream& os, const Seq& a);
Seq read_csv(std::istream& is);
std::string to_json(const Seq& a);
Seq from_json(const std::string& text);

}  // namespace dhtlab
