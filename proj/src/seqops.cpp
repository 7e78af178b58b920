#include "dhtlab/seqops.hpp"

#include "json.hpp"
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dhtlab {

namespace {

long next_pow2(long n) {
    long m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace

Seq Seq::delta(long at, double weight) {
    Eigen::VectorXd v(1);
    v[0] = weight;
    return {at, v};
}

Seq Seq::zeros(long lo, long hi) { return {lo, Eigen::VectorXd::Zero(std::max(0L, hi - lo + 1))}; }

Seq Seq::trimmed() const {
    long lo = 0, hi = size() - 1;
    while (lo <= hi && values[lo] == 0.0) ++lo;
    while (hi >= lo && values[hi] == 0.0) --hi;
    if (lo > hi) return {0, Eigen::VectorXd()};
    return {offset + lo, values.segment(lo, hi - lo + 1)};
}

Eigen::VectorXd Seq::on(long lo, long hi) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(std::max(0L, hi - lo + 1));
    const long a = std::max(lo, first()), b = std::min(hi, last());
    if (a <= b) out.segment(a - lo, b - a + 1) = values.segment(a - offset, b - a + 1);
    return out;
}

Seq operator+(const Seq& a, const Seq& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const long lo = std::min(a.first(), b.first()), hi = std::max(a.last(), b.last());
    return {lo, a.on(lo, hi) + b.on(lo, hi)};
}

Seq operator*(double c, const Seq& a) { return {a.offset, c * a.values}; }

double lp_norm(const Eigen::VectorXd& a, double p) {
    if (a.size() == 0) return 0.0;
    if (std::isinf(p)) return a.cwiseAbs().maxCoeff();
    if (p == 1.0) return a.cwiseAbs().sum();
    if (p == 2.0) return a.norm();
    // Scale by the max entry so |a|^p neither overflows nor underflows.
    const double m = a.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : a) s += std::pow(std::abs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double lp_norm(const Seq& a, double p) { return lp_norm(a.values, p); }

double inner(const Seq& a, const Seq& b) {
    const long lo = std::max(a.first(), b.first()), hi = std::min(a.last(), b.last());
    double s = 0.0;
    for (long n = lo; n <= hi; ++n) s += a[n] * b[n];
    return s;
}

Eigen::VectorXd linear_convolve_direct(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const long nu = u.size(), nv = v.size();
    if (nu == 0 || nv == 0) return {};
    Eigen::VectorXd out(nu + nv - 1);
    for (long s = 0; s < nu + nv - 1; ++s) {
        double acc = 0.0;
        const long i0 = std::max(0L, s - nv + 1), i1 = std::min(nu - 1, s);
        for (long i = i0; i <= i1; ++i) acc += u[i] * v[s - i];
        out[s] = acc;
    }
    return out;
}

Eigen::VectorXd linear_convolve_fft(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const long nu = u.size(), nv = v.size();
    if (nu == 0 || nv == 0) return {};
    const long len = nu + nv - 1;
    const long size = next_pow2(len);
    Eigen::FFT<double> fft;
    Eigen::VectorXd pu = Eigen::VectorXd::Zero(size), pv = Eigen::VectorXd::Zero(size);
    pu.head(nu) = u;
    pv.head(nv) = v;
    Eigen::VectorXcd fu, fv;
    fft.fwd(fu, pu);
    fft.fwd(fv, pv);
    Eigen::VectorXcd prod = fu.cwiseProduct(fv);
    Eigen::VectorXd out;
    fft.inv(out, prod);
    return out.head(len);
}

Eigen::VectorXd linear_convolve(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (std::min(u.size(), v.size()) <= kFastConvolutionThreshold) return linear_convolve_direct(u, v);
    return linear_convolve_fft(u, v);
}

Seq convolve(const Kernel& k, const Seq& a, long lo, long hi, ConvPath path) {
    if (hi < lo) return {lo, Eigen::VectorXd()};
    if (a.empty()) return Seq::zeros(lo, hi);
    // out_m = sum_j a_j k(m - j); the kernel is needed on [lo - last, hi - first].
    const long kmin = lo - a.last();
    const Eigen::VectorXd kw = k.window(kmin, hi - a.first());
    if (path == ConvPath::direct || (path == ConvPath::automatic && a.size() <= kFastConvolutionThreshold)) {
        Eigen::VectorXd out(hi - lo + 1);
        for (long n = lo; n <= hi; ++n) {
            double acc = 0.0;
            // ascending kernel index m
            for (long m = n - a.last(); m <= n - a.first(); ++m) acc += kw[m - kmin] * a[n - m];
            out[n - lo] = acc;
        }
        return {lo, out};
    }
    const Eigen::VectorXd full = linear_convolve_fft(kw, a.values);
    return {lo, full.segment(a.size() - 1, hi - lo + 1)};
}

Seq convolve(const Kernel& k, const Seq& a, long lo, long hi) {
    return convolve(k, a, lo, hi, ConvPath::automatic);
}

Seq convolve(const Kernel& k, const Seq& a, long out_radius) {
    return convolve(k, a, -out_radius, out_radius, ConvPath::automatic);
}

ConvOperator::ConvOperator(Kernel kernel, long radius) : kernel_(std::move(kernel)), radius_(radius) {
    if (radius < 0) throw std::invalid_argument("ConvOperator: negative radius");
    window_ = kernel_.window(-2 * radius_, 2 * radius_);
    if (dim() > kFastConvolutionThreshold) {
        // Circular convolution of length >= 6N+1 contains the needed linear part.
        fft_size_ = next_pow2(6 * radius_ + 1);
        Eigen::FFT<double> fft;
        Eigen::VectorXd pad = Eigen::VectorXd::Zero(fft_size_);
        pad.head(window_.size()) = window_;
        fft.fwd(spectrum_, pad);
        pad.setZero();
        pad.head(window_.size()) = window_.reverse();
        fft.fwd(adjoint_spectrum_, pad);
    }
}

Eigen::VectorXd ConvOperator::apply_impl(const Eigen::VectorXd& x, bool adjoint) const {
    if (x.size() != dim()) throw std::invalid_argument("ConvOperator: dimension mismatch");
    const long d = dim(), N = radius_;
    if (fft_size_ == 0) {
        // y_i = sum_j k(i - j) x_j, kernel index i - j + 2N into window_.
        Eigen::VectorXd y(d);
        for (long i = 0; i < d; ++i) {
            double acc = 0.0;
            for (long j = d - 1; j >= 0; --j) {
                const long m = adjoint ? (j - i) : (i - j);
                acc += window_[m + 2 * N] * x[j];
            }
            y[i] = acc;
        }
        return y;
    }
    Eigen::FFT<double> fft;
    Eigen::VectorXd pad = Eigen::VectorXd::Zero(fft_size_);
    pad.head(d) = x;
    Eigen::VectorXcd fx;
    fft.fwd(fx, pad);
    Eigen::VectorXcd prod = fx.cwiseProduct(adjoint ? adjoint_spectrum_ : spectrum_);
    Eigen::VectorXd full;
    fft.inv(full, prod);
    // Linear index s = (kernel offset) + j; output i sits at s = i + 2N.
    return full.segment(2 * N, d);
}

Eigen::VectorXd ConvOperator::apply(const Eigen::VectorXd& x) const { return apply_impl(x, false); }

Eigen::VectorXd ConvOperator::apply_adjoint(const Eigen::VectorXd& x) const { return apply_impl(x, true); }

Seq ConvOperator::apply(const Seq& a) const {
    return {-radius_, apply(a.on(-radius_, radius_))};
}

Eigen::MatrixXd ConvOperator::matrix() const {
    const long d = dim();
    Eigen::MatrixXd m(d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) m(i, j) = window_[i - j + 2 * radius_];
    return m;
}

void write_csv(std::ostream& os, const Seq& a) {
    os << "n,value\n" << std::setprecision(17);
    for (long i = 0; i < a.size(); ++i) os << a.offset + i << ',' << a.values[i] << '\n';
}

Seq read_csv(std::istream& is) {
    std::string line;
    std::vector<std::pair<long, double>> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("read_csv: malformed row '" + line + "'");
        rows.emplace_back(std::stol(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    if (rows.empty()) return {};
    std::sort(rows.begin(), rows.end());
    Seq out = Seq::zeros(rows.front().first, rows.back().first);
    for (auto [n, v] : rows) out.values[n - out.offset] = v;
    return out;
}

std::string to_json(const Seq& a) {
    nlohmann::json j;
    j["offset"] = a.offset;
    j["values"] = std::vector<double>(a.values.begin(), a.values.end());
    return j.dump();
}

Seq from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto v = j.at("values").get<std::vector<double>>();
    return {j.at("offset").get<long>(), Eigen::Map<const Eigen::VectorXd>(v.data(), long(v.size()))};
}

}  // namespace dhtlab
