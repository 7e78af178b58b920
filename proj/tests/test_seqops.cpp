#include "doctest.h"

#include "dhtlab/seqops.hpp"
#include "support/oracles.hpp"

#include <random>
#include <sstream>

using namespace dhtlab;

namespace {

Seq random_seq(long lo, long hi, unsigned seed) {
    std::mt19937 g(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Seq s = Seq::zeros(lo, hi);
    for (long i = 0; i < s.size(); ++i) s.values[i] = u(g);
    return s;
}

}  // namespace

TEST_CASE("Seq basics") {
    const Seq d = Seq::delta(3, 2.0);
    CHECK(d.first() == 3);
    CHECK(d[3] == 2.0);
    CHECK(d[4] == 0.0);
    const Seq s = d + Seq::delta(-2);
    CHECK(s.first() == -2);
    CHECK(s.last() == 3);
    CHECK(s[-2] == 1.0);
    CHECK((-1.5 * s)[3] == -3.0);
    Seq z = Seq::zeros(-5, 5);
    z.values[7] = 1.0;
    const Seq t = z.trimmed();
    CHECK(t.first() == 2);
    CHECK(t.size() == 1);
    CHECK(Seq::zeros(0, 3).trimmed().empty());
    CHECK(s.on(-3, 4).size() == 8);
    CHECK(s.shifted(10)[8] == 1.0);
}

TEST_CASE("norms and inner product") {
    const Seq s = Seq::delta(0, 3.0) + Seq::delta(1, -4.0);
    CHECK(lp_norm(s, 2.0) == doctest::Approx(5.0));
    CHECK(lp_norm(s, 1.0) == 7.0);
    CHECK(lp_norm(s, kInfNorm) == 4.0);
    CHECK(inner(s, Seq::delta(1)) == -4.0);
}

TEST_CASE("convolution paths agree with a naive double loop") {
    const Seq a = random_seq(-40, 60, 1);
    const long lo = -300, hi = 250;
    const Seq direct = convolve(hilbert(), a, lo, hi, ConvPath::direct);
    const Seq fast = convolve(hilbert(), a, lo, hi, ConvPath::fast);
    double worst = 0.0;
    for (long n = lo; n <= hi; ++n) {
        double ref = 0.0;
        for (long m = a.first(); m <= a.last(); ++m) ref += oracle::hilbert(n - m) * a[m];
        worst = std::max({worst, std::abs(direct[n] - ref), std::abs(fast[n] - ref)});
    }
    CHECK(worst < 1e-13);

    const Eigen::VectorXd u = Eigen::VectorXd::Random(700), v = Eigen::VectorXd::Random(900);
    CHECK((linear_convolve_direct(u, v) - linear_convolve_fft(u, v)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("ConvOperator against the dense Toeplitz matrix") {
    for (long N : {20L, 400L}) {  // direct and FFT paths
        const ConvOperator op(riesz_titchmarsh(), N);
        const Eigen::MatrixXd T = oracle::toeplitz(rt_kernel, N);
        CHECK((op.matrix() - T).cwiseAbs().maxCoeff() < 1e-15);
        const Eigen::VectorXd x = Eigen::VectorXd::Random(2 * N + 1);
        CHECK((op.apply(x) - T * x).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((op.apply_adjoint(x) - T.transpose() * x).cwiseAbs().maxCoeff() < 1e-12);
    }
    const ConvOperator op(hilbert(), 5);
    CHECK_THROWS_AS(op.apply(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("CSV and JSON round trips") {
    const Seq a = random_seq(-3, 4, 2);
    std::stringstream ss;
    write_csv(ss, a);
    CHECK(ss.str().rfind("n,value\n", 0) == 0);
    const Seq b = read_csv(ss);
    CHECK(b.first() == a.first());
    CHECK((b.values - a.values).cwiseAbs().maxCoeff() == 0.0);
    const Seq c = from_json(to_json(a));
    CHECK(c.first() == -3);
    CHECK((c.values - a.values).cwiseAbs().maxCoeff() == 0.0);
}
