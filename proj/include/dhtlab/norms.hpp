#pragma once

#include "dhtlab/numerics.hpp"
#include "dhtlab/seqops.hpp"

#include <cstdint>
#include <vector>

namespace dhtlab {

/// Lower bound ||T_N c||_p / ||c||_p for the truncated operator T_N, with the
/// certificate c (||c||_p = 1) that realizes it.
struct NormEstimate {
    double value = 0;
    Seq certificate;
    double p = 2;
    long window_radius = 0;
    int iterations = 0;
    double residual = 0;  ///< last increment of the value
    bool converged = false;
    std::vector<double> history;  ///< value after each iteration of the winning start
};

struct PowerOptions {
    int max_iter = 500;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    /// Relative amplitude of the seeded perturbation of the starting vectors.
    double perturbation = 1e-2;
};

/// ||T_N a||_p / ||a||_p; `a` must be nonzero and supported in [-N, N].
double test_vector_bound(const ConvOperator& op, const Seq& a, const Exponent& e);

/// Psi_r(x) = |x|^{r-1} sign x, entrywise.
Eigen::VectorXd duality_map(const Eigen::VectorXd& x, double r);

/// One power-method run a <- Psi_q(T^T Psi_p(T a)) / ||.||_p from a given start.
/// Values are nondecreasing by Hoelder's inequality.
NormEstimate power_iteration(const ConvOperator& op, const Exponent& e, Eigen::VectorXd start,
                             int max_iter, double tol);

/// Seeded starting vector sign(n + 1/2) |n + 1/2|^{-1/r} (1 + eps u_n) on [-N, N];
/// the perturbation u depends only on (seed, N), not on r.
Eigen::VectorXd seed_vector(long radius, double r, std::uint64_t seed, double perturbation);

/// Best of two seeded runs: from s_p, and from Psi_q(T^T s_q) (one dual half-step
/// away from the start the transpose problem uses). The same two starts for
/// (q, T^T) interleave with these, so primal and dual estimates bracket each other.
NormEstimate estimate_norm(const ConvOperator& op, const Exponent& e, const PowerOptions& opts = {});
/// Additionally tries `warm` (zero-padded to the window) as a third start.
NormEstimate estimate_norm(const ConvOperator& op, const Exponent& e, const PowerOptions& opts,
                           const Seq& warm);

struct SweepEntry {
    NormEstimate estimate;
    bool non_monotone = false;  ///< value fell below the previous radius by more than 0
};
/// One estimate per radius (ascending). Each radius is also warm-started from the
/// previous certificate, which makes the sequence nondecreasing.
std::vector<SweepEntry> norm_sweep(const Kernel& k, const Exponent& e, const std::vector<long>& radii,
                                   const PowerOptions& opts = {});

}  // namespace dhtlab
