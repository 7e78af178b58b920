#pragma once

#include "dhtlab/identities.hpp"
#include "dhtlab/seqops.hpp"

#include <cstdint>
#include <vector>

namespace dhtlab {

/// Brownian motion conditioned (Doob transform by p_n) to exit the half-plane at
/// (2 pi n, 0).
///
/// Time stepping is scale-adaptive: the step at height y is dt * y^2, so dt is a
/// dimensionless resolution (dt <= 1/4 keeps the step below kill_eps^2/4 in the
/// absorption layer). Paths are absorbed within distance kill_eps of the target.
struct SdeConfig {
    long n = 1;
    PlanePoint start{0.0, 50.0};
    double dt = 5e-3;
    double kill_eps = 1e-2;
    double max_time = 1e8;
    std::uint64_t seed = 20240601;
    /// Pair every path with its mirror image about x = 2 pi n (x-increments negated).
    bool antithetic = false;
};
void validate(const SdeConfig& cfg);

/// grad p_n / p_n = (-2(x - 2 pi n)/r^2, 1/y - 2y/r^2), r the distance to (2 pi n, 0).
Eigen::Vector2d conditioned_drift(long n, PlanePoint pt);

/// H grad u . (grad p_n/p_n - grad h/h) with u = sum_m a_m p_m / h.
double path_integrand(const Seq& a, long n, PlanePoint pt);

struct OccupationGrid {
    double x_lo = -2.0, x_hi = 8.0;
    double y_lo = 0.5, y_hi = 3.5;
    int nx = 10, ny = 10;
    int cells() const { return nx * ny; }
    /// Cell index of a point, or -1 outside.
    int cell_of(PlanePoint pt) const;
};

struct PathSample {
    double functional = 0;
    double time = 0;
    long steps = 0;
    bool absorbed = false;  ///< false: stopped at max_time
};

/// One path with its derived seed (cfg.seed, index). `mirror` negates the
/// x-increments. If `occupation` is given (sized grid.cells()), time spent per
/// cell is added to it.
PathSample simulate_path(const SdeConfig& cfg, const Seq& a, std::uint64_t index, bool mirror = false,
                         const OccupationGrid* grid = nullptr, double* occupation = nullptr);

struct PathStats {
    double mean = 0;
    double std_error = 0;
    long paths = 0;
    double killed_fraction = 0;  ///< fraction absorbed at the target (rest hit max_time)
    double mean_steps = 0;
};

/// Mean of the path functional over `paths` samples (antithetic pairs count as one
/// sample each, averaged). Deterministic for any thread count.
PathStats estimate_T(const Seq& a, const SdeConfig& cfg, long paths, unsigned threads = 0);

struct OccupationReport {
    OccupationGrid grid;
    std::vector<double> observed;   ///< mean time per cell
    std::vector<double> std_error;
    std::vector<double> expected;   ///< int_C p_n G / p_n(x0, y0)
    double chi2 = 0;
    int dof = 0;
    double max_abs_z = 0;
    long paths = 0;
    bool pass = false;  ///< chi2 <= dof + 3 sqrt(2 dof)
};

/// Expected time in a cell: the quadrature of p_n G / p_n(x0, y0) over it.
double expected_occupation(const SdeConfig& cfg, double x_lo, double x_hi, double y_lo, double y_hi);

OccupationReport occupation_check(const SdeConfig& cfg, const OccupationGrid& grid, long paths,
                                  unsigned threads = 0);

}  // namespace dhtlab
