#include "dhtlab/hprocess_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace dhtlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kBlock = 256;

// Runs body(block) for every block of `total` items on `threads` workers; blocks are
// handed out dynamically, results are reduced by the caller in block order.
template <typename Body>
void for_blocks(long total, unsigned threads, Body&& body) {
    const long blocks = (total + kBlock - 1) / kBlock;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<long>(threads, std::max<long>(blocks, 1)));
    std::atomic<long> next{0};
    auto worker = [&] {
        for (long b = next++; b < blocks; b = next++) body(b * kBlock, std::min(total, (b + 1) * kBlock));
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace

void validate(const SdeConfig& cfg) {
    if (!(cfg.start.y > 0.0)) throw std::invalid_argument("SdeConfig: start must have y0 > 0");
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.25)) throw std::invalid_argument("SdeConfig: need 0 < dt <= 1/4");
    if (!(cfg.kill_eps > 0.0)) throw std::invalid_argument("SdeConfig: kill_eps must be positive");
    if (!(cfg.max_time > 0.0)) throw std::invalid_argument("SdeConfig: max_time must be positive");
    if (std::hypot(cfg.start.x - 2.0 * kPi * double(cfg.n), cfg.start.y) <= cfg.kill_eps)
        throw std::invalid_argument("SdeConfig: start inside the absorption disc");
}

Eigen::Vector2d conditioned_drift(long n, PlanePoint pt) {
    const double X = pt.x - 2.0 * kPi * double(n), y = pt.y;
    const double r2 = X * X + y * y;
    return {-2.0 * X / r2, 1.0 / y - 2.0 * y / r2};
}

double path_integrand(const Seq& a, long n, PlanePoint pt) {
    const double h = h_func(pt);
    const Eigen::Vector2d gh = grad_h(pt);
    Eigen::Vector2d gu = Eigen::Vector2d::Zero();
    for (long i = 0; i < a.size(); ++i) {
        const double am = a.values[i];
        if (am == 0.0) continue;
        const long m = a.offset + i;
        gu += am * (grad_p(m, pt) / h - poisson_p(m, pt) * gh / (h * h));
    }
    return rot(gu).dot(conditioned_drift(n, pt) - gh / h);
}

int OccupationGrid::cell_of(PlanePoint pt) const {
    if (pt.x < x_lo || pt.x >= x_hi || pt.y < y_lo || pt.y >= y_hi) return -1;
    const int i = std::min(nx - 1, int((pt.x - x_lo) / (x_hi - x_lo) * nx));
    const int j = std::min(ny - 1, int((pt.y - y_lo) / (y_hi - y_lo) * ny));
    return j * nx + i;
}

namespace {

// Everything one Euler step needs at a point, sharing the transcendental calls:
// drift grad p_n / p_n and the path integrand.
struct StepFields {
    Eigen::Vector2d drift;
    double integrand;
};

StepFields step_fields(const Seq& a, long n, PlanePoint pt) {
    const double y = pt.y;
    const double ey = std::exp(-y), em1 = std::expm1(-y);
    const double s2 = std::sin(0.5 * pt.x), c2 = std::cos(0.5 * pt.x);
    const double sx = 2.0 * s2 * c2, cx = 1.0 - 2.0 * s2 * s2;
    const double num = -em1 * (2.0 + em1);  // 1 - e^{-2y}
    const double den = em1 * em1 + 4.0 * ey * s2 * s2;
    const double h = num / (2.0 * kPi * den);
    const double d2 = den * den;
    const Eigen::Vector2d gh(-2.0 * ey * num * sx / (2.0 * kPi * d2),
                             (4.0 * ey * ey - 2.0 * ey * (1.0 + ey * ey) * cx) / (2.0 * kPi * d2));
    Eigen::Vector2d gu = Eigen::Vector2d::Zero();
    for (long i = 0; i < a.size(); ++i) {
        const double am = a.values[i];
        if (am == 0.0) continue;
        const double X = pt.x - 2.0 * kPi * double(a.offset + i);
        const double r2 = X * X + y * y;
        const double p = y / (kPi * r2);
        const Eigen::Vector2d gp(-2.0 * X * y / (kPi * r2 * r2), (X * X - y * y) / (kPi * r2 * r2));
        gu += am * (gp / h - p * gh / (h * h));
    }
    StepFields f;
    f.drift = conditioned_drift(n, pt);
    f.integrand = rot(gu).dot(f.drift - gh / h);
    return f;
}

}  // namespace

PathSample simulate_path(const SdeConfig& cfg, const Seq& a, std::uint64_t index, bool mirror,
                         const OccupationGrid* grid, double* occupation) {
    std::seed_seq ss{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(index),
                     std::uint32_t(index >> 32)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> normal;
    const double target = 2.0 * kPi * double(cfg.n);
    PathSample s;
    PlanePoint z = cfg.start;
    // Drift with taming quadratic in the relative displacement h|b|/y, so it
    // perturbs the scheme only at second order.
    auto tamed = [&](const Eigen::Vector2d& b, double h, double y) {
        const double t = h * b.norm() / y;
        return Eigen::Vector2d(b / (1.0 + t * t));
    };
    StepFields f = step_fields(a, cfg.n, z);
    while (true) {
        if (std::hypot(z.x - target, z.y) < cfg.kill_eps) {
            s.absorbed = true;
            break;
        }
        if (s.time >= cfg.max_time) break;
        // Predictor-corrector (Heun) step, weak order 2 for additive noise; the
        // time integrals use the trapezoidal rule.
        const double h = cfg.dt * z.y * z.y;
        const double sh = std::sqrt(h);
        double dx = normal(rng) * sh;
        const double dy = normal(rng) * sh;
        if (mirror) dx = -dx;
        const Eigen::Vector2d b = tamed(f.drift, h, z.y);
        PlanePoint next{z.x + b.x() * h + dx, z.y + b.y() * h + dy};
        if (next.y > 0.0) {
            const Eigen::Vector2d bp = tamed(conditioned_drift(cfg.n, next), h, next.y);
            const PlanePoint corrected{z.x + 0.5 * (b.x() + bp.x()) * h + dx, z.y + 0.5 * (b.y() + bp.y()) * h + dy};
            if (corrected.y > 0.0) next = corrected;
        }
        if (next.y <= 0.0) next.y = -next.y;  // not reached in practice: |dy| would need ~ y / sqrt(dt)
        const StepFields fn = step_fields(a, cfg.n, next);
        s.functional += 0.5 * (f.integrand + fn.integrand) * h;
        if (occupation) {
            const int c0 = grid->cell_of(z), c1 = grid->cell_of(next);
            if (c0 >= 0) occupation[c0] += 0.5 * h;
            if (c1 >= 0) occupation[c1] += 0.5 * h;
        }
        z = next;
        f = fn;
        s.time += h;
        ++s.steps;
    }
    return s;
}

PathStats estimate_T(const Seq& a, const SdeConfig& cfg, long paths, unsigned threads) {
    validate(cfg);
    if (paths < 2) throw std::invalid_argument("estimate_T: need at least 2 paths");
    std::vector<double> value(paths);
    std::vector<long> steps(paths), absorbed(paths);
    for_blocks(paths, threads, [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            const auto s = simulate_path(cfg, a, std::uint64_t(i));
            value[i] = s.functional;
            steps[i] = s.steps;
            absorbed[i] = s.absorbed;
            if (cfg.antithetic) {
                const auto m = simulate_path(cfg, a, std::uint64_t(i), true);
                value[i] = 0.5 * (value[i] + m.functional);
                steps[i] += m.steps;
                absorbed[i] += m.absorbed;
            }
        }
    });
    PathStats st;
    st.paths = paths;
    double sum = 0.0, nabs = 0.0, nsteps = 0.0;
    for (long i = 0; i < paths; ++i) {
        sum += value[i];
        nabs += double(absorbed[i]);
        nsteps += double(steps[i]);
    }
    st.mean = sum / double(paths);
    double ss = 0.0;
    for (double v : value) ss += (v - st.mean) * (v - st.mean);
    st.std_error = std::sqrt(ss / double(paths - 1) / double(paths));
    const double per_sample = cfg.antithetic ? 2.0 : 1.0;
    st.killed_fraction = nabs / (per_sample * double(paths));
    st.mean_steps = nsteps / (per_sample * double(paths));
    return st;
}

double expected_occupation(const SdeConfig& cfg, double x_lo, double x_hi, double y_lo, double y_hi) {
    const double p0 = poisson_p(cfg.n, cfg.start);
    QuadOptions opts;
    opts.rel_tol = 1e-9;
    opts.abs_tol = 1e-14;
    const auto outer = integrate(
        [&](double y) {
            return integrate(
                       [&](double x) {
                           const PlanePoint pt{x, y};
                           return poisson_p(cfg.n, pt) * green_G(pt, cfg.start.x, cfg.start.y);
                       },
                       x_lo, x_hi, opts)
                .value;
        },
        y_lo, y_hi, opts);
    return outer.value / p0;
}

OccupationReport occupation_check(const SdeConfig& cfg, const OccupationGrid& grid, long paths, unsigned threads) {
    validate(cfg);
    if (paths < 2) throw std::invalid_argument("occupation_check: need at least 2 paths");
    if (grid.nx < 1 || grid.ny < 1 || !(grid.x_lo < grid.x_hi) || !(grid.y_lo > 0.0 && grid.y_lo < grid.y_hi))
        throw std::invalid_argument("occupation_check: bad grid");
    const int C = grid.cells();
    if (grid.cell_of(cfg.start) >= 0) throw std::invalid_argument("occupation_check: grid must exclude the start point");

    const long blocks = (paths + kBlock - 1) / kBlock;
    std::vector<double> sum(blocks * C, 0.0), sumsq(blocks * C, 0.0);
    const Seq none;
    for_blocks(paths, threads, [&](long lo, long hi) {
        const long b = lo / kBlock;
        std::vector<double> occ(C);
        for (long i = lo; i < hi; ++i) {
            std::fill(occ.begin(), occ.end(), 0.0);
            simulate_path(cfg, none, std::uint64_t(i), false, &grid, occ.data());
            for (int c = 0; c < C; ++c) {
                sum[b * C + c] += occ[c];
                sumsq[b * C + c] += occ[c] * occ[c];
            }
        }
    });

    OccupationReport rep;
    rep.grid = grid;
    rep.paths = paths;
    rep.observed.assign(C, 0.0);
    rep.std_error.assign(C, 0.0);
    rep.expected.assign(C, 0.0);
    const double dx = (grid.x_hi - grid.x_lo) / grid.nx, dy = (grid.y_hi - grid.y_lo) / grid.ny;
    for (int c = 0; c < C; ++c) {
        double s = 0.0, s2 = 0.0;
        for (long b = 0; b < blocks; ++b) {
            s += sum[b * C + c];
            s2 += sumsq[b * C + c];
        }
        const double mean = s / double(paths);
        const double var = std::max(0.0, (s2 - double(paths) * mean * mean) / double(paths - 1));
        rep.observed[c] = mean;
        rep.std_error[c] = std::sqrt(var / double(paths));
        const int i = c % grid.nx, j = c / grid.nx;
        const double xl = grid.x_lo + i * dx, yl = grid.y_lo + j * dy;
        rep.expected[c] = expected_occupation(cfg, xl, xl + dx, yl, yl + dy);
        if (rep.std_error[c] > 0.0) {
            const double z = (mean - rep.expected[c]) / rep.std_error[c];
            rep.chi2 += z * z;
            rep.max_abs_z = std::max(rep.max_abs_z, std::abs(z));
            ++rep.dof;
        }
    }
    rep.pass = rep.dof > 0 && rep.chi2 <= rep.dof + 3.0 * std::sqrt(2.0 * rep.dof);
    return rep;
}

}  // namespace dhtlab
