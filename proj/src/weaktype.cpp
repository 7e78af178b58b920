#include "dhtlab/weaktype.hpp"

#include "dhtlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dhtlab {

double davis_constant() { return std::numbers::pi * std::numbers::pi / (8.0 * catalan_beta2()); }

WeakTypeReport weak_ratio(const Kernel& k, const Seq& a, long window, std::string id) {
    const Seq t = a.trimmed();
    if (t.empty()) throw std::invalid_argument("weak_ratio: zero sequence");
    if (t.first() < -window || t.last() > window) throw std::invalid_argument("weak_ratio: sequence leaves the window");
    WeakTypeReport rep;
    rep.sequence_id = std::move(id);
    rep.window_radius = window;
    rep.l1_norm = lp_norm(t, 1.0);

    std::vector<double> v(2 * window + 1);
    const Seq ta = convolve(k, t, window);
    for (long i = 0; i < ta.size(); ++i) v[i] = std::abs(ta.values[i]);
    std::sort(v.begin(), v.end(), std::greater<>());

    // Just below each distinct level v_i the count #{|Ta| > lambda} is exact.
    for (std::size_t i = 0; i < v.size() && v[i] > 0.0;) {
        const double lambda = kLambdaShrink * v[i];
        const auto end = std::partition_point(v.begin() + i, v.end(), [lambda](double x) { return x > lambda; });
        const long count = long(end - v.begin());
        const double r = lambda * double(count) / rep.l1_norm;
        if (r > rep.ratio) {
            rep.ratio = r;
            rep.best_lambda = lambda;
            rep.count_at_lambda = count;
        }
        i = std::size_t(end - v.begin());
    }

    const long reach = std::max(std::abs(t.first()), std::abs(t.last()));
    rep.tail_bound = rep.l1_norm * k.tail_bound(window + 1 - reach);
    rep.window_limited = rep.tail_bound > rep.best_lambda;
    char buf[160];
    std::snprintf(buf, sizeof buf, "|Ta_n| <= %.3e for |n| > %ld; %s", rep.tail_bound, window,
                  rep.window_limited ? "window-limited: outside entries may exceed best_lambda"
                                     : "count at best_lambda is exact");
    rep.tail_note = buf;
    return rep;
}

Seq discretized_sequence(const std::function<double(double)>& f, double eps, double z, long window) {
    if (!(eps > 0.0)) throw std::invalid_argument("discretized_sequence: eps must be positive");
    Seq s = Seq::zeros(-window, window);
    for (long n = -window; n <= window; ++n) s.values[n + window] = f(eps * (z + double(n)));
    return s.trimmed();
}

WeakFamily weak_family_from_string(const std::string& name) {
    if (name == "random_signs") return WeakFamily::random_signs;
    if (name == "greedy_atoms") return WeakFamily::greedy_atoms;
    if (name == "discretized_bumps") return WeakFamily::discretized_bumps;
    throw std::invalid_argument("unknown family '" + name + "' (random_signs, greedy_atoms, discretized_bumps)");
}

std::string to_string(WeakFamily f) {
    switch (f) {
    case WeakFamily::random_signs: return "random_signs";
    case WeakFamily::greedy_atoms: return "greedy_atoms";
    case WeakFamily::discretized_bumps: return "discretized_bumps";
    }
    return "?";
}

namespace {

std::mt19937_64 candidate_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq ss{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index), std::uint32_t(index >> 32)};
    return std::mt19937_64(ss);
}

// Uniform in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

double bump(double x) { return (x > 0.0 && x < 1.0) ? std::exp(-1.0 / (x * (1.0 - x))) : 0.0; }

}  // namespace

Seq weak_candidate(WeakFamily family, int index, std::uint64_t seed, long R) {
    auto g = candidate_rng(seed, std::uint64_t(index));
    switch (family) {
    case WeakFamily::random_signs: {
        Seq s = Seq::zeros(-R, R);
        for (long i = 0; i < s.size(); ++i) s.values[i] = (g() >> 63) ? -1.0 : 1.0;
        return s;
    }
    case WeakFamily::discretized_bumps: {
        // Alternate bump, indicator and a signed double bump; eps sweeps down to 1/R.
        const double eps = 1.0 / double(1 + (index / 3) % std::max<long>(R / 2, 1));
        const double z = unit(g);
        std::function<double(double)> f;
        switch (index % 3) {
        case 0: f = bump; break;
        case 1: f = [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }; break;
        default: f = [](double x) { return bump(2.0 * x) - bump(2.0 * x - 1.0); }; break;
        }
        Seq s = discretized_sequence(f, eps, z, R);
        if (s.empty()) return Seq::delta(0);
        return s.shifted(-(s.first() + s.last()) / 2);
    }
    case WeakFamily::greedy_atoms: break;
    }
    throw std::invalid_argument("weak_candidate: greedy candidates are path-dependent");
}

WeakTypeReport search_weak_constant(const Kernel& k, WeakFamily family, int budget, std::uint64_t seed,
                                    const WeakSearchOptions& opts) {
    if (budget < 1) throw std::invalid_argument("search_weak_constant: budget must be >= 1");
    const long R = opts.support_radius;
    if (R < 0 || R > opts.window) throw std::invalid_argument("search_weak_constant: support exceeds window");
    auto id = [&](int i) { return to_string(family) + "#" + std::to_string(i); };

    if (family == WeakFamily::greedy_atoms) {
        // Hill climbing from delta_0: propose one atom at a time, keep it if the ratio grows.
        Seq a = Seq::delta(0);
        WeakTypeReport best = weak_ratio(k, a, opts.window, id(0));
        auto g = candidate_rng(seed, 0);
        for (int i = 1; i < budget; ++i) {
            const long pos = long(g() % std::uint64_t(2 * R + 1)) - R;
            const double amp = 2.0 * unit(g) - 1.0;
            Seq trial = a + Seq::delta(pos, amp);
            if (trial.trimmed().empty()) continue;
            auto rep = weak_ratio(k, trial, opts.window, id(i));
            if (rep.ratio > best.ratio) {
                best = std::move(rep);
                a = std::move(trial);
            }
        }
        return best;
    }

    std::vector<WeakTypeReport> reps(budget);
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, unsigned(budget));
    auto work = [&](unsigned tid) {
        for (int i = int(tid); i < budget; i += int(threads))
            reps[i] = weak_ratio(k, weak_candidate(family, i, seed, R), opts.window, id(i));
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    int best = 0;
    for (int i = 1; i < budget; ++i)
        if (reps[i].ratio > reps[best].ratio) best = i;
    return reps[best];
}

}  // namespace dhtlab
