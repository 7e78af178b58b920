#pragma once

#include "dhtlab/kernels.hpp"
#include "dhtlab/seqops.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace dhtlab {

/// pi^2 / (8 beta(2)), the weak-type (1,1) constant of the continuous Hilbert transform.
double davis_constant();

/// sup over lambda of lambda #{|T a_n| > lambda} / ||a||_1, with T a evaluated on
/// [-window, window]. best_lambda is (1 - 1e-12) times the |T a_n| level at which
/// the supremum is realized.
struct WeakTypeReport {
    std::string sequence_id;
    double l1_norm = 0;
    double best_lambda = 0;
    long count_at_lambda = 0;
    double ratio = 0;
    long window_radius = 0;
    /// Outside the window |T a_n| <= tail_bound; the count at best_lambda can only
    /// be off when tail_bound >= best_lambda (window_limited).
    double tail_bound = 0;
    bool window_limited = false;
    std::string tail_note;
};

inline constexpr double kLambdaShrink = 1.0 - 1e-12;

WeakTypeReport weak_ratio(const Kernel& k, const Seq& a, long window, std::string id = "a");

/// a_n = f(eps (z + n)) for |n| <= window, trimmed of zeros at both ends.
Seq discretized_sequence(const std::function<double(double)>& f, double eps, double z, long window);

enum class WeakFamily { random_signs, greedy_atoms, discretized_bumps };
WeakFamily weak_family_from_string(const std::string& name);
std::string to_string(WeakFamily f);

struct WeakSearchOptions {
    long window = 4096;
    long support_radius = 16;  ///< candidates live on [-support_radius, support_radius]
    unsigned threads = 0;      ///< 0: hardware concurrency
};

/// Best ratio over `budget` candidates of a family (a lower bound for the weak
/// constant of k, nothing more). Deterministic in seed; ties go to the lower
/// candidate index.
WeakTypeReport search_weak_constant(const Kernel& k, WeakFamily family, int budget, std::uint64_t seed,
                                    const WeakSearchOptions& opts = {});

/// The candidate search_weak_constant examines at a given index (random_signs and
/// discretized_bumps only; greedy candidates depend on the path so far).
Seq weak_candidate(WeakFamily family, int index, std::uint64_t seed, long support_radius);

}  // namespace dhtlab
