#include "dhtlab/cli.hpp"

#include "dhtlab/factorization.hpp"
#include "dhtlab/hprocess_mc.hpp"
#include "dhtlab/identities.hpp"
#include "dhtlab/kernels.hpp"
#include "dhtlab/norms.hpp"
#include "dhtlab/weaktype.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <random>

namespace dhtlab::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr long kLightPaths = 2000;

struct Common {
    std::string format = "csv";
    std::string output;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", c.output, "write here instead of standard output");
}

// Output sink: a file when --output is set, otherwise the caller's stream.
struct Sink {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os;
    Sink(const std::string& path, std::ostream& fallback) : os(&fallback) {
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) throw std::invalid_argument("cannot open output file '" + path + "'");
            os = file.get();
        }
    }
    std::ostream& operator*() { return *os; }
};

void echo_csv(std::ostream& os, const ordered_json& config) {
    os << "# dhtlab schema=" << kSchemaVersion << '\n';
    for (const auto& [k, v] : config.items()) os << "# " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

ordered_json with_schema(ordered_json config) {
    ordered_json out;
    out["schema"] = kSchemaVersion;
    for (const auto& [k, v] : config.items()) out[k] = v;
    return out;
}

ordered_json to_ordered_json(const Seq& s) {
    ordered_json j;
    j["offset"] = s.offset;
    j["values"] = std::vector<double>(s.values.data(), s.values.data() + s.values.size());
    return j;
}

ordered_json report_json(const IdentityReport& r) {
    return {{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"abs_diff", r.abs_diff}, {"tolerance", r.tolerance},
            {"pass", r.pass}};
}

ordered_json weak_json(const WeakTypeReport& r) {
    return {{"sequence_id", r.sequence_id},       {"l1_norm", r.l1_norm},
            {"best_lambda", r.best_lambda},       {"count_at_lambda", r.count_at_lambda},
            {"ratio", r.ratio},                   {"window_radius", r.window_radius},
            {"tail_bound", r.tail_bound},         {"window_limited", r.window_limited},
            {"tail_note", r.tail_note}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- kernels ----------------------------------------------------------------

struct KernelsOpts {
    Common common;
    std::string kernel = "H";
    long radius = 10;
};

int do_kernels(const KernelsOpts& o, std::ostream& out) {
    const Kernel k = kernel_by_name(o.kernel);
    Seq s = Seq::zeros(-o.radius, o.radius);
    s.values = k.window(-o.radius, o.radius);
    const ordered_json config = {{"command", "kernels"}, {"kernel", o.kernel}, {"radius", o.radius}};
    Sink sink(o.common.output, out);
    if (o.common.format == "csv") {
        echo_csv(*sink, config);
        write_csv(*sink, s);
    } else {
        ordered_json j;
        j["config"] = with_schema(config);
        j["kernel"] = to_ordered_json(s);
        *sink << j.dump() << '\n';
    }
    return ok;
}

// ---- factorize --------------------------------------------------------------

struct FactorizeOpts {
    Common common;
    long window = 2048;
    double mass_tol = 1e-8;
    bool verify = false;
    std::uint64_t seed = 0;
};

Seq random_signs(long radius, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    Seq s = Seq::zeros(-radius, radius);
    for (long i = 0; i < s.size(); ++i) s.values[i] = (g() >> 63) ? -1.0 : 1.0;
    return s;
}

int do_factorize(const FactorizeOpts& o, std::ostream& out) {
    const FactorizationKit kit = build_K(o.window, o.mass_tol);
    const ordered_json config = {{"command", "factorize"}, {"window", o.window}, {"mass_tol", o.mass_tol},
                                 {"verify", o.verify},      {"seed", o.seed}};
    const ordered_json summary = {{"e0", kit.e0},
                                  {"alpha", kit.alpha},
                                  {"neumann_terms", kit.neumann_terms},
                                  {"g_tail_bound", kit.g_tail_bound},
                                  {"mass_defect", kit.mass_defect},
                                  {"truncation_budget", kit.truncation_budget},
                                  {"min_K", kit.K.values.minCoeff()}};
    ordered_json checks = ordered_json::array();
    bool pass = std::abs(kit.mass_defect) <= o.mass_tol + kit.truncation_budget && kit.K.values.minCoeff() >= 0.0;
    if (o.verify) {
        const std::pair<std::string, Seq> cases[] = {{"delta_0", Seq::delta(0)},
                                                     {"random_signs_16", random_signs(16, o.seed)}};
        for (const auto& [name, a] : cases) {
            const auto rep = verify_factorization(kit, a);
            checks.push_back({{"sequence", name},
                              {"max_abs_residual", rep.max_abs_residual},
                              {"budget", rep.budget},
                              {"checked_radius", rep.checked_radius},
                              {"pass", rep.pass}});
            pass = pass && rep.pass;
        }
    }
    Sink sink(o.common.output, out);
    if (o.common.format == "csv") {
        echo_csv(*sink, config);
        for (const auto& [k, v] : summary.items()) *sink << "# " << k << '=' << v.dump() << '\n';
        for (const auto& c : checks) *sink << "# verify " << c.dump() << '\n';
        write_csv(*sink, kit.K);
    } else {
        ordered_json j;
        j["config"] = with_schema(config);
        j["summary"] = summary;
        j["verification"] = checks;
        j["K"] = to_ordered_json(kit.K);
        *sink << j.dump() << '\n';
    }
    return pass ? ok : verification_failed;
}

// ---- norms ------------------------------------------------------------------

struct NormsOpts {
    Common common;
    std::string kernel = "H";
    double p = 2.0;
    std::vector<long> radii{64, 256, 1024};
    PowerOptions power;
};

int do_norms(const NormsOpts& o, std::ostream& out) {
    const Exponent e(o.p);
    const auto sweep = norm_sweep(kernel_by_name(o.kernel), e, o.radii, o.power);
    const ordered_json config = {{"command", "norms"},         {"kernel", o.kernel},   {"p", o.p},
                                 {"radii", o.radii},           {"tol", o.power.tol},   {"max_iter", o.power.max_iter},
                                 {"seed", o.power.seed},       {"pichorides_bound", pichorides_constant(e)}};
    Sink sink(o.common.output, out);
    if (o.common.format == "csv") {
        echo_csv(*sink, config);
        *sink << "kernel,p,N,estimate,iterations,converged\n";
        for (const auto& s : sweep)
            *sink << o.kernel << ',' << fmt(o.p) << ',' << s.estimate.window_radius << ',' << fmt(s.estimate.value) << ','
                  << s.estimate.iterations << ',' << (s.estimate.converged ? "true" : "false") << '\n';
    } else {
        *sink << ordered_json{{"config", with_schema(config)}}.dump() << '\n';
        for (const auto& s : sweep)
            *sink << ordered_json{{"kernel", o.kernel},
                                  {"p", o.p},
                                  {"N", s.estimate.window_radius},
                                  {"estimate", s.estimate.value},
                                  {"iterations", s.estimate.iterations},
                                  {"converged", s.estimate.converged},
                                  {"non_monotone", s.non_monotone}}
                         .dump()
                  << '\n';
    }
    return ok;
}

// ---- verify -----------------------------------------------------------------

struct VerifyOpts {
    Common common;
    std::string suite = "section3";
    std::string tol_profile = "default";
};

int do_verify(const VerifyOpts& o, std::ostream& out) {
    const auto reports = run_suite(o.suite);
    bool all = true;
    for (const auto& r : reports) all = all && r.pass;
    Sink sink(o.common.output, out);
    *sink << ordered_json{{"config", with_schema({{"command", "verify"}, {"suite", o.suite}, {"tol_profile", o.tol_profile}})}}
                 .dump()
          << '\n';
    for (const auto& r : reports) *sink << report_json(r).dump() << '\n';
    return all ? ok : verification_failed;
}

// ---- weaktype ---------------------------------------------------------------

struct WeakOpts {
    Common common;
    std::string kernel = "H";
    std::string family = "random_signs";
    int budget = 100;
    std::uint64_t seed = 0;
    WeakSearchOptions search;
};

int do_weaktype(const WeakOpts& o, std::ostream& out) {
    const auto family = weak_family_from_string(o.family);
    WeakSearchOptions so = o.search;
    so.threads = 0;
    const auto best = search_weak_constant(kernel_by_name(o.kernel), family, o.budget, o.seed, so);
    Sink sink(o.common.output, out);
    const ordered_json config = {{"command", "weaktype"},         {"kernel", o.kernel}, {"family", o.family},
                                 {"budget", o.budget},            {"seed", o.seed},     {"window", so.window},
                                 {"support_radius", so.support_radius}};
    *sink << ordered_json{{"config", with_schema(config)}}.dump() << '\n';
    ordered_json j = weak_json(best);
    j["davis_constant"] = davis_constant();
    j["note"] = "lower bound for the weak-type constant only";
    *sink << j.dump() << '\n';
    return ok;
}

// ---- mc ---------------------------------------------------------------------

struct McOpts {
    Common common;
    SdeConfig cfg;
    long m = 0;
    long paths = 1000;
    bool occupation = false;
    bool heavy = false;
    unsigned threads = 0;
};

int do_mc(const McOpts& o, std::ostream& out, std::ostream& err) {
    if (o.paths > kLightPaths && !o.heavy) {
        err << "mc: more than " << kLightPaths << " paths is a long run; pass --heavy\n";
        return usage_error;
    }
    const SdeConfig& c = o.cfg;
    const ordered_json config = {{"command", "mc"},        {"n", c.n},           {"m", o.m},
                                 {"x0", c.start.x},        {"y0", c.start.y},    {"dt", c.dt},
                                 {"kill_eps", c.kill_eps}, {"max_time", c.max_time}, {"seed", c.seed},
                                 {"antithetic", c.antithetic}, {"paths", o.paths}, {"occupation", o.occupation}};
    Sink sink(o.common.output, out);
    ordered_json j;
    j["config"] = with_schema(config);
    if (o.occupation) {
        const OccupationGrid grid;
        const auto rep = occupation_check(c, grid, o.paths, o.threads);
        j["grid"] = {{"x_lo", grid.x_lo}, {"x_hi", grid.x_hi}, {"y_lo", grid.y_lo},
                     {"y_hi", grid.y_hi}, {"nx", grid.nx},     {"ny", grid.ny}};
        j["observed"] = rep.observed;
        j["std_error"] = rep.std_error;
        j["expected"] = rep.expected;
        j["chi2"] = rep.chi2;
        j["dof"] = rep.dof;
        j["max_abs_z"] = rep.max_abs_z;
        j["pass"] = rep.pass;
        *sink << j.dump() << '\n';
        return rep.pass ? ok : verification_failed;
    }
    const auto st = estimate_T(Seq::delta(o.m), c, o.paths, o.threads);
    const double reference = j_kernel(c.n - o.m);
    j["stats"] = {{"mean", st.mean},
                  {"std_error", st.std_error},
                  {"paths", st.paths},
                  {"killed_fraction", st.killed_fraction},
                  {"mean_steps", st.mean_steps}};
    j["reference_J"] = reference;
    j["z_score"] = st.std_error > 0 ? (st.mean - reference) / st.std_error : 0.0;
    *sink << j.dump() << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"dhtlab: discrete Hilbert transform numerics", "dhtlab"};
    app.require_subcommand(1);

    KernelsOpts ko;
    auto* kernels = app.add_subcommand("kernels", "tabulate a convolution kernel");
    add_common(kernels, ko.common, "csv");
    kernels->add_option("--kernel", ko.kernel, "H, RT, K, ADP, J, F, E or I");
    kernels->add_option("--radius", ko.radius, "indices -radius..radius")->check(CLI::NonNegativeNumber);

    FactorizeOpts fo;
    auto* factorize = app.add_subcommand("factorize", "build the probability kernel K with H = K * J");
    add_common(factorize, fo.common, "csv");
    factorize->add_option("--window", fo.window, "support radius of G and K")->check(CLI::Range(16L, 1L << 22));
    factorize->add_option("--mass-tol", fo.mass_tol, "Neumann series mass tolerance");
    factorize->add_flag("--verify", fo.verify, "check H a = K * J a for delta_0 and random signs");
    factorize->add_option("--seed", fo.seed, "seed of the random-sign test sequence");

    NormsOpts no;
    auto* norms = app.add_subcommand("norms", "power-method lower bounds for truncated operator norms");
    add_common(norms, no.common, "csv");
    norms->add_option("--kernel", no.kernel);
    norms->add_option("--p", no.p, "exponent in (1, inf)");
    norms->add_option("--radii", no.radii, "comma-separated truncation radii")->delimiter(',');
    norms->add_option("--tol", no.power.tol);
    norms->add_option("--max-iter", no.power.max_iter);
    norms->add_option("--seed", no.power.seed);

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "run an identity verification suite");
    add_common(verify, vo.common, "json");
    verify->add_option("--suite", vo.suite)->check(CLI::IsMember({"section3", "quick"}));
    verify->add_option("--tol-profile", vo.tol_profile)->check(CLI::IsMember({"default"}));

    WeakOpts wo;
    auto* weak = app.add_subcommand("weaktype", "search for large weak-type (1,1) ratios");
    add_common(weak, wo.common, "json");
    weak->add_option("--kernel", wo.kernel);
    weak->add_option("--family", wo.family)->check(CLI::IsMember({"random_signs", "greedy_atoms", "discretized_bumps"}));
    weak->add_option("--budget", wo.budget)->check(CLI::PositiveNumber);
    weak->add_option("--seed", wo.seed);
    weak->add_option("--window", wo.search.window)->check(CLI::PositiveNumber);
    weak->add_option("--support-radius", wo.search.support_radius)->check(CLI::NonNegativeNumber);

    McOpts mo;
    auto* mc = app.add_subcommand("mc", "Monte Carlo for the conditioned process");
    add_common(mc, mo.common, "json");
    mc->add_option("--n", mo.cfg.n, "target lattice site");
    mc->add_option("--m", mo.m, "a = delta_m");
    mc->add_option("--x0", mo.cfg.start.x);
    mc->add_option("--y0", mo.cfg.start.y);
    mc->add_option("--dt", mo.cfg.dt, "relative step: the step at height y is dt*y^2");
    mc->add_option("--kill-eps", mo.cfg.kill_eps);
    mc->add_option("--max-time", mo.cfg.max_time);
    mc->add_option("--seed", mo.cfg.seed);
    mc->add_option("--paths", mo.paths)->check(CLI::Range(2L, 100000000L));
    mc->add_option("--threads", mo.threads, "0: all cores");
    mc->add_flag("--antithetic", mo.cfg.antithetic);
    mc->add_flag("--occupation", mo.occupation, "occupation-measure check instead of the functional");
    mc->add_flag("--heavy", mo.heavy, "allow long runs");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*kernels) return do_kernels(ko, out);
        if (*factorize) return do_factorize(fo, out);
        if (*norms) return do_norms(no, out);
        if (*verify) return do_verify(vo, out);
        if (*weak) return do_weaktype(wo, out);
        if (*mc) {
            validate(mo.cfg);
            return do_mc(mo, out, err);
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    return usage_error;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace dhtlab::cli
