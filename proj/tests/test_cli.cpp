#include "doctest.h"

#include "dhtlab/cli.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

using dhtlab::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
    std::ifstream in(std::string(DHTLAB_GOLDEN_DIR) + "/" + name);
    REQUIRE_MESSAGE(in.good(), "missing golden file ", name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);)
        if (!l.empty() && l[0] != '#') lines.push_back(l);
    return lines;
}

}  // namespace

TEST_CASE("kernels subcommand") {
    const auto r = call({"kernels", "--kernel", "J", "--radius", "10", "--format", "csv"});
    CHECK(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 22);  // header + 21 rows
    CHECK(lines[0] == "n,value");
    CHECK(lines[11] == "0,0");
    CHECK(r.out == golden("kernels_J_10.csv"));

    const auto j = call({"kernels", "--kernel", "H", "--radius", "2", "--format", "json"});
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["config"]["kernel"] == "H");
    CHECK(doc["kernel"]["values"].size() == 5);
}

TEST_CASE("norms subcommand") {
    const auto r = call({"norms", "--kernel", "H", "--p", "2", "--radii", "16,32,64"});
    CHECK(r.code == 0);
    CHECK(r.out == golden("norms_H_2.csv"));
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "kernel,p,N,estimate,iterations,converged");
    double prev = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> f;
        std::stringstream ss(lines[i]);
        for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
        const double v = std::stod(f[3]);
        CHECK(v >= prev);
        CHECK(v <= 1.0 + 1e-9);
        prev = v;
    }
    // byte-identical reruns
    CHECK(call({"norms", "--kernel", "H", "--p", "2", "--radii", "16,32,64"}).out == r.out);
}

TEST_CASE("verify, factorize, weaktype, mc") {
    const auto v = call({"verify", "--suite", "quick", "--tol-profile", "default"});
    CHECK(v.code == 0);
    std::istringstream is(v.out);
    std::string first;
    std::getline(is, first);
    CHECK(nlohmann::json::parse(first)["config"]["suite"] == "quick");

    const auto f = call({"factorize", "--window", "256", "--verify", "--format", "json"});
    CHECK(f.code == 0);
    const auto fj = nlohmann::json::parse(f.out);
    CHECK(fj["verification"].size() == 2);
    CHECK(fj["K"]["values"].size() == 513);

    const auto w = call({"weaktype", "--family", "greedy_atoms", "--budget", "20", "--window", "512"});
    CHECK(w.code == 0);
    std::istringstream ws(w.out);
    std::string l1, l2;
    std::getline(ws, l1);
    std::getline(ws, l2);
    CHECK(nlohmann::json::parse(l2)["ratio"].get<double>() > 0.6);

    const auto m = call({"mc", "--n", "1", "--y0", "2", "--paths", "20"});
    CHECK(m.code == 0);
    CHECK(nlohmann::json::parse(m.out)["stats"]["paths"] == 20);
    CHECK(call({"mc", "--paths", "5000"}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(call({}).code == 2);
    CHECK(call({"kernels", "--bogus"}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"kernels", "--kernel", "Q"}).code == 2);
    CHECK(call({"norms", "--p", "1"}).code == 2);
    CHECK(call({"verify", "--tol-profile", "lax"}).code == 2);
    CHECK(call({"mc", "--dt", "2"}).code == 2);
    CHECK(call({"kernels", "--help"}).code == 0);
}
