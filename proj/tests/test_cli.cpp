#include "doctest.h"

#include "pltl/cli.hpp"
#include "pltl/markov.hpp"
#include "pltl/oracle.hpp"
#include "pltl/word.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace pltl;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;

    // First value of `key`, or "" when absent.
    std::string get(const std::string& key) const {
        std::istringstream in(out);
        std::string line;
        const std::string prefix = key + ": ";
        while (std::getline(in, line))
            if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
        return {};
    }
    std::vector<std::string> all(const std::string& key) const {
        std::vector<std::string> vals;
        std::istringstream in(out);
        std::string line;
        const std::string prefix = key + ": ";
        while (std::getline(in, line))
            if (line.rfind(prefix, 0) == 0) vals.push_back(line.substr(prefix.size()));
        return vals;
    }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const std::string kEx1 = "tests/data/example1.dtmc";
const std::string kFig1 = "tests/data/fig1.dtmc";

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/pltl_cli_test_" + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("check: positive threshold on the two-state chain") {
    auto r = run({"check", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", ">0"});
    CHECK(r.code == cli::kExitDecided);
    CHECK(r.get("fragment") == "Reach");
    CHECK(r.get("verdict") == "nonempty");
    CHECK(r.get("minimum") == "x=1");
}

TEST_CASE("check: almost-sure and quantitative thresholds") {
    auto as1 = run({"check", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", "=1"});
    CHECK(as1.code == cli::kExitDecided);
    CHECK(as1.get("verdict") == "empty");
    auto geq = run({"check", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", ">=31/32"});
    CHECK(geq.code == cli::kExitDecided);
    CHECK(geq.get("minimum") == "x=5");
}

TEST_CASE("check: witnesses are confirmed by the evaluators") {
    for (const char* phi : {"F[<=x] a", "G F[<=x] a", "F[<=x] (a & X a)", "a U F[<=x] a"}) {
        auto r = run({"check", "--chain", kEx1, "--formula", phi, "--threshold", ">0", "--witness"});
        INFO(phi, "\n", r.out, r.err);
        CHECK(r.code == cli::kExitDecided);
        CHECK(r.get("verdict") == "nonempty");
        CHECK(r.get("witness-confirmed") == "true");
    }
}

TEST_CASE("minset: three-parameter chain lists sixteen valuations") {
    auto r = run({"minset", "--chain", kFig1, "--formula", "F[<=x1] r & F[<=x2] b & F[<=x3] g"});
    CHECK(r.code == cli::kExitDecided);
    CHECK(r.get("size") == "16");
    CHECK(r.all("valuation").size() == 16);
    CHECK(r.get("hypercube") == "{0..264}^3");
}

TEST_CASE("member") {
    auto no = run({"member", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", ">0", "--valuation", "x=0"});
    CHECK(no.code == cli::kExitDecided);
    CHECK(no.get("member") == "false");
    auto yes = run({"member", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", ">0", "--valuation", "x=1"});
    CHECK(yes.get("member") == "true");
    auto missing = run({"member", "--chain", kEx1, "--formula", "F[<=x] a"});
    CHECK(missing.code == cli::kExitUsage);
}

TEST_CASE("prob") {
    auto r = run({"prob", "--chain", kEx1, "--formula", "F[<=x] a", "--valuation", "x=5"});
    CHECK(r.code == cli::kExitDecided);
    CHECK(r.get("probability") == "31/32");
    auto bad = run({"prob", "--chain", kEx1, "--formula", "G F[<=x] a", "--valuation", "x=5"});
    CHECK(bad.code == cli::kExitFragment);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"check", "--chain", kEx1}).code == cli::kExitUsage);
    CHECK(run({"check", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", "~3"}).code == cli::kExitUsage);
    CHECK(run({"check", "--chain", "/nonexistent/chain", "--formula", "a"}).code == cli::kExitUsage);
    CHECK(run({"check", "--chain", kEx1, "--formula", "F[<=x"}).code == cli::kExitInput);
    auto bad_chain = temp_file("bad.dtmc", "states 2\ninit 0\ntrans 0 1 1/2\ntrans 1 1 1\n");
    CHECK(run({"check", "--chain", bad_chain, "--formula", "a"}).code == cli::kExitInput);
    auto q = run({"check", "--chain", kEx1, "--formula", "G F[<=x] a", "--threshold", ">=1/2"});
    CHECK(q.code == cli::kExitFragment);
    CHECK(q.err.find("Reach") != std::string::npos);
    CHECK(run({"check", "--chain", kEx1, "--formula", "!F[<=x] a"}).code == cli::kExitFragment);
    CHECK(run({"minset", "--chain", kFig1, "--formula", "F[<=x1] r & F[<=x2] b & F[<=x3] g",
               "--max-product-nodes", "10"})
              .code == cli::kExitResource);
}

TEST_CASE("machine format carries a JSON block") {
    auto r = run({"minset", "--chain", kEx1, "--formula", "F[<=x] a & F[<=y] a", "--format", "machine"});
    REQUIRE(r.code == cli::kExitDecided);
    const auto b = r.out.find("BEGIN-RESULT\n");
    const auto e = r.out.find("END-RESULT");
    REQUIRE(b != std::string::npos);
    REQUIRE(e != std::string::npos);
    auto j = nlohmann::json::parse(r.out.substr(b + 13, e - b - 13));
    CHECK(j["verdict"] == "nonempty");
    CHECK(j["valuation"].size() == 1);
    CHECK(j["valuation"][0] == "x=1,y=1");
}

TEST_CASE("emit-automaton writes G, U and B(v)") {
    const std::string path = "/tmp/pltl_cli_test_automaton.txt";
    std::remove(path.c_str());
    auto r = run({"member", "--chain", kEx1, "--formula", "F[<=x] a", "--valuation", "x=2", "--emit-automaton", path});
    CHECK(r.code == cli::kExitDecided);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().find("# G") != std::string::npos);
    CHECK(text.str().find("# B x=2") != std::string::npos);
}

TEST_CASE("oracle subcommands") {
    auto s = run({"oracle", "sample", "--chain", kEx1, "--formula", "F[<=x] a", "--valuation", "x=5", "--samples",
                  "1000", "--horizon", "6", "--seed", "7"});
    CHECK(s.code == cli::kExitDecided);
    CHECK(s.get("rng") == "mt19937_64");
    CHECK(s.get("seed") == "7");

    auto l = run({"oracle", "lasso-eval", "--formula", "G F[<=x] a", "--valuation", "x=1", "--stem", "{}", "--loop",
                  "{a}{}"});
    CHECK(l.code == cli::kExitDecided);
    CHECK(l.get("eval-lasso") == "true");
    CHECK(l.get("automaton") == "true");

    auto cnf = temp_file("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    auto g = run({"oracle", "gen3sat", "--cnf", cnf, "--check"});
    CHECK(g.code == cli::kExitDecided);
    CHECK(g.get("fixture-verdict") == "empty");
    CHECK(g.get("sat-brute-force") == "false");

    const std::string chain_out = "/tmp/pltl_cli_test_fixture.dtmc";
    auto rnd = run({"oracle", "gen3sat", "--random", "3", "4", "--seed", "5", "--out-chain", chain_out, "--check"});
    CHECK(rnd.code == cli::kExitDecided);
    CHECK(load_chain(chain_out).size() == 10);
    CHECK((rnd.get("fixture-verdict") == "nonempty") == (rnd.get("sat-brute-force") == "true"));
}

TEST_CASE("identical inputs give byte-identical reports") {
    const std::vector<std::vector<std::string>> cmds{
        {"check", "--chain", kEx1, "--formula", "F[<=x] a", "--threshold", ">0", "--witness"},
        {"minset", "--chain", kFig1, "--formula", "F[<=x1] r & F[<=x2] b & F[<=x3] g", "--format", "machine"},
        {"check", "--chain", kEx1, "--formula", "G F[<=x] a & F[<=y] a", "--threshold", "=1"},
        {"oracle", "sample", "--chain", kEx1, "--formula", "F[<=x] a", "--valuation", "x=3", "--seed", "11"},
        {"oracle", "gen3sat", "--random", "4", "6", "--seed", "2", "--check"},
    };
    for (const auto& c : cmds) {
        auto a = run(c), b = run(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
    }
}
