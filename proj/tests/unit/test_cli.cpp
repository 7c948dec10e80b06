#include <doctest.h>

#include "ccsr/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ccsr;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ccsr_unit_" + name)).string();
}

std::string fixture(const std::string& name) { return std::string(CCSR_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("check") {
    auto r = run({"check", "--fragment", "cln", "--agents", "a,b", "--formula", "false | [{a}]p | [{b}]~p | [*]q"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("VALID\n", 0) == 0);
    CHECK(r.out.find("neat-subset NI'={-1,-2}") != std::string::npos);
    auto p = run({"check", "--fragment", "ccsrp", "--agents", "a,b", "--formula",
                  "false | <{}:true;*:p1> | <{}:~p1;*:p2> | <{}:~p2;{}:true>"});
    CHECK(p.code == 0);
    CHECK(p.out.find("well-arranged ({},{1},{1,2},{1,2,3})") != std::string::npos);
}

TEST_CASE("check emits a countermodel that mc confirms") {
    const auto model = tmp("counter.json");
    auto r = run({"check", "--fragment", "cln", "--agents", "a,b", "--formula", "[{a}]p", "--emit-model", model});
    CHECK(r.code == 1);
    CHECK(r.out.rfind("INVALID\n", 0) == 0);
    auto m = run({"mc", "--model", model, "--state", "s0", "--formula", "[{a}]p"});
    CHECK(m.code == 1);
    CHECK(m.out == "false\n");
    CHECK(run({"mc", "--model", model, "--state", "s0", "--formula", "true"}).out == "true\n");
    std::remove(model.c_str());
}

TEST_CASE("check errors") {
    CHECK(run({"check", "--fragment", "cln", "--agents", "a,b", "--formula", "[{c}]p"}).code == 2);
    CHECK(run({"check", "--fragment", "cln", "--agents", "a,b", "--formula", "<{a}>p"}).code == 2);
    CHECK(run({"check", "--fragment", "xyz", "--agents", "a,b", "--formula", "p"}).code == 2);
    CHECK(run({"check", "--agents", "a,b", "--formula", "p"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("batch input keeps the input order") {
    const auto batch = tmp("batch.txt");
    {
        std::ofstream f(batch);
        f << "# comment\n[{a}]p\n\nfalse | [{a}]p | [{b}]~p\n[{a}]q\n";
    }
    auto one = run({"check", "--fragment", "cln", "--agents", "a,b", "--file", batch});
    auto many = run({"check", "--fragment", "cln", "--agents", "a,b", "--file", batch, "--jobs", "3"});
    CHECK(one.code == 1);
    CHECK(one.out == many.out);
    CHECK(one.out.find("[1] [{a}]p\nINVALID") != std::string::npos);
    CHECK(one.out.find("[2] false | [{a}]p | [{b}]~p\nVALID") != std::string::npos);
    std::remove(batch.c_str());
}

TEST_CASE("mc on the card game") {
    CHECK(run({"mc", "--model", fixture("card_game_1.json"), "--state", "s0", "--formula", "<{alice}:fwinA;{bob}:swinB>"}).out == "true\n");
    CHECK(run({"mc", "--model", fixture("card_game_1.json"), "--state", "s0", "--formula", "<{bob}>swinB"}).out == "false\n");
    CHECK(run({"mc", "--model", fixture("card_game_1.json"), "--state", "nowhere", "--formula", "true"}).code == 2);
    CHECK(run({"mc", "--model", tmp("missing.json"), "--state", "s0", "--formula", "true"}).code == 2);
}

TEST_CASE("sat, normalize, verify") {
    auto s = run({"sat", "--agents", "a", "--formula", "p & ~q"});
    CHECK(s.code == 0);
    CHECK(s.out.rfind("SAT\n", 0) == 0);
    CHECK(s.out.find("1 states") != std::string::npos);
    CHECK(run({"sat", "--agents", "a", "--formula", "p & ~p"}).out == "UNSAT\n");
    auto n = run({"normalize", "--fragment", "cln", "--agents", "a", "--formula", "(p | [{a}]q) & r"});
    CHECK(n.code == 0);
    CHECK(n.out == "p | [*]q\nr\n");
    const auto proof = tmp("proof.json");
    CHECK(run({"check", "--fragment", "ccsrn", "--agents", "a,b", "--formula", "[{a}:p;{}:false] | [{b}:~p;{}:false]",
               "--emit-proof", proof}).code == 0);
    auto v = run({"verify", "--proof", proof});
    CHECK(v.code == 0);
    CHECK(v.out.rfind("OK", 0) == 0);
    std::remove(proof.c_str());
    CHECK(run({"verify", "--proof", tmp("missing.json")}).code == 2);
}
