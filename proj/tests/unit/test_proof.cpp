#include <doctest.h>

#include "ccsr/proof.hpp"
#include "ccsr/taut.hpp"
#include "ccsr/validity.hpp"
#include "support.hpp"

using namespace ccsr;

namespace {
const AgentUniverse ab = parse_agents("a,b");
const AgentUniverse abcd = parse_agents("a,b,c,d");

Proof manual(Fragment sys, const AgentUniverse& u, std::vector<ProofStep> steps) {
    Proof p;
    p.system = sys;
    p.universe = u;
    p.steps = std::move(steps);
    return p;
}

SdCertificate certify(const char* text, Fragment frag, const AgentUniverse& u = ab) {
    Decider d(u);
    auto c = d.reduce(StandardDisjunction::from_formula(parse(text, u), frag));
    REQUIRE(c);
    return *c;
}

int count_rule(const Proof& p, Rule r) {
    int n = 0;
    for (const auto& s : p.steps) n += s.rule == r;
    return n;
}
}  // namespace

TEST_CASE("checker accepts rule instances") {
    auto p = manual(Fragment::CLn, ab,
                    {{1, parse("p | ~p", ab), Rule::Axiom, {}, -1, {}},
                     {2, parse("[{a}](p | ~p)", ab), Rule::R2, {1}, -1, {}}});
    CHECK(check_proof(p).ok);
}

TEST_CASE("checker rejects a non-disjoint split") {
    auto p = manual(Fragment::CLn, ab,
                    {{1, parse("p | ~p", ab), Rule::Axiom, {}, -1, {}},
                     {2, parse("[{a}](p | ~p)", ab), Rule::R2, {1}, -1, {}},
                     {3, parse("[{a}]p | [{a}]~p", ab), Rule::R3, {2}, 0, {0, 1}}});
    auto r = check_proof(p);
    CHECK_FALSE(r.ok);
    CHECK(r.step == 3);
    CHECK(r.message.find("disjoint") != std::string::npos);
}

TEST_CASE("checker rejects bad steps") {
    auto not_taut = manual(Fragment::CLn, ab, {{1, parse("p", ab), Rule::Axiom, {}, -1, {}}});
    CHECK_FALSE(check_proof(not_taut).ok);
    auto forward = manual(Fragment::CLn, ab, {{1, parse("p | ~p", ab), Rule::R1, {1}, -1, {}}});
    CHECK_FALSE(check_proof(forward).ok);
    auto wrong_lang = manual(Fragment::CLn, ab, {{1, parse("<{a}>p | true", ab), Rule::Axiom, {}, -1, {}}});
    CHECK_FALSE(check_proof(wrong_lang).ok);
    auto r4_in_cl = manual(Fragment::CLn, ab,
                           {{1, parse("p | ~p", ab), Rule::Axiom, {}, -1, {}},
                            {2, parse("[{a}](p | ~p)", ab), Rule::R4, {1}, 0, {0}}});
    CHECK_FALSE(check_proof(r4_in_cl).ok);
}

TEST_CASE("CLn synthesis follows the lemma's step count") {
    auto c = certify("false | [{a}]p | [{b}]~p | [*]q", Fragment::CLn);
    auto p = synth_cln(c, ab);
    CHECK(check_proof(p).ok);
    CHECK(canonically_equal(p.theorem(), c.sd.to_formula()));
    // Axiom p | ~p, R2, one R3, closing R1.
    CHECK(p.steps.size() == 4);
    CHECK(p.steps[0].rule == Rule::Axiom);
    CHECK(p.steps[1].rule == Rule::R2);
    CHECK(p.steps[2].rule == Rule::R3);
    CHECK(p.steps[3].rule == Rule::R1);
    auto g = certify("p | ~p", Fragment::CLn);
    CHECK(synth_cln(g, ab).steps.size() == 1);
    CHECK_THROWS_AS(synth_clp(g, ab), FragmentError);
}

TEST_CASE("CLp synthesis") {
    auto c = certify("false | <*>p | <{a}>~p", Fragment::CLp);
    auto p = synth_clp(c, ab);
    CHECK(check_proof(p).ok);
    CHECK(canonically_equal(p.theorem(), c.sd.to_formula()));
    CHECK(synth_clp(certify("true | <{a}>p", Fragment::CLp), ab).steps.size() == 1);
    // Pivot inside PI0.
    auto in = certify("false | <*>p | <*>~p", Fragment::CLp);
    CHECK(check_proof(synth_clp(in, ab)).ok);
}

TEST_CASE("CCSRn synthesis") {
    auto c = certify("false | [{a}:p;{}:false] | [{b}:q;{}:false] | [{c}:false;{d}:~p & ~q]", Fragment::CCSRn, abcd);
    auto p = synth_ccsrn(c, abcd);
    CHECK(check_proof(p).ok);
    // The one-goal pieces already are the NI1 disjuncts, so only R5 rewrites.
    CHECK(count_rule(p, Rule::R5) == 1);
    auto only_first = certify("false | [{a}:p;{b}:q] | [{c}:~p;{d}:q]", Fragment::CCSRn, abcd);
    REQUIRE(only_first.witness.second.empty());
    auto q = synth_ccsrn(only_first, abcd);
    CHECK(check_proof(q).ok);
    CHECK(count_rule(q, Rule::R4) == 2);
    CHECK(count_rule(q, Rule::R5) == 0);
    auto only_second = certify("false | [{a}:p;{b}:q] | [{c}:~p & ~q;{d}:false]", Fragment::CCSRn, abcd);
    if (only_second.witness.first.empty()) CHECK(count_rule(synth_ccsrn(only_second, abcd), Rule::R4) == 0);
    CHECK(check_proof(synth_ccsrn(only_second, abcd)).ok);
}

TEST_CASE("CCSRp synthesis") {
    auto c = certify("false | <{}:true;*:p1> | <{}:~p1;*:p2> | <{}:~p2;{}:true>", Fragment::CCSRp);
    auto p = synth_ccsrp(c, ab);
    auto r = check_proof(p);
    CHECK_MESSAGE(r.ok, r.message);
    CHECK(canonically_equal(p.theorem(), c.sd.to_formula()));
    auto flat = certify("false | <*:p;{}:true> | <*:~p;{}:true>", Fragment::CCSRp);
    CHECK(flat.witness.pivots.empty());
    CHECK(check_proof(synth_ccsrp(flat, ab)).ok);
}

TEST_CASE("random valid depth-one CCSRp disjunctions yield accepted proofs") {
    testing::Rng rng(404);
    const std::vector<std::string> atoms{"p", "q"};
    Decider d(ab);
    int proved = 0;
    for (int i = 0; i < 3000 && proved < 200; ++i) {
        std::vector<Formula> items{bottom()};
        const int n = 1 + i % 3;
        for (int j = 0; j < n; ++j) {
            Coalition a = std::bernoulli_distribution(0.5)(rng) ? ab.all() : testing::random_coalition(ab, rng);
            Coalition b = std::bernoulli_distribution(0.5)(rng) ? ab.all() : testing::random_coalition(ab, rng);
            Formula phi = std::bernoulli_distribution(0.3)(rng) ? top() : testing::random_literal(atoms, rng);
            items.push_back(coop(a, phi, b, testing::random_literal(atoms, rng)));
        }
        auto cert = d.reduce(StandardDisjunction::from_formula(disj_all(items), Fragment::CCSRp));
        if (!cert || cert->witness.kind == Witness::Kind::GammaValid) continue;
        ++proved;
        auto r = check_proof(synth_ccsrp(*cert, ab));
        CHECK_MESSAGE(r.ok, r.message);
    }
    CHECK(proved >= 200);
}

TEST_CASE("proof files round trip") {
    Decider d(ab);
    auto v = d.decide(parse("false | <{}:true;*:p1> | <{}:~p1;*:p2> | <{}:~p2;{}:true>", ab), Fragment::CCSRp);
    auto p = synthesize(*v.certificate, ab);
    auto text = proof_to_json_text(p);
    auto q = proof_from_json_text(text);
    CHECK(q.steps.size() == p.steps.size());
    CHECK(check_proof(q).ok);
    CHECK_THROWS_AS(proof_from_json_text("{\"system\":\"cln\",\"steps\":[]}"), ProofFormatError);
    auto with = proof_from_json_text("{\"system\":\"cln\",\"steps\":[{\"i\":1,\"formula\":\"p | ~p\",\"rule\":\"axiom\",\"premises\":[],\"params\":{}}]}", &ab);
    CHECK(check_proof(with).ok);
    CHECK_THROWS_AS(proof_from_json_text("{\"system\":\"cln\",\"steps\":[{\"i\":1,\"formula\":\"p\",\"rule\":\"r9\"}]}", &ab),
                    ProofFormatError);
}

TEST_CASE("abstraction never looks inside modalities") {
    CHECK_FALSE(implies_tautologically({parse("[{a}]p", ab)}, parse("[{a}]q", ab)));
    CHECK_FALSE(implies_tautologically({parse("[{a}](p | q)", ab)}, parse("[{a}](q | p)", ab)));
    CHECK(implies_tautologically({parse("[{a}](p | q)", ab)}, parse("[{a}](p | q) | r", ab)));
    auto bad = manual(Fragment::CLn, ab,
                      {{1, parse("[{a}](p | ~p)", ab), Rule::Axiom, {}, -1, {}}});
    CHECK_FALSE(check_proof(bad).ok);
}

TEST_CASE("CLn proof length") {
    testing::Rng rng(12);
    const std::vector<std::string> atoms{"p", "q"};
    Decider d(ab);
    int seen = 0;
    for (int i = 0; i < 2000 && seen < 100; ++i) {
        std::vector<Formula> items{bottom()};
        for (int j = 0; j < 1 + i % 3; ++j)
            items.push_back(dual_can(testing::random_coalition(ab, rng), testing::random_literal(atoms, rng)));
        auto cert = d.reduce(StandardDisjunction::from_formula(disj_all(items), Fragment::CLn));
        if (!cert || cert->witness.kind != Witness::Kind::NeatSubset) continue;
        ++seen;
        auto premise = synthesize(*cert->obligations[0].cert, ab);
        std::size_t premise_len = premise.steps.size();
        if (!canonically_equal(premise.theorem(), cert->obligations[0].formula)) ++premise_len;
        const std::size_t bound = premise_len + 2 + (cert->witness.first.size() - 1);
        auto p = synth_cln(*cert, ab);
        CHECK(check_proof(p).ok);
        CHECK(p.steps.size() <= bound);
    }
    CHECK(seen > 20);
}
