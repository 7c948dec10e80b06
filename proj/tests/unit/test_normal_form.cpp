#include <doctest.h>

#include "ccsr/checker.hpp"
#include "ccsr/normal_form.hpp"
#include "ccsr/taut.hpp"
#include "support.hpp"

using namespace ccsr;

namespace {
const AgentUniverse ab = parse_agents("a,b");
Formula f_(const char* text) { return parse(text, ab); }
}  // namespace

TEST_CASE("tautology checking under modal abstraction") {
    CHECK(is_tautology(f_("p | ~p")));
    CHECK_FALSE(is_tautology(f_("p")));
    CHECK(is_tautology(f_("p | q | ~p & ~q")));
    CHECK(is_tautology(f_("[{a}]p | ~q | q")));
    CHECK_FALSE(is_tautology(f_("[{a}]p | [{a}]~p")));
    // Canonically equal modal formulas share one abstraction atom.
    CHECK(implies_tautologically({f_("<{a}>p")}, f_("<{a}:p;{}:true>")));
    CHECK(implies_tautologically({f_("p"), f_("q")}, f_("p & q")));
    CHECK_FALSE(implies_tautologically({f_("p | q")}, f_("p")));
    auto atoms = satisfying_atoms(f_("p & ~q"));
    REQUIRE(atoms);
    CHECK(*atoms == std::set<std::string>{"p"});
    CHECK_FALSE(satisfying_atoms(f_("p & ~p")));
}

TEST_CASE("large skeletons use the splitting path") {
    std::vector<Formula> items;
    for (int i = 0; i < 20; ++i) items.push_back(atom("x" + std::to_string(i)));
    Formula big = disj_all(items);
    CHECK_FALSE(is_tautology(big));
    CHECK(is_tautology(disj(big, neg_atom("x7"))));
}

TEST_CASE("clauses over modal atoms") {
    auto r = cnf_over_modal_atoms(f_("(p & q) | r"));
    CHECK(r.clauses.size() == 2);
    CHECK_FALSE(r.pruned);
    auto t = cnf_over_modal_atoms(f_("p | ~p"));
    CHECK(t.clauses.empty());
    CHECK(t.pruned);
    auto m = cnf_over_modal_atoms(f_("false | [{a}]p"));
    REQUIRE(m.clauses.size() == 1);
    CHECK(m.clauses[0].size() == 1);
    CHECK(m.clauses[0][0].modal);
}

TEST_CASE("standard conjunction") {
    auto sds = to_standard_conjunction(f_("(p | [{a}]q) & r"), Fragment::CLn);
    REQUIRE(sds.size() == 2);
    CHECK(sds[0].gamma.literals == std::vector<Literal>{{"p", true}});
    REQUIRE(sds[0].disjuncts.size() == 1);
    CHECK(sds[0].disjuncts[0].index == -1);
    CHECK(print(sds[0].disjuncts[0].phi, ab) == "q");
    CHECK(sds[1].disjuncts.empty());
    CHECK(to_standard_conjunction(top(), Fragment::CLn).empty());
    auto sd = f_("false | [{a}]p | [{b}]~p | [*]q");
    auto one = to_standard_conjunction(sd, Fragment::CLn);
    REQUIRE(one.size() == 1);
    CHECK(canonically_equal(one[0].to_formula(), sd));
    auto pos = to_standard_conjunction(f_("<{a}:p;{b}:q> | <{}>r"), Fragment::CCSRp);
    REQUIRE(pos.size() == 1);
    CHECK(pos[0].disjuncts[0].index == 1);
    CHECK(pos[0].disjuncts[1].index == 2);
}

TEST_CASE("normal form is equivalent and keeps depth") {
    testing::Rng rng(8);
    const std::vector<std::string> atoms{"p", "q"};
    for (auto frag : {Fragment::CLn, Fragment::CLp, Fragment::CCSRn, Fragment::CCSRp})
        for (int i = 0; i < 60; ++i) {
            auto f = testing::random_formula(frag, ab, atoms, {2, 3, 0.6}, rng);
            auto sds = to_standard_conjunction(f, frag);
            std::vector<Formula> parts;
            int depth = 0;
            for (const auto& sd : sds) {
                parts.push_back(sd.to_formula());
                depth = std::max(depth, sd.depth());
                CHECK(admits(frag, sd.to_formula()));
            }
            Formula g = conj_all(parts);
            const bool pruned = cnf_over_modal_atoms(is_ccsr(frag) ? desugar(f) : f).pruned;
            if (pruned)
                CHECK(depth <= modal_depth(f));
            else
                CHECK(depth == modal_depth(f));
            for (int m = 0; m < 5; ++m) {
                Cgm model = testing::random_model(ab, 2, 2, atoms, rng);
                ModelChecker mc(model);
                CHECK(mc.truth(f) == mc.truth(g));
            }
        }
}
