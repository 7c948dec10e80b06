#include "ccsr/game_form.hpp"

#include "ccsr/checker.hpp"
#include "ccsr/validity.hpp"

#include <algorithm>
#include <set>

namespace ccsr {

Coalition domain_of(const AlphaAction& sigma) {
    Coalition c;
    for (std::size_t a = 0; a < sigma.size(); ++a)
        if (sigma[a]) c = c | Coalition::single(a);
    return c;
}

std::vector<AlphaAction> all_alpha_actions(const std::vector<int>& alphabet, std::size_t agents) {
    std::vector<AlphaAction> acc{AlphaAction{}};
    for (std::size_t a = 0; a < agents; ++a) {
        std::vector<AlphaAction> next;
        for (const auto& partial : acc) {
            auto skip = partial;
            skip.push_back(std::nullopt);
            next.push_back(std::move(skip));
            for (int x : alphabet) {
                auto p = partial;
                p.push_back(x);
                next.push_back(std::move(p));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

std::string profile_name(const AlphaAction& sigma) {
    std::string out;
    for (std::size_t a = 0; a < sigma.size(); ++a) {
        if (a) out += ",";
        out += sigma[a] ? std::to_string(*sigma[a]) : "_";
    }
    return out;
}

namespace {

// Agents of c all choose the value `index` in sigma.
bool coincide(const AlphaAction& sigma, Coalition c, int index) {
    for (auto a : c.members())
        if (a >= sigma.size() || !sigma[a] || *sigma[a] != index) return false;
    return true;
}

std::vector<Formula> unique_formulas(const std::vector<Formula>& in) {
    std::vector<Formula> out;
    std::set<std::string> seen;
    for (const auto& f : in)
        if (seen.insert(f->key).second) out.push_back(f);
    return out;
}

std::vector<int> sd_alphabet(const StandardDisjunction& sd) {
    std::vector<int> out;
    for (const auto& d : sd.disjuncts) out.push_back(d.index);
    return out;
}

void require_irreducible(const StandardDisjunction& sd, Decider& d, Fragment frag) {
    if (sd.fragment != frag) throw FragmentError(std::string("expected a disjunction of ") + fragment_name(frag));
    if (d.reduce(sd)) throw DecisionError("abstract game form requested for a valid standard disjunction");
}

}  // namespace

std::vector<int> coin(const StandardDisjunction& sd, const AlphaAction& sigma) {
    std::vector<int> out;
    for (const auto& d : sd.disjuncts)
        if (coincide(sigma, d.a, d.index)) out.push_back(d.index);
    return out;
}

std::vector<int> coinf(const StandardDisjunction& sd, const AlphaAction& sigma) { return coin(sd, sigma); }

std::vector<int> coinfs(const StandardDisjunction& sd, const AlphaAction& sigma) {
    std::vector<int> out;
    for (const auto& d : sd.disjuncts)
        if (coincide(sigma, d.a | d.b, d.index)) out.push_back(d.index);
    return out;
}

int rej(const AlphaAction& sigma, int n) {
    if (n <= 0) throw std::invalid_argument("rej: empty index set");
    long sum = 0;
    for (const auto& x : sigma)
        if (x) sum += *x;
    return static_cast<int>(((sum % n) + n) % n) + 1;
}

AbstractGameForm agf_cln(const StandardDisjunction& sd, Decider& d) {
    require_irreducible(sd, d, Fragment::CLn);
    std::vector<Formula> neg;
    for (const auto& m : sd.disjuncts) neg.push_back(dualize(m.phi));
    AbstractGameForm agf;
    agf.alphabet = sd_alphabet(sd);
    agf.force = [sd, neg](const AlphaAction& sigma) {
        auto hit = coin(sd, sigma);
        if (!neat_subset(sd, hit)) throw DecisionError("internal: coin set is not neat");
        std::vector<Formula> out;
        for (int i : hit) out.push_back(neg[sd.position_of(i)]);
        return unique_formulas(out);
    };
    return agf;
}

AbstractGameForm agf_clp(const StandardDisjunction& sd, Decider& d) {
    require_irreducible(sd, d, Fragment::CLp);
    const AgentUniverse& u = d.universe();
    std::vector<Formula> neg;
    for (const auto& m : sd.disjuncts) neg.push_back(dualize(m.phi));
    std::vector<Formula> base;
    for (int j : clp_base(sd, u)) base.push_back(neg[sd.position_of(j)]);
    const int n = static_cast<int>(sd.disjuncts.size());
    const Coalition all = u.all();
    AbstractGameForm agf;
    agf.alphabet = sd_alphabet(sd);
    agf.force = [sd, neg, base, n, all](const AlphaAction& sigma) {
        auto out = base;
        if (domain_of(sigma) == all) out.push_back(neg[sd.position_of(rej(sigma, n))]);
        return unique_formulas(out);
    };
    return agf;
}

AbstractGameForm agf_ccsrn(const StandardDisjunction& sd, Decider& d) {
    require_irreducible(sd, d, Fragment::CCSRn);
    std::vector<Formula> neg_phi, neg_both;
    for (const auto& m : sd.disjuncts) {
        neg_phi.push_back(dualize(m.phi));
        neg_both.push_back(dualize(disj(m.phi, m.psi)));
    }
    AbstractGameForm agf;
    agf.alphabet = sd_alphabet(sd);
    agf.force = [sd, neg_phi, neg_both](const AlphaAction& sigma) {
        auto first = coinf(sd, sigma);
        auto second = coinfs(sd, sigma);
        if (!neat_tuple(sd, first, second)) throw DecisionError("internal: coin pair is not neat");
        std::vector<Formula> out;
        for (int i : first) out.push_back(neg_phi[sd.position_of(i)]);
        for (int i : second) out.push_back(neg_both[sd.position_of(i)]);
        return unique_formulas(out);
    };
    return agf;
}

AbstractGameForm agf_ccsrp(const StandardDisjunction& sd, const std::vector<int>& pi_star, Decider& d) {
    require_irreducible(sd, d, Fragment::CCSRp);
    const AgentUniverse& u = d.universe();
    const Formula terminal = ccsrp_terminal(sd, pi_star);
    std::vector<Formula> base;
    for (int j : pi_star) base.push_back(dualize(ccsrp_pair(sd, j)));
    // Extra obligations of a grand profile whose rejected index is k.
    std::vector<std::vector<Formula>> extra;
    for (const auto& m : sd.disjuncts) {
        const Formula pair = ccsrp_pair(sd, m.index);
        if (!d.valid(disj(terminal, m.phi), Fragment::CCSRp))
            extra.push_back({dualize(m.phi), dualize(pair)});
        else if (!d.valid(disj(terminal, pair), Fragment::CCSRp))
            extra.push_back({dualize(pair)});
        else
            extra.emplace_back();
    }
    const int n = static_cast<int>(sd.disjuncts.size());
    const Coalition all = u.all();
    AbstractGameForm agf;
    agf.alphabet = sd_alphabet(sd);
    agf.force = [sd, base, extra, n, all](const AlphaAction& sigma) {
        auto out = base;
        if (domain_of(sigma) == all) {
            const auto& more = extra[sd.position_of(rej(sigma, n))];
            out.insert(out.end(), more.begin(), more.end());
        }
        return unique_formulas(out);
    };
    return agf;
}

bool regularity_check(const AbstractGameForm& agf, Decider& d) {
    const std::size_t k = d.universe().size();
    for (const auto& sigma : all_alpha_actions(agf.alphabet, k)) {
        const auto here = agf.force(sigma);
        std::set<std::string> keys;
        for (const auto& f : here) keys.insert(f->key);
        for (std::size_t a = 0; a < k; ++a) {
            if (sigma[a]) continue;
            for (int x : agf.alphabet) {
                auto wider = sigma;
                wider[a] = x;
                std::set<std::string> above;
                for (const auto& f : agf.force(wider)) above.insert(f->key);
                if (!std::includes(above.begin(), above.end(), keys.begin(), keys.end())) return false;
            }
        }
        if (!d.sat_construct(conj_all(here))) return false;
    }
    return true;
}

PointedCgm realize(const AbstractGameForm& agf, const ElementaryConjunction& gamma_prime, Decider& d) {
    if (!gamma_prime.satisfiable()) throw RealizationError("realize: elementary conjunction is unsatisfiable");
    if (agf.alphabet.empty()) throw RealizationError("realize: empty action alphabet");
    const AgentUniverse& u = d.universe();
    const std::size_t k = u.size();
    CgmBuilder b(u);
    const int s0 = b.add_state("s0");
    std::vector<int> alpha_ids;
    for (int x : agf.alphabet) alpha_ids.push_back(b.add_action(std::to_string(x)));
    for (std::size_t a = 0; a < k; ++a) b.set_menu(s0, a, alpha_ids);

    std::vector<AlphaAction> grand{AlphaAction{}};
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<AlphaAction> next;
        for (const auto& partial : grand)
            for (int x : agf.alphabet) {
                auto p = partial;
                p.push_back(x);
                next.push_back(std::move(p));
            }
        grand = std::move(next);
    }
    auto action_id = [&](int x) {
        return alpha_ids[static_cast<std::size_t>(std::find(agf.alphabet.begin(), agf.alphabet.end(), x) -
                                                  agf.alphabet.begin())];
    };
    for (const auto& sigma : grand) {
        auto sub = d.sat_construct(conj_all(agf.force(sigma)));
        if (!sub) throw RealizationError("realize: force set of profile (" + profile_name(sigma) + ") is unsatisfiable");
        const std::string prefix = "s0/" + profile_name(sigma) + "/";
        const Cgm& m = sub->model;
        std::vector<int> sid, aid;
        for (const auto& st : m.states) sid.push_back(b.add_state(prefix + st));
        for (const auto& act : m.actions) aid.push_back(b.add_action(prefix + act));
        for (std::size_t s = 0; s < m.states.size(); ++s) {
            for (std::size_t a = 0; a < k; ++a) {
                std::vector<int> acts;
                for (int act : m.menu[s][a]) acts.push_back(aid[act]);
                b.set_menu(sid[s], a, acts);
            }
            for (const auto& [profile, target] : m.outcome[s]) {
                std::vector<int> mapped;
                for (int act : profile) mapped.push_back(aid[act]);
                b.set_outcome(sid[s], mapped, sid[target]);
            }
            auto it = m.label.find(m.states[s]);
            if (it != m.label.end())
                for (const auto& p : it->second) b.add_label(sid[s], p);
        }
        std::vector<int> profile;
        for (const auto& x : sigma) profile.push_back(action_id(*x));
        b.set_outcome(s0, profile, sid[sub->point]);
    }
    for (const auto& l : gamma_prime.literals)
        if (l.positive) b.add_label(s0, l.atom);

    PointedCgm pm{b.build(), s0};
    // The four realization conditions.
    ModelChecker mc(pm.model);
    for (int x : agf.alphabet)
        if (pm.model.action_index(std::to_string(x)) < 0) throw RealizationError("realize: alphabet action missing");
    auto sorted_alpha = alpha_ids;
    std::sort(sorted_alpha.begin(), sorted_alpha.end());
    for (std::size_t a = 0; a < k; ++a)
        if (pm.model.menu[s0][a] != sorted_alpha) throw RealizationError("realize: root menu differs from the alphabet");
    if (!mc.holds(s0, gamma_prime.to_formula())) throw RealizationError("realize: root does not satisfy gamma'");
    for (const auto& sigma : all_alpha_actions(agf.alphabet, k)) {
        std::vector<int> positions(k, -1);
        for (std::size_t a = 0; a < k; ++a)
            if (sigma[a]) positions[a] = action_id(*sigma[a]);
        for (const auto& g : agf.force(sigma))
            if (!mc.leadsto(s0, positions, g))
                throw RealizationError("realize: joint action (" + profile_name(sigma) + ") does not guarantee " +
                                       print(g, u));
    }
    return pm;
}

}  // namespace ccsr
