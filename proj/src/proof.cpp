#include "ccsr/proof.hpp"

#include "ccsr/normal_form.hpp"
#include "ccsr/taut.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <json.hpp>

namespace ccsr {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Axiom: return "axiom";
        case Rule::R1: return "r1";
        case Rule::R2: return "r2";
        case Rule::R3: return "r3";
        case Rule::R4: return "r4";
        case Rule::R5: return "r5";
    }
    return "?";
}

std::optional<Rule> parse_rule(std::string_view name) {
    for (auto r : {Rule::Axiom, Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5})
        if (name == rule_name(r)) return r;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

// One-goal modal formula of the system: [A]phi / <A>phi or their binary
// expansion with ({}, false) / ({}, true).
Formula one_goal(Fragment sys, Coalition a, const Formula& phi) {
    return is_negative(sys) ? make_disjunct(sys, a, phi, {}, bottom()) : make_disjunct(sys, a, phi, {}, top());
}

bool is_one_goal(Fragment sys, const Formula& f) {
    if (!is_modal(f) || is_positive_modal(f) == is_negative(sys)) return false;
    return coalition_b(f).empty() && canonically_equal(goal_b(f), is_negative(sys) ? bottom() : top());
}

bool is_binary_goal(Fragment sys, const Formula& f) {
    return is_modal(f) && is_positive_modal(f) != is_negative(sys);
}

std::multiset<std::string> rest_keys(const std::vector<Formula>& items, const std::vector<int>& skip) {
    std::multiset<std::string> out;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) == skip.end()) out.insert(items[i]->key);
    return out;
}

std::string check_schema(const Proof& p, const ProofStep& st, const Formula& premise) {
    const Fragment sys = p.system;
    const bool neg = is_negative(sys);
    const auto before = flatten_disjunction(premise);
    const auto after = flatten_disjunction(st.formula);
    const std::size_t want = st.rule == Rule::R3 ? 2 : 1;
    if (st.source < 0 || static_cast<std::size_t>(st.source) >= before.size())
        return "source disjunct out of range";
    if (st.targets.size() != want) return "wrong number of target disjuncts";
    for (int t : st.targets)
        if (t < 0 || static_cast<std::size_t>(t) >= after.size()) return "target disjunct out of range";
    if (want == 2 && st.targets[0] == st.targets[1]) return "target disjuncts coincide";
    if (rest_keys(before, {st.source}) != rest_keys(after, st.targets))
        return "side disjuncts of premise and conclusion differ";
    const Formula src = before[st.source];
    const Formula t1 = after[st.targets[0]];
    if (st.rule == Rule::R3) {
        const Formula t2 = after[st.targets[1]];
        if (!is_one_goal(sys, src) || goal_a(src)->kind != Kind::Or) return "source is not a one-goal modality over a disjunction";
        if (!is_one_goal(sys, t1) || !is_one_goal(sys, t2)) return "targets are not one-goal modalities";
        const Formula left = goal_a(src)->left, right = goal_a(src)->right;
        if (!canonically_equal(goal_a(t1), left) || !canonically_equal(goal_a(t2), right))
            return "target goals do not split the source goal";
        if (neg) {
            if (!t1->a.disjoint(t2->a)) return "coalitions of the split are not disjoint";
            if ((t1->a | t2->a) != src->a) return "split coalitions do not form the source coalition";
        } else {
            if (t1->a != src->a) return "first target changes the coalition";
            if (t2->a != p.universe.all()) return "second target coalition is not the grand coalition";
        }
        return {};
    }
    if (!is_binary_goal(sys, t1)) return "target is not a modality of the system";
    if (st.rule == Rule::R4) {
        if (!is_one_goal(sys, src)) return "source is not a one-goal modality";
        if (t1->a != src->a) return "target changes the first coalition";
        if (neg) {
            if (!canonically_equal(goal_a(t1), goal_a(src))) return "target first goal differs from the source goal";
        } else {
            if (!canonically_equal(conj(goal_a(t1), goal_b(t1)), goal_a(src)))
                return "source goal is not the conjunction of the target goals";
        }
        return {};
    }
    // R5
    if (neg) {
        if (!is_one_goal(sys, src)) return "source is not a one-goal modality";
        if ((t1->a | coalition_b(t1)) != src->a) return "source coalition is not the union of the target coalitions";
        if (!canonically_equal(disj(goal_a(t1), goal_b(t1)), goal_a(src)))
            return "source goal is not the disjunction of the target goals";
        return {};
    }
    if (src->kind != Kind::And) return "source is not a conjunction";
    const Formula x = src->left, y = src->right;
    if (!is_one_goal(sys, x) || !is_one_goal(sys, y)) return "source conjuncts are not one-goal modalities";
    if (x->a != (t1->a | coalition_b(t1))) return "first conjunct coalition is not the union of the target coalitions";
    if (!canonically_equal(goal_a(x), conj(goal_a(t1), goal_b(t1))))
        return "first conjunct goal is not the conjunction of the target goals";
    if (!y->a.empty()) return "second conjunct coalition is not empty";
    if (!canonically_equal(goal_a(y), goal_a(t1))) return "second conjunct goal is not the first target goal";
    return {};
}

}  // namespace

CheckReport check_proof(const Proof& p) {
    auto fail = [](int step, std::string msg) { return CheckReport{false, step, std::move(msg)}; };
    if (p.steps.empty()) return fail(0, "empty proof");
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
        const auto& st = p.steps[k];
        const int here = static_cast<int>(k) + 1;
        if (st.index != here) return fail(here, "step numbering is not consecutive");
        if (!st.formula) return fail(here, "missing formula");
        if (!admits(p.system, st.formula)) return fail(here, "formula is outside the system's language");
        for (int q : st.premises)
            if (q < 1 || q >= here) return fail(here, "premise index does not refer to an earlier step");
        auto premise = [&](std::size_t i) { return p.steps[st.premises[i] - 1].formula; };
        switch (st.rule) {
            case Rule::Axiom:
                if (!st.premises.empty()) return fail(here, "axiom with premises");
                if (!is_tautology(st.formula)) return fail(here, "axiom is not a tautology under modal abstraction");
                break;
            case Rule::R1: {
                std::vector<Formula> prem;
                for (std::size_t i = 0; i < st.premises.size(); ++i) prem.push_back(premise(i));
                if (!implies_tautologically(prem, st.formula))
                    return fail(here, "r1: premises do not tautologically imply the conclusion");
                break;
            }
            case Rule::R2: {
                if (st.premises.size() != 1) return fail(here, "r2 takes exactly one premise");
                if (!is_one_goal(p.system, st.formula)) return fail(here, "r2: conclusion is not a one-goal modality");
                if (!canonically_equal(st.formula, one_goal(p.system, st.formula->a, premise(0))))
                    return fail(here, "r2: conclusion goal differs from the premise");
                break;
            }
            case Rule::R3: case Rule::R4: case Rule::R5: {
                if ((st.rule == Rule::R4 || st.rule == Rule::R5) && !is_ccsr(p.system))
                    return fail(here, std::string(rule_name(st.rule)) + " is not a rule of this system");
                if (st.premises.size() != 1) return fail(here, std::string(rule_name(st.rule)) + " takes exactly one premise");
                auto why = check_schema(p, st, premise(0));
                if (!why.empty()) return fail(here, std::string(rule_name(st.rule)) + ": " + why);
                break;
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

namespace {

class Synth {
public:
    Synth(Fragment sys, const AgentUniverse& u) : u_(u) {
        proof.system = sys;
        proof.universe = u;
    }

    Proof proof;

    int add(const Formula& f, Rule r, std::vector<int> premises = {}, int source = -1, std::vector<int> targets = {}) {
        if (auto it = have_.find(f->key); it != have_.end()) return it->second;
        int idx = static_cast<int>(proof.steps.size()) + 1;
        proof.steps.push_back({idx, f, r, std::move(premises), source, std::move(targets)});
        have_[f->key] = idx;
        return idx;
    }

    // Makes step `step` the last one, restating its formula if needed.
    void finish(int step) {
        if (step == static_cast<int>(proof.steps.size())) return;
        proof.steps.push_back({static_cast<int>(proof.steps.size()) + 1, formula(step), Rule::R1, {step}, -1, {}});
    }

    int to(const std::vector<int>& premises, const Formula& f) {
        if (premises.size() == 1 && canonically_equal(formula(premises[0]), f)) return premises[0];
        return add(f, Rule::R1, premises);
    }

    [[nodiscard]] Formula formula(int step) const { return proof.steps[step - 1].formula; }

    int cert(const Certificate& c) {
        if (auto it = have_.find(c.formula->key); it != have_.end()) return it->second;
        if (c.sds.empty()) return add(c.formula, Rule::Axiom);
        std::vector<int> parts;
        for (const auto& sd : c.sds) parts.push_back(sd_cert(sd));
        return to(parts, c.formula);
    }

    int obligation(const Obligation& ob) {
        if (!ob.cert) throw DecisionError("proof synthesis: missing premise proof");
        int step = cert(*ob.cert);
        return to({step}, ob.formula);
    }

    int sd_cert(const SdCertificate& c) {
        const Formula target = c.sd.to_formula();
        if (auto it = have_.find(target->key); it != have_.end()) return it->second;
        switch (c.witness.kind) {
            case Witness::Kind::GammaValid: return add(target, Rule::Axiom);
            case Witness::Kind::NeatSubset: return neat_subset_proof(c, target);
            case Witness::Kind::Pivot: return pivot_proof(c, target);
            case Witness::Kind::NeatTuple: return neat_tuple_proof(c, target);
            case Witness::Kind::WellArranged: return well_arranged_proof(c, target);
        }
        throw DecisionError("proof synthesis: unknown witness");
    }

private:
    const AgentUniverse& u_;
    std::unordered_map<std::string, int> have_;

    [[nodiscard]] Fragment sys() const { return proof.system; }
    [[nodiscard]] Formula one(Coalition a, const Formula& phi) const { return one_goal(sys(), a, phi); }

    // The step `cur` proves one(c, pieces[0] | .. | pieces[m-1]) | rest. Splits
    // the goal off piece by piece from the right with R3 and returns the step of
    // the fully split disjunction; `items` receives its disjuncts.
    int peel(int cur, Coalition c, const std::vector<Formula>& pieces, const std::vector<Coalition>& coalitions,
             std::vector<Formula> rest, std::vector<Formula>& items) {
        const bool neg = is_negative(sys());
        for (std::size_t m = pieces.size(); m >= 2; --m) {
            std::vector<Formula> head(pieces.begin(), pieces.begin() + static_cast<long>(m) - 1);
            Coalition left_c = c;
            if (neg) {
                left_c = Coalition{};
                for (std::size_t i = 0; i + 1 < m; ++i) left_c = left_c | coalitions[i];
            }
            Formula t1 = one(left_c, disj_all(head));
            Formula t2 = one(neg ? coalitions[m - 1] : u_.all(), pieces[m - 1]);
            rest.insert(rest.begin(), t2);
            std::vector<Formula> list{t1};
            list.insert(list.end(), rest.begin(), rest.end());
            cur = add(disj_all(list), Rule::R3, {cur}, 0, {0, 1});
        }
        items.clear();
        items.push_back(one(neg ? coalitions[0] : c, pieces[0]));
        items.insert(items.end(), rest.begin(), rest.end());
        return cur;
    }

    // Replace disjunct `from` of `list` by `into` with a single-target rule.
    int rewrite(int cur, std::vector<Formula>& list, const Formula& from, const Formula& into, Rule r) {
        auto it = std::find_if(list.begin(), list.end(), [&](const Formula& x) { return canonically_equal(x, from); });
        if (it == list.end()) throw DecisionError("proof synthesis: disjunct to rewrite not found");
        // List items are modalities or conjunctions, so positions survive flattening.
        const int src = static_cast<int>(it - list.begin());
        *it = into;
        return add(disj_all(list), r, {cur}, src, {src});
    }

    int neat_subset_proof(const SdCertificate& c, const Formula& target) {
        const auto& sd = c.sd;
        const auto& subset = c.witness.first;
        int premise = obligation(c.obligations.at(0));
        std::vector<Formula> pieces;
        std::vector<Coalition> coalitions;
        Coalition all;
        for (int i : subset) {
            pieces.push_back(sd.at_index(i).phi);
            coalitions.push_back(sd.at_index(i).a);
            all = all | sd.at_index(i).a;
        }
        int cur = add(one(all, disj_all(pieces)), Rule::R2, {premise});
        std::vector<Formula> items;
        cur = peel(cur, all, pieces, coalitions, {}, items);
        return to({cur}, target);
    }

    int pivot_proof(const SdCertificate& c, const Formula& target) {
        const auto& sd = c.sd;
        int premise = obligation(c.obligations.at(0));
        std::vector<Formula> pieces{sd.at_index(c.witness.pivot).phi};
        for (int j : c.witness.first) pieces.push_back(sd.at_index(j).phi);
        const Coalition b = sd.at_index(c.witness.pivot).a;
        int cur = add(one(b, disj_all(pieces)), Rule::R2, {premise});
        std::vector<Formula> items;
        cur = peel(cur, b, pieces, {}, {}, items);
        return to({cur}, target);
    }

    int neat_tuple_proof(const SdCertificate& c, const Formula& target) {
        const auto& sd = c.sd;
        int premise = obligation(c.obligations.at(0));
        std::vector<Formula> pieces;
        std::vector<Coalition> coalitions;
        Coalition all;
        for (int i : c.witness.first) {
            pieces.push_back(sd.at_index(i).phi);
            coalitions.push_back(sd.at_index(i).a);
        }
        for (int i : c.witness.second) {
            const auto& d = sd.at_index(i);
            pieces.push_back(disj(d.phi, d.psi));
            coalitions.push_back(d.a | d.b);
        }
        for (auto x : coalitions) all = all | x;
        int cur = add(one(all, disj_all(pieces)), Rule::R2, {premise});
        std::vector<Formula> items;
        cur = peel(cur, all, pieces, coalitions, {}, items);
        std::size_t k = 0;
        for (int i : c.witness.first) {
            const auto& d = sd.at_index(i);
            cur = rewrite(cur, items, items[k++], make_disjunct(sys(), d.a, d.phi, d.b, d.psi), Rule::R4);
        }
        for (int i : c.witness.second) {
            const auto& d = sd.at_index(i);
            cur = rewrite(cur, items, items[k++], make_disjunct(sys(), d.a, d.phi, d.b, d.psi), Rule::R5);
        }
        return to({cur}, target);
    }

    int well_arranged_proof(const SdCertificate& c, const Formula& target) {
        const auto& sd = c.sd;
        const auto& seq = c.witness.sequence;
        const auto& piv = c.witness.pivots;
        const std::size_t L = piv.size();
        if (seq.size() != L + 1 || c.obligations.size() != L + 1)
            throw DecisionError("proof synthesis: malformed well-arranged witness");
        const Coalition all = u_.all();
        auto pair = [&](int j) { return ccsrp_pair(sd, j); };
        auto grand = [&](int j) { return one(all, pair(j)); };
        auto original = [&](int j) {
            const auto& d = sd.at_index(j);
            return make_disjunct(sys(), d.a, d.phi, d.b, d.psi);
        };
        auto minus = [](const std::vector<int>& x, const std::vector<int>& y) {
            std::vector<int> out;
            for (int v : x)
                if (std::find(y.begin(), y.end(), v) == y.end()) out.push_back(v);
            return out;
        };
        const auto& last = seq.back();
        int terminal = obligation(c.obligations.back());
        std::vector<Formula> list;
        int claim = 0;
        if (L == 0) {
            std::vector<Formula> pieces;
            for (int j : last) pieces.push_back(pair(j));
            int cur = add(one(all, disj_all(pieces)), Rule::R2, {terminal});
            cur = peel(cur, all, pieces, {}, {}, list);
            for (int j : last) {
                if (sd.at_index(j).a != all) throw DecisionError("proof synthesis: PI^f member without the grand coalition");
                cur = rewrite(cur, list, grand(j), original(j), Rule::R4);
            }
            return to({cur}, target);
        }
        // Base case: the last pivot.
        {
            const int jl = piv[L - 1];
            std::vector<Formula> pieces{pair(jl)};
            for (int j : seq[L - 1]) pieces.push_back(pair(j));
            int reordered = to({terminal}, disj_all(pieces));
            const Coalition a = sd.at_index(jl).a;
            int cur = add(one(a, disj_all(pieces)), Rule::R2, {reordered});
            cur = peel(cur, a, pieces, {}, {}, list);
            claim = rewrite(cur, list, one(a, pair(jl)), original(jl), Rule::R4);
        }
        // Reverse induction from m = L-1 down to 1.
        for (std::size_t m = L - 1; m >= 1; --m) {
            const int jm = piv[m - 1];
            const auto& prev = seq[m - 1];
            const auto& d = sd.at_index(jm);
            if ((d.a | d.b) != all) throw DecisionError("proof synthesis: pivot outside PI^fs");
            int expansion = obligation(c.obligations[m - 1]);
            std::vector<Formula> pieces{d.phi};
            for (int j : prev) pieces.push_back(pair(j));
            int cur = add(one(Coalition{}, disj_all(pieces)), Rule::R2, {expansion});
            std::vector<Formula> five;
            cur = peel(cur, Coalition{}, pieces, {}, {}, five);
            const auto tail = minus(last, seq[m]);
            for (int j : tail) five.push_back(original(j));
            int weakened = to({cur}, disj_all(five));
            // Glue the claim and the weakened expansion.
            std::vector<Formula> seven;
            for (int j : prev) seven.push_back(grand(j));
            const Formula glued = conj(grand(jm), one(Coalition{}, d.phi));
            seven.push_back(glued);
            for (int j : tail) seven.push_back(original(j));
            int seven_step = add(disj_all(seven), Rule::R1, {weakened, claim});
            claim = rewrite(seven_step, seven, glued, original(jm), Rule::R5);
            list = seven;
            auto expected = minus(last, prev);
            auto have = tail;
            have.push_back(jm);
            std::sort(expected.begin(), expected.end());
            std::sort(have.begin(), have.end());
            if (expected != have) throw DecisionError("proof synthesis: index bookkeeping broke in the reverse induction");
        }
        // Claim for k = 0: grand-coalition disjuncts of PI^f remain.
        int cur = claim;
        for (int j : seq[0]) {
            if (sd.at_index(j).a != all) throw DecisionError("proof synthesis: PI^f member without the grand coalition");
            cur = rewrite(cur, list, grand(j), original(j), Rule::R4);
        }
        return to({cur}, target);
    }
};

}  // namespace

Proof synthesize(const Certificate& cert, const AgentUniverse& u) {
    Synth s(cert.fragment, u);
    s.finish(s.cert(cert));
    return s.proof;
}

Proof synthesize_sd(const SdCertificate& cert, const AgentUniverse& u) {
    Synth s(cert.sd.fragment, u);
    s.finish(s.sd_cert(cert));
    return s.proof;
}

namespace {

Proof synth_for(Fragment frag, const SdCertificate& cert, const AgentUniverse& u) {
    if (cert.sd.fragment != frag) throw FragmentError(std::string("expected a certificate for ") + fragment_name(frag));
    return synthesize_sd(cert, u);
}

}  // namespace

Proof synth_cln(const SdCertificate& cert, const AgentUniverse& u) { return synth_for(Fragment::CLn, cert, u); }
Proof synth_clp(const SdCertificate& cert, const AgentUniverse& u) { return synth_for(Fragment::CLp, cert, u); }
Proof synth_ccsrn(const SdCertificate& cert, const AgentUniverse& u) { return synth_for(Fragment::CCSRn, cert, u); }
Proof synth_ccsrp(const SdCertificate& cert, const AgentUniverse& u) { return synth_for(Fragment::CCSRp, cert, u); }

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string proof_to_json_text(const Proof& p) {
    using nlohmann::json;
    json doc;
    doc["system"] = fragment_name(p.system);
    doc["agents"] = p.universe.agents();
    json steps = json::array();
    for (const auto& st : p.steps) {
        json params = json::object();
        if (st.source >= 0) params["source"] = st.source;
        if (!st.targets.empty()) params["targets"] = st.targets;
        steps.push_back({{"i", st.index},
                         {"formula", print(st.formula, p.universe)},
                         {"rule", rule_name(st.rule)},
                         {"premises", st.premises},
                         {"params", params}});
    }
    doc["steps"] = steps;
    return doc.dump(2);
}

Proof proof_from_json_text(const std::string& text, const AgentUniverse* fallback) {
    using nlohmann::json;
    Proof p;
    try {
        auto doc = json::parse(text);
        auto sys = parse_fragment(doc.at("system").get<std::string>());
        if (!sys) throw ProofFormatError("unknown proof system");
        p.system = *sys;
        if (doc.contains("agents"))
            p.universe = AgentUniverse(doc["agents"].get<std::vector<std::string>>());
        else if (fallback)
            p.universe = *fallback;
        else
            throw ProofFormatError("proof file names no agents; pass them explicitly");
        for (const auto& st : doc.at("steps")) {
            ProofStep step;
            step.index = st.at("i").get<int>();
            step.formula = parse(st.at("formula").get<std::string>(), p.universe);
            auto rule = parse_rule(st.at("rule").get<std::string>());
            if (!rule) throw ProofFormatError("unknown rule '" + st.at("rule").get<std::string>() + "'");
            step.rule = *rule;
            step.premises = st.value("premises", std::vector<int>{});
            auto params = st.value("params", json::object());
            step.source = params.value("source", -1);
            step.targets = params.value("targets", std::vector<int>{});
            p.steps.push_back(std::move(step));
        }
    } catch (const json::exception& e) {
        throw ProofFormatError(std::string("malformed proof file: ") + e.what());
    }
    return p;
}

}  // namespace ccsr
