#include "ccsr/validity.hpp"

#include "ccsr/checker.hpp"
#include "ccsr/game_form.hpp"
#include "ccsr/taut.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

namespace ccsr {

namespace {

Witness witness_of(Witness::Kind kind) {
    Witness w;
    w.kind = kind;
    return w;
}

std::string set_text(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
}

Formula phi_of(const StandardDisjunction& sd, int index) { return sd.at_index(index).phi; }

std::vector<int> indices_of_mask(const StandardDisjunction& sd, std::uint64_t mask) {
    std::vector<int> out;
    for (std::size_t p = 0; p < sd.disjuncts.size(); ++p)
        if ((mask >> p) & 1U) out.push_back(sd.disjuncts[p].index);
    return out;
}

}  // namespace

std::string Witness::describe() const {
    switch (kind) {
        case Kind::GammaValid: return "gamma-valid";
        case Kind::NeatSubset: return "neat-subset NI'=" + set_text(first);
        case Kind::Pivot: return "pivot PI0=" + set_text(first) + " j'=" + std::to_string(pivot);
        case Kind::NeatTuple: return "neat-tuple NI1=" + set_text(first) + " NI2=" + set_text(second);
        case Kind::WellArranged: {
            std::string out = "well-arranged (";
            for (std::size_t i = 0; i < sequence.size(); ++i) out += (i ? "," : "") + set_text(sequence[i]);
            out += ") pivots ";
            for (std::size_t i = 0; i < pivots.size(); ++i) out += (i ? "," : "") + std::to_string(pivots[i]);
            if (pivots.empty()) out += "none";
            return out;
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Obligation formulas and side conditions
// ---------------------------------------------------------------------------

Formula cln_obligation(const StandardDisjunction& sd, const std::vector<int>& subset) {
    std::vector<Formula> items;
    for (int i : subset) items.push_back(phi_of(sd, i));
    return disj_all(items);
}

Formula clp_obligation(const StandardDisjunction& sd, const std::vector<int>& base, int pivot) {
    std::vector<Formula> items{phi_of(sd, pivot)};
    for (int j : base) items.push_back(phi_of(sd, j));
    return disj_all(items);
}

Formula ccsrn_obligation(const StandardDisjunction& sd, const std::vector<int>& ni1, const std::vector<int>& ni2) {
    std::vector<Formula> items;
    for (int i : ni1) items.push_back(phi_of(sd, i));
    for (int i : ni2) items.push_back(disj(sd.at_index(i).phi, sd.at_index(i).psi));
    return disj_all(items);
}

Formula ccsrp_pair(const StandardDisjunction& sd, int index) {
    const auto& d = sd.at_index(index);
    return conj(d.phi, d.psi);
}

Formula ccsrp_expansion(const StandardDisjunction& sd, const std::vector<int>& set, int pivot) {
    std::vector<Formula> items{phi_of(sd, pivot)};
    for (int j : set) items.push_back(ccsrp_pair(sd, j));
    return disj_all(items);
}

Formula ccsrp_terminal(const StandardDisjunction& sd, const std::vector<int>& set) {
    std::vector<Formula> items;
    for (int j : set) items.push_back(ccsrp_pair(sd, j));
    return disj_all(items);
}

bool neat_subset(const StandardDisjunction& sd, const std::vector<int>& subset) {
    for (std::size_t x = 0; x < subset.size(); ++x)
        for (std::size_t y = x + 1; y < subset.size(); ++y) {
            if (subset[x] == subset[y]) continue;
            if (!sd.at_index(subset[x]).a.disjoint(sd.at_index(subset[y]).a)) return false;
        }
    for (int i : subset) (void)sd.at_index(i);
    return true;
}

bool neat_tuple(const StandardDisjunction& sd, const std::vector<int>& ni1, const std::vector<int>& ni2) {
    auto whole = [&](int i) { return sd.at_index(i).a | sd.at_index(i).b; };
    for (int i : ni1)
        for (int j : ni1)
            if (i != j && !sd.at_index(i).a.disjoint(sd.at_index(j).a)) return false;
    for (int i : ni2)
        for (int j : ni2)
            if (i != j && !whole(i).disjoint(whole(j))) return false;
    for (int i : ni1)
        for (int j : ni2)
            if (i != j && !sd.at_index(i).a.disjoint(whole(j))) return false;
    return true;
}

std::vector<int> clp_base(const StandardDisjunction& sd, const AgentUniverse& u) {
    std::vector<int> out;
    for (const auto& d : sd.disjuncts)
        if (d.a == u.all()) out.push_back(d.index);
    return out;
}

std::vector<int> ccsrp_pi_f(const StandardDisjunction& sd, const AgentUniverse& u) { return clp_base(sd, u); }

std::vector<int> ccsrp_pi_fs(const StandardDisjunction& sd, const AgentUniverse& u) {
    std::vector<int> out;
    for (const auto& d : sd.disjuncts)
        if ((d.a | d.b) == u.all()) out.push_back(d.index);
    return out;
}

// ---------------------------------------------------------------------------
// Decider
// ---------------------------------------------------------------------------

Decider::Decider(AgentUniverse u) : u_(std::move(u)) {}

CertPtr Decider::prove(const Formula& f, Fragment frag) {
    if (!admits(frag, f)) throw FragmentError(std::string("formula is not in fragment ") + fragment_name(frag));
    const Formula g = is_ccsr(frag) ? desugar(f) : f;
    const std::string key = std::string(fragment_name(frag)) + "|" + g->key;
    if (auto it = proved_.find(key); it != proved_.end()) return it->second;
    CertPtr result;
    if (modal_depth(g) == 0) {
        if (is_tautology(g)) result = std::make_shared<Certificate>(Certificate{g, frag, {}});
    } else {
        auto cert = std::make_shared<Certificate>(Certificate{g, frag, {}});
        bool ok = true;
        for (const auto& sd : to_standard_conjunction(g, frag)) {
            auto r = reduce(sd);
            if (!r) {
                ok = false;
                break;
            }
            cert->sds.push_back(std::move(*r));
        }
        if (ok) result = cert;
    }
    proved_[key] = result;
    return result;
}

CertPtr Decider::obligation(const Formula& f, const StandardDisjunction& sd) {
    if (modal_depth(f) >= sd.depth())
        throw DecisionError("internal: reduction obligation does not decrease modal depth");
    if (!admits(sd.fragment, f)) throw DecisionError("internal: reduction obligation left its fragment");
    return prove(f, sd.fragment);
}

std::optional<SdCertificate> Decider::reduce(const StandardDisjunction& sd) {
    if (sd.gamma.valid()) return SdCertificate{sd, witness_of(Witness::Kind::GammaValid), {}};
    switch (sd.fragment) {
        case Fragment::CLn: return reduce_cln(sd);
        case Fragment::CLp: return reduce_clp(sd);
        case Fragment::CCSRn: return reduce_ccsrn(sd);
        case Fragment::CCSRp: return reduce_ccsrp(sd);
    }
    return std::nullopt;
}

std::optional<SdCertificate> Decider::reduce_cln(const StandardDisjunction& sd) {
    const std::size_t n = sd.disjuncts.size();
    if (n >= 30) throw DecisionError("too many modal disjuncts in one standard disjunction");
    const std::uint64_t full = std::uint64_t{1} << n;
    std::vector<char> neat(full, 0);
    neat[0] = 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
        // Extend a neat set by its highest member.
        int top_bit = 63 - std::countl_zero(mask);
        std::uint64_t rest = mask & ~(std::uint64_t{1} << top_bit);
        if (!neat[rest]) continue;
        Coalition used;
        for (std::size_t p = 0; p < n; ++p)
            if ((rest >> p) & 1U) used = used | sd.disjuncts[p].a;
        neat[mask] = used.disjoint(sd.disjuncts[top_bit].a);
    }
    // Validity is monotone in the subset, so only maximal neat subsets can be
    // first in the decreasing-size order.
    std::vector<std::vector<int>> maximal;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
        if (!neat[mask]) continue;
        bool is_max = true;
        for (std::size_t p = 0; p < n && is_max; ++p)
            if (!((mask >> p) & 1U) && neat[mask | (std::uint64_t{1} << p)]) is_max = false;
        if (is_max) maximal.push_back(indices_of_mask(sd, mask));
    }
    auto position_list = [&](const std::vector<int>& s) {
        std::vector<std::size_t> out;
        for (int i : s) out.push_back(sd.position_of(i));
        return out;
    };
    std::sort(maximal.begin(), maximal.end(), [&](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        return position_list(x) < position_list(y);
    });
    for (const auto& subset : maximal) {
        Formula f = cln_obligation(sd, subset);
        if (auto c = obligation(f, sd)) {
            Witness w = witness_of(Witness::Kind::NeatSubset);
            w.first = subset;
            return SdCertificate{sd, w, {{f, c}}};
        }
    }
    return std::nullopt;
}

std::optional<SdCertificate> Decider::reduce_clp(const StandardDisjunction& sd) {
    const auto base = clp_base(sd, u_);
    for (const auto& d : sd.disjuncts) {
        Formula f = clp_obligation(sd, base, d.index);
        if (auto c = obligation(f, sd)) {
            Witness w = witness_of(Witness::Kind::Pivot);
            w.first = base;
            w.pivot = d.index;
            return SdCertificate{sd, w, {{f, c}}};
        }
    }
    return std::nullopt;
}

std::optional<SdCertificate> Decider::reduce_ccsrn(const StandardDisjunction& sd) {
    const std::size_t n = sd.disjuncts.size();
    if (n > 12) throw DecisionError("too many modal disjuncts in one standard disjunction");
    // level 0: unused, 1: NI1, 2: NI2
    struct Candidate {
        std::vector<int> level;
        std::size_t size;
    };
    auto split = [&](const std::vector<int>& level) {
        std::pair<std::vector<int>, std::vector<int>> out;
        for (std::size_t p = 0; p < n; ++p) {
            if (level[p] == 1) out.first.push_back(sd.disjuncts[p].index);
            if (level[p] == 2) out.second.push_back(sd.disjuncts[p].index);
        }
        return out;
    };
    auto is_neat = [&](const std::vector<int>& level) {
        auto [a, b] = split(level);
        return neat_tuple(sd, a, b);
    };
    std::vector<Candidate> all;
    std::vector<int> level(n, 0);
    std::function<void(std::size_t)> gen = [&](std::size_t p) {
        if (p == n) {
            std::size_t size = n - static_cast<std::size_t>(std::count(level.begin(), level.end(), 0));
            if (size > 0 && is_neat(level)) all.push_back({level, size});
            return;
        }
        for (int v : {1, 2, 0}) {
            level[p] = v;
            gen(p + 1);
        }
        level[p] = 0;
    };
    gen(0);
    auto formula_of = [&](const std::vector<int>& lv) {
        auto [a, b] = split(lv);
        return ccsrn_obligation(sd, a, b);
    };
    // Existence check on the candidates no single upgrade can strengthen.
    bool any = false;
    for (const auto& c : all) {
        bool is_max = true;
        for (std::size_t p = 0; p < n && is_max; ++p)
            for (int up = c.level[p] + 1; up <= 2 && is_max; ++up) {
                auto lv = c.level;
                lv[p] = up;
                if (is_neat(lv)) is_max = false;
            }
        if (is_max && obligation(formula_of(c.level), sd)) {
            any = true;
            break;
        }
    }
    if (!any) return std::nullopt;
    // Candidates were generated with NI1 before NI2 before unused at each
    // position; a stable sort by size keeps that order within a size class.
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.size > y.size; });
    for (const auto& c : all) {
        Formula f = formula_of(c.level);
        if (auto cert = obligation(f, sd)) {
            Witness w = witness_of(Witness::Kind::NeatTuple);
            std::tie(w.first, w.second) = split(c.level);
            return SdCertificate{sd, w, {{f, cert}}};
        }
    }
    throw DecisionError("internal: neat-tuple search lost its witness");
}

std::optional<SdCertificate> Decider::reduce_ccsrp(const StandardDisjunction& sd) {
    const std::size_t n = sd.disjuncts.size();
    if (n >= 30) throw DecisionError("too many modal disjuncts in one standard disjunction");
    std::uint64_t fs_mask = 0, f_mask = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const auto& d = sd.disjuncts[p];
        if (d.a == u_.all()) f_mask |= std::uint64_t{1} << p;
        if ((d.a | d.b) == u_.all()) fs_mask |= std::uint64_t{1} << p;
    }
    std::set<std::uint64_t> failed;
    std::vector<std::uint64_t> path;
    std::vector<int> pivots;
    std::vector<Obligation> expansions;
    Obligation terminal;

    std::function<bool(std::uint64_t)> visit = [&](std::uint64_t s) -> bool {
        if (failed.count(s)) return false;
        const auto set = indices_of_mask(sd, s);
        if (!set.empty()) {
            Formula t = ccsrp_terminal(sd, set);
            if (auto c = obligation(t, sd)) {
                path.push_back(s);
                terminal = {t, c};
                return true;
            }
        }
        if ((s & ~fs_mask) == 0) {
            for (std::size_t p = 0; p < n; ++p) {
                if ((s >> p) & 1U) continue;
                const int j = sd.disjuncts[p].index;
                Formula e = ccsrp_expansion(sd, set, j);
                auto c = obligation(e, sd);
                if (!c) continue;
                path.push_back(s);
                pivots.push_back(j);
                expansions.push_back({e, c});
                if (visit(s | (std::uint64_t{1} << p))) return true;
                path.pop_back();
                pivots.pop_back();
                expansions.pop_back();
            }
        }
        failed.insert(s);
        return false;
    };
    if (!visit(f_mask)) return std::nullopt;
    Witness w = witness_of(Witness::Kind::WellArranged);
    for (auto s : path) w.sequence.push_back(indices_of_mask(sd, s));
    w.pivots = pivots;
    auto obligations = expansions;
    obligations.push_back(terminal);
    return SdCertificate{sd, w, obligations};
}

std::optional<std::vector<int>> Decider::ccsrp_first_condition_failure(const StandardDisjunction& sd) {
    if (sd.gamma.valid()) return std::nullopt;
    const auto pf = ccsrp_pi_f(sd, u_);
    const auto pfs = ccsrp_pi_fs(sd, u_);
    std::vector<int> free;
    for (int j : pfs)
        if (std::find(pf.begin(), pf.end(), j) == pf.end()) free.push_back(j);
    const std::uint64_t count = std::uint64_t{1} << free.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<int> star = pf;
        for (std::size_t i = 0; i < free.size(); ++i)
            if ((mask >> i) & 1U) star.push_back(free[i]);
        std::sort(star.begin(), star.end());
        Formula t = ccsrp_terminal(sd, star);
        if (obligation(t, sd)) continue;
        bool held = false;
        for (const auto& d : sd.disjuncts) {
            if (std::find(star.begin(), star.end(), d.index) != star.end()) continue;
            if (obligation(disj(t, ccsrp_pair(sd, d.index)), sd)) held = true;
            else if ((d.a | d.b) == u_.all() && obligation(disj(t, d.phi), sd)) held = true;
            if (held) break;
        }
        if (!held) return star;
    }
    return std::nullopt;
}

PointedCgm Decider::refute_sd(const StandardDisjunction& sd) {
    if (sd.gamma.valid()) throw DecisionError("refute: gamma is valid");
    const auto gamma_prime = negate(sd.gamma);
    PointedCgm pm;
    if (sd.disjuncts.empty()) {
        std::set<std::string> atoms;
        for (const auto& l : gamma_prime.literals)
            if (l.positive) atoms.insert(l.atom);
        pm = single_state_model(u_, atoms);
    } else {
        AbstractGameForm agf;
        switch (sd.fragment) {
            case Fragment::CLn: agf = agf_cln(sd, *this); break;
            case Fragment::CLp: agf = agf_clp(sd, *this); break;
            case Fragment::CCSRn: agf = agf_ccsrn(sd, *this); break;
            case Fragment::CCSRp: {
                auto star = ccsrp_first_condition_failure(sd);
                if (!star) throw DecisionError("internal: first CCSRp condition holds for an invalid disjunction");
                agf = agf_ccsrp(sd, *star, *this);
                break;
            }
        }
        pm = realize(agf, gamma_prime, *this);
    }
    ModelChecker mc(pm.model);
    if (mc.holds(pm.point, sd.to_formula()))
        throw DecisionError("internal: constructed model does not falsify the standard disjunction");
    return pm;
}

PointedCgm Decider::refute(const Formula& f, Fragment frag) {
    if (!admits(frag, f)) throw FragmentError(std::string("formula is not in fragment ") + fragment_name(frag));
    const Formula g = is_ccsr(frag) ? desugar(f) : f;
    if (modal_depth(g) == 0) {
        auto atoms = satisfying_atoms(dualize(g));
        if (!atoms) throw DecisionError("refute: formula is valid");
        return single_state_model(u_, *atoms);
    }
    for (const auto& sd : to_standard_conjunction(g, frag))
        if (!reduce(sd)) return refute_sd(sd);
    throw DecisionError("refute: formula is valid");
}

Verdict Decider::decide(const Formula& f, Fragment frag) {
    if (auto cert = prove(f, frag)) return Verdict{true, cert, std::nullopt};
    auto pm = refute(f, frag);
    ModelChecker mc(pm.model);
    if (mc.holds(pm.point, f)) throw DecisionError("internal: countermodel does not falsify the formula");
    return Verdict{false, nullptr, std::move(pm)};
}

std::optional<PointedCgm> Decider::sat_construct(const Formula& f) {
    if (auto it = sat_.find(f->key); it != sat_.end()) return *it->second;
    std::optional<PointedCgm> result;
    if (modal_depth(f) == 0) {
        if (auto atoms = satisfying_atoms(f)) result = single_state_model(u_, *atoms);
    } else {
        auto frags = fragment_of(f);
        if (frags.empty()) frags = fragment_of(desugar(f));
        if (frags.empty()) throw FragmentError("sat_construct: formula lies in no fragment");
        const Fragment frag = frags.list().front();
        auto verdict = decide(dualize(f), dual_fragment(frag));
        if (!verdict.valid) {
            ModelChecker mc(verdict.countermodel->model);
            if (!mc.holds(verdict.countermodel->point, f))
                throw DecisionError("internal: constructed model does not satisfy the formula");
            result = std::move(verdict.countermodel);
        }
    }
    sat_[f->key] = std::make_shared<const std::optional<PointedCgm>>(result);
    return result;
}

std::optional<SdCertificate> reduce_cln(const StandardDisjunction& sd, const AgentUniverse& u) {
    if (sd.fragment != Fragment::CLn) throw FragmentError("reduce_cln expects a CLn disjunction");
    return Decider(u).reduce(sd);
}

std::optional<SdCertificate> reduce_clp(const StandardDisjunction& sd, const AgentUniverse& u) {
    if (sd.fragment != Fragment::CLp) throw FragmentError("reduce_clp expects a CLp disjunction");
    return Decider(u).reduce(sd);
}

std::optional<SdCertificate> reduce_ccsrn(const StandardDisjunction& sd, const AgentUniverse& u) {
    if (sd.fragment != Fragment::CCSRn) throw FragmentError("reduce_ccsrn expects a CCSRn disjunction");
    return Decider(u).reduce(sd);
}

std::optional<SdCertificate> reduce_ccsrp(const StandardDisjunction& sd, const AgentUniverse& u) {
    if (sd.fragment != Fragment::CCSRp) throw FragmentError("reduce_ccsrp expects a CCSRp disjunction");
    return Decider(u).reduce(sd);
}

Verdict decide(const Formula& f, Fragment frag, const AgentUniverse& u) { return Decider(u).decide(f, frag); }

}  // namespace ccsr
