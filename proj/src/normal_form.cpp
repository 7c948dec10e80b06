#include "ccsr/normal_form.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ccsr {

Formula literal_formula(const Literal& l) { return l.positive ? atom(l.atom) : neg_atom(l.atom); }

bool ElementaryDisjunction::valid() const {
    if (top) return true;
    for (const auto& x : literals)
        for (const auto& y : literals)
            if (x.atom == y.atom && x.positive != y.positive) return true;
    return false;
}

Formula ElementaryDisjunction::to_formula() const {
    std::vector<Formula> items;
    if (top) items.push_back(ccsr::top());
    for (const auto& l : literals) items.push_back(literal_formula(l));
    return disj_all(items);
}

bool ElementaryConjunction::satisfiable() const {
    for (const auto& x : literals)
        for (const auto& y : literals)
            if (x.atom == y.atom && x.positive != y.positive) return false;
    return true;
}

Formula ElementaryConjunction::to_formula() const {
    std::vector<Formula> items;
    for (const auto& l : literals) items.push_back(literal_formula(l));
    return conj_all(items);
}

ElementaryConjunction negate(const ElementaryDisjunction& gamma) {
    if (gamma.valid()) throw std::invalid_argument("negate: elementary disjunction is valid");
    ElementaryConjunction out;
    for (const auto& l : gamma.literals) {
        Literal n{l.atom, !l.positive};
        if (std::find(out.literals.begin(), out.literals.end(), n) == out.literals.end()) out.literals.push_back(n);
    }
    return out;
}

Formula make_disjunct(Fragment frag, Coalition a, const Formula& phi, Coalition b, const Formula& psi) {
    switch (frag) {
        case Fragment::CLn: return dual_can(a, phi);
        case Fragment::CLp: return can(a, phi);
        case Fragment::CCSRn: return dual_coop(a, phi, b, psi);
        case Fragment::CCSRp: return coop(a, phi, b, psi);
    }
    return nullptr;
}

Formula StandardDisjunction::disjunct_formula(std::size_t pos) const {
    const auto& d = disjuncts.at(pos);
    return make_disjunct(fragment, d.a, d.phi, d.b, d.psi);
}

Formula StandardDisjunction::to_formula() const {
    Formula acc = gamma.to_formula();
    for (std::size_t i = 0; i < disjuncts.size(); ++i) acc = disj(acc, disjunct_formula(i));
    return acc;
}

int StandardDisjunction::depth() const {
    int d = 0;
    for (const auto& m : disjuncts) d = std::max({d, 1 + m.phi->depth, 1 + m.psi->depth});
    return d;
}

std::size_t StandardDisjunction::position_of(int index) const {
    for (std::size_t i = 0; i < disjuncts.size(); ++i)
        if (disjuncts[i].index == index) return i;
    throw std::out_of_range("index " + std::to_string(index) + " is not a disjunct index");
}

const ModalDisjunct& StandardDisjunction::at_index(int index) const { return disjuncts[position_of(index)]; }

std::vector<Formula> flatten_disjunction(const Formula& f) {
    if (f->kind != Kind::Or) return {f};
    auto out = flatten_disjunction(f->left);
    auto rest = flatten_disjunction(f->right);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

namespace {

Kind expected_kind(Fragment frag) {
    switch (frag) {
        case Fragment::CLn: return Kind::DualCan;
        case Fragment::CLp: return Kind::Can;
        case Fragment::CCSRn: return Kind::DualCoop;
        case Fragment::CCSRp: return Kind::Coop;
    }
    return Kind::Top;
}

void add_disjunct(StandardDisjunction& sd, const Formula& m) {
    if (m->kind != expected_kind(sd.fragment))
        throw NormalFormError(std::string("modal disjunct does not belong to fragment ") + fragment_name(sd.fragment));
    int n = static_cast<int>(sd.disjuncts.size()) + 1;
    sd.disjuncts.push_back({is_negative(sd.fragment) ? -n : n, m->a, goal_a(m), m->b, goal_b(m)});
}

}  // namespace

StandardDisjunction StandardDisjunction::from_formula(const Formula& f, Fragment frag) {
    if (!admits(frag, f)) throw NormalFormError(std::string("formula is not in fragment ") + fragment_name(frag));
    StandardDisjunction sd;
    sd.fragment = frag;
    for (const auto& item : flatten_disjunction(is_ccsr(frag) ? desugar(f) : f)) {
        switch (item->kind) {
            case Kind::Top: sd.gamma.top = true; break;
            case Kind::Bottom: break;
            case Kind::Atom: sd.gamma.literals.push_back({item->name, true}); break;
            case Kind::NegAtom: sd.gamma.literals.push_back({item->name, false}); break;
            case Kind::And: throw NormalFormError("conjunction inside a standard disjunction");
            default: add_disjunct(sd, item);
        }
    }
    return sd;
}

// ---------------------------------------------------------------------------
// CNF over modal atoms
// ---------------------------------------------------------------------------

namespace {

struct WorkClause {
    Clause items;
    std::set<std::string> keys;
    bool taut = false;

    void add(const ClauseItem& item) {
        if (taut) return;
        std::string k;
        if (item.modal) {
            k = item.formula->key;
        } else {
            k = (item.literal.positive ? "+" : "-") + item.literal.atom;
            std::string opposite = (item.literal.positive ? "-" : "+") + item.literal.atom;
            if (keys.count(opposite)) {
                taut = true;
                return;
            }
        }
        if (keys.insert(k).second) items.push_back(item);
    }
};

struct Builder {
    bool pruned = false;

    std::vector<WorkClause> dedupe(std::vector<WorkClause> in) {
        std::vector<WorkClause> out;
        std::set<std::set<std::string>> seen;
        for (auto& c : in) {
            if (c.taut) {
                pruned = true;
                continue;
            }
            if (seen.insert(c.keys).second) out.push_back(std::move(c));
        }
        return out;
    }

    std::vector<WorkClause> run(const Formula& f) {
        switch (f->kind) {
            case Kind::Top: pruned = true; return {};
            case Kind::Bottom: return {WorkClause{}};
            case Kind::Atom: case Kind::NegAtom: {
                WorkClause c;
                c.add(ClauseItem{false, Literal{f->name, f->kind == Kind::Atom}, nullptr});
                return {c};
            }
            case Kind::And: {
                auto l = run(f->left);
                auto r = run(f->right);
                l.insert(l.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
                return dedupe(std::move(l));
            }
            case Kind::Or: {
                auto l = run(f->left);
                auto r = run(f->right);
                std::vector<WorkClause> out;
                out.reserve(l.size() * r.size());
                for (const auto& x : l)
                    for (const auto& y : r) {
                        WorkClause c = x;
                        for (const auto& item : y.items) c.add(item);
                        out.push_back(std::move(c));
                    }
                return dedupe(std::move(out));
            }
            default: {
                WorkClause c;
                c.add(ClauseItem{true, {}, f});
                return {c};
            }
        }
    }
};

}  // namespace

CnfResult cnf_over_modal_atoms(const Formula& f) {
    Builder b;
    auto clauses = b.run(f);
    CnfResult out;
    out.pruned = b.pruned;
    for (auto& c : clauses) out.clauses.push_back(std::move(c.items));
    return out;
}

std::vector<StandardDisjunction> to_standard_conjunction(const Formula& f, Fragment frag) {
    if (!admits(frag, f)) throw NormalFormError(std::string("formula is not in fragment ") + fragment_name(frag));
    auto cnf = cnf_over_modal_atoms(is_ccsr(frag) ? desugar(f) : f);
    std::vector<StandardDisjunction> out;
    for (const auto& clause : cnf.clauses) {
        StandardDisjunction sd;
        sd.fragment = frag;
        for (const auto& item : clause) {
            if (item.modal)
                add_disjunct(sd, item.formula);
            else
                sd.gamma.literals.push_back(item.literal);
        }
        out.push_back(std::move(sd));
    }
    return out;
}

}  // namespace ccsr
