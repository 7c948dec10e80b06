#include "ccsr/checker.hpp"

#include <algorithm>

namespace ccsr {

ModelChecker::ModelChecker(const Cgm& m) : m_(m) {
    auto violations = validate_model(m);
    if (!violations.empty()) throw ModelError("cannot check an invalid model: " + violations.front().message);
    const std::size_t k = m.universe.size();
    tables_.resize(m.states.size());
    for (std::size_t s = 0; s < m.states.size(); ++s) {
        auto& t = tables_[s];
        t.radix.resize(k);
        t.stride.resize(k);
        std::size_t total = 1;
        for (std::size_t a = k; a-- > 0;) {
            t.radix[a] = m.menu[s][a].size();
            t.stride[a] = total;
            total *= t.radix[a];
        }
        t.target.resize(total);
        std::vector<int> profile(k);
        for (std::size_t p = 0; p < total; ++p) {
            for (std::size_t a = 0; a < k; ++a) profile[a] = m.menu[s][a][(p / t.stride[a]) % t.radix[a]];
            t.target[p] = m.outcome[s].at(profile);
        }
    }
}

std::size_t ModelChecker::project(const StateTable& t, std::size_t profile, Coalition c) const {
    std::size_t key = 0;
    for (std::size_t a = 0; a < t.radix.size(); ++a)
        if (c.contains(a)) key += ((profile / t.stride[a]) % t.radix[a]) * t.stride[a];
    return key;
}

bool ModelChecker::holds(int state, const Formula& f) { return truth(f).at(static_cast<std::size_t>(state)) != 0; }

const std::vector<char>& ModelChecker::truth(const Formula& f) {
    auto it = cache_.find(f.get());
    if (it != cache_.end()) return it->second.second;
    auto values = eval(f);
    return cache_.emplace(f.get(), std::make_pair(f, std::move(values))).first->second.second;
}

std::vector<char> ModelChecker::eval(const Formula& f) {
    const std::size_t n = m_.states.size();
    std::vector<char> out(n, 0);
    switch (f->kind) {
        case Kind::Top: std::fill(out.begin(), out.end(), 1); break;
        case Kind::Bottom: break;
        case Kind::Atom: case Kind::NegAtom: {
            const bool positive = f->kind == Kind::Atom;
            for (std::size_t s = 0; s < n; ++s) {
                auto it = m_.label.find(m_.states[s]);
                bool present = it != m_.label.end() && it->second.count(f->name);
                out[s] = present == positive;
            }
            break;
        }
        case Kind::And: case Kind::Or: {
            const auto l = truth(f->left);
            const auto& r = truth(f->right);
            for (std::size_t s = 0; s < n; ++s) out[s] = f->kind == Kind::And ? (l[s] && r[s]) : (l[s] || r[s]);
            break;
        }
        default: {
            const auto phi = truth(f->left);
            std::vector<char> psi;
            if (f->right) psi = truth(f->right);
            for (std::size_t s = 0; s < n; ++s)
                out[s] = eval_modal(static_cast<int>(s), f, phi, f->right ? &psi : nullptr);
            break;
        }
    }
    return out;
}

bool ModelChecker::eval_modal(int s, const Formula& f, const std::vector<char>& phi, const std::vector<char>* psi) {
    const auto& t = tables_[s];
    const std::size_t total = t.target.size();
    const Coalition a = f->a;
    const Coalition ab = f->a | f->b;
    std::vector<std::size_t> key_a(total), key_ab(total);
    for (std::size_t p = 0; p < total; ++p) {
        key_a[p] = project(t, p, a);
        key_ab[p] = project(t, p, ab);
    }
    switch (f->kind) {
        case Kind::Can: {
            // Some joint action of A guarantees phi.
            std::vector<char> all(total, 1);
            for (std::size_t p = 0; p < total; ++p)
                if (!phi[t.target[p]]) all[key_a[p]] = 0;
            for (std::size_t p = 0; p < total; ++p)
                if (all[key_a[p]]) return true;
            return false;
        }
        case Kind::DualCan: {
            // Every joint action of A has some outcome satisfying phi.
            std::vector<char> any(total, 0);
            for (std::size_t p = 0; p < total; ++p)
                if (phi[t.target[p]]) any[key_a[p]] = 1;
            for (std::size_t p = 0; p < total; ++p)
                if (!any[key_a[p]]) return false;
            return true;
        }
        case Kind::Coop: {
            std::vector<char> all_phi(total, 1), all_psi(total, 1);
            for (std::size_t p = 0; p < total; ++p) {
                if (!phi[t.target[p]]) all_phi[key_a[p]] = 0;
                if (!(*psi)[t.target[p]]) all_psi[key_ab[p]] = 0;
            }
            for (std::size_t p = 0; p < total; ++p)
                if (all_phi[key_a[p]] && all_psi[key_ab[p]]) return true;
            return false;
        }
        case Kind::DualCoop: {
            // For every joint action of A: either some outcome satisfies phi, or
            // for every joint action of B some outcome of the merge satisfies psi.
            std::vector<char> any_phi(total, 0), any_psi(total, 0), blocked(total, 0);
            for (std::size_t p = 0; p < total; ++p) {
                if (phi[t.target[p]]) any_phi[key_a[p]] = 1;
                if ((*psi)[t.target[p]]) any_psi[key_ab[p]] = 1;
            }
            for (std::size_t p = 0; p < total; ++p)
                if (!any_psi[key_ab[p]]) blocked[key_a[p]] = 1;
            for (std::size_t p = 0; p < total; ++p)
                if (!any_phi[key_a[p]] && blocked[key_a[p]]) return false;
            return true;
        }
        default: return false;
    }
}

bool ModelChecker::available(int state, const std::vector<int>& sigma) const {
    const auto& menus = m_.menu.at(static_cast<std::size_t>(state));
    if (sigma.size() != menus.size()) return false;
    for (std::size_t a = 0; a < sigma.size(); ++a)
        if (sigma[a] >= 0 && std::find(menus[a].begin(), menus[a].end(), sigma[a]) == menus[a].end()) return false;
    return true;
}

std::vector<int> ModelChecker::outcome_states(int state, const std::vector<int>& sigma) const {
    if (!available(state, sigma)) return {};
    const auto& t = tables_.at(static_cast<std::size_t>(state));
    const auto& menus = m_.menu[state];
    std::vector<int> out;
    for (std::size_t p = 0; p < t.target.size(); ++p) {
        bool match = true;
        for (std::size_t a = 0; a < sigma.size() && match; ++a)
            if (sigma[a] >= 0) match = menus[a][(p / t.stride[a]) % t.radix[a]] == sigma[a];
        if (match) out.push_back(t.target[p]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool ModelChecker::leadsto(int state, const std::vector<int>& sigma, const Formula& f) {
    if (!available(state, sigma)) throw std::invalid_argument("leadsto: joint action unavailable at state");
    const auto& values = truth(f);
    for (int t : outcome_states(state, sigma))
        if (!values[t]) return false;
    return true;
}

bool satisfies(const PointedCgm& pm, const Formula& f) {
    if (pm.point < 0 || static_cast<std::size_t>(pm.point) >= pm.model.states.size())
        throw std::invalid_argument("point is not a state of the model");
    ModelChecker mc(pm.model);
    return mc.holds(pm.point, f);
}

bool leadsto(const Cgm& m, const std::string& state, const JointAction& sigma, const Formula& f) {
    int s = m.state_index(state);
    if (s < 0) throw std::invalid_argument("unknown state '" + state + "'");
    std::vector<int> positions(m.universe.size(), -1);
    for (const auto& [agent, action] : sigma) {
        auto ai = m.universe.index_of(agent);
        if (!ai) throw std::invalid_argument("unknown agent '" + agent + "'");
        positions[*ai] = m.action_index(action);
        if (positions[*ai] < 0) throw std::invalid_argument("leadsto: unknown action '" + action + "'");
    }
    ModelChecker mc(m);
    return mc.leadsto(s, positions, f);
}

namespace {

// All joint actions of a coalition available at a state, as per-agent positions.
std::vector<std::vector<int>> coalition_actions(const Cgm& m, int s, Coalition c) {
    std::vector<std::vector<int>> acc{std::vector<int>(m.universe.size(), -1)};
    for (std::size_t a = 0; a < m.universe.size(); ++a) {
        if (!c.contains(a)) continue;
        std::vector<std::vector<int>> next;
        for (const auto& partial : acc)
            for (int act : m.menu[s][a]) {
                auto p = partial;
                p[a] = act;
                next.push_back(std::move(p));
            }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

bool check_coop_variants(const PointedCgm& pm, Coalition a, const Formula& phi, Coalition b, const Formula& psi) {
    ModelChecker mc(pm.model);
    const int s = pm.point;
    const bool base = mc.holds(s, coop(a, phi, b, psi));
    const bool v2 = mc.holds(s, coop(a, phi, b, conj(phi, psi)));
    const bool v3 = mc.holds(s, coop(a, phi, b - a, psi));
    const bool v4 = mc.holds(s, coop(a, phi, a | b, psi));
    // Single joint action of A and B together: its A part guarantees phi and
    // the whole guarantees psi.
    bool single = false;
    for (const auto& sigma : coalition_actions(pm.model, s, a | b)) {
        std::vector<int> part(sigma.size(), -1);
        for (std::size_t i = 0; i < sigma.size(); ++i)
            if (a.contains(i)) part[i] = sigma[i];
        if (mc.leadsto(s, part, phi) && mc.leadsto(s, sigma, psi)) {
            single = true;
            break;
        }
    }
    return base == v2 && base == v3 && base == v4 && base == single;
}

}  // namespace ccsr
