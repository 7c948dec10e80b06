#pragma once

// Random formulas and models shared by the unit and acceptance tests.

#include "ccsr/formula.hpp"
#include "ccsr/game.hpp"

#include <random>
#include <string>
#include <vector>

namespace ccsr::testing {

using Rng = std::mt19937_64;

inline Coalition random_coalition(const AgentUniverse& u, Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << u.size()) - 1);
    return Coalition{d(rng)};
}

inline Formula random_literal(const std::vector<std::string>& atoms, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() + 1);
    std::size_t k = pick(rng);
    if (k == atoms.size()) return top();
    if (k == atoms.size() + 1) return bottom();
    return std::bernoulli_distribution(0.5)(rng) ? atom(atoms[k]) : neg_atom(atoms[k]);
}

struct FormulaShape {
    int depth = 2;          // maximal modal depth
    int budget = 4;         // maximal number of binary connectives per modal level
    double modal_bias = 0.5;
};

// A formula of the fragment with modal depth at most shape.depth.
inline Formula random_formula(Fragment frag, const AgentUniverse& u, const std::vector<std::string>& atoms,
                              const FormulaShape& shape, Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution modal(shape.modal_bias);
    auto gen = [&](auto& self, int depth, int& budget) -> Formula {
        if (budget > 0 && coin(rng)) {
            --budget;
            Formula l = self(self, depth, budget);
            Formula r = self(self, depth, budget);
            return coin(rng) ? conj(l, r) : disj(l, r);
        }
        if (depth > 0 && modal(rng)) {
            int inner = shape.budget / 2;
            Coalition a = random_coalition(u, rng);
            Formula phi = self(self, depth - 1, inner);
            switch (frag) {
                case Fragment::CLn: return dual_can(a, phi);
                case Fragment::CLp: return can(a, phi);
                case Fragment::CCSRn: {
                    Formula psi = self(self, depth - 1, inner);
                    return dual_coop(a, phi, random_coalition(u, rng), psi);
                }
                case Fragment::CCSRp: {
                    Formula psi = self(self, depth - 1, inner);
                    return coop(a, phi, random_coalition(u, rng), psi);
                }
            }
        }
        return random_literal(atoms, rng);
    };
    int budget = shape.budget;
    return gen(gen, shape.depth, budget);
}

// A formula of the full language, mixing every operator.
inline Formula random_full_formula(const AgentUniverse& u, const std::vector<std::string>& atoms, int depth,
                                   Rng& rng) {
    std::uniform_int_distribution<int> kind(0, 7);
    auto gen = [&](auto& self, int d) -> Formula {
        int k = d > 0 ? kind(rng) : kind(rng) % 3;
        switch (k) {
            case 0: return random_literal(atoms, rng);
            case 1: return conj(self(self, d > 0 ? d - 1 : 0), random_literal(atoms, rng));
            case 2: return disj(random_literal(atoms, rng), self(self, d > 0 ? d - 1 : 0));
            case 3: return can(random_coalition(u, rng), self(self, d - 1));
            case 4: return dual_can(random_coalition(u, rng), self(self, d - 1));
            case 5: return coop(random_coalition(u, rng), self(self, d - 1), random_coalition(u, rng), self(self, d - 1));
            case 6: return dual_coop(random_coalition(u, rng), self(self, d - 1), random_coalition(u, rng), self(self, d - 1));
            default: return conj(self(self, d - 1), self(self, d - 1));
        }
    };
    return gen(gen, depth);
}

// A model with the given number of states; every agent gets between one and
// `actions` actions at every state.
inline Cgm random_model(const AgentUniverse& u, int states, int actions, const std::vector<std::string>& atoms,
                        Rng& rng) {
    CgmBuilder b(u);
    std::vector<int> sid, aid;
    for (int s = 0; s < states; ++s) sid.push_back(b.add_state("s" + std::to_string(s)));
    for (int x = 0; x < actions; ++x) aid.push_back(b.add_action("x" + std::to_string(x)));
    std::uniform_int_distribution<int> pick_state(0, states - 1);
    std::bernoulli_distribution coin(0.5);
    for (int s = 0; s < states; ++s) {
        std::vector<std::vector<int>> menus;
        for (std::size_t a = 0; a < u.size(); ++a) {
            std::vector<int> menu;
            for (int x = 0; x < actions; ++x)
                if (coin(rng)) menu.push_back(aid[x]);
            if (menu.empty()) menu.push_back(aid[std::uniform_int_distribution<int>(0, actions - 1)(rng)]);
            b.set_menu(sid[s], a, menu);
            menus.push_back(menu);
        }
        std::vector<std::vector<int>> profiles{{}};
        for (const auto& menu : menus) {
            std::vector<std::vector<int>> next;
            for (const auto& p : profiles)
                for (int x : menu) {
                    auto q = p;
                    q.push_back(x);
                    next.push_back(std::move(q));
                }
            profiles = std::move(next);
        }
        for (const auto& p : profiles) b.set_outcome(sid[s], p, sid[pick_state(rng)]);
        for (const auto& p : atoms)
            if (coin(rng)) b.add_label(sid[s], p);
    }
    return b.build();
}

inline AgentUniverse universe_of(std::size_t agents) {
    static const std::vector<std::string> names{"a", "b", "c", "d"};
    return AgentUniverse(std::vector<std::string>(names.begin(), names.begin() + static_cast<long>(agents)));
}

}  // namespace ccsr::testing
