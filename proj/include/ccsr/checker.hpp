#pragma once

#include "ccsr/formula.hpp"
#include "ccsr/game.hpp"

#include <unordered_map>
#include <vector>

namespace ccsr {

// Evaluates formulas over every state of a fixed model, caching truth sets per
// formula node. The model must outlive the checker and be free of violations.
class ModelChecker {
public:
    explicit ModelChecker(const Cgm& m);

    [[nodiscard]] const Cgm& model() const { return m_; }
    bool holds(int state, const Formula& f);
    const std::vector<char>& truth(const Formula& f);

    // sigma holds one action position per agent, or -1 for agents outside the
    // coalition. Throws if sigma is unavailable at the state.
    bool leadsto(int state, const std::vector<int>& sigma, const Formula& f);
    bool available(int state, const std::vector<int>& sigma) const;
    std::vector<int> outcome_states(int state, const std::vector<int>& sigma) const;

private:
    struct StateTable {
        std::vector<std::size_t> radix, stride;
        std::vector<int> target;  // flat profile index -> state
    };

    const Cgm& m_;
    std::vector<StateTable> tables_;
    std::unordered_map<const Node*, std::pair<Formula, std::vector<char>>> cache_;

    std::size_t project(const StateTable& t, std::size_t profile, Coalition c) const;
    std::vector<char> eval(const Formula& f);
    bool eval_modal(int s, const Formula& f, const std::vector<char>& phi, const std::vector<char>* psi);
};

bool satisfies(const PointedCgm& pm, const Formula& f);
bool leadsto(const Cgm& m, const std::string& state, const JointAction& sigma, const Formula& f);

// Compares the four cooperative-operator variants and the single joint action
// reformulation; true iff all agree.
bool check_coop_variants(const PointedCgm& pm, Coalition a, const Formula& phi, Coalition b, const Formula& psi);

}  // namespace ccsr
