#pragma once

#include "ccsr/formula.hpp"
#include "ccsr/game.hpp"
#include "ccsr/normal_form.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ccsr {

class Decider;

// A joint action over the alphabet: one entry per agent, empty for agents
// outside the coalition.
using AlphaAction = std::vector<std::optional<int>>;

Coalition domain_of(const AlphaAction& sigma);

struct AbstractGameForm {
    std::vector<int> alphabet;
    std::function<std::vector<Formula>(const AlphaAction&)> force;
};

// Every joint action over the alphabet, for every coalition.
std::vector<AlphaAction> all_alpha_actions(const std::vector<int>& alphabet, std::size_t agents);

// coin over A_i, and the CCSRn variants over A_i and over A_i u B_i.
std::vector<int> coin(const StandardDisjunction& sd, const AlphaAction& sigma);
std::vector<int> coinf(const StandardDisjunction& sd, const AlphaAction& sigma);
std::vector<int> coinfs(const StandardDisjunction& sd, const AlphaAction& sigma);
// (sum of the chosen indices mod n) + 1
int rej(const AlphaAction& sigma, int n);

AbstractGameForm agf_cln(const StandardDisjunction& sd, Decider& d);
AbstractGameForm agf_clp(const StandardDisjunction& sd, Decider& d);
AbstractGameForm agf_ccsrn(const StandardDisjunction& sd, Decider& d);
AbstractGameForm agf_ccsrp(const StandardDisjunction& sd, const std::vector<int>& pi_star, Decider& d);

bool regularity_check(const AbstractGameForm& agf, Decider& d);

class RealizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grafting construction; the four realization conditions are checked before
// returning. The point is state "s0"; the sub-model grafted under grand profile
// (x1,..,xk) lives under "s0/x1,..,xk/".
PointedCgm realize(const AbstractGameForm& agf, const ElementaryConjunction& gamma_prime, Decider& d);

std::string profile_name(const AlphaAction& sigma);

}  // namespace ccsr
