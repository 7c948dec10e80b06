#pragma once

#include "ccsr/formula.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ccsr {

// Joint actions of the public algebra map agent names to action names.
using JointAction = std::map<std::string, std::string>;

JointAction restrict(const JointAction& sigma, const std::vector<std::string>& coalition);
std::set<JointAction> oplus(const std::vector<std::set<JointAction>>& families);
JointAction uplus(const JointAction& sigma_a, const JointAction& sigma_b);

// A finite concurrent game model. Menus and outcomes refer to actions and
// states by position; labels are keyed by state name so that a loaded file
// can be checked for references to undeclared states.
struct Cgm {
    AgentUniverse universe;
    std::vector<std::string> states;
    std::vector<std::string> actions;
    // menu[s][agent] lists action positions available to agent at state s.
    std::vector<std::vector<std::vector<int>>> menu;
    // outcome[s] maps a grand profile (one action position per agent) to a state position.
    std::vector<std::map<std::vector<int>, int>> outcome;
    std::map<std::string, std::set<std::string>> label;

    [[nodiscard]] int state_index(const std::string& name) const;
    [[nodiscard]] int action_index(const std::string& name) const;
    // Grand profiles in the pointwise product of the menus at s.
    [[nodiscard]] std::vector<std::vector<int>> available_profiles(int s) const;
};

struct PointedCgm {
    Cgm model;
    int point = 0;
};

struct Violation {
    std::string message;
};

std::vector<Violation> validate_model(const Cgm& m);

// Outcome set of a partial joint action. Empty iff sigma is unavailable.
std::set<std::string> outcomes(const Cgm& m, const std::string& state, const JointAction& sigma);

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON model files. load rejects files with violations.
Cgm model_from_json_text(const std::string& text);
std::string model_to_json_text(const Cgm& m);
Cgm load_model(const std::string& path);
void save_model(const Cgm& m, const std::string& path);

// Small builder used by tests and by the constructions.
class CgmBuilder {
public:
    explicit CgmBuilder(AgentUniverse u);

    int add_state(const std::string& name);
    int add_action(const std::string& name);
    void set_menu(int state, std::size_t agent, std::vector<int> actions);
    void set_outcome(int state, std::vector<int> profile, int target);
    void add_label(int state, const std::string& atom);
    [[nodiscard]] Cgm build() const { return m_; }
    Cgm& raw() { return m_; }

private:
    Cgm m_;
    std::map<std::string, int> state_ids_, action_ids_;
};

// One state, one action per agent, self loop, the given true atoms.
PointedCgm single_state_model(const AgentUniverse& u, const std::set<std::string>& true_atoms);

}  // namespace ccsr
