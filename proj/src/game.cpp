#include "ccsr/game.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ccsr {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Joint-action algebra
// ---------------------------------------------------------------------------

JointAction restrict(const JointAction& sigma, const std::vector<std::string>& coalition) {
    JointAction out;
    for (const auto& agent : coalition) {
        auto it = sigma.find(agent);
        if (it == sigma.end())
            throw std::invalid_argument("restrict: agent '" + agent + "' is outside the joint action's domain");
        out.insert(*it);
    }
    return out;
}

std::set<JointAction> oplus(const std::vector<std::set<JointAction>>& families) {
    std::set<std::string> used;
    for (const auto& family : families) {
        std::set<std::string> domain;
        for (const auto& sigma : family)
            for (const auto& [agent, action] : sigma) domain.insert(agent);
        for (const auto& agent : domain)
            if (used.count(agent)) throw std::invalid_argument("oplus: coalitions overlap on agent '" + agent + "'");
        used.insert(domain.begin(), domain.end());
    }
    std::set<JointAction> acc{JointAction{}};
    for (const auto& family : families) {
        std::set<JointAction> next;
        for (const auto& partial : acc)
            for (const auto& sigma : family) {
                JointAction merged = partial;
                merged.insert(sigma.begin(), sigma.end());
                next.insert(std::move(merged));
            }
        acc = std::move(next);
    }
    return acc;
}

JointAction uplus(const JointAction& sigma_a, const JointAction& sigma_b) {
    JointAction out = sigma_a;
    for (const auto& entry : sigma_b) out.insert(entry);  // insert keeps sigma_a on overlap
    return out;
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

int Cgm::state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int Cgm::action_index(const std::string& name) const {
    auto it = std::find(actions.begin(), actions.end(), name);
    return it == actions.end() ? -1 : static_cast<int>(it - actions.begin());
}

std::vector<std::vector<int>> Cgm::available_profiles(int s) const {
    std::vector<std::vector<int>> acc{{}};
    for (const auto& choices : menu.at(static_cast<std::size_t>(s))) {
        std::vector<std::vector<int>> next;
        for (const auto& partial : acc)
            for (int act : choices) {
                auto p = partial;
                p.push_back(act);
                next.push_back(std::move(p));
            }
        acc = std::move(next);
    }
    return acc;
}

namespace {

std::string profile_text(const Cgm& m, const std::vector<int>& profile) {
    std::string out = "{";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (i) out += ",";
        out += (i < m.universe.size() ? m.universe.name(i) : "?") + ":";
        auto a = profile[i];
        out += (a >= 0 && static_cast<std::size_t>(a) < m.actions.size()) ? m.actions[a] : std::to_string(a);
    }
    return out + "}";
}

bool in_menu(const std::vector<int>& menu, int action) {
    return std::find(menu.begin(), menu.end(), action) != menu.end();
}

}  // namespace

std::vector<Violation> validate_model(const Cgm& m) {
    std::vector<Violation> out;
    auto add = [&](std::string msg) { out.push_back({std::move(msg)}); };
    const std::size_t n = m.states.size();
    const std::size_t k = m.universe.size();
    if (n == 0) add("model has no states");
    if (m.actions.empty()) add("model has no actions");
    if (std::set<std::string>(m.states.begin(), m.states.end()).size() != n) add("duplicate state names");
    if (std::set<std::string>(m.actions.begin(), m.actions.end()).size() != m.actions.size())
        add("duplicate action names");
    if (m.menu.size() != n || m.outcome.size() != n) {
        add("menu/outcome tables do not cover the states");
        return out;
    }
    for (std::size_t s = 0; s < n; ++s) {
        const auto& st = m.states[s];
        if (m.menu[s].size() != k) {
            add("menu at state '" + st + "' does not list every agent");
            continue;
        }
        bool menus_ok = true;
        for (std::size_t a = 0; a < k; ++a) {
            if (m.menu[s][a].empty()) {
                add("empty menu at (" + st + ", " + m.universe.name(a) + ")");
                menus_ok = false;
            }
            for (int act : m.menu[s][a])
                if (act < 0 || static_cast<std::size_t>(act) >= m.actions.size()) {
                    add("menu at (" + st + ", " + m.universe.name(a) + ") names an undeclared action");
                    menus_ok = false;
                }
        }
        for (const auto& [profile, target] : m.outcome[s]) {
            bool available = profile.size() == k;
            for (std::size_t a = 0; available && a < k; ++a) available = in_menu(m.menu[s][a], profile[a]);
            if (!available) add("outcome at state '" + st + "' on unavailable profile " + profile_text(m, profile));
            if (target < 0 || static_cast<std::size_t>(target) >= n)
                add("outcome at state '" + st + "' targets an undeclared state");
        }
        if (!menus_ok) continue;
        for (const auto& profile : m.available_profiles(static_cast<int>(s)))
            if (!m.outcome[s].count(profile))
                add("missing outcome at state '" + st + "' for profile " + profile_text(m, profile));
    }
    std::set<std::string> declared(m.states.begin(), m.states.end());
    for (const auto& [st, atoms] : m.label)
        if (!declared.count(st)) add("label references undeclared state '" + st + "'");
    return out;
}

std::set<std::string> outcomes(const Cgm& m, const std::string& state, const JointAction& sigma) {
    int s = m.state_index(state);
    if (s < 0) throw std::invalid_argument("unknown state '" + state + "'");
    std::vector<int> fixed(m.universe.size(), -1);
    for (const auto& [agent, action] : sigma) {
        auto ai = m.universe.index_of(agent);
        if (!ai) throw std::invalid_argument("unknown agent '" + agent + "'");
        int act = m.action_index(action);
        if (act < 0 || !in_menu(m.menu[s][*ai], act)) return {};
        fixed[*ai] = act;
    }
    std::set<std::string> out;
    for (const auto& profile : m.available_profiles(s)) {
        bool match = true;
        for (std::size_t a = 0; a < profile.size() && match; ++a) match = fixed[a] < 0 || fixed[a] == profile[a];
        if (!match) continue;
        auto it = m.outcome[s].find(profile);
        if (it != m.outcome[s].end()) out.insert(m.states[it->second]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

Cgm model_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("model file is not valid JSON: ") + e.what());
    }
    std::vector<std::string> problems;
    Cgm m;
    try {
        m.universe = AgentUniverse(doc.at("agents").get<std::vector<std::string>>());
        m.states = doc.at("states").get<std::vector<std::string>>();
        m.actions = doc.at("actions").get<std::vector<std::string>>();
    } catch (const std::exception& e) {
        throw ModelError(std::string("model file header: ") + e.what());
    }
    std::map<std::string, int> sid, aid;
    for (std::size_t i = 0; i < m.states.size(); ++i) sid[m.states[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < m.actions.size(); ++i) aid[m.actions[i]] = static_cast<int>(i);
    const std::size_t k = m.universe.size();
    m.menu.assign(m.states.size(), std::vector<std::vector<int>>(k));
    m.outcome.assign(m.states.size(), {});
    const json menu_doc = doc.value("menu", json::object());
    const json outcome_doc = doc.value("outcome", json::object());
    const json label_doc = doc.value("label", json::object());
    try {
        for (const auto& [st, per_agent] : menu_doc.items()) {
            if (!sid.count(st)) {
                problems.push_back("menu references undeclared state '" + st + "'");
                continue;
            }
            for (const auto& [agent, acts] : per_agent.items()) {
                auto ai = m.universe.index_of(agent);
                if (!ai) {
                    problems.push_back("menu references unknown agent '" + agent + "'");
                    continue;
                }
                std::set<int> chosen;
                for (const auto& act : acts) {
                    auto name = act.get<std::string>();
                    if (!aid.count(name))
                        problems.push_back("menu references undeclared action '" + name + "'");
                    else
                        chosen.insert(aid[name]);
                }
                m.menu[sid[st]][*ai].assign(chosen.begin(), chosen.end());
            }
        }
        for (const auto& [st, entries] : outcome_doc.items()) {
            if (!sid.count(st)) {
                problems.push_back("outcome references undeclared state '" + st + "'");
                continue;
            }
            for (const auto& entry : entries) {
                std::vector<int> profile(k, -1);
                bool ok = true;
                for (const auto& [agent, act] : entry.at("profile").items()) {
                    auto ai = m.universe.index_of(agent);
                    auto name = act.get<std::string>();
                    if (!ai || !aid.count(name)) {
                        problems.push_back("outcome profile at '" + st + "' names an unknown agent or action");
                        ok = false;
                        continue;
                    }
                    profile[*ai] = aid[name];
                }
                auto to = entry.at("to").get<std::string>();
                if (!sid.count(to)) {
                    problems.push_back("outcome at '" + st + "' targets undeclared state '" + to + "'");
                    ok = false;
                }
                if (ok) m.outcome[sid[st]][profile] = sid[to];
            }
        }
        for (const auto& [st, atoms] : label_doc.items())
            for (const auto& a : atoms) m.label[st].insert(a.get<std::string>());
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
    for (const auto& v : validate_model(m)) problems.push_back(v.message);
    if (!problems.empty()) {
        std::string msg = "invalid model:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ModelError(msg);
    }
    return m;
}

std::string model_to_json_text(const Cgm& m) {
    json doc;
    doc["agents"] = m.universe.agents();
    doc["states"] = m.states;
    doc["actions"] = m.actions;
    json menu = json::object(), outcome = json::object(), label = json::object();
    for (std::size_t s = 0; s < m.states.size(); ++s) {
        json per_agent = json::object();
        for (std::size_t a = 0; a < m.universe.size(); ++a) {
            json acts = json::array();
            for (int act : m.menu[s][a]) acts.push_back(m.actions[act]);
            per_agent[m.universe.name(a)] = acts;
        }
        menu[m.states[s]] = per_agent;
        json entries = json::array();
        for (const auto& [profile, target] : m.outcome[s]) {
            json p = json::object();
            for (std::size_t a = 0; a < profile.size(); ++a) p[m.universe.name(a)] = m.actions[profile[a]];
            entries.push_back({{"profile", p}, {"to", m.states[target]}});
        }
        outcome[m.states[s]] = entries;
    }
    for (const auto& [st, atoms] : m.label)
        if (!atoms.empty()) label[st] = std::vector<std::string>(atoms.begin(), atoms.end());
    doc["menu"] = menu;
    doc["outcome"] = outcome;
    doc["label"] = label;
    return doc.dump(2);
}

Cgm load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str());
}

void save_model(const Cgm& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ModelError("cannot write model file '" + path + "'");
    out << model_to_json_text(m) << "\n";
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

CgmBuilder::CgmBuilder(AgentUniverse u) { m_.universe = std::move(u); }

int CgmBuilder::add_state(const std::string& name) {
    auto it = state_ids_.find(name);
    if (it != state_ids_.end()) return it->second;
    int id = static_cast<int>(m_.states.size());
    m_.states.push_back(name);
    m_.menu.emplace_back(m_.universe.size());
    m_.outcome.emplace_back();
    state_ids_[name] = id;
    return id;
}

int CgmBuilder::add_action(const std::string& name) {
    auto it = action_ids_.find(name);
    if (it != action_ids_.end()) return it->second;
    int id = static_cast<int>(m_.actions.size());
    m_.actions.push_back(name);
    action_ids_[name] = id;
    return id;
}

void CgmBuilder::set_menu(int state, std::size_t agent, std::vector<int> actions) {
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
    m_.menu.at(state).at(agent) = std::move(actions);
}

void CgmBuilder::set_outcome(int state, std::vector<int> profile, int target) {
    m_.outcome.at(state)[std::move(profile)] = target;
}

void CgmBuilder::add_label(int state, const std::string& atom) { m_.label[m_.states.at(state)].insert(atom); }

PointedCgm single_state_model(const AgentUniverse& u, const std::set<std::string>& true_atoms) {
    CgmBuilder b(u);
    int s = b.add_state("s0");
    int act = b.add_action("idle");
    for (std::size_t a = 0; a < u.size(); ++a) b.set_menu(s, a, {act});
    b.set_outcome(s, std::vector<int>(u.size(), act), s);
    for (const auto& p : true_atoms) b.add_label(s, p);
    return {b.build(), s};
}

}  // namespace ccsr
