#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccsr {

// A coalition is a bit set over the positions of an AgentUniverse.
struct Coalition {
    std::uint64_t bits = 0;

    static Coalition none() { return {}; }
    static Coalition single(std::size_t agent) { return Coalition{std::uint64_t{1} << agent}; }

    [[nodiscard]] bool contains(std::size_t agent) const { return (bits >> agent) & 1U; }
    [[nodiscard]] bool empty() const { return bits == 0; }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool subset_of(Coalition other) const { return (bits & ~other.bits) == 0; }
    [[nodiscard]] bool disjoint(Coalition other) const { return (bits & other.bits) == 0; }
    [[nodiscard]] std::vector<std::size_t> members() const;

    Coalition operator|(Coalition o) const { return Coalition{bits | o.bits}; }
    Coalition operator&(Coalition o) const { return Coalition{bits & o.bits}; }
    Coalition operator-(Coalition o) const { return Coalition{bits & ~o.bits}; }
    auto operator<=>(const Coalition&) const = default;
};

class AgentUniverse {
public:
    AgentUniverse() = default;
    explicit AgentUniverse(std::vector<std::string> agents);

    [[nodiscard]] std::size_t size() const { return agents_.size(); }
    [[nodiscard]] const std::string& name(std::size_t i) const { return agents_.at(i); }
    [[nodiscard]] const std::vector<std::string>& agents() const { return agents_; }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const;
    [[nodiscard]] Coalition all() const;
    [[nodiscard]] Coalition coalition(const std::vector<std::string>& names) const;

    // "{a,b}" or "*" for the grand coalition.
    [[nodiscard]] std::string format(Coalition c) const;

    bool operator==(const AgentUniverse&) const = default;

private:
    std::vector<std::string> agents_;
};

// Parses "a,b,c" into a universe.
AgentUniverse parse_agents(std::string_view list);

enum class Kind { Top, Bottom, Atom, NegAtom, And, Or, Coop, DualCoop, Can, DualCan };

enum class Fragment { CLn, CLp, CCSRn, CCSRp };

struct FragmentSet {
    unsigned bits = 0;

    static FragmentSet all() { return {0xF}; }
    static FragmentSet of(Fragment f) { return {1U << static_cast<unsigned>(f)}; }
    [[nodiscard]] bool contains(Fragment f) const { return (bits >> static_cast<unsigned>(f)) & 1U; }
    [[nodiscard]] bool empty() const { return bits == 0; }
    [[nodiscard]] std::vector<Fragment> list() const;
    FragmentSet operator&(FragmentSet o) const { return {bits & o.bits}; }
    bool operator==(const FragmentSet&) const = default;
};

const char* fragment_name(Fragment f);
std::optional<Fragment> parse_fragment(std::string_view name);
Fragment dual_fragment(Fragment f);
bool is_negative(Fragment f);
bool is_ccsr(Fragment f);

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    std::string name;     // Atom, NegAtom
    Formula left, right;  // And/Or children; Coop/DualCoop goals; Can/DualCan goal in left
    Coalition a, b;       // modal coalitions
    int depth = 0;
    FragmentSet fragments;
    // Canonical identity: Can/DualCan keyed as their Coop/DualCoop expansions.
    std::string key;
};

Formula top();
Formula bottom();
Formula atom(std::string name);
Formula neg_atom(std::string name);
Formula conj(Formula l, Formula r);
Formula disj(Formula l, Formula r);
Formula coop(Coalition a, Formula phi, Coalition b, Formula psi);
Formula dual_coop(Coalition a, Formula phi, Coalition b, Formula psi);
Formula can(Coalition a, Formula phi);
Formula dual_can(Coalition a, Formula phi);

// Left-nested folds; the empty disjunction is false and the empty conjunction true.
Formula disj_all(const std::vector<Formula>& items);
Formula conj_all(const std::vector<Formula>& items);

inline bool is_modal(const Formula& f) {
    return f->kind == Kind::Coop || f->kind == Kind::DualCoop || f->kind == Kind::Can ||
           f->kind == Kind::DualCan;
}
inline bool is_positive_modal(const Formula& f) { return f->kind == Kind::Coop || f->kind == Kind::Can; }

// Goal accessors that see Can/DualCan through their expansion.
Coalition coalition_b(const Formula& f);
Formula goal_a(const Formula& f);
Formula goal_b(const Formula& f);

bool canonically_equal(const Formula& x, const Formula& y);
bool structurally_equal(const Formula& x, const Formula& y);

int modal_depth(const Formula& f);
FragmentSet fragment_of(const Formula& f);

// Membership used by the decision procedure: the CCSR fragments also admit the
// one-goal sugar, which is read as its binary expansion.
bool admits(Fragment frag, const Formula& f);

// Rewrites Can/DualCan as Coop(A,phi,{},true) / DualCoop(A,phi,{},false).
Formula desugar(const Formula& f);

class FragmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Formula dualize(const Formula& f);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    [[nodiscard]] std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

Formula parse(std::string_view text, const AgentUniverse& universe);
std::string print(const Formula& f, const AgentUniverse& universe);

// Sorted names of the propositional atoms occurring anywhere in f.
std::vector<std::string> atoms_of(const Formula& f);

}  // namespace ccsr
