#pragma once

#include "ccsr/formula.hpp"

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace ccsr {

// Boolean skeleton stored as an arena; children always precede parents.
class Skeleton {
public:
    enum class Op { False, True, Var, Not, And, Or };
    struct Entry {
        Op op;
        int x = -1, y = -1;  // operands, or the variable number for Var
    };

    int constant(bool value);
    int var(int v);
    int negate(int x);
    int both(int x, int y);
    int either(int x, int y);
    int implies(int x, int y) { return either(negate(x), y); }

    [[nodiscard]] const std::vector<Entry>& entries() const { return nodes_; }
    [[nodiscard]] int var_count() const { return vars_; }

private:
    std::vector<Entry> nodes_;
    int vars_ = 0;
};

// Maps propositional atoms and maximal modal subformulas to skeleton variables.
// Modal subformulas are identified by their canonical key, so the mapping is
// injective on canonical forms and never looks inside a modality.
class Abstraction {
public:
    int encode(Skeleton& sk, const Formula& f);
    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] const std::vector<Formula>& sources() const { return sources_; }

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> labels_;
    std::vector<Formula> sources_;
    int variable(const std::string& id, const Formula& src);
};

// Truth-table below 16 variables, case splitting from 16 on.
inline constexpr int kTruthTableLimit = 16;

bool taut(const Skeleton& sk, int root);
std::optional<std::vector<bool>> falsifying_assignment(const Skeleton& sk, int root);

// Tautology under the modal-atom abstraction.
bool is_tautology(const Formula& f);
bool implies_tautologically(const std::vector<Formula>& premises, const Formula& conclusion);

// For a modal-free formula: the set of atoms made true by a satisfying
// assignment, or nullopt when unsatisfiable.
std::optional<std::set<std::string>> satisfying_atoms(const Formula& f);

}  // namespace ccsr
