#pragma once

#include "ccsr/formula.hpp"

#include <string>
#include <vector>

namespace ccsr {

struct Literal {
    std::string atom;
    bool positive = true;
    bool operator==(const Literal&) const = default;
};

Formula literal_formula(const Literal& l);

// Clause of literals; empty means false. `top` marks a clause that also
// contained the constant true.
struct ElementaryDisjunction {
    std::vector<Literal> literals;
    bool top = false;

    [[nodiscard]] bool valid() const;  // contains true or a clashing pair
    [[nodiscard]] Formula to_formula() const;
};

struct ElementaryConjunction {
    std::vector<Literal> literals;

    [[nodiscard]] bool satisfiable() const;
    [[nodiscard]] Formula to_formula() const;
};

// Negation of a non-valid elementary disjunction.
ElementaryConjunction negate(const ElementaryDisjunction& gamma);

// One modal disjunct. For the CL fragments only (a, phi) is meaningful and
// (b, psi) holds the expansion ({}, true) or ({}, false).
struct ModalDisjunct {
    int index = 0;
    Coalition a;
    Formula phi;
    Coalition b;
    Formula psi;
};

struct StandardDisjunction {
    Fragment fragment = Fragment::CLn;
    ElementaryDisjunction gamma;
    std::vector<ModalDisjunct> disjuncts;  // in index order: -1,-2,.. or 1,2,..

    [[nodiscard]] Formula disjunct_formula(std::size_t pos) const;
    [[nodiscard]] Formula to_formula() const;
    [[nodiscard]] int depth() const;
    [[nodiscard]] const ModalDisjunct& at_index(int index) const;
    [[nodiscard]] std::size_t position_of(int index) const;

    // Reads a flattened disjunction of literals, constants and modal formulas of
    // the fragment, without any simplification.
    static StandardDisjunction from_formula(const Formula& f, Fragment frag);
};

// Builds the modal formula of the right spelling for the fragment.
Formula make_disjunct(Fragment frag, Coalition a, const Formula& phi, Coalition b, const Formula& psi);

class NormalFormError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClauseItem {
    bool modal = false;
    Literal literal;  // when !modal
    Formula formula;  // when modal
};
using Clause = std::vector<ClauseItem>;

struct CnfResult {
    std::vector<Clause> clauses;
    bool pruned = false;  // some tautological clause was dropped
};

CnfResult cnf_over_modal_atoms(const Formula& f);

std::vector<StandardDisjunction> to_standard_conjunction(const Formula& f, Fragment frag);

// Flattens the top-level disjunction into its disjuncts.
std::vector<Formula> flatten_disjunction(const Formula& f);

}  // namespace ccsr
