#pragma once

#include "ccsr/formula.hpp"
#include "ccsr/game.hpp"
#include "ccsr/normal_form.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ccsr {

struct Witness {
    enum class Kind { GammaValid, NeatSubset, Pivot, NeatTuple, WellArranged };
    Kind kind = Kind::GammaValid;
    std::vector<int> first;   // NeatSubset: NI'; NeatTuple: NI1; Pivot: PI0
    std::vector<int> second;  // NeatTuple: NI2
    int pivot = 0;            // Pivot: j'
    std::vector<std::vector<int>> sequence;  // WellArranged: PI*_0 .. PI*_L
    std::vector<int> pivots;                 // WellArranged: j_1 .. j_L

    [[nodiscard]] std::string describe() const;
};

struct Certificate;
using CertPtr = std::shared_ptr<const Certificate>;

struct Obligation {
    Formula formula;
    CertPtr cert;
};

// Validity certificate of one standard disjunction. The obligations are the
// strictly shallower formulas the witness relies on:
//   NeatSubset, Pivot, NeatTuple: one obligation;
//   WellArranged: one expansion obligation per pivot, then the terminal one.
struct SdCertificate {
    StandardDisjunction sd;
    Witness witness;
    std::vector<Obligation> obligations;
};

// Validity certificate of a formula: the certificates of its standard
// disjunctions. No disjunctions means a tautology under the modal abstraction.
struct Certificate {
    Formula formula;
    Fragment fragment = Fragment::CLn;
    std::vector<SdCertificate> sds;
};

struct Verdict {
    bool valid = false;
    CertPtr certificate;
    std::optional<PointedCgm> countermodel;
};

// Obligation formulas, built exactly as proof synthesis consumes them.
Formula cln_obligation(const StandardDisjunction& sd, const std::vector<int>& subset);
Formula clp_obligation(const StandardDisjunction& sd, const std::vector<int>& base, int pivot);
Formula ccsrn_obligation(const StandardDisjunction& sd, const std::vector<int>& ni1, const std::vector<int>& ni2);
Formula ccsrp_expansion(const StandardDisjunction& sd, const std::vector<int>& set, int pivot);
Formula ccsrp_terminal(const StandardDisjunction& sd, const std::vector<int>& set);
// phi_j & psi_j
Formula ccsrp_pair(const StandardDisjunction& sd, int index);

bool neat_subset(const StandardDisjunction& sd, const std::vector<int>& subset);
bool neat_tuple(const StandardDisjunction& sd, const std::vector<int>& ni1, const std::vector<int>& ni2);

// {j : B_j = AG} for CLp disjuncts <B_j>psi_j.
std::vector<int> clp_base(const StandardDisjunction& sd, const AgentUniverse& u);
// {j : A_j = AG} and {j : A_j u B_j = AG}.
std::vector<int> ccsrp_pi_f(const StandardDisjunction& sd, const AgentUniverse& u);
std::vector<int> ccsrp_pi_fs(const StandardDisjunction& sd, const AgentUniverse& u);

class DecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The recursive decision procedure. Holds memo tables, so one instance should
// serve a whole family of related queries; instances are not thread-safe.
class Decider {
public:
    explicit Decider(AgentUniverse u);

    [[nodiscard]] const AgentUniverse& universe() const { return u_; }

    Verdict decide(const Formula& f, Fragment frag);

    // Witness search only; null when f is not valid.
    CertPtr prove(const Formula& f, Fragment frag);
    bool valid(const Formula& f, Fragment frag) { return prove(f, frag) != nullptr; }

    // Validity of a single standard disjunction.
    std::optional<SdCertificate> reduce(const StandardDisjunction& sd);

    // For a CCSRp disjunction: a set PI* between PI^f and PI^fs for which all
    // three sub-conditions fail, or nullopt when the first condition holds.
    std::optional<std::vector<int>> ccsrp_first_condition_failure(const StandardDisjunction& sd);

    // Countermodels. The argument must be invalid.
    PointedCgm refute(const Formula& f, Fragment frag);
    PointedCgm refute_sd(const StandardDisjunction& sd);

    // A pointed model of f, or nullopt if f is unsatisfiable.
    std::optional<PointedCgm> sat_construct(const Formula& f);

    [[nodiscard]] std::size_t cache_size() const { return proved_.size(); }

private:
    AgentUniverse u_;
    std::unordered_map<std::string, CertPtr> proved_;
    std::unordered_map<std::string, std::shared_ptr<const std::optional<PointedCgm>>> sat_;

    std::optional<SdCertificate> reduce_cln(const StandardDisjunction& sd);
    std::optional<SdCertificate> reduce_clp(const StandardDisjunction& sd);
    std::optional<SdCertificate> reduce_ccsrn(const StandardDisjunction& sd);
    std::optional<SdCertificate> reduce_ccsrp(const StandardDisjunction& sd);
    CertPtr obligation(const Formula& f, const StandardDisjunction& sd);
};

// Convenience wrappers with a fresh decider.
std::optional<SdCertificate> reduce_cln(const StandardDisjunction& sd, const AgentUniverse& u);
std::optional<SdCertificate> reduce_clp(const StandardDisjunction& sd, const AgentUniverse& u);
std::optional<SdCertificate> reduce_ccsrn(const StandardDisjunction& sd, const AgentUniverse& u);
std::optional<SdCertificate> reduce_ccsrp(const StandardDisjunction& sd, const AgentUniverse& u);
Verdict decide(const Formula& f, Fragment frag, const AgentUniverse& u);

}  // namespace ccsr
