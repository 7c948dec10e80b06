#pragma once

#include "ccsr/formula.hpp"
#include "ccsr/validity.hpp"

#include <string>
#include <vector>

namespace ccsr {

enum class Rule { Axiom, R1, R2, R3, R4, R5 };

const char* rule_name(Rule r);
std::optional<Rule> parse_rule(std::string_view name);

// Steps are numbered from 1. For R3-R5 `source` names a disjunct of the
// flattened premise and `targets` name disjuncts of the flattened conclusion
// (two for R3, one for R4 and R5), all counted from 0.
struct ProofStep {
    int index = 0;
    Formula formula;
    Rule rule = Rule::Axiom;
    std::vector<int> premises;
    int source = -1;
    std::vector<int> targets;
};

struct Proof {
    Fragment system = Fragment::CLn;
    AgentUniverse universe;
    std::vector<ProofStep> steps;

    [[nodiscard]] Formula theorem() const { return steps.empty() ? nullptr : steps.back().formula; }
};

struct CheckReport {
    bool ok = true;
    int step = 0;  // failing step number
    std::string message;
};

CheckReport check_proof(const Proof& p);

// Proof of a certified formula; the last step is the certificate's formula.
Proof synthesize(const Certificate& cert, const AgentUniverse& u);
// Proof of one certified standard disjunction; the last step is the SD.
Proof synthesize_sd(const SdCertificate& cert, const AgentUniverse& u);

Proof synth_cln(const SdCertificate& cert, const AgentUniverse& u);
Proof synth_clp(const SdCertificate& cert, const AgentUniverse& u);
Proof synth_ccsrn(const SdCertificate& cert, const AgentUniverse& u);
Proof synth_ccsrp(const SdCertificate& cert, const AgentUniverse& u);

class ProofFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string proof_to_json_text(const Proof& p);
// The universe comes from the file's "agents" entry, or from `fallback`.
Proof proof_from_json_text(const std::string& text, const AgentUniverse* fallback = nullptr);

}  // namespace ccsr
