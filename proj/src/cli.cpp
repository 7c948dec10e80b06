#include "ccsr/cli.hpp"

#include "ccsr/checker.hpp"
#include "ccsr/formula.hpp"
#include "ccsr/game.hpp"
#include "ccsr/normal_form.hpp"
#include "ccsr/proof.hpp"
#include "ccsr/validity.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

namespace ccsr {

namespace {

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text << "\n";
}

// Formulas of a batch file: one per line, blank lines and '#' comments skipped.
std::vector<std::string> read_batch(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

// In batch mode the n-th artifact goes to "<path>.<n>".
std::string artifact_path(const std::string& path, std::size_t n, bool batch) {
    return batch ? path + "." + std::to_string(n + 1) : path;
}

Fragment require_fragment(const std::string& name) {
    auto frag = parse_fragment(name);
    if (!frag) throw std::invalid_argument("unknown fragment '" + name + "' (expected cln, clp, ccsrn or ccsrp)");
    return *frag;
}

Formula parse_in(const std::string& text, Fragment frag, const AgentUniverse& u) {
    auto f = parse(text, u);
    if (!admits(frag, f)) throw FragmentError(std::string("formula is not in fragment ") + fragment_name(frag));
    return f;
}

struct CheckOutcome {
    int code = kError;
    std::string report;
};

CheckOutcome check_one(const std::string& text, Fragment frag, const AgentUniverse& u, Decider& d,
                       const std::string& proof_path, const std::string& model_path) {
    CheckOutcome res;
    std::ostringstream out;
    try {
        auto f = parse_in(text, frag, u);
        auto verdict = d.decide(f, frag);
        if (verdict.valid) {
            out << "VALID\n";
            const auto& cert = *verdict.certificate;
            if (cert.sds.empty()) out << "witness: tautology\n";
            for (std::size_t i = 0; i < cert.sds.size(); ++i)
                out << "witness " << i + 1 << ": " << print(cert.sds[i].sd.to_formula(), u) << " :: "
                    << cert.sds[i].witness.describe() << "\n";
            auto proof = synthesize(cert, u);
            auto report = check_proof(proof);
            if (!report.ok) {
                out << "error: synthesized proof rejected at step " << report.step << ": " << report.message << "\n";
                res.code = kError;
                res.report = out.str();
                return res;
            }
            if (!proof_path.empty()) {
                write_file(proof_path, proof_to_json_text(proof));
                // Re-read what was written so the file itself is what passed.
                auto again = check_proof(proof_from_json_text(read_file(proof_path)));
                if (!again.ok) throw std::runtime_error("emitted proof failed to re-verify: " + again.message);
                out << "proof: " << proof_path << " (" << proof.steps.size() << " steps, verified)\n";
            } else {
                out << "proof: " << proof.steps.size() << " steps, verified\n";
            }
            res.code = kOk;
        } else {
            out << "INVALID\n";
            const auto& pm = *verdict.countermodel;
            if (satisfies(pm, f)) throw DecisionError("internal: countermodel satisfies the formula");
            const auto& state = pm.model.states[pm.point];
            if (!model_path.empty()) {
                write_file(model_path, model_to_json_text(pm.model));
                auto loaded = model_from_json_text(read_file(model_path));
                if (satisfies({loaded, loaded.state_index(state)}, parse(text, loaded.universe)))
                    throw std::runtime_error("emitted model failed to re-verify");
                out << "countermodel: " << model_path << " state " << state << " (" << pm.model.states.size()
                    << " states, verified)\n";
            } else {
                out << "countermodel: state " << state << " (" << pm.model.states.size() << " states, verified)\n";
            }
            res.code = kNo;
        }
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        res.code = kError;
    }
    res.report = out.str();
    return res;
}

int worst(int a, int b) { return std::max(a, b); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Validity checking, proofs and countermodels for coalition logic fragments", "ccsr"};
    app.require_subcommand(1);

    std::string fragment = "cln", agents, formula, file, emit_proof, emit_model, model_file, state, proof_file;
    int jobs = 1;

    auto* check = app.add_subcommand("check", "Decide validity; emit a proof or a countermodel");
    check->add_option("--fragment", fragment, "cln, clp, ccsrn or ccsrp")->required();
    check->add_option("--agents", agents, "Comma separated agent names")->required();
    auto* check_formula = check->add_option("--formula", formula, "Formula text");
    auto* check_file = check->add_option("--file", file, "Batch file, one formula per line");
    check_formula->excludes(check_file);
    check->add_option("--emit-proof", emit_proof, "Write the proof of a valid formula as JSON");
    check->add_option("--emit-model", emit_model, "Write the countermodel of an invalid formula as JSON");
    check->add_option("--jobs", jobs, "Worker threads for batch input")->check(CLI::Range(1, 256));

    auto* mc = app.add_subcommand("mc", "Model check a formula at a state");
    mc->add_option("--model", model_file, "Model file")->required();
    mc->add_option("--state", state, "State name")->required();
    mc->add_option("--formula", formula, "Formula text")->required();

    auto* sat = app.add_subcommand("sat", "Build a model of a formula");
    sat->add_option("--agents", agents, "Comma separated agent names")->required();
    sat->add_option("--formula", formula, "Formula text")->required();
    sat->add_option("--fragment", fragment, "Fragment the formula must belong to");
    sat->add_option("--emit-model", emit_model, "Write the model as JSON");

    auto* normalize = app.add_subcommand("normalize", "Print the standard disjunctions of a formula");
    normalize->add_option("--fragment", fragment, "cln, clp, ccsrn or ccsrp")->required();
    normalize->add_option("--agents", agents, "Comma separated agent names")->required();
    normalize->add_option("--formula", formula, "Formula text")->required();

    auto* verify = app.add_subcommand("verify", "Replay the checker on a proof file");
    verify->add_option("--proof", proof_file, "Proof file")->required();
    verify->add_option("--agents", agents, "Agents, for proof files that do not name them");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }

    try {
        if (check->parsed()) {
            const Fragment frag = require_fragment(fragment);
            const AgentUniverse u = parse_agents(agents);
            if (formula.empty() == file.empty()) throw std::invalid_argument("give exactly one of --formula and --file");
            const bool batch = !file.empty();
            const auto inputs = batch ? read_batch(file) : std::vector<std::string>{formula};
            std::vector<CheckOutcome> results(inputs.size());
            const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(1, inputs.size()));
            auto work = [&](std::size_t w) {
                Decider d(u);
                for (std::size_t i = w; i < inputs.size(); i += workers)
                    results[i] = check_one(inputs[i], frag, u, d,
                                           emit_proof.empty() ? "" : artifact_path(emit_proof, i, batch),
                                           emit_model.empty() ? "" : artifact_path(emit_model, i, batch));
            };
            if (workers <= 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& t : pool) t.join();
            }
            int code = kOk;
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (batch) out << "[" << i + 1 << "] " << inputs[i] << "\n";
                out << results[i].report;
                code = worst(code, results[i].code);
            }
            return code;
        }
        if (mc->parsed()) {
            const Cgm m = load_model(model_file);
            const int s = m.state_index(state);
            if (s < 0) throw std::invalid_argument("unknown state '" + state + "'");
            ModelChecker checker(m);
            const bool holds = checker.holds(s, parse(formula, m.universe));
            out << (holds ? "true" : "false") << "\n";
            return holds ? kOk : kNo;
        }
        if (sat->parsed()) {
            const AgentUniverse u = parse_agents(agents);
            auto f = parse(formula, u);
            if (sat->count("--fragment") && !admits(require_fragment(fragment), f))
                throw FragmentError("formula is not in fragment " + fragment);
            Decider d(u);
            auto pm = d.sat_construct(f);
            if (!pm) {
                out << "UNSAT\n";
                return kNo;
            }
            if (!satisfies(*pm, f)) throw DecisionError("internal: constructed model does not satisfy the formula");
            out << "SAT\n";
            const auto& st = pm->model.states[pm->point];
            if (!emit_model.empty()) {
                write_file(emit_model, model_to_json_text(pm->model));
                auto loaded = model_from_json_text(read_file(emit_model));
                if (!satisfies({loaded, loaded.state_index(st)}, parse(formula, loaded.universe)))
                    throw std::runtime_error("emitted model failed to re-verify");
                out << "model: " << emit_model << " state " << st << " (" << pm->model.states.size()
                    << " states, verified)\n";
            } else {
                out << "model: state " << st << " (" << pm->model.states.size() << " states, verified)\n";
            }
            return kOk;
        }
        if (normalize->parsed()) {
            const Fragment frag = require_fragment(fragment);
            const AgentUniverse u = parse_agents(agents);
            auto f = parse_in(formula, frag, u);
            for (const auto& sd : to_standard_conjunction(f, frag)) {
                out << print(sd.to_formula(), u) << "\n";
            }
            return kOk;
        }
        if (verify->parsed()) {
            std::optional<AgentUniverse> fallback;
            if (!agents.empty()) fallback = parse_agents(agents);
            auto proof = proof_from_json_text(read_file(proof_file), fallback ? &*fallback : nullptr);
            auto report = check_proof(proof);
            if (!report.ok) {
                out << "REJECTED step " << report.step << ": " << report.message << "\n";
                return kNo;
            }
            out << "OK " << proof.steps.size() << " steps (" << fragment_name(proof.system) << ")\n";
            out << "theorem: " << print(proof.theorem(), proof.universe) << "\n";
            return kOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

}  // namespace ccsr
