#include "ccsr/checker.hpp"
#include "ccsr/cli.hpp"
#include "ccsr/formula.hpp"
#include "ccsr/game.hpp"
#include "ccsr/normal_form.hpp"
#include "ccsr/proof.hpp"
#include "ccsr/validity.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ccsr;

namespace {

Fragment fragment_arg(const std::string& name) {
    auto f = parse_fragment(name);
    if (!f) throw py::value_error("unknown fragment '" + name + "'");
    return *f;
}

Formula formula_arg(const std::string& text, Fragment frag, const AgentUniverse& u) {
    auto f = parse(text, u);
    if (!admits(frag, f)) throw py::value_error(std::string("formula is not in fragment ") + fragment_name(frag));
    return f;
}

py::dict decide_py(const std::string& text, const std::string& fragment, const std::string& agents) {
    const Fragment frag = fragment_arg(fragment);
    const AgentUniverse u = parse_agents(agents);
    Decider d(u);
    auto verdict = d.decide(formula_arg(text, frag, u), frag);
    py::dict out;
    out["valid"] = verdict.valid;
    if (verdict.valid) {
        py::list witnesses;
        for (const auto& sd : verdict.certificate->sds) witnesses.append(sd.witness.describe());
        out["witnesses"] = witnesses;
        auto proof = synthesize(*verdict.certificate, u);
        out["proof"] = proof_to_json_text(proof);
        out["proof_steps"] = proof.steps.size();
    } else {
        out["model"] = model_to_json_text(verdict.countermodel->model);
        out["state"] = verdict.countermodel->model.states[verdict.countermodel->point];
    }
    return out;
}

py::dict check_proof_py(const std::string& text) {
    auto report = check_proof(proof_from_json_text(text));
    py::dict out;
    out["ok"] = report.ok;
    out["step"] = report.step;
    out["message"] = report.message;
    return out;
}

bool model_check_py(const std::string& model_json, const std::string& state, const std::string& text) {
    Cgm m = model_from_json_text(model_json);
    const int s = m.state_index(state);
    if (s < 0) throw py::value_error("unknown state '" + state + "'");
    return satisfies({m, s}, parse(text, m.universe));
}

std::vector<std::string> normalize_py(const std::string& text, const std::string& fragment, const std::string& agents) {
    const Fragment frag = fragment_arg(fragment);
    const AgentUniverse u = parse_agents(agents);
    std::vector<std::string> out;
    for (const auto& sd : to_standard_conjunction(formula_arg(text, frag, u), frag)) out.push_back(print(sd.to_formula(), u));
    return out;
}

py::object sat_py(const std::string& text, const std::string& agents) {
    const AgentUniverse u = parse_agents(agents);
    Decider d(u);
    auto pm = d.sat_construct(parse(text, u));
    if (!pm) return py::none();
    py::dict out;
    out["model"] = model_to_json_text(pm->model);
    out["state"] = pm->model.states[pm->point];
    return out;
}

py::tuple run_cli_py(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(ccsr, m) {
    m.doc() = "Validity, proofs, countermodels and model checking for coalition logic fragments";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<FragmentError>(m, "FragmentError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<ProofFormatError>(m, "ProofFormatError", PyExc_ValueError);

    m.def("normalize_text", [](const std::string& text, const std::string& agents) {
        const AgentUniverse u = parse_agents(agents);
        return print(parse(text, u), u);
    }, py::arg("formula"), py::arg("agents"), "Parse and print a formula in canonical spacing");
    m.def("fragments", [](const std::string& text, const std::string& agents) {
        std::vector<std::string> out;
        for (auto f : fragment_of(parse(text, parse_agents(agents))).list()) out.emplace_back(fragment_name(f));
        return out;
    }, py::arg("formula"), py::arg("agents"));
    m.def("modal_depth", [](const std::string& text, const std::string& agents) {
        return modal_depth(parse(text, parse_agents(agents)));
    }, py::arg("formula"), py::arg("agents"));
    m.def("dualize", [](const std::string& text, const std::string& agents) {
        const AgentUniverse u = parse_agents(agents);
        return print(dualize(parse(text, u)), u);
    }, py::arg("formula"), py::arg("agents"));
    m.def("decide", &decide_py, py::arg("formula"), py::arg("fragment"), py::arg("agents"),
          "Decide validity; returns the witnesses and proof, or a countermodel");
    m.def("check_proof", &check_proof_py, py::arg("proof_json"));
    m.def("model_check", &model_check_py, py::arg("model_json"), py::arg("state"), py::arg("formula"));
    m.def("standard_disjunctions", &normalize_py, py::arg("formula"), py::arg("fragment"), py::arg("agents"));
    m.def("sat", &sat_py, py::arg("formula"), py::arg("agents"));
    m.def("run_cli", &run_cli_py, py::arg("args"), "Run a command line; returns (exit code, stdout, stderr)");
}
