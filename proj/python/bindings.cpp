#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reactsyn/encoding.hpp"
#include "reactsyn/verify.hpp"

namespace py = pybind11;
using namespace reactsyn;

namespace {

py::list trace_to_list(const std::vector<IoStep>& steps) {
  py::list out;
  for (const auto& s : steps) out.append(py::make_tuple(s.input, s.output));
  return out;
}

py::dict verify(const std::string& program, const std::string& spec_text) {
  const SpecFile spec = parse_spec(spec_text);
  const ProgramTree tree = parse_program(program, spec.alphabet);
  const VerifyResult r = verify_program(tree, spec.formula);
  py::dict d;
  d["pass"] = r.pass;
  d["mealy_states"] = r.mealy_states;
  if (r.counterexample) {
    d["stem"] = trace_to_list(r.counterexample->stem);
    d["loop"] = trace_to_list(r.counterexample->loop);
  }
  return d;
}

py::object synthesize_program(const std::string& spec_text, int vars, const std::string& encoding, int max_nodes,
                              const std::string& solver, double timeout) {
  const SpecFile spec = parse_spec(spec_text);
  SynthesisOptions o;
  o.encoding = encoding == "twoway" ? EncodingKind::TwoWay : EncodingKind::Direct;
  o.max_nodes = max_nodes;
  o.solver = SolverOptions::from_path(solver, timeout);
  SynthesisResult r;
  {
    py::gil_scoped_release release;
    r = reactsyn::synthesize(spec.formula, make_program_vars(spec.alphabet, vars), o);
  }
  if (!r.program) return py::none();
  py::dict d;
  d["program"] = print_program(*r.program);
  d["nodes"] = r.program->size();
  d["additional_vars"] = r.program->additional_vars();
  d["verified"] = r.verification && r.verification->pass;
  d["seconds"] = r.seconds;
  return d;
}

py::list run(const std::string& program, const std::string& spec_text, const std::vector<std::uint32_t>& inputs) {
  const SpecFile spec = parse_spec(spec_text);
  return trace_to_list(run_program(parse_program(program, spec.alphabet), inputs));
}

std::string format(const std::string& program, const std::string& spec_text) {
  return print_program(parse_program(program, parse_spec(spec_text).alphabet));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bounded synthesis of reactive while-programs";
  // Translators run newest first, so the subclass is registered last.
  auto base = py::register_exception<Error>(m, "ReactsynError");
  py::register_exception<NonReactiveError>(m, "NonReactiveError", base.ptr());
  m.def("verify", &verify, py::arg("program"), py::arg("spec"),
        "Model check program text against specification text.");
  m.def("synthesize", &synthesize_program, py::arg("spec"), py::arg("vars"), py::arg("encoding") = "direct",
        py::arg("max_nodes") = 10, py::arg("solver") = "internal", py::arg("timeout") = 0.0,
        "Smallest program for the specification, or None if there is none within max_nodes.");
  m.def("run", &run, py::arg("program"), py::arg("spec"), py::arg("inputs"),
        "Interpret a program on a finite input word; returns (input, output) pairs.");
  m.def("format", &format, py::arg("program"), py::arg("spec"), "Pretty-print a program.");
}
