#include <chrono>
#include <fstream>

#include "reactsyn/encoding.hpp"
#include "reactsyn/error.hpp"

namespace reactsyn {

namespace {

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void dump(const ConstraintSystem& cs, const std::string& prefix, int nodes) {
  const std::string base = prefix + "." + std::to_string(nodes);
  std::ofstream cnf(base + ".cnf");
  std::ofstream map(base + ".map");
  if (!cnf || !map) throw Error("cannot write " + base + ".cnf");
  cs.write_dimacs(cnf);
  cs.write_name_map(map);
}

}  // namespace

const char* to_string(EncodingKind e) { return e == EncodingKind::TwoWay ? "twoway" : "direct"; }

SynthesisResult synthesize(const Ltl& spec, const ProgramVars& vars, const SynthesisOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.min_nodes < 1 || options.max_nodes < options.min_nodes) throw Error("invalid node range");
  if (options.encoding == EncodingKind::Direct && options.io != IoMode::InOut)
    throw Error("the direct encoding works on InOut programs only");
  const int atoms = vars.num_inputs + vars.num_outputs;

  SynthesisResult result;
  const TwoWayAutomaton automaton = build_specification_automaton(spec, vars, options.io);
  result.automaton_states = automaton.num_states();
  result.automaton_reachable = static_cast<int>(automaton.reachable_states().size());
  const WordAutomaton ucb = options.encoding == EncodingKind::Direct ? negate_and_dualize(spec, atoms) : WordAutomaton{};

  bool timed_out = false;
  for (int n = options.min_nodes; n <= options.max_nodes; ++n) {
    StepReport report;
    report.nodes = n;
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<TwoWayInstance> tw;
    std::optional<DirectInstance> di;
    if (options.encoding == EncodingKind::TwoWay) {
      tw.emplace(encode_twoway(automaton, n, options.bound));
      report.bound = tw->bound;
    } else {
      di.emplace(encode_direct(ucb, vars, n, options.structure_bound));
      report.bound = static_cast<std::uint64_t>(di->spec_states) * static_cast<std::uint64_t>(di->structure_capacity);
    }
    const ConstraintSystem& cs = tw ? tw->cs : di->cs;
    report.num_vars = cs.num_vars();
    report.num_clauses = cs.num_clauses();
    report.encode_seconds = since(t0);
    if (!options.dump_prefix.empty()) dump(cs, options.dump_prefix, n);

    const SolveResult solved = solve(cs, options.solver);
    report.status = solved.status;
    report.solve_seconds = solved.seconds;
    result.steps.push_back(report);

    if (solved.status == SolveStatus::Sat) {
      result.status = SynthesisStatus::Realizable;
      result.program = tw ? decode_twoway(*tw, solved.model) : decode_direct(*di, solved.model);
      if (di) result.structure = decode_structure(*di, solved.model);
      try {
        result.verification = verify_program(*result.program, spec);
      } catch (const NonReactiveError&) {
        result.verification = VerifyResult{};
      }
      result.seconds = since(start);
      return result;
    }
    if (solved.status == SolveStatus::Timeout) {
      timed_out = true;
      if (!options.continue_on_timeout) break;
    }
  }
  result.status = timed_out ? SynthesisStatus::Timeout : SynthesisStatus::Unrealizable;
  result.seconds = since(start);
  return result;
}

SynthesisResult synthesize_twoway(const Ltl& spec, const ProgramVars& vars, SynthesisOptions options) {
  options.encoding = EncodingKind::TwoWay;
  return synthesize(spec, vars, options);
}

SynthesisResult synthesize_direct(const Ltl& spec, const ProgramVars& vars, SynthesisOptions options) {
  options.encoding = EncodingKind::Direct;
  options.io = IoMode::InOut;
  return synthesize(spec, vars, options);
}

}  // namespace reactsyn
