// reactsyn: synthesize, verify and benchmark reactive while-programs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "reactsyn/encoding.hpp"
#include "reactsyn/error.hpp"
#include "reactsyn/verify.hpp"

using namespace reactsyn;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInfra = 3 };

// Bad user input (unreadable or malformed files, impossible settings).
struct UsageError : Error {
  using Error::Error;
};

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

const char* status_name(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Realizable: return "realizable";
    case SynthesisStatus::Unrealizable: return "unrealizable";
    case SynthesisStatus::Timeout: return "timeout";
  }
  return "?";
}

SpecFile read_spec(const std::string& path) {
  try {
    return load_spec(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

ProgramVars program_vars(const SpecFile& spec, int total) {
  const int needed = spec.alphabet.num_inputs() + spec.alphabet.num_outputs();
  if (total < needed)
    throw UsageError("--vars must be at least " + std::to_string(needed) + " (inputs plus outputs)");
  return make_program_vars(spec.alphabet, total);
}

SolverOptions solver_options(const std::string& path, double timeout) {
  return path.empty() ? SolverOptions::from_env(timeout) : SolverOptions::from_path(path, timeout);
}

// -- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string spec;
  int vars = 0;
  std::string encoding = "direct";
  std::string io = "inout";
  int min_nodes = 1;
  int max_nodes = 10;
  std::uint64_t bound = 0;
  int structure_bound = 0;
  std::string solver;
  double timeout = 0;
  bool keep_going = false;
  std::string dump;
  std::string structure_out;
};

int cmd_synth(const SynthArgs& args) {
  const SpecFile spec = read_spec(args.spec);
  const ProgramVars vars = program_vars(spec, args.vars);
  SynthesisOptions o;
  o.encoding = args.encoding == "twoway" ? EncodingKind::TwoWay : EncodingKind::Direct;
  o.io = args.io == "split" ? IoMode::Split : IoMode::InOut;
  if (o.encoding == EncodingKind::Direct && o.io == IoMode::Split)
    throw UsageError("--io split is only available with --encoding twoway");
  o.min_nodes = args.min_nodes;
  o.max_nodes = args.max_nodes;
  if (o.max_nodes < o.min_nodes || o.min_nodes < 1) throw UsageError("invalid node range");
  if (args.bound > 0) o.bound = args.bound;
  if (args.structure_bound > 0) o.structure_bound = args.structure_bound;
  o.solver = solver_options(args.solver, args.timeout);
  o.continue_on_timeout = args.keep_going;
  o.dump_prefix = args.dump;

  const SynthesisResult r = synthesize(spec.formula, vars, o);
  std::cout << "encoding: " << to_string(o.encoding) << "\n";
  for (const auto& s : r.steps) {
    std::cout << "  nodes " << std::setw(2) << s.nodes << "  bound " << s.bound << "  vars " << s.num_vars
              << "  clauses " << s.num_clauses << "  " << status_name(s.status) << "  " << std::fixed
              << std::setprecision(2) << s.encode_seconds + s.solve_seconds << "s\n";
  }
  std::cout << "result: " << status_name(r.status) << "\n";
  if (r.status == SynthesisStatus::Timeout) return kInfra;
  if (r.status == SynthesisStatus::Unrealizable) {
    std::cout << "no program with at most " << o.max_nodes << " nodes\n";
    return kNegative;
  }
  const ProgramTree& t = *r.program;
  std::cout << print_program(t);
  std::cout << "nodes: " << t.size() << "\n";
  std::cout << "additional variables: " << t.additional_vars() << "\n";
  std::cout << "automaton states: " << r.automaton_states << " (" << r.automaton_reachable << " reachable)\n";
  if (r.structure && !args.structure_out.empty()) {
    std::ofstream out(args.structure_out);
    write_structure(*r.structure, out);
  }
  const bool pass = r.verification && r.verification->pass;
  std::cout << "verification: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kInfra;
}

// -- verify -----------------------------------------------------------------

int cmd_verify(const std::string& program_path, const std::string& spec_path) {
  const SpecFile spec = read_spec(spec_path);
  ProgramTree tree;
  try {
    tree = load_program(program_path, spec.alphabet);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const ValidationReport report = validate_program_tree(tree);
  if (!report.ok()) {
    std::string msg = "invalid program:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw UsageError(msg);
  }
  VerifyResult r;
  try {
    r = verify_program(tree, spec.formula);
  } catch (const NonReactiveError& e) {
    throw UsageError(std::string("program is not reactive: ") + e.what());
  }
  std::cout << "mealy states: " << r.mealy_states << "\n";
  std::cout << "run graph vertices: " << r.run_graph_vertices << "\n";
  if (r.pass) {
    std::cout << "PASS\n";
    return kOk;
  }
  std::cout << "FAIL\n";
  if (r.counterexample) {
    std::cout << "counterexample:\n  stem: " << format_trace(r.counterexample->stem, spec.alphabet)
              << "\n  loop: " << format_trace(r.counterexample->loop, spec.alphabet) << "\n";
  }
  return kNegative;
}

// -- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string suite;
  std::string out;
  std::string solver;
  double timeout = 0;
  std::vector<std::string> encodings;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int cmd_bench(const BenchArgs& args) {
  nlohmann::json suite;
  {
    std::ifstream in(args.suite);
    if (!in) throw UsageError("cannot open suite " + args.suite);
    try {
      in >> suite;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("malformed suite: ") + e.what());
    }
  }
  const fs::path base = fs::path(args.suite).parent_path();
  const double timeout = args.timeout > 0 ? args.timeout : suite.value("timeout", 0.0);
  std::vector<std::string> default_encodings = args.encodings;
  if (default_encodings.empty()) default_encodings = suite.value("encodings", std::vector<std::string>{"direct"});

  std::ofstream csv(args.out);
  if (!csv) throw UsageError("cannot write " + args.out);
  csv << "name,encoding,status,nodes,additional_vars,automaton_states,automaton_reachable,"
         "reference_automaton_states,expected_nodes,expected_additional_vars,matches_expectation,verification,"
         "trace_equivalent,seconds\n";

  std::cout << std::left << std::setw(14) << "spec" << std::setw(8) << "enc" << std::setw(14) << "status"
            << std::setw(7) << "nodes" << std::setw(6) << "add" << std::setw(10) << "|B'|" << std::setw(10)
            << "verify" << std::setw(7) << "trace" << "time\n";
  bool all_ok = true;
  for (const auto& entry : suite.at("benchmarks")) {
    const std::string name = entry.at("name");
    const int expected_nodes = entry.value("expected_nodes", -1);
    const int expected_add = entry.value("expected_additional_vars", -1);
    const int reference_states = entry.value("reference_automaton_states", -1);
    const int tolerance = entry.value("node_tolerance", 0);
    auto encodings = entry.value("encodings", default_encodings);
    if (!args.encodings.empty()) encodings = args.encodings;
    for (const std::string& enc : encodings) {
      std::string status = "error", verification = "-", trace = "-";
      int nodes = -1, additional = -1, states = -1, reachable = -1;
      double seconds = 0;
      std::string note;
      try {
        const SpecFile spec = read_spec((base / entry.at("spec").get<std::string>()).string());
        const ProgramVars vars = program_vars(spec, entry.at("vars").get<int>());
        SynthesisOptions o;
        o.encoding = enc == "twoway" ? EncodingKind::TwoWay : EncodingKind::Direct;
        o.max_nodes = entry.value("max_nodes", 10);
        o.solver = solver_options(args.solver, timeout);
        const SynthesisResult r = synthesize(spec.formula, vars, o);
        status = status_name(r.status);
        states = r.automaton_states;
        reachable = r.automaton_reachable;
        seconds = r.seconds;
        if (r.program) {
          nodes = r.program->size();
          additional = r.program->additional_vars();
          verification = r.verification && r.verification->pass ? "PASS" : "FAIL";
          if (entry.contains("reference_program")) {
            const ProgramTree ref =
                load_program((base / entry["reference_program"].get<std::string>()).string(), spec.alphabet);
            trace = traces_equal(*r.program, ref, 6) ? "yes" : "no";
          }
        }
      } catch (const std::exception& e) {
        note = e.what();
      }
      bool matches = status == "realizable";
      if (expected_nodes >= 0) matches = matches && std::abs(nodes - expected_nodes) <= tolerance;
      if (expected_add >= 0) matches = matches && additional == expected_add;
      all_ok = all_ok && matches && verification != "FAIL";
      csv << csv_field(name) << "," << enc << "," << status << "," << nodes << "," << additional << "," << states
          << "," << reachable << "," << reference_states << "," << expected_nodes << "," << expected_add << ","
          << (matches ? "yes" : "no") << "," << verification << "," << trace << "," << std::fixed
          << std::setprecision(3) << seconds << "\n";
      std::ostringstream time;
      time << std::fixed << std::setprecision(2) << seconds << "s";
      std::cout << std::left << std::setw(14) << name << std::setw(8) << enc << std::setw(14) << status
                << std::setw(7) << nodes << std::setw(6) << additional << std::setw(10)
                << (std::to_string(states) + (reference_states >= 0 ? "/" + std::to_string(reference_states) : ""))
                << std::setw(10) << verification << std::setw(7) << trace << time.str()
                << (matches ? "" : "  [mismatch]") << (note.empty() ? "" : "  " + note) << "\n";
      std::cout.flush();
      csv.flush();
    }
  }
  std::cout << "(|B'| column: computed/reference; reference sizes come from a different LTL translator and are informational)\n";
  return all_ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded synthesis of reactive while-programs from LTL"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Synthesize a smallest program for a specification");
  s->add_option("--spec", synth.spec, "Specification file")->required()->check(CLI::ExistingFile);
  s->add_option("--vars", synth.vars, "Number of program variables")->required()->check(CLI::Range(1, 16));
  s->add_option("--encoding", synth.encoding, "Constraint encoding")
      ->check(CLI::IsMember({"twoway", "direct"}));
  s->add_option("--io", synth.io, "I/O statements: one InOut label or separate input/output labels")
      ->check(CLI::IsMember({"inout", "split"}));
  s->add_option("--min-nodes", synth.min_nodes, "Smallest node budget to try")->check(CLI::PositiveNumber);
  s->add_option("--max-nodes", synth.max_nodes, "Largest node budget to try")->required()->check(CLI::PositiveNumber);
  s->add_option("--bound", synth.bound, "Annotation bound (two-way encoding)")->check(CLI::PositiveNumber);
  s->add_option("--structure-bound", synth.structure_bound, "Maximum number of InOut configurations (direct)")
      ->check(CLI::PositiveNumber);
  s->add_option("--solver", synth.solver, "SAT solver binary, or 'internal' (default: $REACTSYN_SOLVER)");
  s->add_option("--timeout", synth.timeout, "Seconds per solver call")->check(CLI::NonNegativeNumber);
  s->add_flag("--continue-on-timeout", synth.keep_going, "Try larger budgets after a timeout");
  s->add_option("--dump", synth.dump, "Write every instance to PREFIX.<nodes>.cnf and .map");
  s->add_option("--structure-out", synth.structure_out, "Write the extracted structure (direct encoding)");

  std::string program_path, spec_path;
  auto* v = app.add_subcommand("verify", "Model check a program against a specification");
  v->add_option("--program", program_path, "Program file")->required()->check(CLI::ExistingFile);
  v->add_option("--spec", spec_path, "Specification file")->required()->check(CLI::ExistingFile);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark suite");
  b->add_option("--suite", bench.suite, "Suite description (JSON)")->required()->check(CLI::ExistingFile);
  b->add_option("--out", bench.out, "CSV output path")->required();
  b->add_option("--solver", bench.solver, "SAT solver binary, or 'internal'");
  b->add_option("--timeout", bench.timeout, "Seconds per solver call")->check(CLI::NonNegativeNumber);
  b->add_option("--encoding", bench.encodings, "Restrict to these encodings")
      ->check(CLI::IsMember({"twoway", "direct"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return cmd_synth(synth);
    if (*v) return cmd_verify(program_path, spec_path);
    if (*b) return cmd_bench(bench);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfra;
  }
  return kUsage;
}
