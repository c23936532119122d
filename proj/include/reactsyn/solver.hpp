#pragma once

#include <optional>
#include <string>

#include "reactsyn/cnf.hpp"

namespace reactsyn {

enum class Backend { Internal, External };
enum class SolveStatus { Sat, Unsat, Timeout };

/// Environment variable naming the default external solver binary.
inline constexpr const char* kSolverEnvVar = "REACTSYN_SOLVER";

struct SolverOptions {
  Backend backend = Backend::Internal;
  /// Path of an external solver binary, called as `<path> <cnf-file>`.
  std::string solver_path;
  /// Wall-clock limit per call; 0 means unlimited.
  double timeout_seconds = 0.0;

  /// Internal backend unless `path` is non-empty and not "internal".
  static SolverOptions from_path(const std::string& path, double timeout_seconds = 0.0);
  /// Uses $REACTSYN_SOLVER when set, the internal solver otherwise.
  static SolverOptions from_env(double timeout_seconds = 0.0);
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  Model model;
  double seconds = 0.0;
};

SolveResult solve(const DimacsProblem& problem, const SolverOptions& options);
SolveResult solve(const ConstraintSystem& cs, const SolverOptions& options);

/// Parses solver stdout in either the bare `SAT`/`UNSAT` dialect or the
/// competition dialect (`s SATISFIABLE`, `v ...` lines). Returns nullopt
/// when no verdict line is present.
std::optional<SolveResult> parse_solver_output(const std::string& text, int num_vars);

}  // namespace reactsyn
