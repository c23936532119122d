#include "reactsyn/solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "reactsyn/cdcl.hpp"
#include "reactsyn/error.hpp"

namespace reactsyn {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename AddClauses>
SolveResult solve_internal(int num_vars, AddClauses add_clauses, const SolverOptions& options) {
  const auto start = Clock::now();
  CdclSolver solver(num_vars);
  add_clauses(solver);
  std::optional<Clock::time_point> deadline;
  if (options.timeout_seconds > 0) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(options.timeout_seconds));
  }
  SolveResult result;
  switch (solver.solve(deadline)) {
    case CdclSolver::Result::Sat: {
      std::vector<bool> values(static_cast<std::size_t>(num_vars) + 1, false);
      for (int v = 1; v <= num_vars; ++v) values[static_cast<std::size_t>(v)] = solver.model_value(v);
      result.status = SolveStatus::Sat;
      result.model = Model(std::move(values));
      break;
    }
    case CdclSolver::Result::Unsat:
      result.status = SolveStatus::Unsat;
      break;
    case CdclSolver::Result::Unknown:
      result.status = SolveStatus::Timeout;
      break;
  }
  result.seconds = elapsed(start);
  return result;
}

// Removes a file when going out of scope.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& suffix) {
    std::string pattern = (std::filesystem::temp_directory_path() / ("reactsyn-XXXXXX" + suffix)).string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    const int fd = mkstemps(buf.data(), static_cast<int>(suffix.size()));
    if (fd < 0) throw SolverError("cannot create temporary file");
    ::close(fd);
    path = buf.data();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
};

void write_problem(const DimacsProblem& problem, const std::string& path) {
  std::ofstream out(path);
  out << "p cnf " << problem.num_vars << ' ' << problem.clauses.size() << '\n';
  for (const auto& clause : problem.clauses) {
    for (Lit l : clause) out << l << ' ';
    out << "0\n";
  }
  if (!out) throw SolverError("cannot write DIMACS file " + path);
}

SolveResult run_external(const std::string& cnf_path, int num_vars, const SolverOptions& options) {
  if (options.solver_path.empty()) throw SolverError("no external solver configured");
  if (::access(options.solver_path.c_str(), X_OK) != 0) {
    throw SolverError("solver binary not executable: " + options.solver_path);
  }
  TempFile out_file(".out");
  const auto start = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw SolverError("fork failed");
  if (pid == 0) {
    const int fd = ::open(out_file.path.c_str(), O_WRONLY | O_TRUNC);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::close(fd);
    }
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::setpgid(0, 0);
    ::execl(options.solver_path.c_str(), options.solver_path.c_str(), cnf_path.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }

  int status = 0;
  bool timed_out = false;
  auto sleep_for = std::chrono::microseconds(200);
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw SolverError("waitpid failed");
    if (options.timeout_seconds > 0 && elapsed(start) > options.timeout_seconds) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(sleep_for);
    if (sleep_for < std::chrono::milliseconds(20)) sleep_for *= 2;
  }

  SolveResult result;
  result.seconds = elapsed(start);
  if (timed_out) {
    result.status = SolveStatus::Timeout;
    return result;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    throw SolverError("could not execute solver " + options.solver_path);
  }
  std::ifstream in(out_file.path);
  std::stringstream text;
  text << in.rdbuf();
  auto parsed = parse_solver_output(text.str(), num_vars);
  if (!parsed) {
    throw SolverError("solver produced no verdict (exit status " +
                      std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ")");
  }
  parsed->seconds = result.seconds;
  return *parsed;
}

}  // namespace

SolverOptions SolverOptions::from_path(const std::string& path, double timeout_seconds) {
  SolverOptions options;
  options.timeout_seconds = timeout_seconds;
  if (!path.empty() && path != "internal") {
    options.backend = Backend::External;
    options.solver_path = path;
  }
  return options;
}

SolverOptions SolverOptions::from_env(double timeout_seconds) {
  const char* env = std::getenv(kSolverEnvVar);
  return from_path(env != nullptr ? env : "", timeout_seconds);
}

std::optional<SolveResult> parse_solver_output(const std::string& text, int num_vars) {
  std::istringstream in(text);
  std::string line;
  std::optional<SolveStatus> verdict;
  std::vector<bool> values(static_cast<std::size_t>(num_vars) + 1, false);
  auto read_literals = [&](std::istringstream& ls) {
    long long lit = 0;
    while (ls >> lit) {
      const long long var = lit < 0 ? -lit : lit;
      if (var == 0 || var > num_vars) continue;
      values[static_cast<std::size_t>(var)] = lit > 0;
    }
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "c") continue;
    if (head == "s") {
      std::string word;
      ls >> word;
      if (word == "SATISFIABLE") verdict = SolveStatus::Sat;
      else if (word == "UNSATISFIABLE") verdict = SolveStatus::Unsat;
      else if (word == "UNKNOWN") verdict = SolveStatus::Timeout;
      continue;
    }
    if (head == "v") {
      read_literals(ls);
      continue;
    }
    if (head == "SAT" || head == "SATISFIABLE") {
      verdict = SolveStatus::Sat;
      continue;
    }
    if (head == "UNSAT" || head == "UNSATISFIABLE") {
      verdict = SolveStatus::Unsat;
      continue;
    }
    if (head == "UNKNOWN" || head == "INDET" || head == "INDETERMINATE") {
      verdict = SolveStatus::Timeout;
      continue;
    }
    // Bare dialect: literal lines after the verdict.
    if (verdict == SolveStatus::Sat) {
      std::istringstream again(line);
      read_literals(again);
    }
  }
  if (!verdict) return std::nullopt;
  SolveResult result;
  result.status = *verdict;
  if (*verdict == SolveStatus::Sat) result.model = Model(std::move(values));
  return result;
}

SolveResult solve(const DimacsProblem& problem, const SolverOptions& options) {
  if (options.backend == Backend::Internal) {
    return solve_internal(
        problem.num_vars,
        [&](CdclSolver& solver) {
          for (const auto& clause : problem.clauses) solver.add_clause(clause);
        },
        options);
  }
  TempFile cnf(".cnf");
  write_problem(problem, cnf.path);
  return run_external(cnf.path, problem.num_vars, options);
}

SolveResult solve(const ConstraintSystem& cs, const SolverOptions& options) {
  if (options.backend == Backend::External) {
    TempFile cnf(".cnf");
    {
      std::ofstream out(cnf.path);
      cs.write_dimacs(out);
      if (!out) throw SolverError("cannot write DIMACS file " + cnf.path);
    }
    return run_external(cnf.path, cs.num_vars(), options);
  }
  return solve_internal(
      cs.num_vars(),
      [&](CdclSolver& solver) {
        const auto& flat = cs.flat_clauses();
        std::size_t begin = 0;
        for (std::size_t k = 0; k < flat.size(); ++k) {
          if (flat[k] != 0) continue;
          solver.add_clause(std::span<const int>(flat.data() + begin, k - begin));
          begin = k + 1;
        }
      },
      options);
}

}  // namespace reactsyn
