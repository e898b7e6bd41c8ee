#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapf/sat.hpp"

namespace mapf {

namespace {

class TempFile {
 public:
  TempFile() {
    auto dir = std::filesystem::temp_directory_path();
    std::string pattern = (dir / "mapf-XXXXXX.cnf").string();
    int fd = mkstemps(pattern.data(), 4);
    if (fd < 0) throw SatError("cannot create temporary DIMACS file");
    close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  return out + "'";
}

}  // namespace

ExternalSolver::ExternalSolver(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw SatError("empty external solver command");
}

SatResult parse_solver_output(const std::string& output, int var_count) {
  SatResult result;
  bool have_status = false;
  std::vector<int> values;
  std::istringstream in(output);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("s ", 0) == 0) {
      std::string status = line.substr(2);
      while (!status.empty() && (status.back() == '\r' || status.back() == ' ')) status.pop_back();
      if (status == "SATISFIABLE") {
        result.status = SatStatus::Sat;
      } else if (status == "UNSATISFIABLE") {
        result.status = SatStatus::Unsat;
      } else if (status == "UNKNOWN") {
        result.status = SatStatus::Unknown;
      } else {
        throw SatError("unrecognized solver status line: " + line);
      }
      have_status = true;
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream vs(line.substr(1));
      for (int lit; vs >> lit;) values.push_back(lit);
    }
  }
  if (!have_status) throw SatError("solver output has no status line");
  if (result.status == SatStatus::Sat) {
    result.model.assign(static_cast<std::size_t>(var_count) + 1, false);
    std::vector<bool> assigned(result.model.size(), false);
    bool terminated = false;
    for (int lit : values) {
      if (lit == 0) {
        terminated = true;
        break;
      }
      int v = std::abs(lit);
      if (v > var_count) throw SatError("model literal exceeds variable count");
      result.model[v] = lit > 0;
      assigned[v] = true;
    }
    if (!terminated) throw SatError("model is not terminated by 0");
    for (int v = 1; v <= var_count; ++v)
      if (!assigned[v]) throw SatError("model misses variable " + std::to_string(v));
  }
  return result;
}

SatResult ExternalSolver::solve(const CnfFormula& formula, std::span<const Lit> assumptions,
                                Deadline deadline) {
  TempFile file;
  {
    std::ofstream out(file.path(), std::ios::binary);
    if (assumptions.empty()) {
      out << write_dimacs(formula);
    } else {
      CnfFormula copy = formula;
      for (Lit l : assumptions) copy.add_unit(l);
      out << write_dimacs(copy);
    }
    if (!out) throw SatError("cannot write DIMACS file " + file.path());
  }

  std::string cmd;
  if (deadline) {
    double seconds =
        std::chrono::duration<double>(*deadline - Clock::now()).count();
    if (seconds <= 0) return {};
    cmd = "timeout " + std::to_string(static_cast<long>(std::ceil(seconds))) + " ";
  }
  cmd += command_ + " " + shell_quote(file.path());

  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw SatError("cannot start external solver: " + command_);
  std::string output;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;)
    output.append(buf.data(), n);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (deadline && code == 124) return {};  // killed by timeout(1)
  // SAT-competition exit codes are 10/20; 0 is tolerated for lenient solvers.
  if (code != 10 && code != 20 && code != 0)
    throw SatError("external solver exited with status " + std::to_string(code) + ": " +
                   command_);
  return parse_solver_output(output, formula.var_count());
}

std::optional<std::string> external_solver_from_env() {
  const char* env = std::getenv("MAPF_SAT_SOLVER");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::string(env);
}

}  // namespace mapf
