// mapf: solve, generate, benchmark and validate MAPF instances.
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapf/bench.hpp"
#include "mapf/search.hpp"

namespace {

enum Exit { kOk = 0, kNoSolution = 1, kUsage = 2, kInternal = 3 };

struct UsageError : mapf::Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw mapf::Error("cannot write '" + path + "'");
}

struct InstanceArgs {
  std::string map_path;
  std::string instance_path;
};

mapf::MapfInstance load_instance(const InstanceArgs& args) {
  std::optional<mapf::GridMap> map;
  if (!args.map_path.empty()) map = mapf::parse_map(read_file(args.map_path));
  return mapf::parse_instance(read_file(args.instance_path), map ? &*map : nullptr);
}

std::unique_ptr<mapf::SatBackend> make_backend(const std::string& kind, std::string command) {
  if (kind == "embedded") return std::make_unique<mapf::EmbeddedSolver>();
  if (command.empty()) command = mapf::external_solver_from_env().value_or("");
  if (command.empty())
    throw UsageError("--backend external needs --solver-cmd or MAPF_SAT_SOLVER");
  return std::make_unique<mapf::ExternalSolver>(command);
}

nlohmann::json outcome_json(const mapf::SolveOutcome& o) {
  nlohmann::json j;
  j["status"] = std::string(mapf::to_string(o.status));
  j["total_ms"] = o.total_ms;
  if (o.solution) {
    j["soc"] = o.solution->soc;
    j["makespan"] = o.solution->makespan;
    j["delta"] = o.delta;
    j["paths"] = o.solution->paths;
  }
  nlohmann::json its = nlohmann::json::array();
  for (const auto& it : o.iterations)
    its.push_back({{"bound", it.bound},
                   {"var_count", it.var_count},
                   {"clause_count", it.clause_count},
                   {"solver_ms", it.solver_ms}});
  j["iterations"] = its;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal multi-agent path finding"};
  app.require_subcommand(1);

  // solve
  InstanceArgs solve_in;
  std::string algo = "mdd-sat", objective = "soc", id_mode = "off", backend_kind = "embedded";
  std::string solver_cmd, emit_dimacs, solution_out;
  double timeout = 30.0;
  int delta_cap = 64;
  bool json = false;
  auto* solve = app.add_subcommand("solve", "solve one instance optimally");
  solve->add_option("--map", solve_in.map_path, "MovingAI map file (grid instances)");
  solve->add_option("--instance", solve_in.instance_path, "instance file")->required();
  solve->add_option("--algo", algo)->check(CLI::IsMember({"basic-sat", "mdd-sat", "cbs"}));
  solve->add_option("--objective", objective)->check(CLI::IsMember({"soc", "makespan"}));
  solve->add_option("--id", id_mode)->check(CLI::IsMember({"off", "sid", "id"}));
  solve->add_option("--backend", backend_kind)->check(CLI::IsMember({"embedded", "external"}));
  solve->add_option("--solver-cmd", solver_cmd, "external solver command");
  solve->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
  solve->add_option("--delta-cap", delta_cap)->check(CLI::NonNegativeNumber);
  solve->add_option("--emit-dimacs", emit_dimacs, "write the last SAT query here");
  solve->add_option("--write-solution", solution_out, "write the solution here");
  solve->add_flag("--json", json, "print JSON");

  // gen
  mapf::GridInstanceParams gen_params;
  std::string gen_map_out, gen_instance_out;
  auto* gen = app.add_subcommand("gen", "generate a random grid instance");
  gen->add_option("--width", gen_params.width)->check(CLI::PositiveNumber);
  gen->add_option("--height", gen_params.height)->check(CLI::PositiveNumber);
  gen->add_option("--obstacles", gen_params.obstacle_rate)->check(CLI::Range(0.0, 0.99));
  gen->add_option("--agents", gen_params.agents)->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_params.seed);
  gen->add_option("--walk-steps", gen_params.walk_steps)->check(CLI::NonNegativeNumber);
  gen->add_option("--map-out", gen_map_out)->required();
  gen->add_option("--instance-out", gen_instance_out)->required();

  // bench
  std::string bench_config, bench_csv, bench_summary;
  auto* bench = app.add_subcommand("bench", "run an experiment suite");
  bench->add_option("--config", bench_config, "suite config (JSON)")->required();
  bench->add_option("--csv", bench_csv, "per-instance rows (default: stdout)");
  bench->add_option("--summary", bench_summary, "aggregates (default: stderr)");
  bench->add_option("--backend", backend_kind)->check(CLI::IsMember({"embedded", "external"}));
  bench->add_option("--solver-cmd", solver_cmd);

  // validate
  InstanceArgs val_in;
  std::string val_solution;
  auto* validate = app.add_subcommand("validate", "check a solution file");
  validate->add_option("--map", val_in.map_path);
  validate->add_option("--instance", val_in.instance_path)->required();
  validate->add_option("--solution", val_solution)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      auto instance = load_instance(solve_in);
      auto backend = make_backend(backend_kind, solver_cmd);
      mapf::SolveRequest req;
      req.algorithm = mapf::parse_algorithm(id_mode == "off" ? algo : algo + "+" + id_mode);
      req.objective = objective == "soc" ? mapf::Objective::Soc : mapf::Objective::Makespan;
      req.timeout_s = timeout;
      req.delta_cap = delta_cap;
      std::string last_dimacs;
      if (!emit_dimacs.empty()) {
        if (algo == "cbs") throw UsageError("--emit-dimacs needs a SAT algorithm");
        req.on_formula = [&](const mapf::CnfFormula& f, const mapf::VarMap&, int) {
          last_dimacs = mapf::write_dimacs(f);
        };
      }
      mapf::SolveOutcome out;
      try {
        out = mapf::solve_instance(instance, req, *backend);
      } catch (const mapf::SatError&) {
        throw;
      } catch (const mapf::Error& e) {
        throw UsageError(e.what());
      }
      if (!emit_dimacs.empty()) write_file(emit_dimacs, last_dimacs);
      if (out.solution) {
        auto report = mapf::validate_solution(instance, *out.solution);
        if (!report.ok()) {
          std::cerr << "internal error: invalid solution\n" << report.describe();
          return kInternal;
        }
        if (!solution_out.empty()) write_file(solution_out, mapf::write_solution(*out.solution));
      }
      if (json) {
        std::cout << outcome_json(out).dump() << '\n';
      } else {
        std::cout << "status=" << mapf::to_string(out.status);
        if (out.solution)
          std::cout << " soc=" << out.solution->soc << " makespan=" << out.solution->makespan
                    << " delta=" << out.delta;
        std::cout << " iterations=" << out.iterations.size() << " time_ms=" << out.total_ms
                  << '\n';
        if (out.solution) std::cout << mapf::write_solution(*out.solution);
      }
      return out.status == mapf::SolveStatus::Optimal ? kOk : kNoSolution;
    }
    if (*gen) {
      auto instance = mapf::generate_grid_instance(gen_params);
      write_file(gen_map_out, mapf::write_map(*instance.layout()));
      write_file(gen_instance_out, mapf::write_instance(instance));
      return kOk;
    }
    if (*bench) {
      auto config = mapf::parse_suite_config(read_file(bench_config));
      auto backend = make_backend(backend_kind, solver_cmd);
      auto result = mapf::run_suite(config, *backend);
      std::string csv = mapf::rows_csv(result.rows);
      std::string summary = mapf::aggregates_csv(result.aggregates);
      if (bench_csv.empty())
        std::cout << csv;
      else
        write_file(bench_csv, csv);
      if (bench_summary.empty())
        std::cerr << summary;
      else
        write_file(bench_summary, summary);
      return kOk;
    }
    if (*validate) {
      auto instance = load_instance(val_in);
      auto solution = mapf::parse_solution(read_file(val_solution), instance);
      auto report = mapf::validate_solution(instance, solution);
      if (report.ok()) {
        std::cout << "valid soc=" << solution.soc << " makespan=" << solution.makespan << '\n';
        return kOk;
      }
      std::cerr << report.describe();
      return kNoSolution;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const mapf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
