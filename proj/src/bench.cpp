#include "mapf/bench.hpp"

#include <exception>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mapf/search.hpp"

namespace mapf {

std::string_view to_string(Objective objective) {
  return objective == Objective::Soc ? "soc" : "makespan";
}

AlgorithmSpec parse_algorithm(std::string_view name) {
  AlgorithmSpec spec;
  std::string_view base = name;
  if (auto plus = name.find('+'); plus != std::string_view::npos) {
    base = name.substr(0, plus);
    std::string_view suffix = name.substr(plus + 1);
    if (suffix == "sid")
      spec.id = IdMode::Simple;
    else if (suffix == "id")
      spec.id = IdMode::Full;
    else
      throw Error("unknown ID mode '" + std::string(suffix) + "'");
  }
  if (base != "basic-sat" && base != "mdd-sat" && base != "cbs")
    throw Error("unknown algorithm '" + std::string(base) + "'");
  spec.base = base;
  return spec;
}

std::string to_string(const AlgorithmSpec& spec) {
  if (!spec.id) return spec.base;
  return spec.base + (*spec.id == IdMode::Simple ? "+sid" : "+id");
}

SolveOutcome solve_instance(const MapfInstance& instance, const SolveRequest& request,
                            SatBackend& backend) {
  const AlgorithmSpec& algo = request.algorithm;
  if (request.objective == Objective::Makespan && (algo.base == "cbs" || algo.id))
    throw Error("the makespan objective is only available for basic-sat and mdd-sat");

  auto base_solver = [&](const MapfInstance& sub, double timeout_s) {
    if (algo.base == "cbs") {
      CbsLimits limits;
      limits.timeout_s = timeout_s;
      return cbs_solve(sub, limits);
    }
    Limits limits;
    limits.timeout_s = timeout_s;
    limits.delta_cap = request.delta_cap;
    limits.exec = request.exec;
    limits.on_formula = request.on_formula;
    EncodingKind kind = algo.base == "basic-sat" ? EncodingKind::Basic : EncodingKind::Mdd;
    return request.objective == Objective::Soc ? solve_soc_optimal(sub, kind, backend, limits)
                                               : solve_makespan_optimal(sub, kind, backend, limits);
  };
  if (!algo.id) return base_solver(instance, request.timeout_s);
  IdOptions options;
  options.timeout_s = request.timeout_s;
  return id_solve(instance, base_solver, *algo.id, backend, options);
}

void SuiteConfig::validate() const {
  if (grid_sizes.empty() || obstacle_rates.empty() || algorithms.empty())
    throw Error("suite needs grid sizes, obstacle rates and algorithms");
  for (auto [w, h] : grid_sizes)
    if (w <= 0 || h <= 0) throw Error("grid sizes must be positive");
  for (double r : obstacle_rates)
    if (r < 0.0 || r >= 1.0) throw Error("obstacle rates must lie in [0, 1)");
  if (agents_min <= 0 || agents_max < agents_min) throw Error("bad agent range");
  if (instances_per_point <= 0) throw Error("instances_per_point must be positive");
  if (timeout_s <= 0) throw Error("timeout must be positive");
  if (walk_steps < 0 || delta_cap < 0) throw Error("walk_steps and delta_cap must be >= 0");
  for (const auto& a : algorithms) parse_algorithm(a);
}

SuiteConfig parse_suite_config(std::string_view text) {
  using nlohmann::json;
  SuiteConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("suite config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("suite config must be a JSON object");
  try {
    if (j.contains("grid_sizes")) {
      c.grid_sizes.clear();
      for (const auto& s : j["grid_sizes"]) {
        if (s.is_array())
          c.grid_sizes.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
        else
          c.grid_sizes.push_back({s.get<int>(), s.get<int>()});
      }
    }
    if (j.contains("obstacle_rates")) c.obstacle_rates = j["obstacle_rates"].get<std::vector<double>>();
    if (j.contains("agents_min")) c.agents_min = j["agents_min"].get<int>();
    if (j.contains("agents_max")) c.agents_max = j["agents_max"].get<int>();
    if (j.contains("instances_per_point")) c.instances_per_point = j["instances_per_point"].get<int>();
    if (j.contains("timeout_s")) c.timeout_s = j["timeout_s"].get<double>();
    if (j.contains("algorithms")) c.algorithms = j["algorithms"].get<std::vector<std::string>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("walk_steps")) c.walk_steps = j["walk_steps"].get<int>();
    if (j.contains("delta_cap")) c.delta_cap = j["delta_cap"].get<int>();
    if (j.contains("objective")) {
      auto o = j["objective"].get<std::string>();
      if (o == "soc")
        c.objective = Objective::Soc;
      else if (o == "makespan")
        c.objective = Objective::Makespan;
      else
        throw ParseError("unknown objective '" + o + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("suite config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::vector<SuiteInstance> suite_instances(const SuiteConfig& config) {
  config.validate();
  std::vector<SuiteInstance> out;
  std::uint64_t stream = splitmix64(config.seed);
  for (auto [w, h] : config.grid_sizes)
    for (double rate : config.obstacle_rates)
      for (int k = config.agents_min; k <= config.agents_max; ++k)
        for (int i = 0; i < config.instances_per_point; ++i) {
          stream = splitmix64(stream);
          SuiteInstance s;
          s.width = w;
          s.height = h;
          s.obstacle_rate = rate;
          s.k = k;
          s.seed = stream;
          std::ostringstream id;
          id << w << 'x' << h << "-o" << std::fixed << std::setprecision(2) << rate << "-k" << k
             << "-i" << i;
          s.id = id.str();
          GridInstanceParams p;
          p.width = w;
          p.height = h;
          p.obstacle_rate = rate;
          p.agents = k;
          p.seed = s.seed;
          p.walk_steps = config.walk_steps;
          s.instance = generate_grid_instance(p);
          out.push_back(std::move(s));
        }
  return out;
}

SuiteResult run_suite(const SuiteConfig& config, SatBackend& backend, Exec exec) {
  const auto instances = suite_instances(config);
  std::vector<AlgorithmSpec> algos;
  for (const auto& a : config.algorithms) algos.push_back(parse_algorithm(a));
  const std::size_t na = algos.size();
  const long long jobs = static_cast<long long>(instances.size() * na);
  std::vector<ResultRow> rows(jobs);
  std::vector<std::exception_ptr> errors(jobs);

  auto run = [&](long long job) {
    const SuiteInstance& s = instances[job / na];
    const AlgorithmSpec& algo = algos[job % na];
    ResultRow& row = rows[job];
    row.instance_id = s.id;
    row.algorithm = to_string(algo);
    row.objective = std::string(to_string(config.objective));
    row.k = s.k;
    ShortestPathCosts costs = shortest_path_costs(s.instance);
    row.mu0 = costs.mu0;
    row.xi0_sum = costs.xi0_sum;
    SolveRequest req;
    req.algorithm = algo;
    req.objective = config.objective;
    req.timeout_s = config.timeout_s;
    req.delta_cap = config.delta_cap;
    // the suite already spreads instances across threads
    req.exec = Exec::Serial;
    auto t0 = Clock::now();
    SolveOutcome o = solve_instance(s.instance, req, backend);
    row.wall_time_ms = ms_since(t0);
    row.status = o.status;
    if (!o.iterations.empty()) {
      row.var_count = o.iterations.back().var_count;
      row.clause_count = static_cast<long long>(o.iterations.back().clause_count);
    }
    if (o.status == SolveStatus::Optimal && o.solution) {
      row.soc = o.solution->soc;
      row.makespan = o.solution->makespan;
      row.delta = o.delta;
      row.solution = o.solution;
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long job = 0; job < jobs; ++job) {
      try {
        run(job);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  } else {
    for (long long job = 0; job < jobs; ++job) {
      try {
        run(job);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (long long job = 0; job < jobs; ++job) {
    const ResultRow& row = rows[job];
    if (row.status != SolveStatus::Optimal) continue;
    auto report = validate_solution(instances[job / na].instance, *row.solution);
    if (!report.ok())
      throw ValidationAbort("invalid solution from " + row.algorithm + " on " + row.instance_id +
                            ": " + report.describe());
  }
  SuiteResult result;
  result.aggregates = aggregate(rows, config.algorithms);
  result.rows = std::move(rows);
  return result;
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows,
                                 const std::vector<std::string>& algorithms) {
  // instance -> algorithm -> row
  std::map<std::string, std::map<std::string, const ResultRow*>> by_instance;
  std::map<int, std::vector<std::string>> instances_by_k;
  for (const auto& r : rows) {
    auto& slot = by_instance[r.instance_id];
    if (slot.empty()) instances_by_k[r.k].push_back(r.instance_id);
    slot[r.algorithm] = &r;
  }
  std::vector<Aggregate> out;
  for (const auto& [k, ids] : instances_by_k) {
    std::vector<std::string> common;
    for (const auto& id : ids) {
      bool all = true;
      for (const auto& a : algorithms) {
        auto it = by_instance[id].find(a);
        all = all && it != by_instance[id].end() && it->second->status == SolveStatus::Optimal;
      }
      if (all) common.push_back(id);
    }
    for (const auto& a : algorithms) {
      Aggregate g;
      g.algorithm = a;
      g.k = k;
      double total = 0.0;
      for (const auto& id : ids) {
        auto it = by_instance[id].find(a);
        if (it == by_instance[id].end()) continue;
        ++g.attempted;
        g.solved += it->second->status == SolveStatus::Optimal;
      }
      for (const auto& id : common) total += by_instance[id][a]->wall_time_ms;
      g.success_rate = g.attempted ? static_cast<double>(g.solved) / g.attempted : 0.0;
      if (!common.empty()) g.mean_common_ms = total / static_cast<double>(common.size());
      out.push_back(g);
    }
  }
  return out;
}

std::string rows_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "instance_id,algorithm,objective,k,status,soc,makespan,delta,var_count,clause_count,"
        "wall_time_ms\n";
  auto cell = [&](long long v) {
    if (v >= 0) os << v;
  };
  for (const auto& r : rows) {
    os << r.instance_id << ',' << r.algorithm << ',' << r.objective << ',' << r.k << ','
       << to_string(r.status) << ',';
    cell(r.soc);
    os << ',';
    cell(r.makespan);
    os << ',';
    cell(r.delta);
    os << ',';
    cell(r.var_count);
    os << ',';
    cell(r.clause_count);
    os << ',' << std::fixed << std::setprecision(3) << r.wall_time_ms << '\n';
    os.unsetf(std::ios::floatfield);
  }
  return os.str();
}

std::string aggregates_csv(const std::vector<Aggregate>& aggregates) {
  std::ostringstream os;
  os << "algorithm,k,attempted,solved,success_rate,mean_common_ms\n";
  for (const auto& g : aggregates) {
    os << g.algorithm << ',' << g.k << ',' << g.attempted << ',' << g.solved << ','
       << std::fixed << std::setprecision(3) << g.success_rate << ',';
    if (g.mean_common_ms) os << *g.mean_common_ms;
    os << '\n';
    os.unsetf(std::ios::floatfield);
  }
  return os.str();
}

}  // namespace mapf
