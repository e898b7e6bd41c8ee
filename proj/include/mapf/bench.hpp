#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapf/idframe.hpp"
#include "mapf/satloop.hpp"

namespace mapf {

enum class Objective { Soc, Makespan };

std::string_view to_string(Objective objective);

/// Algorithm names: `basic-sat`, `mdd-sat`, `cbs`, optionally suffixed with
/// `+sid` or `+id`.
struct AlgorithmSpec {
  std::string base;
  std::optional<IdMode> id;
};

/// Throws Error for unknown names.
AlgorithmSpec parse_algorithm(std::string_view name);
std::string to_string(const AlgorithmSpec& spec);

struct SolveRequest {
  AlgorithmSpec algorithm{"mdd-sat", std::nullopt};
  Objective objective = Objective::Soc;
  double timeout_s = 30.0;
  int delta_cap = 64;
  Exec exec = Exec::Parallel;
  FormulaHook on_formula;
};

/// Dispatches to the SAT loop, CBS, or ID around either. Throws Error for
/// combinations that do not exist (CBS or ID with the makespan objective).
SolveOutcome solve_instance(const MapfInstance& instance, const SolveRequest& request,
                            SatBackend& backend);

struct SuiteConfig {
  std::vector<std::pair<int, int>> grid_sizes{{8, 8}};  // (width, height)
  std::vector<double> obstacle_rates{0.1};
  int agents_min = 1;
  int agents_max = 8;
  int instances_per_point = 10;
  double timeout_s = 30.0;
  std::vector<std::string> algorithms{"basic-sat", "mdd-sat", "cbs"};
  std::uint64_t seed = 1;
  int walk_steps = 200;
  Objective objective = Objective::Soc;
  int delta_cap = 64;

  /// Throws Error on non-positive counts, timeout <= 0, or unknown algorithms.
  void validate() const;
};

/// JSON object with any of the keys grid_sizes (numbers or [w, h] pairs),
/// obstacle_rates, agents_min, agents_max, instances_per_point, timeout_s,
/// algorithms, seed, walk_steps, objective, delta_cap.
SuiteConfig parse_suite_config(std::string_view json);

struct SuiteInstance {
  std::string id;
  int width = 0;
  int height = 0;
  double obstacle_rate = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  MapfInstance instance;
};

/// Deterministic in the config.
std::vector<SuiteInstance> suite_instances(const SuiteConfig& config);

struct ResultRow {
  std::string instance_id;
  std::string algorithm;
  std::string objective;
  int k = 0;
  SolveStatus status = SolveStatus::Timeout;
  int soc = -1;  // -1 means empty cell
  int makespan = -1;
  int delta = -1;
  long long var_count = -1;  // of the last query, SAT algorithms only
  long long clause_count = -1;
  double wall_time_ms = 0.0;
  int mu0 = 0;
  int xi0_sum = 0;
  std::optional<Solution> solution;  // not part of the CSV
};

struct Aggregate {
  std::string algorithm;
  int k = 0;
  int attempted = 0;
  int solved = 0;
  double success_rate = 0.0;
  std::optional<double> mean_common_ms;  // over instances solved by all algorithms
};

struct SuiteResult {
  std::vector<ResultRow> rows;  // instance order, then algorithm order
  std::vector<Aggregate> aggregates;
};

struct ValidationAbort : Error {
  using Error::Error;
};

/// Runs every algorithm on every suite instance. Optimal rows are validated
/// before being returned; a failure throws ValidationAbort.
SuiteResult run_suite(const SuiteConfig& config, SatBackend& backend,
                      Exec exec = Exec::Parallel);

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows,
                                 const std::vector<std::string>& algorithms);

/// Header `instance_id,algorithm,objective,k,status,soc,makespan,delta,
/// var_count,clause_count,wall_time_ms`.
std::string rows_csv(const std::vector<ResultRow>& rows);
std::string aggregates_csv(const std::vector<Aggregate>& aggregates);

}  // namespace mapf
