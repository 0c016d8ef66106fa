#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egolink/baselines.hpp"
#include "egolink/estimator.hpp"
#include "egolink/generators.hpp"
#include "egolink/netcore.hpp"

namespace egolink {

enum class Method { se, cur, usvt, mc, ns };

std::string_view to_string(Method method);
// Throws SpecError for unknown names.
Method parse_method(std::string_view name);

// Method-specific tuning shared by the CLI and the experiment runner.
struct MethodOptions {
  SeConfig se;  // se.rank empty selects the rank by row resampling
  double usvt_threshold = 2.02;
  McOptions mc;
  double ns_bandwidth = 1.0;
};

struct MethodFit {
  ScoreMatrix scores;
  std::optional<Index> selected_rank;
};

// Fits one method on an egocentric sample. USVT and MC run on the
// egocentric mask. cv_rng drives rank selection when se.rank is empty.
MethodFit fit_method(Method method, const EgoSample& s, const MethodOptions& opts, Rng& cv_rng);

// Fits a matrix-completion method (USVT or MC) on an arbitrary mask.
// Throws SpecError for methods that need sampled rows.
MethodFit fit_masked(Method method, const MaskedMatrix& m, const MethodOptions& opts);

enum class SamplingScheme { egocentric, iid };

// One experiment: a grid of (rho, degree) cells, each replicated.
struct ExperimentSpec {
  // Exactly one of these is set.
  std::optional<ModelFamily> family;
  std::optional<std::filesystem::path> dataset;
  Index n_nodes = 500;  // synthetic only

  SamplingScheme sampling = SamplingScheme::egocentric;
  std::vector<double> rho_grid;
  std::vector<double> degree_grid;  // synthetic only
  std::vector<Method> methods;
  Index replications = 100;
  std::uint64_t base_seed = 0;
  MethodOptions options;  // options.se.rank fixed, or empty for auto
  bool record_timing = false;
  std::optional<Index> workers;
};

// Parses the JSON experiment description. Relative dataset paths resolve
// against base_dir. Throws SpecError on malformed or invalid input.
ExperimentSpec parse_experiment_spec(std::string_view json_text,
                                     const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
void validate(const ExperimentSpec& spec);

struct ResultRow {
  std::string model;
  std::string method;
  double rho = 0.0;
  double degree = 0.0;
  Index replication = 0;
  std::uint64_t seed = 0;
  std::optional<double> auc;
  std::optional<double> kendall_tau;
  std::optional<Index> selected_rank;
  std::optional<double> wall_time_ms;
};

// Seed of one replication; distinct for every (cell, replication).
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t cell, Index replication);

// Runs every (cell, replication) and returns rows ordered by cell, then
// replication, then method order in the spec. Work is spread over `workers`
// threads; the output does not depend on the worker count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, unsigned workers = 1);

// Worker count from EGOLINK_WORKERS, or 1.
unsigned default_worker_count();

inline constexpr std::string_view kResultsHeader =
    "model,method,rho,degree,replication,seed,auc,kendall_tau,selected_rank,wall_time_ms";

// Absent values are empty fields. wall_time_ms is written only when
// include_timing is set, so untimed output is byte-reproducible.
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows,
                       bool include_timing = false);
std::vector<ResultRow> read_results_csv(std::istream& in);

struct SummaryRow {
  std::string model;
  std::string method;
  double rho = 0.0;
  double degree = 0.0;
  std::string metric;  // "auc" or "kendall_tau"
  Index count = 0;
  double mean = 0.0;
  std::optional<double> standard_error;  // absent when count < 2
};

// Mean and standard error of each metric per (model, method, rho, degree),
// over the rows where the metric is present. Throws InvalidArgument on empty
// input.
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);

inline constexpr std::string_view kSummaryHeader =
    "model,method,rho,degree,metric,count,mean,se";
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace egolink
