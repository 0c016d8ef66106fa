// egolink: link prediction for egocentrically sampled networks.
//
// Exit codes: 0 success, 1 runtime failure, 2 bad arguments or experiment
// spec, 3 unreadable or malformed input file.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "egolink/egolink.hpp"

namespace {

using namespace egolink;

constexpr int kExitRuntime = 1;
constexpr int kExitSpec = 2;
constexpr int kExitIngestion = 3;

// Writes to `path`, or to stdout for "-".
void with_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw Error("failed writing '" + path + "'");
}

std::optional<Index> parse_rank(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const long r = std::stol(text, &used);
    if (used == text.size() && r >= 1) return static_cast<Index>(r);
  } catch (const std::exception&) {
  }
  throw SpecError("--rank must be 'auto' or a positive integer");
}

std::string optional_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

struct GenerateArgs {
  std::string family = "sbm";
  Index nodes = 500;
  double degree = 50.0;
  std::uint64_t seed = 0;
  std::string graph_out = "-";
  std::string prob_out;
};

void run_generate(const GenerateArgs& args) {
  ModelSpec spec;
  try {
    spec.family = parse_family(args.family);
  } catch (const InvalidArgument& e) {
    throw SpecError(e.what());
  }
  spec.n_nodes = args.nodes;
  spec.target_degree = args.degree;
  spec.seed = args.seed;
  Rng rng = make_rng(args.seed);
  GeneratedModel model = [&] {
    try {
      return generate_model(spec, rng);
    } catch (const InvalidArgument& e) {
      throw SpecError(e.what());
    }
  }();
  const AdjacencyMatrix a = sample_adjacency(model.probability, rng);
  with_output(args.graph_out, [&](std::ostream& out) {
    out << "# egolink generate family=" << args.family << " nodes=" << args.nodes
        << " degree=" << args.degree << " seed=" << args.seed << '\n';
    write_edge_list(out, a);
  });
  if (!args.prob_out.empty())
    with_output(args.prob_out,
                [&](std::ostream& out) { write_dense_csv(out, model.probability.entries()); });
  const GraphStats st = describe(a);
  std::fprintf(stderr, "phi=%.10g nodes=%lld edges=%lld avg_degree=%.4f\n", model.phi,
               static_cast<long long>(st.n_nodes), static_cast<long long>(st.n_edges),
               st.average_degree);
}

struct SampleArgs {
  std::string graph;
  double rho = 0.0;
  Index size = 0;
  std::uint64_t seed = 0;
  std::string out = "-";
};

void run_sample(const SampleArgs& args) {
  const LabeledGraph g = load_edge_list(args.graph);
  Index n = args.size;
  if (n == 0) {
    if (!(args.rho > 0.0 && args.rho <= 1.0)) throw SpecError("give --size or --rho in (0, 1]");
    n = std::max<Index>(1, static_cast<Index>(std::llround(args.rho * static_cast<double>(g.adjacency.size()))));
  }
  if (n > g.adjacency.size()) throw SpecError("--size exceeds the number of nodes");
  Rng rng = make_rng(args.seed);
  const EgoSample s = sample_ego(g.adjacency, n, rng);
  with_output(args.out, [&](std::ostream& out) { write_ego_sample(out, s, g.labels); });
}

struct PredictArgs {
  std::string sample;
  std::string method = "se";
  std::string rank = "auto";
  std::uint64_t seed = 0;
  Index holdouts = 30;
  std::string out = "-";
  bool clamp = false;
};

void run_predict(const PredictArgs& args) {
  const LabeledEgoSample ls = load_ego_sample(args.sample);
  MethodOptions opts;
  opts.se.rank = parse_rank(args.rank);
  opts.se.cv_holdout_rows = args.holdouts;
  const Method method = parse_method(args.method);
  Rng rng = make_rng(args.seed);
  const MethodFit fit = [&] {
    try {
      return fit_method(method, ls.sample, opts, rng);
    } catch (const InvalidArgument& e) {
      throw SpecError(e.what());
    }
  }();
  const Matrix values = args.clamp ? clamp_to_unit(fit.scores) : fit.scores.entries();
  with_output(args.out, [&](std::ostream& out) { write_dense_csv(out, values); });
  if (fit.selected_rank) std::fprintf(stderr, "rank=%lld\n", static_cast<long long>(*fit.selected_rank));
}

struct EvaluateArgs {
  std::string scores;
  std::string sample;
  std::string truth;
  std::string prob;
  std::string out = "-";
};

void run_evaluate(const EvaluateArgs& args) {
  const LabeledEgoSample ls = load_ego_sample(args.sample);
  const ScoreMatrix scores(load_dense_csv(args.scores));
  if (scores.size() != ls.sample.n_total())
    throw IngestionError("score matrix size differs from the sample's node count");
  const AdjacencyMatrix truth = load_edge_list_over(args.truth, ls.labels);
  std::optional<ProbabilityMatrix> p;
  if (!args.prob.empty()) {
    try {
      p.emplace(load_dense_csv(args.prob));
    } catch (const InvalidArgument& e) {
      throw IngestionError(std::string("probability matrix: ") + e.what());
    }
    if (p->size() != truth.size()) throw IngestionError("probability matrix size differs");
  }
  const EvalResult r = evaluate(scores, truth, p ? &*p : nullptr, ls.sample.indices());
  with_output(args.out, [&](std::ostream& out) {
    out << "auc,kendall_tau,n_pairs,n_positive\n"
        << optional_number(r.auc) << ',' << optional_number(r.kendall_tau) << ',' << r.n_pairs
        << ',' << r.n_positive << '\n';
  });
}

struct ExperimentArgs {
  std::string spec;
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string format = "csv";
  bool timing = false;
};

void run_experiment_cmd(const ExperimentArgs& args) {
  if (args.format != "csv") throw SpecError("unsupported --format '" + args.format + "'");
  ExperimentSpec spec = load_experiment_spec(args.spec);
  if (args.seed) spec.base_seed = *args.seed;
  if (args.timing) spec.record_timing = true;
  unsigned workers = default_worker_count();
  if (spec.workers) workers = static_cast<unsigned>(*spec.workers);
  if (args.workers) workers = *args.workers;
  if (workers < 1) throw SpecError("--workers must be positive");
  const auto rows = run_experiment(spec, workers);
  with_output(args.out, [&](std::ostream& out) { write_results_csv(out, rows, spec.record_timing); });
}

struct SummarizeArgs {
  std::string in;
  std::string out = "-";
};

void run_summarize(const SummarizeArgs& args) {
  std::ifstream in(args.in);
  if (!in) throw IngestionError("cannot open '" + args.in + "'");
  const auto rows = read_results_csv(in);
  if (rows.empty()) throw IngestionError("results file has no rows");
  const auto summary = summarize(rows);
  with_output(args.out, [&](std::ostream& out) { write_summary_csv(out, summary); });
}

void run_describe(const std::string& graph) {
  const LabeledGraph g = load_edge_list(graph);
  const GraphStats s = describe(g.adjacency);
  std::printf("nodes,edges,avg_degree,numerical_rank\n%lld,%lld,%.6g,%.6g\n",
              static_cast<long long>(s.n_nodes), static_cast<long long>(s.n_edges),
              s.average_degree, s.numerical_rank);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"egolink: link prediction for egocentrically sampled networks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Draw a synthetic network (edge list) and its probability matrix");
  generate->add_option("--family", gen.family, "distance | product | sbm")->capture_default_str();
  generate->add_option("--nodes", gen.nodes, "Number of nodes N")->capture_default_str();
  generate->add_option("--degree", gen.degree, "Target expected average degree")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_option("--out,--out-graph", gen.graph_out, "Edge list output ('-' for stdout)");
  generate->add_option("--out-prob", gen.prob_out, "Dense CSV output for the probability matrix");

  SampleArgs smp;
  auto* sample = app.add_subcommand("sample", "Draw an egocentric sample from an edge list");
  sample->add_option("--graph", smp.graph, "Edge list file")->required();
  auto* rho_opt = sample->add_option("--rho", smp.rho, "Sampling rate n / N");
  auto* size_opt = sample->add_option("--size", smp.size, "Number of sampled nodes n");
  rho_opt->excludes(size_opt);
  sample->add_option("--seed", smp.seed, "Random seed")->capture_default_str();
  sample->add_option("--out", smp.out, "Ego sample JSON output ('-' for stdout)");

  PredictArgs pred;
  auto* predict = app.add_subcommand("predict", "Fit one method to an ego sample and write the score matrix");
  predict->add_option("--sample", pred.sample, "Ego sample JSON")->required();
  predict->add_option("--method", pred.method, "se | cur | usvt | mc | ns")->capture_default_str();
  predict->add_option("--rank", pred.rank, "Rank for se: 'auto' or an integer")->capture_default_str();
  predict->add_option("--holdouts", pred.holdouts, "Held-out rows for rank selection")->capture_default_str();
  predict->add_option("--seed", pred.seed, "Seed for rank selection")->capture_default_str();
  predict->add_flag("--clamp", pred.clamp, "Clamp scores into [0, 1]");
  predict->add_option("--out", pred.out, "Dense CSV output ('-' for stdout)");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Predictive AUC and Kendall's tau on unobserved pairs");
  evaluate_cmd->add_option("--scores", ev.scores, "Dense CSV score matrix")->required();
  evaluate_cmd->add_option("--sample", ev.sample, "Ego sample JSON the scores were fitted on")->required();
  evaluate_cmd->add_option("--truth", ev.truth, "Edge list of the full network")->required();
  evaluate_cmd->add_option("--prob", ev.prob, "Dense CSV probability matrix (enables Kendall's tau)");
  evaluate_cmd->add_option("--out", ev.out, "CSV output ('-' for stdout)");

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment grid from a JSON spec");
  experiment->add_option("--spec", ex.spec, "Experiment spec (JSON)")->required();
  experiment->add_option("--out", ex.out, "Results CSV ('-' for stdout)");
  experiment->add_option("--seed", ex.seed, "Override the spec's base_seed");
  experiment->add_option("--workers", ex.workers, "Worker threads (default: $EGOLINK_WORKERS or 1)");
  experiment->add_option("--format", ex.format, "Output format (csv)")->capture_default_str();
  experiment->add_flag("--timing", ex.timing, "Record per-fit wall time");

  SummarizeArgs sum;
  auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate a results CSV into mean and SE per curve point");
  summarize_cmd->add_option("--in", sum.in, "Results CSV")->required();
  summarize_cmd->add_option("--out", sum.out, "Summary CSV ('-' for stdout)");

  std::string describe_graph;
  auto* describe_cmd = app.add_subcommand("describe", "Node count, edges, average degree and numerical rank");
  describe_cmd->add_option("--graph", describe_graph, "Edge list file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSpec;
  }

  try {
    if (*generate) run_generate(gen);
    else if (*sample) run_sample(smp);
    else if (*predict) run_predict(pred);
    else if (*evaluate_cmd) run_evaluate(ev);
    else if (*experiment) run_experiment_cmd(ex);
    else if (*summarize_cmd) run_summarize(sum);
    else if (*describe_cmd) run_describe(describe_graph);
  } catch (const SpecError& e) {
    std::fprintf(stderr, "egolink: %s\n", e.what());
    return kExitSpec;
  } catch (const IngestionError& e) {
    std::fprintf(stderr, "egolink: %s\n", e.what());
    return kExitIngestion;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "egolink: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
