#include "egolink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "egolink/errors.hpp"
#include "egolink/io.hpp"
#include "egolink/metrics.hpp"

namespace egolink {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::se: return "se";
    case Method::cur: return "cur";
    case Method::usvt: return "usvt";
    case Method::mc: return "mc";
    case Method::ns: return "ns";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "se") return Method::se;
  if (name == "cur") return Method::cur;
  if (name == "usvt") return Method::usvt;
  if (name == "mc") return Method::mc;
  if (name == "ns") return Method::ns;
  throw SpecError("unknown method '" + std::string(name) + "'");
}

MethodFit fit_method(Method method, const EgoSample& s, const MethodOptions& opts, Rng& cv_rng) {
  switch (method) {
    case Method::se: {
      SeConfig cfg = opts.se;
      if (!cfg.rank) cfg.rank = select_rank(s, cfg, cv_rng);
      return {se_estimate(s, cfg), cfg.rank};
    }
    case Method::cur:
      return {cur_estimate(s, opts.se.pinv_rel_tol), std::nullopt};
    case Method::usvt:
    case Method::mc:
      return fit_masked(method, MaskedMatrix::egocentric(s), opts);
    case Method::ns:
      return {ns_estimate(s, opts.ns_bandwidth), std::nullopt};
  }
  throw SpecError("unknown method");
}

MethodFit fit_masked(Method method, const MaskedMatrix& m, const MethodOptions& opts) {
  switch (method) {
    case Method::usvt:
      return {usvt_estimate(m, opts.usvt_threshold), std::nullopt};
    case Method::mc:
      return {mc_nuclear_estimate(m, opts.mc).scores, std::nullopt};
    default:
      throw SpecError("method '" + std::string(to_string(method)) +
                      "' needs egocentric samples, not an arbitrary mask");
  }
}

// ---------------------------------------------------------------------------
// Experiment specification

namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& node, const char* key) {
  try {
    return node.get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("field '") + key + "' has the wrong type");
  }
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const char* where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw SpecError(std::string("unknown field '") + key + "' in " + where);
  }
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view json_text,
                                     const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("experiment spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("experiment spec must be a JSON object");
  reject_unknown_keys(doc,
                      {"model", "dataset", "sampling", "degree_grid", "methods", "replications",
                       "base_seed", "rank_policy", "cv_holdout_rows", "cv_rank_grid",
                       "record_timing", "workers", "options"},
                      "experiment spec");

  ExperimentSpec spec;
  if (doc.contains("model")) {
    const json& model = doc["model"];
    if (!model.is_object()) throw SpecError("'model' must be an object");
    reject_unknown_keys(model, {"family", "n_nodes"}, "'model'");
    if (!model.contains("family")) throw SpecError("'model' needs a 'family'");
    try {
      spec.family = parse_family(get_as<std::string>(model["family"], "family"));
    } catch (const InvalidArgument& e) {
      throw SpecError(e.what());
    }
    if (model.contains("n_nodes")) spec.n_nodes = get_as<Index>(model["n_nodes"], "n_nodes");
  }
  if (doc.contains("dataset")) {
    std::filesystem::path p = get_as<std::string>(doc["dataset"], "dataset");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    spec.dataset = p;
  }

  if (!doc.contains("sampling")) throw SpecError("missing 'sampling'");
  {
    const json& sampling = doc["sampling"];
    if (!sampling.is_object()) throw SpecError("'sampling' must be an object");
    reject_unknown_keys(sampling, {"scheme", "rho"}, "'sampling'");
    const std::string scheme =
        sampling.contains("scheme") ? get_as<std::string>(sampling["scheme"], "scheme")
                                    : std::string("egocentric");
    if (scheme == "egocentric") {
      spec.sampling = SamplingScheme::egocentric;
    } else if (scheme == "iid") {
      spec.sampling = SamplingScheme::iid;
    } else {
      throw SpecError("unknown sampling scheme '" + scheme + "'");
    }
    if (!sampling.contains("rho")) throw SpecError("'sampling' needs a 'rho' grid");
    spec.rho_grid = get_as<std::vector<double>>(sampling["rho"], "rho");
  }

  if (doc.contains("degree_grid"))
    spec.degree_grid = get_as<std::vector<double>>(doc["degree_grid"], "degree_grid");
  if (!doc.contains("methods")) throw SpecError("missing 'methods'");
  for (const auto& name : get_as<std::vector<std::string>>(doc["methods"], "methods"))
    spec.methods.push_back(parse_method(name));
  if (doc.contains("replications"))
    spec.replications = get_as<Index>(doc["replications"], "replications");
  if (doc.contains("base_seed"))
    spec.base_seed = get_as<std::uint64_t>(doc["base_seed"], "base_seed");

  if (doc.contains("rank_policy")) {
    const json& policy = doc["rank_policy"];
    if (policy.is_string()) {
      if (policy.get<std::string>() != "auto")
        throw SpecError("'rank_policy' must be \"auto\" or a positive integer");
    } else if (policy.is_number_integer()) {
      spec.options.se.rank = policy.get<Index>();
    } else {
      throw SpecError("'rank_policy' must be \"auto\" or a positive integer");
    }
  }
  if (doc.contains("cv_holdout_rows"))
    spec.options.se.cv_holdout_rows = get_as<Index>(doc["cv_holdout_rows"], "cv_holdout_rows");
  if (doc.contains("cv_rank_grid"))
    spec.options.se.cv_rank_grid = get_as<std::vector<Index>>(doc["cv_rank_grid"], "cv_rank_grid");
  if (doc.contains("record_timing"))
    spec.record_timing = get_as<bool>(doc["record_timing"], "record_timing");
  if (doc.contains("workers")) spec.workers = get_as<Index>(doc["workers"], "workers");

  if (doc.contains("options")) {
    const json& o = doc["options"];
    if (!o.is_object()) throw SpecError("'options' must be an object");
    reject_unknown_keys(o,
                        {"usvt_threshold", "mc_lambda", "mc_tol", "mc_max_iter", "ns_bandwidth",
                         "pinv_rel_tol"},
                        "'options'");
    if (o.contains("usvt_threshold"))
      spec.options.usvt_threshold = get_as<double>(o["usvt_threshold"], "usvt_threshold");
    if (o.contains("mc_lambda")) spec.options.mc.lambda = get_as<double>(o["mc_lambda"], "mc_lambda");
    if (o.contains("mc_tol")) spec.options.mc.tol = get_as<double>(o["mc_tol"], "mc_tol");
    if (o.contains("mc_max_iter"))
      spec.options.mc.max_iter = get_as<Index>(o["mc_max_iter"], "mc_max_iter");
    if (o.contains("ns_bandwidth"))
      spec.options.ns_bandwidth = get_as<double>(o["ns_bandwidth"], "ns_bandwidth");
    if (o.contains("pinv_rel_tol"))
      spec.options.se.pinv_rel_tol = get_as<double>(o["pinv_rel_tol"], "pinv_rel_tol");
  }

  validate(spec);
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open experiment spec '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_spec(buffer.str(), path.parent_path());
}

void validate(const ExperimentSpec& spec) {
  if (spec.family.has_value() == spec.dataset.has_value())
    throw SpecError("exactly one of 'model' and 'dataset' must be given");
  if (spec.family) {
    if (spec.n_nodes < 3) throw SpecError("'n_nodes' must be at least 3");
    if (spec.degree_grid.empty()) throw SpecError("synthetic experiments need a 'degree_grid'");
    for (double d : spec.degree_grid)
      if (!(d > 0.0) || d > static_cast<double>(spec.n_nodes - 1))
        throw SpecError("degrees must lie in (0, N - 1]");
  }
  if (spec.rho_grid.empty()) throw SpecError("'rho' grid is empty");
  for (double rho : spec.rho_grid)
    if (!(rho > 0.0 && rho < 1.0)) throw SpecError("sampling rates must lie in (0, 1)");
  if (spec.methods.empty()) throw SpecError("'methods' is empty");
  if (spec.replications < 1) throw SpecError("'replications' must be at least 1");
  if (spec.sampling == SamplingScheme::iid)
    for (Method m : spec.methods)
      if (m != Method::usvt && m != Method::mc)
        throw SpecError("i.i.d. sampling supports only the usvt and mc methods");
  if (spec.options.se.rank && *spec.options.se.rank < 1)
    throw SpecError("a fixed rank must be positive");
  if (spec.options.se.cv_holdout_rows < 1) throw SpecError("'cv_holdout_rows' must be positive");
  for (Index r : spec.options.se.cv_rank_grid)
    if (r < 1) throw SpecError("'cv_rank_grid' entries must be positive");
  if (spec.workers && *spec.workers < 1) throw SpecError("'workers' must be positive");
  if (!(spec.options.usvt_threshold > 0.0)) throw SpecError("'usvt_threshold' must be positive");
  if (spec.options.mc.lambda && !(*spec.options.mc.lambda > 0.0))
    throw SpecError("'mc_lambda' must be positive");
  if (!(spec.options.mc.tol > 0.0) || spec.options.mc.max_iter < 1)
    throw SpecError("'mc_tol' and 'mc_max_iter' must be positive");
  if (!(spec.options.ns_bandwidth > 0.0)) throw SpecError("'ns_bandwidth' must be positive");
  if (!(spec.options.se.pinv_rel_tol > 0.0)) throw SpecError("'pinv_rel_tol' must be positive");
}

// ---------------------------------------------------------------------------
// Running

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t cell, Index replication) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(cell),
                                 static_cast<std::uint64_t>(replication)});
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("EGOLINK_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

namespace {

struct Cell {
  double rho;
  double degree;
};

struct Task {
  std::size_t cell;
  Index replication;
};

// Seed paths below a replication seed.
enum Stream : std::uint64_t { kModelStream = 0, kSampleStream = 1, kMethodStream = 2 };

Index sample_size(double rho, Index n_total) {
  const auto n = static_cast<Index>(std::llround(rho * static_cast<double>(n_total)));
  return std::clamp<Index>(n, 1, n_total);
}

class Runner {
 public:
  explicit Runner(const ExperimentSpec& spec) : spec_(spec) {
    if (spec_.dataset) {
      LabeledGraph g = load_edge_list(*spec_.dataset);
      dataset_.emplace(std::move(g.adjacency));
      model_name_ = spec_.dataset->stem().string();
      for (double rho : spec_.rho_grid) cells_.push_back({rho, dataset_->average_degree()});
    } else {
      model_name_ = std::string(to_string(*spec_.family));
      for (double rho : spec_.rho_grid)
        for (double d : spec_.degree_grid) cells_.push_back({rho, d});
    }
    const Index n_total = dataset_ ? dataset_->size() : spec_.n_nodes;
    const bool auto_rank = !spec_.options.se.rank;
    for (const Cell& c : cells_) {
      const Index n = sample_size(c.rho, n_total);
      for (Method m : spec_.methods) {
        if (spec_.sampling != SamplingScheme::egocentric) continue;
        if (m == Method::se && auto_rank && n < 3)
          throw SpecError("rank selection needs at least 3 sampled nodes; raise rho");
        if (m == Method::se && !auto_rank && *spec_.options.se.rank > n)
          throw SpecError("fixed rank exceeds the sample size for some rho");
        if (m == Method::ns && n < 2)
          throw SpecError("neighborhood smoothing needs at least 2 sampled nodes");
      }
    }
  }

  std::size_t cell_count() const { return cells_.size(); }

  std::vector<ResultRow> run(const Task& task) const {
    const Cell& cell = cells_[task.cell];
    const std::uint64_t seed = replication_seed(spec_.base_seed, task.cell, task.replication);

    std::optional<GeneratedModel> model;
    std::optional<AdjacencyMatrix> sampled_graph;
    if (!dataset_) {
      Rng rng = make_rng(derive_seed(seed, {kModelStream}));
      ModelSpec ms{*spec_.family, spec_.n_nodes, cell.degree, seed};
      model.emplace(generate_model(ms, rng));
      sampled_graph.emplace(sample_adjacency(model->probability, rng));
    }
    const AdjacencyMatrix& a = dataset_ ? *dataset_ : *sampled_graph;
    const ProbabilityMatrix* p = model ? &model->probability : nullptr;

    Rng sample_rng = make_rng(derive_seed(seed, {kSampleStream}));
    std::optional<EgoSample> ego;
    std::optional<MaskedMatrix> mask;
    std::vector<std::pair<Index, Index>> pairs;
    if (spec_.sampling == SamplingScheme::egocentric) {
      ego.emplace(sample_ego(a, sample_size(cell.rho, a.size()), sample_rng));
      pairs = unobserved_pair_list(a.size(), ego->indices());
    } else {
      mask.emplace(MaskedMatrix::iid(a, cell.rho, sample_rng));
      pairs = mask->unobserved_pairs();
    }

    std::vector<ResultRow> rows;
    for (std::size_t k = 0; k < spec_.methods.size(); ++k) {
      const Method method = spec_.methods[k];
      ResultRow row;
      row.model = model_name_;
      row.method = std::string(to_string(method));
      if (mask) row.method += "_iid";
      row.rho = cell.rho;
      row.degree = cell.degree;
      row.replication = task.replication;
      row.seed = seed;

      Rng cv_rng = make_rng(derive_seed(seed, {kMethodStream, static_cast<std::uint64_t>(k)}));
      const auto start = std::chrono::steady_clock::now();
      std::optional<MethodFit> fit;
      try {
        fit.emplace(ego ? fit_method(method, *ego, spec_.options, cv_rng)
                        : fit_masked(method, *mask, spec_.options));
      } catch (const DegenerateSample&) {
      } catch (const DegenerateCv&) {
      }
      const auto stop = std::chrono::steady_clock::now();
      if (spec_.record_timing)
        row.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();

      if (fit) {
        row.selected_rank = fit->selected_rank;
        const EvalResult eval = evaluate_pairs(fit->scores, a, p, pairs);
        row.auc = eval.auc;
        row.kendall_tau = eval.kendall_tau;
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

 private:
  const ExperimentSpec& spec_;
  std::optional<AdjacencyMatrix> dataset_;
  std::string model_name_;
  std::vector<Cell> cells_;
};

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, unsigned workers) {
  validate(spec);
  const Runner runner(spec);

  std::vector<Task> tasks;
  for (std::size_t c = 0; c < runner.cell_count(); ++c)
    for (Index r = 0; r < spec.replications; ++r) tasks.push_back({c, r});

  std::vector<std::vector<ResultRow>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        slots[t] = runner.run(tasks[t]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };

  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& slot : slots)
    for (auto& row : slot) rows.push_back(std::move(row));
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string grid_value(double v) { return fmt("%.12g", v); }
std::string metric_value(double v) { return fmt("%.17g", v); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw IngestionError("results: bad number '" + s + "'", line_no);
}

std::optional<double> parse_optional(const std::string& s, std::size_t line_no) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line_no);
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows, bool include_timing) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.model << ',' << r.method << ',' << grid_value(r.rho) << ',' << grid_value(r.degree)
        << ',' << r.replication << ',' << r.seed << ',';
    if (r.auc) out << metric_value(*r.auc);
    out << ',';
    if (r.kendall_tau) out << metric_value(*r.kendall_tau);
    out << ',';
    if (r.selected_rank) out << *r.selected_rank;
    out << ',';
    if (include_timing && r.wall_time_ms) out << fmt("%.3f", *r.wall_time_ms);
    out << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("results: empty file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw IngestionError("results: unexpected header", 1);
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10) throw IngestionError("results: expected 10 fields", line_no);
    ResultRow r;
    r.model = f[0];
    r.method = f[1];
    r.rho = parse_double(f[2], line_no);
    r.degree = parse_double(f[3], line_no);
    r.replication = static_cast<Index>(parse_double(f[4], line_no));
    try {
      r.seed = std::stoull(f[5]);
    } catch (const std::exception&) {
      throw IngestionError("results: bad seed '" + f[5] + "'", line_no);
    }
    r.auc = parse_optional(f[6], line_no);
    r.kendall_tau = parse_optional(f[7], line_no);
    if (auto rank = parse_optional(f[8], line_no)) r.selected_rank = static_cast<Index>(*rank);
    r.wall_time_ms = parse_optional(f[9], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
  if (rows.empty()) throw InvalidArgument("summarize: no rows");
  using Key = std::tuple<std::string, std::string, double, double>;
  struct Acc {
    std::vector<double> auc;
    std::vector<double> tau;
  };
  std::map<Key, Acc> groups;
  for (const ResultRow& r : rows) {
    Acc& acc = groups[Key{r.model, r.method, r.rho, r.degree}];
    if (r.auc) acc.auc.push_back(*r.auc);
    if (r.kendall_tau) acc.tau.push_back(*r.kendall_tau);
  }

  auto summary_of = [](const Key& key, const char* metric, const std::vector<double>& v) {
    SummaryRow s{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key),
                 metric, static_cast<Index>(v.size()), 0.0, std::nullopt};
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() >= 2) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
      s.standard_error = sd / std::sqrt(static_cast<double>(v.size()));
    }
    return s;
  };

  std::vector<SummaryRow> out;
  for (const auto& [key, acc] : groups) {
    if (!acc.auc.empty()) out.push_back(summary_of(key, "auc", acc.auc));
    if (!acc.tau.empty()) out.push_back(summary_of(key, "kendall_tau", acc.tau));
  }
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& s : rows) {
    out << s.model << ',' << s.method << ',' << grid_value(s.rho) << ',' << grid_value(s.degree)
        << ',' << s.metric << ',' << s.count << ',' << metric_value(s.mean) << ',';
    if (s.standard_error) out << metric_value(*s.standard_error);
    out << '\n';
  }
}

}  // namespace egolink
