#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "mcdc/error.hpp"
#include "mcdc/metrics.hpp"

namespace mcdc::cli {
namespace {

using json = nlohmann::json;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (const auto x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / double(xs.size() - 1));
  }
  return m;
}

json config_json(const ClusterArgs& args) {
  const auto& c = args.config;
  json j;
  j["input"] = args.input.string();
  j["label_column"] = args.csv.label_column ? json(*args.csv.label_column) : json(nullptr);
  j["missing_token"] = args.csv.missing_token;
  j["variant"] = std::string(to_string(c.variant));
  j["eta"] = c.eta;
  j["k0"] = c.k0 ? json(*c.k0) : json(nullptr);
  j["k"] = c.k ? json(*c.k) : json(nullptr);
  j["seed"] = c.seed;
  j["repeats"] = c.repeats;
  j["max_passes"] = c.max_passes;
  j["max_epochs"] = c.max_epochs;
  j["max_iterations"] = c.came_max_iterations;
  j["literal_similarity"] = c.literal_similarity;
  j["random_reseed"] = c.random_reseed;
  j["frozen_modes"] = c.frozen_modes;
  j["partition_equality_stop"] = c.partition_equality_stop;
  j["rival_similarity_penalty"] = c.rival_similarity_penalty;
  j["uniform_seeding"] = c.uniform_seeding;
  return j;
}

json scores_json(const ValidityScores& s) {
  return {{"acc", s.acc}, {"ari", s.ari}, {"ami", s.ami}, {"fm", s.fm}};
}

std::string gamma_csv(const MultiGranularResult& mg) {
  std::ostringstream out;
  for (std::size_t j = 0; j < mg.sigma(); ++j) out << (j ? "," : "") << "level" << (j + 1);
  out << '\n';
  const std::size_t n = mg.levels.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < mg.sigma(); ++j) out << (j ? "," : "") << mg.levels[j][i];
    out << '\n';
  }
  return out.str();
}

void emit(const json& report, const std::optional<std::filesystem::path>& output,
          std::ostream& out) {
  const auto text = report.dump(2) + "\n";
  if (output) {
    write_file_atomic(*output, text);
  } else {
    out << text;
  }
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bench: bad grid value '" + item + "'");
    }
    if (pos != item.size()) throw ConfigError("bench: bad grid value '" + item + "'");
    grid.push_back(static_cast<std::size_t>(v));
  }
  return grid;
}

}  // namespace

Labels read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open label file '" + path.string() + "'");
  Labels labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const auto token = line.substr(first, last - first + 1);
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(token, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != token.size() || token.front() == '-' || v > std::numeric_limits<Label>::max()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": not a label '" +
                       token + "'");
    }
    labels.push_back(static_cast<Label>(v));
  }
  return labels;
}

std::string format_labels(const Labels& labels) {
  std::string text;
  text.reserve(labels.size() * 3);
  for (const auto l : labels) {
    text += std::to_string(l);
    text += '\n';
  }
  return text;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error("failed writing '" + path.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

json make_report(const ClusterArgs& args, const Dataset& ds, std::size_t rows_dropped,
                 const std::vector<RunResult>& runs) {
  json report;
  report["schema"] = kReportSchema;
  report["config"] = config_json(args);
  report["dataset"] = {{"n", ds.n()}, {"d", ds.d()}, {"rows_dropped", rows_dropped}};

  json run_list = json::array();
  std::vector<double> acc, ari_v, ami_v, fm_v, ks;
  for (const auto& run : runs) {
    json r;
    r["seed"] = run.seed;
    r["k"] = run.k;
    if (run.granularity) {
      r["kappa"] = run.granularity->kappa;
      r["sigma"] = run.granularity->sigma();
      r["epochs"] = run.granularity->epochs;
      if (args.include_levels) r["levels"] = run.granularity->levels;
    }
    r["theta"] = run.theta;
    r["convergence"] = {{"learner", run.learner_converged},
                        {"aggregation", run.aggregation_converged},
                        {"aggregation_iterations", run.aggregation_iterations}};
    r["timings"] = {{"learning_seconds", run.times.learning_seconds},
                    {"aggregation_seconds", run.times.aggregation_seconds},
                    {"total_seconds", run.times.total_seconds}};
    if (ds.has_truth()) {
      const auto s = evaluate(run.labels, *ds.truth());
      r["indices"] = scores_json(s);
      acc.push_back(s.acc);
      ari_v.push_back(s.ari);
      ami_v.push_back(s.ami);
      fm_v.push_back(s.fm);
    }
    ks.push_back(double(run.k));
    run_list.push_back(std::move(r));
  }
  report["runs"] = std::move(run_list);

  const auto& first = runs.front();
  report["k"] = first.k;
  if (first.granularity) {
    report["kappa"] = first.granularity->kappa;
    report["sigma"] = first.granularity->sigma();
  }
  report["theta"] = first.theta;
  report["labels"] = first.labels;

  json summary;
  const auto k_stats = mean_std(ks);
  summary["k"] = {{"mean", k_stats.mean}, {"std", k_stats.std}};
  if (ds.has_truth()) {
    json indices;
    for (const auto& [name, xs] : {std::pair{"acc", &acc}, std::pair{"ari", &ari_v},
                                   std::pair{"ami", &ami_v}, std::pair{"fm", &fm_v}}) {
      const auto m = mean_std(*xs);
      indices[name] = {{"mean", m.mean}, {"std", m.std}};
    }
    summary["indices"] = std::move(indices);
    report["indices"] = report["runs"][0]["indices"];
  }
  report["summary"] = std::move(summary);
  return report;
}

json cmd_cluster(const ClusterArgs& args) {
  args.config.validate();
  const auto v = args.config.variant;
  if (args.gamma_out && v != Variant::kFull && v != Variant::kMcdc3 && v != Variant::kMcdc4) {
    throw ConfigError("--emit-gamma requires a variant that runs multi-granular learning");
  }
  const auto raw = load_csv(args.input, args.csv);
  const auto ds = drop_missing(raw);
  const std::size_t dropped = raw.n() - ds.n();

  std::vector<RunResult> runs;
  for (std::size_t r = 0; r < args.config.repeats; ++r) {
    runs.push_back(run_pipeline(ds, args.config, args.config.seed + r));
  }
  auto report = make_report(args, ds, dropped, runs);

  if (args.gamma_out) {
    write_file_atomic(*args.gamma_out, gamma_csv(*runs.front().granularity));
  }
  if (args.labels_out) write_file_atomic(*args.labels_out, format_labels(runs.front().labels));
  return report;
}

json cmd_eval(const EvalArgs& args) {
  const auto pred = read_labels(args.pred);
  const auto truth = read_labels(args.truth);
  if (pred.size() != truth.size()) {
    throw DataError("label files differ in length (" + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  }
  const auto s = evaluate(pred, truth);
  json j = scores_json(s);
  j["n"] = pred.size();
  return j;
}

void cmd_synth(const SynthArgs& args) {
  args.spec.validate();
  const auto [ds, truth] = generate_synthetic(args.spec);
  std::string csv;
  csv.reserve(ds.n() * (ds.d() * 2 + 4));
  for (std::size_t r = 0; r < ds.d(); ++r) csv += "f" + std::to_string(r) + ",";
  csv += "class\n";
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t r = 0; r < ds.d(); ++r) {
      csv += std::to_string(ds.at(i, r));
      csv += ',';
    }
    csv += std::to_string(truth[i]);
    csv += '\n';
  }
  write_file_atomic(args.output, csv);
  if (args.truth_output) write_file_atomic(*args.truth_output, format_labels(truth));
}

BenchAxis parse_axis(const std::string& name) {
  if (name == "n") return BenchAxis::kN;
  if (name == "k") return BenchAxis::kK;
  if (name == "d") return BenchAxis::kD;
  throw ConfigError("bench: axis must be one of n, k, d");
}

std::vector<BenchRow> cmd_bench(const BenchArgs& args) {
  if (args.grid.empty()) throw ConfigError("bench: empty grid");
  for (std::size_t j = 0; j < args.grid.size(); ++j) {
    if (args.grid[j] == 0) throw ConfigError("bench: grid values must be positive");
    if (j > 0 && args.grid[j] <= args.grid[j - 1]) {
      throw ConfigError("bench: grid must be strictly increasing");
    }
  }
  if (args.repeats < 1) throw ConfigError("bench: repeats must be at least 1");

  struct Point {
    SynthSpec spec;
    RunConfig config;
  };
  std::vector<Point> points;
  for (const auto point : args.grid) {
    Point p;
    p.spec.n = args.axis == BenchAxis::kN ? point : args.n;
    p.spec.d = args.axis == BenchAxis::kD ? point : args.d;
    p.spec.k_true = args.k_true;
    p.spec.purity = args.purity;
    p.spec.values_per_feature = args.values_per_feature;
    p.config.variant = Variant::kFull;
    p.config.k0 = args.k0;
    if (args.axis == BenchAxis::kK) {
      // CAME needs at least k distinct level rows, so the data gets twice as
      // many latent classes as the largest sought k, and MGCPL room above that.
      p.spec.k_true = std::max(args.k_true, 2 * args.grid.back());
      p.spec.values_per_feature = std::max(args.values_per_feature, p.spec.k_true);
      p.config.k0 = std::max(args.k0, 2 * p.spec.k_true);
    }
    p.config.k = args.axis == BenchAxis::kK ? point : args.k;
    p.spec.validate();
    points.push_back(p);
  }

  auto timed_run = [&](Point& p, std::size_t r) {
    p.spec.seed = args.seed + r;
    const auto [ds, truth] = generate_synthetic(p.spec);
    return run_pipeline(ds, p.config, args.seed + r).times;
  };

  // Untimed warm-up, then every repeat sweeps the whole grid, so cold caches
  // and slow spells of the machine do not land on a single point.
  timed_run(points.front(), 0);
  std::vector<std::vector<double>> total(points.size()), learning(points.size()),
      aggregation(points.size());
  for (std::size_t r = 0; r < args.repeats; ++r) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const auto times = timed_run(points[j], r);
      total[j].push_back(times.total_seconds);
      learning[j].push_back(times.learning_seconds);
      aggregation[j].push_back(times.aggregation_seconds);
    }
  }

  std::vector<BenchRow> rows;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto t = mean_std(total[j]);
    rows.push_back({args.grid[j], t.mean, t.std, mean_std(learning[j]).mean,
                    mean_std(aggregation[j]).mean});
  }
  return rows;
}

std::string bench_csv(BenchAxis axis, const std::vector<BenchRow>& rows) {
  const char* name = axis == BenchAxis::kN ? "n" : axis == BenchAxis::kK ? "k" : "d";
  std::ostringstream out;
  out.precision(9);
  out << name << ",mean_seconds,std_seconds,mean_learning_seconds,mean_aggregation_seconds\n";
  for (const auto& row : rows) {
    out << row.point << ',' << row.mean_seconds << ',' << row.std_seconds << ','
        << row.mean_learning_seconds << ',' << row.mean_aggregation_seconds << '\n';
  }
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-granular categorical data clustering"};
  app.require_subcommand(1);

  // cluster
  ClusterArgs cluster;
  std::string variant = "full";
  std::optional<std::string> label_column;
  std::optional<std::size_t> k0, k;
  bool no_header = false;
  auto* c = app.add_subcommand("cluster", "Cluster a categorical CSV file");
  c->add_option("--input", cluster.input, "Input CSV")->required();
  c->add_option("--output", cluster.output, "Report JSON path (default: stdout)");
  c->add_option("--labels-out", cluster.labels_out, "Write final labels, one per line");
  c->add_option("--emit-gamma", cluster.gamma_out, "Write the level-label matrix as CSV");
  c->add_option("--label-column", label_column, "Ground-truth column, excluded from features");
  c->add_option("--missing-token", cluster.csv.missing_token, "Token marking a NULL cell")
      ->capture_default_str();
  c->add_flag("--no-header", no_header, "The first row holds data, not names");
  c->add_option("--eta", cluster.config.eta, "Learning rate")->capture_default_str();
  c->add_option("--k0", k0, "Initial cluster count (default floor(sqrt(n)))");
  c->add_option("--k", k, "Sought cluster count");
  c->add_option("--seed", cluster.config.seed, "Random seed")->capture_default_str();
  c->add_option("--variant", variant, "full|mcdc1|mcdc2|mcdc3|mcdc4|kmodes")
      ->capture_default_str();
  c->add_option("--repeats", cluster.config.repeats, "Runs with seeds seed, seed+1, ...")
      ->capture_default_str();
  c->add_option("--max-passes", cluster.config.max_passes, "Pass cap per epoch")
      ->capture_default_str();
  c->add_option("--max-epochs", cluster.config.max_epochs, "Epoch cap")->capture_default_str();
  c->add_option("--max-iterations", cluster.config.came_max_iterations, "Aggregation cap")
      ->capture_default_str();
  c->add_flag("--literal-similarity", cluster.config.literal_similarity,
              "Keep the 1/d prefactor in the weighted similarity");
  c->add_flag("--random-reseed", cluster.config.random_reseed,
              "Draw fresh random seeds at every epoch");
  c->add_flag("--frozen-modes", cluster.config.frozen_modes,
              "Never update aggregation modes after seeding");
  c->add_flag("--partition-equality-stop", cluster.config.partition_equality_stop,
              "Stop when an epoch reproduces the previous partition");
  c->add_flag("--rival-similarity-penalty", cluster.config.rival_similarity_penalty,
              "Scale the rival penalty by the rival's own similarity");
  c->add_flag("--uniform-seeding", cluster.config.uniform_seeding,
              "Draw aggregation seed rows uniformly instead of farthest-first");
  c->add_flag("--include-levels", cluster.include_levels, "Embed level labels in the report");

  // eval
  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score a label file against ground truth");
  e->add_option("--pred", eval.pred, "Predicted labels")->required();
  e->add_option("--truth", eval.truth, "True labels")->required();
  e->add_option("--output", eval.output, "JSON path (default: stdout)");

  // synth
  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic categorical data set");
  s->add_option("--n", synth.spec.n, "Objects")->capture_default_str();
  s->add_option("--d", synth.spec.d, "Features")->capture_default_str();
  s->add_option("--k", synth.spec.k_true, "Latent clusters")->capture_default_str();
  s->add_option("--m", synth.spec.values_per_feature, "Values per feature")
      ->capture_default_str();
  s->add_option("--purity", synth.spec.purity, "Signature probability")->capture_default_str();
  s->add_option("--seed", synth.spec.seed, "Random seed")->capture_default_str();
  s->add_option("--output", synth.output, "CSV path (features plus a 'class' column)")
      ->required();
  s->add_option("--truth-output", synth.truth_output, "Write true labels, one per line");

  // bench
  BenchArgs bench;
  std::string axis = "n";
  std::string grid;
  auto* b = app.add_subcommand("bench", "Time the full pipeline along one axis");
  b->add_option("--axis", axis, "n|k|d")->capture_default_str();
  b->add_option("--grid", grid, "Comma-separated increasing values")->required();
  b->add_option("--repeats", bench.repeats, "Runs per grid point")->capture_default_str();
  b->add_option("--n", bench.n, "Objects when not on the n axis")->capture_default_str();
  b->add_option("--d", bench.d, "Features when not on the d axis")->capture_default_str();
  b->add_option("--k0", bench.k0, "Initial cluster count")->capture_default_str();
  b->add_option("--k", bench.k, "Sought clusters when not on the k axis")->capture_default_str();
  b->add_option("--k-true", bench.k_true, "Latent clusters")->capture_default_str();
  b->add_option("--m", bench.values_per_feature, "Values per feature")->capture_default_str();
  b->add_option("--purity", bench.purity, "Signature probability")->capture_default_str();
  b->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  b->add_option("--output", bench.output, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  try {
    if (c->parsed()) {
      cluster.config.variant = parse_variant(variant);
      cluster.config.k0 = k0;
      cluster.config.k = k;
      cluster.csv.label_column = label_column;
      cluster.csv.has_header = !no_header;
      emit(cmd_cluster(cluster), cluster.output, out);
    } else if (e->parsed()) {
      emit(cmd_eval(eval), eval.output, out);
    } else if (s->parsed()) {
      cmd_synth(synth);
    } else if (b->parsed()) {
      bench.axis = parse_axis(axis);
      bench.grid = parse_grid(grid);
      const auto csv = bench_csv(bench.axis, cmd_bench(bench));
      if (bench.output) {
        write_file_atomic(*bench.output, csv);
      } else {
        out << csv;
      }
    }
  } catch (const ConfigError& ex) {
    err << "configuration error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mcdc::cli
