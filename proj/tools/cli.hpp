#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcdc/dataset.hpp"
#include "mcdc/pipeline.hpp"

namespace mcdc::cli {

inline constexpr const char* kReportSchema = "mcdc-report/1";

struct ClusterArgs {
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;      // report; stdout if absent
  std::optional<std::filesystem::path> labels_out;  // one label per line
  std::optional<std::filesystem::path> gamma_out;   // level labels as CSV
  CsvOptions csv;
  RunConfig config;
  bool include_levels = false;
};

struct EvalArgs {
  std::filesystem::path pred;
  std::filesystem::path truth;
  std::optional<std::filesystem::path> output;
};

struct SynthArgs {
  SynthSpec spec;
  std::filesystem::path output;
  std::optional<std::filesystem::path> truth_output;
};

enum class BenchAxis { kN, kK, kD };

struct BenchArgs {
  BenchAxis axis = BenchAxis::kN;
  std::vector<std::size_t> grid;
  std::size_t repeats = 3;
  std::size_t n = 20000;
  std::size_t d = 10;
  std::size_t k0 = 32;
  std::size_t k = 3;
  std::size_t k_true = 3;
  std::size_t values_per_feature = 5;
  double purity = 0.9;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output;  // CSV; stdout if absent
};

struct BenchRow {
  std::size_t point = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;
  double mean_learning_seconds = 0.0;
  double mean_aggregation_seconds = 0.0;
};

// Loads, filters and clusters; writes the optional label and level files and
// returns the report.
nlohmann::json cmd_cluster(const ClusterArgs& args);
nlohmann::json cmd_eval(const EvalArgs& args);
void cmd_synth(const SynthArgs& args);
std::vector<BenchRow> cmd_bench(const BenchArgs& args);

std::string bench_csv(BenchAxis axis, const std::vector<BenchRow>& rows);
BenchAxis parse_axis(const std::string& name);

// Builds the JSON report for one or more runs over the same data set.
nlohmann::json make_report(const ClusterArgs& args, const Dataset& ds, std::size_t rows_dropped,
                           const std::vector<RunResult>& runs);

// Label files: one non-negative integer per line, blank lines ignored.
Labels read_labels(const std::filesystem::path& path);
std::string format_labels(const Labels& labels);
// Writes through a temporary sibling and renames, so a failed write leaves
// no partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Parses argv and dispatches to a subcommand. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcdc::cli
