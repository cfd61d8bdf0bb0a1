#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcdc/came.hpp"
#include "mcdc/dataset.hpp"
#include "mcdc/mgcpl.hpp"

namespace mcdc {

// Which combination of learner and aggregation produces the final labels.
enum class Variant {
  kFull,    // multi-granular learning, then weighted aggregation of all levels
  kMcdc1,   // plain max-similarity reassignment from k random seeds
  kMcdc2,   // frequency-sensitive competitive learning from k + 2 seeds
  kMcdc3,   // multi-granular learning, coarsest level as the answer
  kMcdc4,   // multi-granular learning, unweighted aggregation
  kKModes,  // unweighted k-modes on the raw data
};

std::string_view to_string(Variant v);
// Throws ConfigError for unknown names.
Variant parse_variant(std::string_view name);

struct RunConfig {
  double eta = 0.03;
  std::optional<std::size_t> k0;  // default floor(sqrt(n))
  std::optional<std::size_t> k;   // default: coarsest learned cluster count
  std::uint64_t seed = 0;
  std::size_t max_passes = 100;
  std::size_t max_epochs = 50;
  std::size_t came_max_iterations = 100;
  Variant variant = Variant::kFull;

  bool literal_similarity = false;
  bool random_reseed = false;
  bool frozen_modes = false;
  bool partition_equality_stop = false;
  bool rival_similarity_penalty = false;
  bool uniform_seeding = false;

  std::size_t repeats = 1;

  void validate() const;
  LearnerOptions learner_options() const;
  CameOptions came_options(bool weighting) const;
};

struct StageTimes {
  double learning_seconds = 0.0;
  double aggregation_seconds = 0.0;
  double total_seconds = 0.0;
};

struct RunResult {
  Variant variant = Variant::kFull;
  std::uint64_t seed = 0;
  // Present for the variants that run multi-granular learning.
  std::optional<MultiGranularResult> granularity;
  Labels labels;
  std::size_t k = 0;                 // distinct labels in the answer
  std::vector<double> theta;         // aggregation weights, if aggregation ran
  bool learner_converged = true;
  bool aggregation_converged = true;
  std::size_t learner_passes = 0;    // single-granularity variants only
  std::size_t aggregation_iterations = 0;
  StageTimes times;
};

// Runs one variant end to end with the given seed (config.seed is ignored so
// that repeats can vary it). The data set's label column is never read.
RunResult run_pipeline(const Dataset& ds, const RunConfig& config, std::uint64_t seed);

// Seed for the aggregation stage, decorrelated from the learner's seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mcdc
