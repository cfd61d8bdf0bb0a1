#include "mcdc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "mcdc/error.hpp"

namespace mcdc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t distinct_labels(const Labels& labels) {
  return std::unordered_set<Label>(labels.begin(), labels.end()).size();
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kMcdc1: return "mcdc1";
    case Variant::kMcdc2: return "mcdc2";
    case Variant::kMcdc3: return "mcdc3";
    case Variant::kMcdc4: return "mcdc4";
    case Variant::kKModes: return "kmodes";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (const auto v : {Variant::kFull, Variant::kMcdc1, Variant::kMcdc2, Variant::kMcdc3,
                       Variant::kMcdc4, Variant::kKModes}) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be positive");
  if (k0 && *k0 < 1) throw ConfigError("k0 must be at least 1");
  if (k && *k < 1) throw ConfigError("k must be at least 1");
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (max_passes == 0 || max_epochs == 0 || came_max_iterations == 0) {
    throw ConfigError("iteration caps must be positive");
  }
  const bool needs_k = variant == Variant::kMcdc1 || variant == Variant::kMcdc2 ||
                       variant == Variant::kKModes;
  if (needs_k && !k) {
    throw ConfigError("variant " + std::string(to_string(variant)) + " requires --k");
  }
}

LearnerOptions RunConfig::learner_options() const {
  LearnerOptions o;
  o.eta = eta;
  o.max_passes = max_passes;
  o.max_epochs = max_epochs;
  o.similarity_form = literal_similarity ? SimilarityForm::kLiteral : SimilarityForm::kNormalized;
  o.random_reseed = random_reseed;
  o.stop_on_equal_partition = partition_equality_stop;
  o.penalty_from_rival = rival_similarity_penalty;
  return o;
}

CameOptions RunConfig::came_options(bool weighting) const {
  CameOptions o;
  o.max_iterations = came_max_iterations;
  o.weighting = weighting;
  o.update_modes = !frozen_modes;
  o.uniform_seeding = uniform_seeding;
  return o;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RunResult run_pipeline(const Dataset& ds, const RunConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.k && *config.k > ds.n()) throw ConfigError("k exceeds the number of objects");

  RunResult result;
  result.variant = config.variant;
  result.seed = seed;
  const auto start = Clock::now();

  switch (config.variant) {
    case Variant::kFull:
    case Variant::kMcdc3:
    case Variant::kMcdc4: {
      const std::size_t k0 = config.k0.value_or(default_k0(ds.n()));
      auto t0 = Clock::now();
      auto mg = run_mgcpl(ds, k0, seed, config.learner_options());
      result.times.learning_seconds = seconds_since(t0);
      result.learner_converged =
          mg.converged && std::all_of(mg.epoch_converged.begin(), mg.epoch_converged.end(),
                                      [](bool c) { return c; });
      if (config.variant == Variant::kMcdc3) {
        result.labels = mg.final_labels();
      } else {
        const std::size_t k = config.k.value_or(mg.final_k());
        const bool weighting = config.variant == Variant::kFull;
        t0 = Clock::now();
        auto agg = run_came(mg.encoding(), k, derive_seed(seed, 1),
                            config.came_options(weighting));
        result.times.aggregation_seconds = seconds_since(t0);
        result.labels = std::move(agg.labels);
        result.theta = std::move(agg.theta);
        result.aggregation_converged = agg.converged;
        result.aggregation_iterations = agg.iterations;
      }
      result.granularity = std::move(mg);
      break;
    }
    case Variant::kMcdc1:
    case Variant::kMcdc2: {
      auto options = config.learner_options();
      options.rival_penalization = false;
      options.feature_weighting = false;
      options.frequency_sensitive = config.variant == Variant::kMcdc2;
      const std::size_t k =
          config.variant == Variant::kMcdc2 ? std::min(ds.n(), *config.k + 2) : *config.k;
      const auto t0 = Clock::now();
      auto epoch = run_single_granularity(ds, k, seed, options);
      result.times.learning_seconds = seconds_since(t0);
      result.labels = std::move(epoch.labels);
      result.learner_converged = epoch.converged;
      result.learner_passes = epoch.passes;
      break;
    }
    case Variant::kKModes: {
      const auto t0 = Clock::now();
      auto agg = run_came(ds.values(), *config.k, derive_seed(seed, 1),
                          config.came_options(false));
      result.times.aggregation_seconds = seconds_since(t0);
      result.labels = std::move(agg.labels);
      result.theta = std::move(agg.theta);
      result.aggregation_converged = agg.converged;
      result.aggregation_iterations = agg.iterations;
      break;
    }
  }
  result.k = distinct_labels(result.labels);
  result.times.total_seconds = seconds_since(start);
  return result;
}

}  // namespace mcdc
