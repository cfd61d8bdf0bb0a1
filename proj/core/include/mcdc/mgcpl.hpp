#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mcdc/dataset.hpp"
#include "mcdc/similarity.hpp"
#include "mcdc/types.hpp"

namespace mcdc {

// Sigmoid cluster weight u = 1 / (1 + exp(-10 * delta + 5)).
double cluster_weight(double delta);

// Winner/rival bookkeeping for k competing clusters: winning counts g,
// award/penalty accumulators delta, and a live flag per cluster.
class Competition {
 public:
  // With frequency_sensitive = false the score is the bare similarity (no
  // winning-ratio handicap and no cluster weight).
  explicit Competition(std::size_t k = 0, bool frequency_sensitive = true);

  std::size_t size() const { return wins_.size(); }
  bool live(std::size_t l) const { return live_[l] != 0; }
  std::size_t live_count() const;
  void retire(std::size_t l) { live_[l] = 0; }

  std::uint64_t wins(std::size_t l) const { return wins_[l]; }
  std::uint64_t total_wins() const { return total_wins_; }
  double delta(std::size_t l) const { return delta_[l]; }
  void set_wins(std::size_t l, std::uint64_t g);
  void set_delta(std::size_t l, double delta) { delta_[l] = delta; }

  // rho_l = g_l / sum(g); zero for everyone while no wins are recorded.
  double winning_ratio(std::size_t l) const;
  // u_l derived from delta_l.
  double weight(std::size_t l) const { return cluster_weight(delta_[l]); }
  // (1 - rho_l) * u_l * s.
  double score(std::size_t l, double similarity) const;

  // Live cluster with the highest score; ties go to the lowest id. Throws
  // DataError when no cluster is live.
  std::size_t select_winner(std::span<const double> similarities) const;
  // Best-scoring live cluster other than the winner, or nullopt.
  std::optional<std::size_t> select_rival(std::span<const double> similarities,
                                          std::size_t winner) const;

  // g_v += 1, delta_v += eta, and delta_h -= eta * s when a rival exists.
  void apply_award_penalty(std::size_t winner, std::optional<std::size_t> rival, double eta,
                           double penalty_similarity);

  // g = 0 and delta = 1 for every cluster; live flags are kept.
  void reset();

 private:
  std::vector<std::uint64_t> wins_;
  std::vector<double> delta_;
  std::vector<char> live_;
  std::uint64_t total_wins_ = 0;
  bool frequency_sensitive_ = true;
};

struct LearnerOptions {
  double eta = 0.03;
  std::size_t max_passes = 100;
  std::size_t max_epochs = 50;
  SimilarityForm similarity_form = SimilarityForm::kNormalized;
  // Learn per-cluster feature weights after every pass; off means uniform.
  bool feature_weighting = true;
  // Penalize the runner-up for every object.
  bool rival_penalization = true;
  // Scale the rival's penalty by its own similarity to the object instead of
  // the winner's.
  bool penalty_from_rival = false;
  // Use (1 - rho) * u in winner selection; off means plain max similarity.
  bool frequency_sensitive = true;
  // Re-draw random singleton seeds at each epoch instead of carrying the
  // surviving clusters' members over.
  bool random_reseed = false;
  // Stop only when an epoch reproduces the previous partition, rather than
  // as soon as the cluster count stops dropping.
  bool stop_on_equal_partition = false;

  void validate() const;
};

struct EpochResult {
  Labels labels;            // compacted to 0..clusters-1
  std::size_t clusters = 0;
  std::size_t passes = 0;
  bool converged = false;   // a full pass changed no assignment
};

// Online competitive penalization learner over one data set. Holds the
// partition, the per-cluster frequency tables and feature weights, and the
// competition state.
class Learner {
 public:
  static constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

  Learner(const Dataset& ds, LearnerOptions options);

  // Fresh epoch with one singleton cluster per seed object.
  void seed(std::span<const std::size_t> seed_objects);
  // Fresh epoch with k distinct random seed objects.
  void seed_random(std::size_t k, std::mt19937_64& rng);
  // Fresh epoch keeping the members of every non-empty cluster. Empty
  // clusters are dropped and ids compacted; statistics are reset.
  void carry_over();

  // Passes over the data until no assignment changes or max_passes.
  EpochResult run_epoch();
  // One pass in data order; returns how many objects changed cluster.
  std::size_t pass();
  // Recomputes feature weights from the current partition.
  void update_weights();

  // Weighted similarity of x to cluster l under the current weights.
  double similarity(std::span<const Code> x, std::size_t l) const;
  // sum_i u_{q(i)} * s(x_i, C_{q(i)}) over assigned objects.
  double overall_similarity() const;

  std::size_t clusters() const { return tables_.size(); }
  std::size_t live_clusters() const;
  const std::vector<FrequencyTable>& tables() const { return tables_; }
  const FrequencyTable& total() const { return total_; }
  const FeatureWeights& weights() const { return weights_; }
  const Competition& competition() const { return competition_; }
  Competition& competition() { return competition_; }
  std::span<const std::size_t> assignment() const { return assignment_; }
  const LearnerOptions& options() const { return options_; }

  // Non-empty clusters relabeled 0..m-1 in id order. Unassigned objects keep
  // kUnassigned truncated to Label max.
  Labels compact_labels() const;

 private:
  void start_epoch(std::size_t k);
  void move(std::size_t i, std::size_t to);

  const Dataset& ds_;
  LearnerOptions options_;
  std::vector<FrequencyTable> tables_;
  FrequencyTable total_;
  FeatureWeights weights_;
  Competition competition_;
  std::vector<std::size_t> assignment_;
  std::vector<double> scratch_;
};

struct MultiGranularResult {
  std::vector<std::size_t> kappa;           // strictly decreasing
  std::vector<Labels> levels;               // one label vector per kappa entry
  std::vector<FeatureWeights> level_weights;
  std::size_t epochs = 0;
  bool converged = false;                   // stopped by its own rule, not the cap
  std::vector<bool> epoch_converged;

  std::size_t sigma() const { return kappa.size(); }
  std::size_t final_k() const { return kappa.back(); }
  const Labels& final_labels() const { return levels.back(); }
  // n x sigma matrix of level labels.
  CodeMatrix encoding() const;
};

// floor(sqrt(n)), at least 1.
std::size_t default_k0(std::size_t n);

// Multi-granular competitive penalization learning from k0 random seeds.
// Throws ConfigError unless 1 <= k0 <= n.
MultiGranularResult run_mgcpl(const Dataset& ds, std::size_t k0, std::uint64_t seed,
                              const LearnerOptions& options = {});

// One epoch from k random seeds, no granularity descent.
EpochResult run_single_granularity(const Dataset& ds, std::size_t k, std::uint64_t seed,
                                   const LearnerOptions& options);

}  // namespace mcdc
