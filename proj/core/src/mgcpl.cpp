#include "mcdc/mgcpl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mcdc/error.hpp"

namespace mcdc {

double cluster_weight(double delta) { return 1.0 / (1.0 + std::exp(-10.0 * delta + 5.0)); }

Competition::Competition(std::size_t k, bool frequency_sensitive)
    : wins_(k, 0), delta_(k, 1.0), live_(k, 1), frequency_sensitive_(frequency_sensitive) {}

std::size_t Competition::live_count() const {
  return static_cast<std::size_t>(std::count(live_.begin(), live_.end(), 1));
}

void Competition::set_wins(std::size_t l, std::uint64_t g) {
  total_wins_ = total_wins_ - wins_[l] + g;
  wins_[l] = g;
}

double Competition::winning_ratio(std::size_t l) const {
  if (total_wins_ == 0) return 0.0;
  return static_cast<double>(wins_[l]) / static_cast<double>(total_wins_);
}

double Competition::score(std::size_t l, double similarity) const {
  if (!frequency_sensitive_) return similarity;
  return (1.0 - winning_ratio(l)) * weight(l) * similarity;
}

std::size_t Competition::select_winner(std::span<const double> similarities) const {
  std::size_t best = size();
  double best_score = 0.0;
  for (std::size_t l = 0; l < size(); ++l) {
    if (!live(l)) continue;
    const double s = score(l, similarities[l]);
    if (best == size() || s > best_score) {
      best = l;
      best_score = s;
    }
  }
  if (best == size()) throw DataError("competition: no live clusters");
  return best;
}

std::optional<std::size_t> Competition::select_rival(std::span<const double> similarities,
                                                     std::size_t winner) const {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t l = 0; l < size(); ++l) {
    if (l == winner || !live(l)) continue;
    const double s = score(l, similarities[l]);
    if (!best || s > best_score) {
      best = l;
      best_score = s;
    }
  }
  return best;
}

void Competition::apply_award_penalty(std::size_t winner, std::optional<std::size_t> rival,
                                      double eta, double penalty_similarity) {
  ++wins_[winner];
  ++total_wins_;
  delta_[winner] += eta;
  if (rival) delta_[*rival] -= eta * penalty_similarity;
}

void Competition::reset() {
  std::fill(wins_.begin(), wins_.end(), 0);
  std::fill(delta_.begin(), delta_.end(), 1.0);
  total_wins_ = 0;
}

void LearnerOptions::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("learning rate must be positive");
  if (max_passes == 0) throw ConfigError("max_passes must be positive");
  if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
}

Learner::Learner(const Dataset& ds, LearnerOptions options)
    : ds_(ds),
      options_(options),
      total_(ds.cardinalities()),
      assignment_(ds.n(), kUnassigned) {
  options_.validate();
  // Every object ends up assigned after the first pass, so the table of all
  // objects is also the table of all assigned objects whenever weights are
  // learned.
  for (std::size_t i = 0; i < ds.n(); ++i) total_.add(ds.row(i));
}

void Learner::start_epoch(std::size_t k) {
  competition_ = Competition(k, options_.frequency_sensitive);
  weights_ = FeatureWeights::uniform(k, ds_.d());
  scratch_.assign(k, 0.0);
}

void Learner::seed(std::span<const std::size_t> seed_objects) {
  if (seed_objects.empty()) throw ConfigError("learner: at least one seed required");
  std::fill(assignment_.begin(), assignment_.end(), kUnassigned);
  tables_.assign(seed_objects.size(), FrequencyTable(ds_.cardinalities()));
  for (std::size_t l = 0; l < seed_objects.size(); ++l) {
    const auto i = seed_objects[l];
    if (i >= ds_.n()) throw ConfigError("learner: seed object out of range");
    if (assignment_[i] != kUnassigned) throw ConfigError("learner: duplicate seed object");
    assignment_[i] = l;
    tables_[l].add(ds_.row(i));
  }
  start_epoch(seed_objects.size());
}

void Learner::seed_random(std::size_t k, std::mt19937_64& rng) {
  if (k < 1 || k > ds_.n()) throw ConfigError("learner: need 1 <= k <= n");
  // Partial Fisher-Yates over object indices.
  std::vector<std::size_t> order(ds_.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t j = 0; j < k; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, order.size() - 1);
    std::swap(order[j], order[pick(rng)]);
  }
  order.resize(k);
  seed(order);
}

void Learner::carry_over() {
  std::vector<std::size_t> remap(tables_.size(), kUnassigned);
  std::vector<FrequencyTable> kept;
  for (std::size_t l = 0; l < tables_.size(); ++l) {
    if (tables_[l].empty()) continue;
    remap[l] = kept.size();
    kept.push_back(std::move(tables_[l]));
  }
  for (auto& a : assignment_) {
    if (a != kUnassigned) a = remap[a];
  }
  tables_ = std::move(kept);
  start_epoch(tables_.size());
}

void Learner::move(std::size_t i, std::size_t to) {
  const auto row = ds_.row(i);
  const auto from = assignment_[i];
  if (from != kUnassigned) {
    tables_[from].remove(row);
    if (tables_[from].empty()) competition_.retire(from);
  }
  tables_[to].add(row);
  assignment_[i] = to;
}

double Learner::similarity(std::span<const Code> x, std::size_t l) const {
  const auto& table = tables_[l];
  const auto w = weights_.omega_of(l);
  double s = 0.0;
  for (std::size_t r = 0; r < x.size(); ++r) {
    const Code c = x[r];
    if (c == kMissing) continue;
    const auto nn = table.non_null(r);
    if (nn == 0) continue;
    s += w[r] * static_cast<double>(table.count(r, c)) / nn;
  }
  if (options_.similarity_form == SimilarityForm::kLiteral) s /= static_cast<double>(x.size());
  return s;
}

std::size_t Learner::pass() {
  std::size_t changed = 0;
  const std::size_t k = tables_.size();
  for (std::size_t i = 0; i < ds_.n(); ++i) {
    const auto row = ds_.row(i);
    for (std::size_t l = 0; l < k; ++l) {
      scratch_[l] = competition_.live(l) ? similarity(row, l) : 0.0;
    }
    const auto winner = competition_.select_winner(scratch_);
    std::optional<std::size_t> rival;
    if (options_.rival_penalization) rival = competition_.select_rival(scratch_, winner);
    double penalty_similarity = 0.0;
    if (rival) penalty_similarity = scratch_[options_.penalty_from_rival ? *rival : winner];
    if (assignment_[i] != winner) {
      move(i, winner);
      ++changed;
    }
    competition_.apply_award_penalty(winner, rival, options_.eta, penalty_similarity);
  }
  return changed;
}

void Learner::update_weights() { weights_ = update_feature_weights(tables_, total_); }

EpochResult Learner::run_epoch() {
  EpochResult result;
  for (std::size_t p = 1; p <= options_.max_passes; ++p) {
    const auto changed = pass();
    result.passes = p;
    if (options_.feature_weighting) update_weights();
    if (changed == 0) {
      result.converged = true;
      break;
    }
  }
  result.labels = compact_labels();
  result.clusters = live_clusters();
  return result;
}

std::size_t Learner::live_clusters() const {
  return static_cast<std::size_t>(
      std::count_if(tables_.begin(), tables_.end(), [](const auto& t) { return !t.empty(); }));
}

Labels Learner::compact_labels() const {
  std::vector<Label> remap(tables_.size(), 0);
  Label next = 0;
  for (std::size_t l = 0; l < tables_.size(); ++l) {
    if (!tables_[l].empty()) remap[l] = next++;
  }
  Labels labels(assignment_.size());
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    labels[i] = assignment_[i] == kUnassigned ? std::numeric_limits<Label>::max()
                                              : remap[assignment_[i]];
  }
  return labels;
}

double Learner::overall_similarity() const {
  double total = 0.0;
  for (std::size_t i = 0; i < ds_.n(); ++i) {
    const auto l = assignment_[i];
    if (l == kUnassigned || tables_[l].empty()) continue;
    total += competition_.weight(l) * similarity(ds_.row(i), l);
  }
  return total;
}

CodeMatrix MultiGranularResult::encoding() const { return CodeMatrix::from_columns(levels); }

std::size_t default_k0(std::size_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (k * k > n) --k;
  while ((k + 1) * (k + 1) <= n) ++k;
  return std::max<std::size_t>(1, k);
}

MultiGranularResult run_mgcpl(const Dataset& ds, std::size_t k0, std::uint64_t seed,
                              const LearnerOptions& options) {
  if (k0 < 1) throw ConfigError("k0 must be at least 1");
  if (k0 > ds.n()) {
    throw ConfigError("k0 (" + std::to_string(k0) + ") exceeds object count (" +
                      std::to_string(ds.n()) + ")");
  }
  std::mt19937_64 rng(seed);
  Learner learner(ds, options);
  learner.seed_random(k0, rng);

  MultiGranularResult result;
  std::size_t k_old = k0;
  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    auto out = learner.run_epoch();
    ++result.epochs;
    result.epoch_converged.push_back(out.converged);

    bool stop = false;
    if (result.kappa.empty() || out.clusters < result.kappa.back()) {
      result.kappa.push_back(out.clusters);
      result.levels.push_back(std::move(out.labels));
      result.level_weights.push_back(learner.weights());
    } else {
      // Same granularity as the last level: keep the latest partition.
      const bool same_partition = out.labels == result.levels.back();
      result.levels.back() = std::move(out.labels);
      result.level_weights.back() = learner.weights();
      stop = !options.stop_on_equal_partition || same_partition;
    }
    if (!options.stop_on_equal_partition && out.clusters == k_old) stop = true;
    if (stop) {
      result.converged = true;
      break;
    }
    k_old = out.clusters;

    if (options.random_reseed) {
      learner.seed_random(out.clusters, rng);
    } else {
      learner.carry_over();
    }
  }
  return result;
}

EpochResult run_single_granularity(const Dataset& ds, std::size_t k, std::uint64_t seed,
                                   const LearnerOptions& options) {
  if (k < 1 || k > ds.n()) throw ConfigError("k must satisfy 1 <= k <= n");
  std::mt19937_64 rng(seed);
  Learner learner(ds, options);
  learner.seed_random(k, rng);
  return learner.run_epoch();
}

}  // namespace mcdc
