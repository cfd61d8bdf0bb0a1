#include "mcdc/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mcdc/error.hpp"

namespace mcdc {

FrequencyTable::FrequencyTable(std::span<const std::size_t> cardinalities)
    : non_null_(cardinalities.size(), 0) {
  offsets_.reserve(cardinalities.size() + 1);
  offsets_.push_back(0);
  for (const auto m : cardinalities) offsets_.push_back(offsets_.back() + m);
  counts_.assign(offsets_.back(), 0);
}

void FrequencyTable::add(std::span<const Code> row) {
  for (std::size_t r = 0; r < row.size(); ++r) {
    if (row[r] == kMissing) continue;
    ++counts_[offsets_[r] + row[r]];
    ++non_null_[r];
  }
  ++members_;
}

void FrequencyTable::remove(std::span<const Code> row) {
  if (members_ == 0) throw ConsistencyError("frequency table: remove from empty table");
  for (std::size_t r = 0; r < row.size(); ++r) {
    if (row[r] == kMissing) continue;
    if (counts_[offsets_[r] + row[r]] == 0) {
      throw ConsistencyError("frequency table: count would go negative in feature " +
                             std::to_string(r));
    }
  }
  for (std::size_t r = 0; r < row.size(); ++r) {
    if (row[r] == kMissing) continue;
    --counts_[offsets_[r] + row[r]];
    --non_null_[r];
  }
  --members_;
}

void FrequencyTable::clear() {
  std::fill(counts_.begin(), counts_.end(), 0);
  std::fill(non_null_.begin(), non_null_.end(), 0);
  members_ = 0;
}

FrequencyTable build_table(const CodeMatrix& data, std::span<const std::size_t> cardinalities,
                           std::span<const std::size_t> members) {
  FrequencyTable table(cardinalities);
  for (const auto i : members) table.add(data.row(i));
  return table;
}

double value_similarity(Code code, std::size_t r, const FrequencyTable& table) {
  if (table.empty()) throw DataError("similarity against empty cluster");
  if (code == kMissing) return 0.0;
  const auto nn = table.non_null(r);
  if (nn == 0) return 0.0;
  return static_cast<double>(table.count(r, code)) / nn;
}

double object_cluster_similarity(std::span<const Code> x, const FrequencyTable& table,
                                 std::span<const double> weights, SimilarityForm form) {
  if (table.empty()) throw DataError("similarity against empty cluster");
  double s = 0.0;
  for (std::size_t r = 0; r < x.size(); ++r) s += weights[r] * value_similarity(x[r], r, table);
  if (form == SimilarityForm::kLiteral) s /= static_cast<double>(x.size());
  return s;
}

namespace {

template <typename RestCount>
double distribution_distance(const FrequencyTable& cluster, std::size_t r, double rest_nn,
                             RestCount rest_count) {
  const double nn = cluster.non_null(r);
  if (nn == 0.0 || rest_nn == 0.0) return 0.0;
  const auto counts = cluster.counts(r);
  double sum = 0.0;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const double diff = counts[t] / nn - rest_count(t) / rest_nn;
    sum += diff * diff;
  }
  return std::min(1.0, std::sqrt(sum / 2.0));
}

}  // namespace

double inter_cluster_difference(std::size_t r, const FrequencyTable& cluster,
                                const FrequencyTable& rest) {
  const auto rest_counts = rest.counts(r);
  return distribution_distance(cluster, r, rest.non_null(r),
                               [&](std::size_t t) { return double(rest_counts[t]); });
}

double inter_cluster_difference_vs_total(std::size_t r, const FrequencyTable& cluster,
                                         const FrequencyTable& total) {
  const auto own = cluster.counts(r);
  const auto all = total.counts(r);
  const double rest_nn = double(total.non_null(r)) - double(cluster.non_null(r));
  return distribution_distance(cluster, r, rest_nn,
                               [&](std::size_t t) { return double(all[t]) - double(own[t]); });
}

double intra_cluster_similarity(std::size_t r, const FrequencyTable& table) {
  if (table.empty()) return 0.0;
  const double nn = table.non_null(r);
  if (nn == 0.0) return 0.0;
  // Each member holding code t contributes count[t] / nn, and count[t] members
  // hold it.
  double sum = 0.0;
  for (const auto c : table.counts(r)) sum += double(c) * double(c);
  return sum / (nn * static_cast<double>(table.members()));
}

FeatureWeights FeatureWeights::uniform(std::size_t k, std::size_t d) {
  FeatureWeights w;
  w.k = k;
  w.d = d;
  w.omega.assign(k * d, d == 0 ? 0.0 : 1.0 / static_cast<double>(d));
  w.alpha.assign(k * d, 0.0);
  w.beta.assign(k * d, 0.0);
  w.contribution.assign(k * d, 0.0);
  return w;
}

std::vector<double> normalize_contributions(std::span<const double> contribution) {
  const double total = std::accumulate(contribution.begin(), contribution.end(), 0.0);
  std::vector<double> omega(contribution.size());
  if (!(total > 0.0)) {
    std::fill(omega.begin(), omega.end(), 1.0 / static_cast<double>(omega.size()));
    return omega;
  }
  for (std::size_t r = 0; r < omega.size(); ++r) omega[r] = contribution[r] / total;
  return omega;
}

FeatureWeights update_feature_weights(std::span<const FrequencyTable> clusters,
                                      const FrequencyTable& total) {
  const std::size_t d = total.features();
  auto w = FeatureWeights::uniform(clusters.size(), d);
  for (std::size_t l = 0; l < clusters.size(); ++l) {
    const auto& table = clusters[l];
    if (table.empty()) continue;
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t idx = l * d + r;
      w.alpha[idx] = inter_cluster_difference_vs_total(r, table, total);
      w.beta[idx] = intra_cluster_similarity(r, table);
      w.contribution[idx] = w.alpha[idx] * w.beta[idx];
    }
    const auto omega = normalize_contributions(w.contribution_of(l));
    std::copy(omega.begin(), omega.end(), w.omega.begin() + static_cast<std::ptrdiff_t>(l * d));
  }
  return w;
}

}  // namespace mcdc
