#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcdc/types.hpp"

namespace mcdc {

// How the weighted object-cluster similarity is scaled.
enum class SimilarityForm {
  // s = sum_r w_r * s_r, in [0, 1]; uniform w gives the plain average.
  kNormalized,
  // s = (1/d) * sum_r w_r * s_r, the printed form with its 1/d prefactor.
  kLiteral,
};

// Per-cluster value counts: counts(r)[t] is the number of members holding
// code t in feature r, non_null(r) the number of members with a non-NULL
// value in feature r.
class FrequencyTable {
 public:
  using Count = std::uint32_t;

  FrequencyTable() = default;
  explicit FrequencyTable(std::span<const std::size_t> cardinalities);

  void add(std::span<const Code> row);
  // Throws ConsistencyError (leaving the table untouched) if the row was
  // never added.
  void remove(std::span<const Code> row);
  void clear();

  std::size_t features() const { return non_null_.size(); }
  std::size_t members() const { return members_; }
  bool empty() const { return members_ == 0; }

  Count count(std::size_t r, Code code) const { return counts_[offsets_[r] + code]; }
  Count non_null(std::size_t r) const { return non_null_[r]; }
  std::span<const Count> counts(std::size_t r) const {
    return {counts_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Count> counts_;
  std::vector<Count> non_null_;
  std::size_t members_ = 0;
};

// Builds a table holding every row of `data` selected by `members`.
FrequencyTable build_table(const CodeMatrix& data, std::span<const std::size_t> cardinalities,
                           std::span<const std::size_t> members);

// Fraction of the cluster's non-NULL members in feature r that hold `code`.
// Zero for a NULL query or when every member is NULL in r. Throws DataError
// for an empty cluster.
double value_similarity(Code code, std::size_t r, const FrequencyTable& table);

// Weighted sum of per-feature value similarities.
double object_cluster_similarity(std::span<const Code> x, const FrequencyTable& table,
                                 std::span<const double> weights,
                                 SimilarityForm form = SimilarityForm::kNormalized);

// Euclidean distance between the in-cluster and rest-of-data value
// distributions of feature r, scaled by 1/sqrt(2) into [0, 1]. Zero when
// either side has no non-NULL value in r.
double inter_cluster_difference(std::size_t r, const FrequencyTable& cluster,
                                 const FrequencyTable& rest);

// As above, with the rest-of-data side given implicitly as total - cluster.
double inter_cluster_difference_vs_total(std::size_t r, const FrequencyTable& cluster,
                                         const FrequencyTable& total);

// Mean, over the cluster's members, of the frequency of each member's own
// value in feature r. NULL cells contribute zero.
double intra_cluster_similarity(std::size_t r, const FrequencyTable& table);

// Per-cluster feature weights, stored cluster-major (k rows of d entries).
struct FeatureWeights {
  std::size_t k = 0;
  std::size_t d = 0;
  std::vector<double> omega;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> contribution;  // alpha * beta

  static FeatureWeights uniform(std::size_t k, std::size_t d);

  std::span<const double> omega_of(std::size_t l) const { return {omega.data() + l * d, d}; }
  std::span<const double> alpha_of(std::size_t l) const { return {alpha.data() + l * d, d}; }
  std::span<const double> beta_of(std::size_t l) const { return {beta.data() + l * d, d}; }
  std::span<const double> contribution_of(std::size_t l) const {
    return {contribution.data() + l * d, d};
  }
};

// Normalizes contributions into a probability vector; all-zero input maps to
// the uniform vector.
std::vector<double> normalize_contributions(std::span<const double> contribution);

// Recomputes alpha, beta, contribution and omega for every cluster. `total`
// holds every assigned object. Empty clusters get zero contributions and
// uniform omega.
FeatureWeights update_feature_weights(std::span<const FrequencyTable> clusters,
                                      const FrequencyTable& total);

}  // namespace mcdc
