#pragma once

#include <span>
#include <vector>

#include "mcdc/types.hpp"

namespace mcdc {

// Counts of objects per (predicted cluster, true class). Label values are
// compacted in order of first appearance, so any label alphabet works.
class ContingencyTable {
 public:
  // Throws DataError on length mismatch or empty input.
  ContingencyTable(std::span<const Label> pred, std::span<const Label> truth);

  std::size_t rows() const { return row_sums_.size(); }
  std::size_t cols() const { return col_sums_.size(); }
  std::size_t n() const { return n_; }
  std::size_t at(std::size_t i, std::size_t j) const { return cells_[i * cols() + j]; }
  const std::vector<std::size_t>& row_sums() const { return row_sums_; }
  const std::vector<std::size_t>& col_sums() const { return col_sums_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> row_sums_;
  std::vector<std::size_t> col_sums_;
};

// Maximum total weight of a one-to-one row/column matching of a square or
// rectangular non-negative matrix (Hungarian method, O(s^3)).
double max_weight_matching(const std::vector<std::vector<double>>& weight);

// Fraction of objects on the diagonal under the best one-to-one mapping of
// predicted clusters to true classes.
double accuracy(std::span<const Label> pred, std::span<const Label> truth);

// Adjusted Rand index. 1 for identical partitions; 0 when the index is
// undefined (max == expected) and the partitions differ.
double ari(std::span<const Label> pred, std::span<const Label> truth);

// Adjusted mutual information with natural-log entropies, arithmetic-mean
// normalization and the hypergeometric expected-MI model.
double ami(std::span<const Label> pred, std::span<const Label> truth);

// Fowlkes-Mallows index over object pairs; 0 when either factor is zero.
double fm(std::span<const Label> pred, std::span<const Label> truth);

// Mutual information (nats) and expected MI under random permutation, from a
// contingency table.
double mutual_information(const ContingencyTable& table);
double expected_mutual_information(const ContingencyTable& table);

struct ValidityScores {
  double acc = 0.0;
  double ari = 0.0;
  double ami = 0.0;
  double fm = 0.0;
};

ValidityScores evaluate(std::span<const Label> pred, std::span<const Label> truth);

// True when the two label vectors induce the same partition.
bool same_partition(std::span<const Label> a, std::span<const Label> b);

}  // namespace mcdc
