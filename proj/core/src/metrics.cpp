#include "mcdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "mcdc/error.hpp"

namespace mcdc {
namespace {

std::vector<std::size_t> compact(std::span<const Label> labels, std::size_t& distinct) {
  std::unordered_map<Label, std::size_t> index;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = index.try_emplace(labels[i], index.size()).first->second;
  }
  distinct = index.size();
  return out;
}

void check_lengths(std::span<const Label> pred, std::span<const Label> truth) {
  if (pred.size() != truth.size()) {
    throw DataError("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw DataError("label vectors are empty");
}

double pairs(std::size_t m) { return 0.5 * double(m) * (double(m) - 1.0); }

double entropy(const std::vector<std::size_t>& sums, double n) {
  double h = 0.0;
  for (const auto s : sums) {
    if (s == 0) continue;
    const double p = double(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

ContingencyTable::ContingencyTable(std::span<const Label> pred, std::span<const Label> truth) {
  check_lengths(pred, truth);
  std::size_t rows = 0;
  std::size_t cols = 0;
  const auto p = compact(pred, rows);
  const auto t = compact(truth, cols);
  n_ = pred.size();
  cells_.assign(rows * cols, 0);
  row_sums_.assign(rows, 0);
  col_sums_.assign(cols, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    ++cells_[p[i] * cols + t[i]];
    ++row_sums_[p[i]];
    ++col_sums_[t[i]];
  }
}

double max_weight_matching(const std::vector<std::vector<double>>& weight) {
  const std::size_t rows = weight.size();
  const std::size_t cols = rows == 0 ? 0 : weight.front().size();
  const std::size_t s = std::max(rows, cols);
  if (s == 0) return 0.0;
  double top = 0.0;
  for (const auto& row : weight) {
    for (const auto w : row) top = std::max(top, w);
  }
  auto cost = [&](std::size_t i, std::size_t j) {
    const double w = (i < rows && j < cols) ? weight[i][j] : 0.0;
    return top - w;
  };

  // Shortest augmenting path formulation with potentials; 1-based indices,
  // column 0 is a sentinel.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(s + 1, 0.0), v(s + 1, 0.0);
  std::vector<std::size_t> match(s + 1, 0), way(s + 1, 0);
  for (std::size_t i = 1; i <= s; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(s + 1, inf);
    std::vector<char> used(s + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= s; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= s; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= s; ++j) {
    const std::size_t i = match[j] - 1;
    if (i < rows && j - 1 < cols) total += weight[i][j - 1];
  }
  return total;
}

double accuracy(std::span<const Label> pred, std::span<const Label> truth) {
  const ContingencyTable table(pred, truth);
  std::vector<std::vector<double>> w(table.rows(), std::vector<double>(table.cols()));
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) w[i][j] = double(table.at(i, j));
  }
  return max_weight_matching(w) / double(table.n());
}

bool same_partition(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<Label, Label> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [it1, new1] = ab.try_emplace(a[i], b[i]);
    const auto [it2, new2] = ba.try_emplace(b[i], a[i]);
    if (it1->second != b[i] || it2->second != a[i]) return false;
  }
  return true;
}

double ari(std::span<const Label> pred, std::span<const Label> truth) {
  const ContingencyTable table(pred, truth);
  if (table.n() < 2) return 1.0;
  double index = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) index += pairs(table.at(i, j));
  }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (const auto a : table.row_sums()) sum_rows += pairs(a);
  for (const auto b : table.col_sums()) sum_cols += pairs(b);
  const double expected = sum_rows * sum_cols / pairs(table.n());
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return same_partition(pred, truth) ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

double mutual_information(const ContingencyTable& table) {
  const double n = double(table.n());
  double mi = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double nij = double(table.at(i, j));
      if (nij == 0.0) continue;
      const double a = double(table.row_sums()[i]);
      const double b = double(table.col_sums()[j]);
      mi += nij / n * std::log(n * nij / (a * b));
    }
  }
  return mi;
}

double expected_mutual_information(const ContingencyTable& table) {
  const std::size_t n = table.n();
  const double nd = double(n);
  const double lg_n = std::lgamma(nd + 1.0);
  double emi = 0.0;
  for (const auto ai : table.row_sums()) {
    for (const auto bj : table.col_sums()) {
      const double a = double(ai);
      const double b = double(bj);
      const double fixed = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                           std::lgamma(nd - a + 1.0) + std::lgamma(nd - b + 1.0) - lg_n;
      const std::size_t lo = std::max<std::size_t>(1, ai + bj > n ? ai + bj - n : 0);
      const std::size_t hi = std::min(ai, bj);
      for (std::size_t k = lo; k <= hi; ++k) {
        const double nij = double(k);
        const double log_p = fixed - std::lgamma(nij + 1.0) - std::lgamma(a - nij + 1.0) -
                             std::lgamma(b - nij + 1.0) - std::lgamma(nd - a - b + nij + 1.0);
        emi += nij / nd * std::log(nd * nij / (a * b)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double ami(std::span<const Label> pred, std::span<const Label> truth) {
  const ContingencyTable table(pred, truth);
  if (same_partition(pred, truth)) return 1.0;
  const double n = double(table.n());
  const double mi = mutual_information(table);
  const double emi = expected_mutual_information(table);
  const double mean_h = 0.5 * (entropy(table.row_sums(), n) + entropy(table.col_sums(), n));
  const double denom = mean_h - emi;
  if (std::abs(denom) < 1e-15) return 0.0;
  return (mi - emi) / denom;
}

double fm(std::span<const Label> pred, std::span<const Label> truth) {
  const ContingencyTable table(pred, truth);
  double tp = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) tp += pairs(table.at(i, j));
  }
  double pred_pairs = 0.0, true_pairs = 0.0;
  for (const auto a : table.row_sums()) pred_pairs += pairs(a);
  for (const auto b : table.col_sums()) true_pairs += pairs(b);
  if (pred_pairs == 0.0 || true_pairs == 0.0) return 0.0;
  return tp / std::sqrt(pred_pairs * true_pairs);
}

ValidityScores evaluate(std::span<const Label> pred, std::span<const Label> truth) {
  return {accuracy(pred, truth), ari(pred, truth), ami(pred, truth), fm(pred, truth)};
}

}  // namespace mcdc
