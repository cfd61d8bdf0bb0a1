#include "mcdc/came.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "mcdc/error.hpp"

namespace mcdc {
namespace {

constexpr Label kNoCluster = std::numeric_limits<Label>::max();

// Indices of the first occurrence of every distinct row, in order of
// appearance.
std::vector<std::size_t> distinct_rows(const CodeMatrix& data) {
  auto hash = [&](std::size_t i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Code c : data.row(i)) h = (h ^ c) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    const auto ra = data.row(a);
    const auto rb = data.row(b);
    return std::equal(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::unordered_set<std::size_t, decltype(hash), decltype(equal)> seen(data.rows(), hash,
                                                                         equal);
  std::vector<std::size_t> firsts;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (seen.insert(i).second) firsts.push_back(i);
  }
  return firsts;
}

std::vector<Code> column_cardinalities(const CodeMatrix& data) {
  std::vector<Code> card(data.cols(), 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (row[r] != kMissing) card[r] = std::max<Code>(card[r], row[r] + 1);
    }
  }
  return card;
}

// weighted_distance without the length checks, for the hot loops.
double distance(std::span<const Code> row, std::span<const Code> mode,
                const std::vector<double>& theta) {
  double d = 0.0;
  for (std::size_t r = 0; r < row.size(); ++r) {
    if (row[r] != mode[r]) d += theta[r];
  }
  return d;
}

std::vector<double> uniform(std::size_t sigma) {
  return std::vector<double>(sigma, sigma == 0 ? 0.0 : 1.0 / static_cast<double>(sigma));
}

std::size_t mismatches(std::span<const Code> a, std::span<const Code> b) {
  std::size_t m = 0;
  for (std::size_t r = 0; r < a.size(); ++r) m += a[r] != b[r];
  return m;
}

// Moves the chosen rows to the front of candidates. Rows are distinct, so
// every unchosen row stays at distance >= 1 and no row is picked twice.
void farthest_first(const CodeMatrix& data, std::vector<std::size_t>& candidates, std::size_t k,
                    std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> first(0, candidates.size() - 1);
  std::swap(candidates[0], candidates[first(rng)]);
  std::vector<std::size_t> nearest(candidates.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> ties;
  for (std::size_t j = 1; j < k; ++j) {
    const auto last = data.row(candidates[j - 1]);
    std::size_t best = 0;
    ties.clear();
    for (std::size_t c = j; c < candidates.size(); ++c) {
      nearest[c] = std::min(nearest[c], mismatches(data.row(candidates[c]), last));
      if (nearest[c] > best) {
        best = nearest[c];
        ties.clear();
      }
      if (nearest[c] == best) ties.push_back(c);
    }
    std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
    const auto chosen = ties[pick(rng)];
    std::swap(candidates[j], candidates[chosen]);
    std::swap(nearest[j], nearest[chosen]);
  }
}

}  // namespace

double weighted_distance(std::span<const Code> row, std::span<const Code> mode,
                         std::span<const double> theta) {
  if (row.size() != mode.size() || row.size() != theta.size()) {
    throw DataError("weighted distance: length mismatch");
  }
  double d = 0.0;
  for (std::size_t r = 0; r < row.size(); ++r) {
    if (row[r] != mode[r]) d += theta[r];
  }
  return d;
}

CameState::CameState(const CodeMatrix& data, std::size_t k, std::mt19937_64& rng,
                     bool uniform_seeding)
    : data_(data),
      theta_(uniform(data.cols())),
      labels_(data.rows(), kNoCluster),
      match_mass_(data.cols(), 0.0),
      column_card_(column_cardinalities(data)) {
  if (k < 1 || k > data.rows()) throw ConfigError("came: need 1 <= k <= n");
  auto candidates = distinct_rows(data);
  if (candidates.size() < k) {
    throw DataError("insufficient distinct objects: " + std::to_string(candidates.size()) +
                    " distinct rows for k = " + std::to_string(k));
  }
  if (uniform_seeding) {
    // partial Fisher-Yates
    for (std::size_t j = 0; j < k; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, candidates.size() - 1);
      std::swap(candidates[j], candidates[pick(rng)]);
    }
  } else {
    farthest_first(data, candidates, k, rng);
  }
  modes_ = CodeMatrix(k, data.cols());
  for (std::size_t l = 0; l < k; ++l) {
    const auto src = data.row(candidates[l]);
    std::copy(src.begin(), src.end(), modes_.row(l).begin());
  }
}

CameState::CameState(const CodeMatrix& data, CodeMatrix modes)
    : data_(data),
      modes_(std::move(modes)),
      theta_(uniform(data.cols())),
      labels_(data.rows(), kNoCluster),
      match_mass_(data.cols(), 0.0),
      column_card_(column_cardinalities(data)) {
  if (modes_.rows() == 0 || modes_.cols() != data.cols()) {
    throw DataError("came: modes must be a non-empty k x sigma matrix");
  }
}

void CameState::set_theta(std::vector<double> theta) {
  if (theta.size() != data_.cols()) throw DataError("came: theta length mismatch");
  theta_ = std::move(theta);
}

void CameState::set_labels(Labels labels) {
  if (labels.size() != data_.rows()) throw DataError("came: label length mismatch");
  for (const auto l : labels) {
    if (l >= k()) throw DataError("came: label out of range");
  }
  labels_ = std::move(labels);
}

bool CameState::assign_objects() {
  bool changed = false;
  const std::size_t k = modes_.rows();
  for (std::size_t i = 0; i < data_.rows(); ++i) {
    const auto row = data_.row(i);
    Label best = 0;
    double best_distance = distance(row, modes_.row(0), theta_);
    for (std::size_t l = 1; l < k; ++l) {
      const double dist = distance(row, modes_.row(l), theta_);
      if (dist < best_distance) {
        best_distance = dist;
        best = static_cast<Label>(l);
      }
    }
    if (labels_[i] != best) {
      labels_[i] = best;
      changed = true;
    }
  }
  return changed;
}

void CameState::update_modes() {
  const std::size_t k = modes_.rows();
  const std::size_t sigma = data_.cols();
  const std::size_t n = data_.rows();

  std::vector<std::size_t> sizes(k, 0);
  for (const auto l : labels_) {
    if (l != kNoCluster) ++sizes[l];
  }

  // Re-seed empty clusters with the worst-fitting object of a cluster that
  // can spare one.
  for (std::size_t l = 0; l < k; ++l) {
    if (sizes[l] != 0) continue;
    std::size_t worst = n;
    double worst_distance = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto from = labels_[i];
      if (from == kNoCluster || sizes[from] < 2) continue;
      const double dist = weighted_distance(data_.row(i), modes_.row(from), theta_);
      if (dist > worst_distance) {
        worst_distance = dist;
        worst = i;
      }
    }
    if (worst == n) continue;
    --sizes[labels_[worst]];
    labels_[worst] = static_cast<Label>(l);
    ++sizes[l];
  }

  // Column-wise majority; slot `card` of each column counts NULL cells, which
  // therefore lose every tie.
  for (std::size_t r = 0; r < sigma; ++r) {
    const Code card = column_card_[r];
    const std::size_t slots = std::size_t{card} + 1;
    std::vector<std::size_t> counts(k * slots, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = labels_[i];
      if (l == kNoCluster) continue;
      const Code c = data_(i, r);
      ++counts[l * slots + (c == kMissing ? card : c)];
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (sizes[l] == 0) continue;
      const auto first = counts.begin() + static_cast<std::ptrdiff_t>(l * slots);
      const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(slots));
      const auto slot = static_cast<Code>(best - first);
      modes_(l, r) = slot == card ? kMissing : slot;
    }
  }
}

void CameState::update_theta() {
  std::fill(match_mass_.begin(), match_mass_.end(), 0.0);
  for (std::size_t i = 0; i < data_.rows(); ++i) {
    const auto l = labels_[i];
    if (l == kNoCluster) continue;
    const auto row = data_.row(i);
    const auto mode = modes_.row(l);
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (row[r] == mode[r]) match_mass_[r] += 1.0;
    }
  }
  const double total = std::accumulate(match_mass_.begin(), match_mass_.end(), 0.0);
  if (!(total > 0.0)) {
    theta_ = uniform(data_.cols());
    return;
  }
  for (std::size_t r = 0; r < theta_.size(); ++r) theta_[r] = match_mass_[r] / total;
}

double CameState::objective() const {
  double p = 0.0;
  for (std::size_t i = 0; i < data_.rows(); ++i) {
    if (labels_[i] == kNoCluster) continue;
    p += distance(data_.row(i), modes_.row(labels_[i]), theta_);
  }
  return p;
}

CameResult run_came(const CodeMatrix& data, std::size_t k, std::uint64_t seed,
                    const CameOptions& options) {
  if (k < 1 || k > data.rows()) throw ConfigError("came: need 1 <= k <= n");
  if (options.max_iterations == 0) throw ConfigError("came: max_iterations must be positive");
  std::mt19937_64 rng(seed);
  CameState state(data, k, rng, options.uniform_seeding);

  CameResult result;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const bool changed = state.assign_objects();
    result.iterations = it;
    if (!changed) {
      result.converged = true;
      break;
    }
    if (options.update_modes) state.update_modes();
    if (options.weighting) state.update_theta();
  }
  result.labels = state.labels();
  result.theta = state.theta();
  result.modes = state.modes();
  result.objective = state.objective();
  return result;
}

}  // namespace mcdc
