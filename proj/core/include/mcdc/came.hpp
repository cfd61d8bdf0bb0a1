#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mcdc/types.hpp"

namespace mcdc {

// sum_r theta_r * [row_r != mode_r]. Throws DataError on length mismatch.
double weighted_distance(std::span<const Code> row, std::span<const Code> mode,
                         std::span<const double> theta);

struct CameOptions {
  std::size_t max_iterations = 100;
  // Learn per-column importance; off keeps theta uniform (plain k-modes).
  bool weighting = true;
  // Recompute cluster modes every iteration; off freezes them at the seeds.
  bool update_modes = true;
  // Draw the k seed rows uniformly instead of farthest-first.
  bool uniform_seeding = false;
};

// Weighted k-modes state over an n x sigma code matrix.
class CameState {
 public:
  // Uniform theta, modes taken from k distinct rows chosen with rng: a random
  // first row, then repeatedly a row farthest (plain Hamming) from those
  // already chosen, ties drawn at random. uniform_seeding draws all k rows
  // uniformly instead. Throws DataError if the matrix has fewer than k
  // distinct rows.
  CameState(const CodeMatrix& data, std::size_t k, std::mt19937_64& rng,
            bool uniform_seeding = false);
  // Explicit modes (k x sigma) and uniform theta; every object unassigned.
  CameState(const CodeMatrix& data, CodeMatrix modes);

  // Assigns every object to its nearest mode (ties to the lowest id).
  // Returns true if any assignment changed.
  bool assign_objects();
  // Per-cluster column majorities (ties to the smallest code). An empty
  // cluster takes over the object farthest from its own mode.
  void update_modes();
  // theta_r proportional to the number of objects matching their mode in
  // column r; uniform if nothing matches.
  void update_theta();
  // sum_i weighted_distance(x_i, Z_{q(i)}, theta).
  double objective() const;

  std::size_t k() const { return modes_.rows(); }
  const CodeMatrix& data() const { return data_; }
  const CodeMatrix& modes() const { return modes_; }
  const std::vector<double>& theta() const { return theta_; }
  const Labels& labels() const { return labels_; }
  const std::vector<double>& match_mass() const { return match_mass_; }

  void set_theta(std::vector<double> theta);
  void set_labels(Labels labels);

 private:
  const CodeMatrix& data_;
  CodeMatrix modes_;
  std::vector<double> theta_;
  Labels labels_;
  std::vector<double> match_mass_;
  std::vector<Code> column_card_;  // 1 + largest non-NULL code per column
};

struct CameResult {
  Labels labels;
  std::vector<double> theta;
  CodeMatrix modes;
  std::size_t iterations = 0;
  bool converged = false;
  double objective = 0.0;
};

// Alternates assignment, mode update and (optionally) theta update until the
// partition stops changing or max_iterations is reached. Deterministic in
// seed. Throws ConfigError unless 1 <= k <= n and DataError when the data has
// fewer than k distinct rows.
CameResult run_came(const CodeMatrix& data, std::size_t k, std::uint64_t seed,
                    const CameOptions& options = {});

}  // namespace mcdc
