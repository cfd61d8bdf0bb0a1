#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcdc/types.hpp"

namespace mcdc {

// Immutable integer-coded categorical data set.
//
// Codes in feature r are dense in [0, cardinality(r)) and index into
// vocabulary(r); kMissing marks a NULL cell. The optional ground-truth label
// column is stored apart from the feature values and is only read by
// evaluation code.
class Dataset {
 public:
  Dataset(CodeMatrix values, std::vector<std::vector<std::string>> vocabulary,
          std::vector<std::string> feature_names = {},
          std::optional<Labels> truth = std::nullopt,
          std::vector<std::string> truth_vocabulary = {});

  // Builds a data set straight from codes, with vocabularies "0".."m_r-1".
  static Dataset from_codes(CodeMatrix values, std::vector<std::size_t> cardinalities,
                            std::optional<Labels> truth = std::nullopt);

  std::size_t n() const { return values_.rows(); }
  std::size_t d() const { return values_.cols(); }

  const CodeMatrix& values() const { return values_; }
  std::span<const Code> row(std::size_t i) const { return values_.row(i); }
  Code at(std::size_t i, std::size_t r) const { return values_(i, r); }

  std::size_t cardinality(std::size_t r) const { return vocabulary_[r].size(); }
  const std::vector<std::size_t>& cardinalities() const { return cardinalities_; }
  const std::vector<std::string>& vocabulary(std::size_t r) const { return vocabulary_[r]; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  bool has_truth() const { return truth_.has_value(); }
  const std::optional<Labels>& truth() const { return truth_; }
  const std::vector<std::string>& truth_vocabulary() const { return truth_vocabulary_; }

  // Original category string of a cell; nullopt for NULL cells.
  std::optional<std::string> decode(std::size_t i, std::size_t r) const;

  bool has_missing() const;
  std::size_t count_missing_rows() const;

 private:
  CodeMatrix values_;
  std::vector<std::vector<std::string>> vocabulary_;
  std::vector<std::size_t> cardinalities_;
  std::vector<std::string> feature_names_;
  std::optional<Labels> truth_;
  std::vector<std::string> truth_vocabulary_;
};

struct CsvOptions {
  bool has_header = true;
  // Name of the ground-truth column to pull out of the features, if any.
  std::optional<std::string> label_column;
  std::string missing_token = "?";
};

// Reads a comma-separated file (RFC 4180 quoting) and interns every column
// into a first-appearance vocabulary.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Same as load_csv, from an in-memory buffer.
Dataset parse_csv(std::string_view text, const CsvOptions& options = {});

// Keeps only fully observed rows. Throws DataError if none remain.
Dataset drop_missing(const Dataset& ds);

struct SynthSpec {
  std::size_t n = 900;
  std::size_t d = 10;
  std::size_t k_true = 3;
  double purity = 0.9;
  std::size_t values_per_feature = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Object i belongs to latent cluster i mod k_true; each of its cells carries
// the cluster's signature code with probability `purity`, otherwise a code
// drawn uniformly from [0, values_per_feature).
std::pair<Dataset, Labels> generate_synthetic(const SynthSpec& spec);

}  // namespace mcdc
