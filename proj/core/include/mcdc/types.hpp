#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mcdc {

// Dense 0-based category code within one feature's vocabulary.
using Code = std::uint32_t;

// Reserved code for a NULL cell.
inline constexpr Code kMissing = std::numeric_limits<Code>::max();

// Cluster or class id.
using Label = std::uint32_t;
using Labels = std::vector<Label>;

// Row-major table of codes. Used both for raw categorical data and for the
// n x sigma matrix of multi-granular labels.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(std::size_t rows, std::size_t cols, Code fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CodeMatrix(std::size_t rows, std::size_t cols, std::vector<Code> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const Code> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<Code> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  Code operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Code& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<Code>& data() const { return data_; }

  // Builds an n x columns.size() matrix whose j-th column is columns[j].
  static CodeMatrix from_columns(std::span<const Labels> columns);

  friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Code> data_;
};

}  // namespace mcdc
