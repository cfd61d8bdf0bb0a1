#include "mcdc/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mcdc/error.hpp"

namespace mcdc {

CodeMatrix::CodeMatrix(std::size_t rows, std::size_t cols, std::vector<Code> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DataError("code matrix: data size does not match rows x cols");
  }
}

CodeMatrix CodeMatrix::from_columns(std::span<const Labels> columns) {
  if (columns.empty()) return {};
  const std::size_t rows = columns.front().size();
  CodeMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw DataError("code matrix: columns have different lengths");
    }
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Dataset::Dataset(CodeMatrix values, std::vector<std::vector<std::string>> vocabulary,
                 std::vector<std::string> feature_names, std::optional<Labels> truth,
                 std::vector<std::string> truth_vocabulary)
    : values_(std::move(values)),
      vocabulary_(std::move(vocabulary)),
      feature_names_(std::move(feature_names)),
      truth_(std::move(truth)),
      truth_vocabulary_(std::move(truth_vocabulary)) {
  if (values_.rows() == 0) throw DataError("dataset must contain at least one object");
  if (values_.cols() == 0) throw DataError("dataset must contain at least one feature");
  if (vocabulary_.size() != values_.cols()) {
    throw DataError("dataset: one vocabulary per feature required");
  }
  if (feature_names_.empty()) {
    for (std::size_t r = 0; r < d(); ++r) feature_names_.push_back("f" + std::to_string(r));
  } else if (feature_names_.size() != d()) {
    throw DataError("dataset: one feature name per feature required");
  }
  cardinalities_.reserve(d());
  for (std::size_t r = 0; r < d(); ++r) {
    const auto& vocab = vocabulary_[r];
    if (vocab.empty()) {
      throw DataError("dataset: feature '" + feature_names_[r] + "' has an empty vocabulary");
    }
    std::unordered_set<std::string> seen(vocab.begin(), vocab.end());
    if (seen.size() != vocab.size()) {
      throw DataError("dataset: duplicate vocabulary entry in feature '" + feature_names_[r] + "'");
    }
    cardinalities_.push_back(vocab.size());
  }
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t r = 0; r < d(); ++r) {
      const Code c = values_(i, r);
      if (c != kMissing && c >= cardinalities_[r]) {
        throw DataError("dataset: code out of range at row " + std::to_string(i) +
                        ", feature " + std::to_string(r));
      }
    }
  }
  if (truth_ && truth_->size() != n()) {
    throw DataError("dataset: label column length differs from object count");
  }
}

Dataset Dataset::from_codes(CodeMatrix values, std::vector<std::size_t> cardinalities,
                            std::optional<Labels> truth) {
  std::vector<std::vector<std::string>> vocab(cardinalities.size());
  for (std::size_t r = 0; r < cardinalities.size(); ++r) {
    for (std::size_t t = 0; t < cardinalities[r]; ++t) vocab[r].push_back(std::to_string(t));
  }
  return Dataset(std::move(values), std::move(vocab), {}, std::move(truth));
}

std::optional<std::string> Dataset::decode(std::size_t i, std::size_t r) const {
  const Code c = values_(i, r);
  if (c == kMissing) return std::nullopt;
  return vocabulary_[r][c];
}

bool Dataset::has_missing() const {
  return std::find(values_.data().begin(), values_.data().end(), kMissing) !=
         values_.data().end();
}

std::size_t Dataset::count_missing_rows() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n(); ++i) {
    const auto row = values_.row(i);
    if (std::find(row.begin(), row.end(), kMissing) != row.end()) ++count;
  }
  return count;
}

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

// RFC 4180 record splitter. Unquoted fields are trimmed; quoted fields are
// kept verbatim.
class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {}

  // Returns false at end of input. Blank lines are skipped.
  bool next(std::vector<std::string>& fields) {
    while (pos_ < text_.size()) {
      fields.clear();
      ++record_;
      if (read_record(fields)) return true;
    }
    return false;
  }

  std::size_t record_number() const { return record_; }

 private:
  bool read_record(std::vector<std::string>& fields) {
    std::string field;
    bool quoted = false;
    bool any_content = false;
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '"' && trim(field).empty() && !quoted) {
        field.clear();
        ++pos_;
        read_quoted(field);
        quoted = true;
        any_content = true;
        continue;
      }
      if (ch == ',') {
        push(fields, field, quoted);
        any_content = true;
        ++pos_;
        continue;
      }
      if (ch == '\n' || ch == '\r') {
        ++pos_;
        if (ch == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        break;
      }
      if (quoted) {
        if (ch != ' ' && ch != '\t') {
          throw ParseError("csv: unexpected character after closing quote in record " +
                           std::to_string(record_));
        }
        ++pos_;
        continue;
      }
      field.push_back(ch);
      if (ch != ' ' && ch != '\t') any_content = true;
      ++pos_;
    }
    if (!any_content) return false;
    push(fields, field, quoted);
    return true;
  }

  void read_quoted(std::string& field) {
    while (true) {
      if (pos_ >= text_.size()) {
        throw ParseError("csv: unterminated quoted field in record " + std::to_string(record_));
      }
      const char ch = text_[pos_++];
      if (ch == '"') {
        if (pos_ < text_.size() && text_[pos_] == '"') {
          field.push_back('"');
          ++pos_;
        } else {
          return;
        }
      } else {
        field.push_back(ch);
      }
    }
  }

  static void push(std::vector<std::string>& fields, std::string& field, bool& quoted) {
    fields.emplace_back(quoted ? field : std::string(trim(field)));
    field.clear();
    quoted = false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t record_ = 0;
};

class Interner {
 public:
  Code intern(const std::string& value) {
    auto [it, inserted] = index_.try_emplace(value, static_cast<Code>(values_.size()));
    if (inserted) values_.push_back(value);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(values_); }

 private:
  std::unordered_map<std::string, Code> index_;
  std::vector<std::string> values_;
};

}  // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
  CsvReader reader(text);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError("csv: empty file");

  std::vector<std::string> header;
  std::size_t width = fields.size();
  bool pending_row = true;
  if (options.has_header) {
    header = fields;
    pending_row = false;
  } else {
    for (std::size_t j = 0; j < width; ++j) header.push_back("c" + std::to_string(j));
  }

  std::optional<std::size_t> label_index;
  if (options.label_column) {
    const auto it = std::find(header.begin(), header.end(), *options.label_column);
    if (it == header.end()) {
      throw ConfigError("csv: label column '" + *options.label_column + "' not found");
    }
    label_index = static_cast<std::size_t>(it - header.begin());
  }
  if (width < (label_index ? 2u : 1u)) throw ParseError("csv: no feature columns");

  const std::size_t d = width - (label_index ? 1 : 0);
  std::vector<Interner> interners(d);
  Interner label_interner;
  std::vector<Code> values;
  Labels truth;
  std::size_t rows = 0;
  const std::string_view missing = trim(options.missing_token);

  auto consume = [&](const std::vector<std::string>& row) {
    if (row.size() != width) {
      throw ParseError("csv: record " + std::to_string(reader.record_number()) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(width));
    }
    std::size_t r = 0;
    for (std::size_t j = 0; j < width; ++j) {
      if (label_index && j == *label_index) {
        truth.push_back(label_interner.intern(row[j]));
        continue;
      }
      values.push_back(trim(row[j]) == missing ? kMissing : interners[r].intern(row[j]));
      ++r;
    }
    ++rows;
  };

  if (pending_row) consume(fields);
  while (reader.next(fields)) consume(fields);
  if (rows == 0) throw ParseError("csv: no data rows");

  std::vector<std::vector<std::string>> vocab;
  std::vector<std::string> names;
  vocab.reserve(d);
  for (std::size_t j = 0, r = 0; j < width; ++j) {
    if (label_index && j == *label_index) continue;
    vocab.push_back(interners[r].take());
    // A column holding only missing tokens still needs a non-empty domain.
    if (vocab.back().empty()) vocab.back().push_back(std::string(missing));
    names.push_back(header[j]);
    ++r;
  }
  std::optional<Labels> labels;
  std::vector<std::string> label_vocab;
  if (label_index) {
    labels = std::move(truth);
    label_vocab = label_interner.take();
  }
  return Dataset(CodeMatrix(rows, d, std::move(values)), std::move(vocab), std::move(names),
                 std::move(labels), std::move(label_vocab));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("csv: cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

Dataset drop_missing(const Dataset& ds) {
  if (!ds.has_missing()) return ds;
  std::vector<Code> kept;
  Labels truth;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto row = ds.row(i);
    if (std::find(row.begin(), row.end(), kMissing) != row.end()) continue;
    kept.insert(kept.end(), row.begin(), row.end());
    if (ds.has_truth()) truth.push_back((*ds.truth())[i]);
    ++rows;
  }
  if (rows == 0) throw DataError("empty dataset after filtering");

  std::vector<std::vector<std::string>> vocab;
  for (std::size_t r = 0; r < ds.d(); ++r) vocab.push_back(ds.vocabulary(r));
  std::optional<Labels> labels;
  if (ds.has_truth()) labels = std::move(truth);
  return Dataset(CodeMatrix(rows, ds.d(), std::move(kept)), std::move(vocab), ds.feature_names(),
                 std::move(labels), ds.truth_vocabulary());
}

void SynthSpec::validate() const {
  if (n == 0 || d == 0) throw ConfigError("synthetic: n and d must be positive");
  if (k_true == 0) throw ConfigError("synthetic: k_true must be positive");
  if (values_per_feature == 0) throw ConfigError("synthetic: values_per_feature must be positive");
  if (k_true > values_per_feature) {
    throw ConfigError("synthetic: k_true must not exceed values_per_feature");
  }
  if (!(purity > 0.0 && purity <= 1.0)) throw ConfigError("synthetic: purity must be in (0, 1]");
}

std::pair<Dataset, Labels> generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution keep_signature(spec.purity);
  std::uniform_int_distribution<Code> noise(0, static_cast<Code>(spec.values_per_feature - 1));

  CodeMatrix values(spec.n, spec.d);
  Labels truth(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto cluster = static_cast<Code>(i % spec.k_true);
    truth[i] = cluster;
    for (std::size_t r = 0; r < spec.d; ++r) {
      values(i, r) = keep_signature(rng) ? cluster : noise(rng);
    }
  }
  std::vector<std::size_t> cards(spec.d, spec.values_per_feature);
  auto ds = Dataset::from_codes(std::move(values), std::move(cards), truth);
  return {std::move(ds), std::move(truth)};
}

}  // namespace mcdc
