// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "interp_cert/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "interp_cert/errors.h"
#include "interp_cert/random.h"

namespace interp_cert {

LabeledDataset::LabeledDataset(Eigen::MatrixXd features,
                               Eigen::VectorXd targets,
                               std::vector<std::string> feature_names,
                               nlohmann::json provenance)
    : features_(std::move(features)),
      targets_(std::move(targets)),
      feature_names_(std::move(feature_names)),
      provenance_(std::move(provenance)) {
  if (features_.rows() < 1) {
    throw InvalidDatasetError("dataset needs at least one row");
  }
  if (targets_.size() != features_.rows()) {
    throw InvalidDatasetError("targets length differs from row count");
  }
  if (!feature_names_.empty() &&
      static_cast<Eigen::Index>(feature_names_.size()) != features_.cols()) {
    throw InvalidDatasetError("feature_names length differs from column count");
  }
  if (!features_.allFinite() || !targets_.allFinite()) {
    throw InvalidDatasetError("dataset contains non-finite values");
  }
}

LabeledDataset LabeledDataset::Subset(std::span<const int> indices) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(indices.size()), cols());
  Eigen::VectorXd y(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const int i = indices[k];
    if (i < 0 || i >= rows()) {
      throw std::out_of_range("row index " + std::to_string(i) +
                              " out of range");
    }
    x.row(static_cast<Eigen::Index>(k)) = features_.row(i);
    y(static_cast<Eigen::Index>(k)) = targets_(i);
  }
  return LabeledDataset(std::move(x), std::move(y), feature_names_,
                        provenance_);
}

std::vector<int> LabeledDataset::ClassLabels() const {
  std::set<int> labels;
  for (Eigen::Index i = 0; i < targets_.size(); ++i) {
    labels.insert(static_cast<int>(std::lround(targets_(i))));
  }
  return {labels.begin(), labels.end()};
}

std::vector<int> LabeledDataset::RowsWithLabel(int label) const {
  std::vector<int> out;
  for (int i = 0; i < rows(); ++i) {
    if (targets_(i) == static_cast<double>(label)) out.push_back(i);
  }
  return out;
}

bool LabeledDataset::operator==(const LabeledDataset& other) const {
  return features_.rows() == other.features_.rows() &&
         features_.cols() == other.features_.cols() &&
         features_ == other.features_ && targets_ == other.targets_ &&
         feature_names_ == other.feature_names_ &&
         provenance_ == other.provenance_;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRecord> TokenizeCsv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    CsvRecord record;
    record.line = line;
    std::string field;
    bool done = false;
    while (!done) {
      if (pos < text.size() && text[pos] == '"') {
        // Quoted field.
        const std::size_t quote_line = line;
        ++pos;
        bool closed = false;
        while (pos < text.size()) {
          const char c = text[pos];
          if (c == '"') {
            if (pos + 1 < text.size() && text[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++pos;
        }
        if (!closed) {
          throw ParseError(quote_line, record.fields.size() + 1,
                           "unterminated quoted field");
        }
        if (pos < text.size() && text[pos] == '\r') ++pos;
        if (pos < text.size() && text[pos] != ',' && text[pos] != '\n') {
          throw ParseError(line, record.fields.size() + 1,
                           "unexpected character after closing quote");
        }
      } else {
        while (pos < text.size() && text[pos] != ',' && text[pos] != '\n') {
          if (text[pos] != '\r') field.push_back(text[pos]);
          ++pos;
        }
      }
      record.fields.push_back(std::move(field));
      field.clear();
      if (pos >= text.size()) {
        done = true;
      } else if (text[pos] == ',') {
        ++pos;
      } else {  // newline
        ++pos;
        ++line;
        done = true;
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double ParseNumber(std::string_view raw, std::size_t line, std::size_t column) {
  std::string_view s = Trim(raw);
  if (s.empty()) throw ParseError(line, column, "empty numeric value");
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(line, column,
                     "cannot parse '" + std::string(raw) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, column, "non-finite value '" + std::string(raw) + "'");
  }
  return value;
}

bool IsBlank(const CsvRecord& r) {
  return r.fields.size() == 1 && Trim(r.fields[0]).empty();
}

}  // namespace

LabeledDataset ParseCsv(std::string_view text, const CsvSchema& schema,
                        const std::string& source) {
  std::vector<CsvRecord> records = TokenizeCsv(text);
  if (records.empty() || IsBlank(records.front())) {
    throw ParseError(1, 1, "missing header row");
  }
  const std::vector<std::string>& header = records.front().fields;
  auto find_column = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (Trim(header[i]) == name) return static_cast<int>(i);
    }
    throw MissingColumnError("column '" + name + "' not found in " + source);
  };

  const int target = find_column(schema.target_column);
  std::vector<int> feature_cols;
  std::vector<std::string> names;
  if (schema.feature_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (static_cast<int>(i) == target) continue;
      feature_cols.push_back(static_cast<int>(i));
      names.emplace_back(Trim(header[i]));
    }
  } else {
    for (const std::string& name : schema.feature_columns) {
      feature_cols.push_back(find_column(name));
      names.push_back(name);
    }
  }

  std::vector<const CsvRecord*> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (!IsBlank(records[r])) rows.push_back(&records[r]);
  }
  if (rows.empty()) throw InvalidDatasetError(source + " has no data rows");

  // (column, feature slot) in column order; slot -1 is the target.
  std::vector<std::pair<int, Eigen::Index>> used = {{target, -1}};
  for (std::size_t f = 0; f < feature_cols.size(); ++f) {
    used.emplace_back(feature_cols[f], static_cast<Eigen::Index>(f));
  }
  std::sort(used.begin(), used.end());

  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(feature_cols.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const CsvRecord& rec = *rows[r];
    if (rec.fields.size() != header.size()) {
      const std::size_t column = std::min(rec.fields.size(), header.size()) + 1;
      throw ParseError(rec.line, column,
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(rec.fields.size()));
    }
    // Used columns parse left to right so the first bad cell is reported.
    const auto ri = static_cast<Eigen::Index>(r);
    for (const auto& [c, slot] : used) {
      const double v = ParseNumber(rec.fields[c], rec.line, c + 1);
      if (slot < 0) {
        y(ri) = v;
      } else {
        x(ri, slot) = v;
      }
    }
  }
  return LabeledDataset(std::move(x), std::move(y), std::move(names),
                        {{"format", "csv"},
                         {"source", source},
                         {"target", schema.target_column}});
}

LabeledDataset LoadCsv(const std::filesystem::path& path,
                       const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), schema, path.string());
}

// ---------------------------------------------------------------------------
// IDX

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t ReadBigEndian(std::span<const std::uint8_t> bytes,
                            std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) |
         (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) |
         std::uint32_t{bytes[offset + 3]};
}

void WriteBigEndian(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const std::filesystem::path& path,
               const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

LabeledDataset ParseIdx(std::span<const std::uint8_t> images,
                        std::span<const std::uint8_t> labels) {
  if (images.size() < 4 || labels.size() < 4) {
    throw TruncatedFileError("IDX file shorter than its magic number");
  }
  if (ReadBigEndian(images, 0) != kImageMagic) {
    throw MagicMismatchError("image file magic is not 0x00000803");
  }
  if (ReadBigEndian(labels, 0) != kLabelMagic) {
    throw MagicMismatchError("label file magic is not 0x00000801");
  }
  if (images.size() < 16) throw TruncatedFileError("image header truncated");
  if (labels.size() < 8) throw TruncatedFileError("label header truncated");
  const std::uint32_t n = ReadBigEndian(images, 4);
  const std::uint32_t image_rows = ReadBigEndian(images, 8);
  const std::uint32_t image_cols = ReadBigEndian(images, 12);
  const std::uint32_t n_labels = ReadBigEndian(labels, 4);
  if (n != n_labels) {
    throw CountMismatchError(std::to_string(n) + " images but " +
                             std::to_string(n_labels) + " labels");
  }
  const std::size_t d = std::size_t{image_rows} * image_cols;
  if (images.size() < 16 + std::size_t{n} * d) {
    throw TruncatedFileError("image file shorter than its header promises");
  }
  if (labels.size() < 8 + std::size_t{n}) {
    throw TruncatedFileError("label file shorter than its header promises");
  }

  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(d));
  Eigen::VectorXd y(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint8_t* row = images.data() + 16 + std::size_t{i} * d;
    for (std::size_t j = 0; j < d; ++j) {
      x(i, static_cast<Eigen::Index>(j)) = row[j] / 255.0;
    }
    y(i) = labels[8 + i];
  }
  return LabeledDataset(std::move(x), std::move(y), {},
                        {{"format", "idx"},
                         {"image_rows", image_rows},
                         {"image_cols", image_cols}});
}

LabeledDataset LoadIdx(const std::filesystem::path& images,
                       const std::filesystem::path& labels) {
  const std::vector<std::uint8_t> image_bytes = ReadFile(images);
  const std::vector<std::uint8_t> label_bytes = ReadFile(labels);
  LabeledDataset data = ParseIdx(image_bytes, label_bytes);
  nlohmann::json prov = data.provenance();
  prov["images"] = images.string();
  prov["labels"] = labels.string();
  return LabeledDataset(data.features(), data.targets(), {}, std::move(prov));
}

std::vector<std::uint8_t> SerializeIdxImages(const LabeledDataset& data) {
  std::uint32_t image_rows = 1;
  auto image_cols = static_cast<std::uint32_t>(data.cols());
  const nlohmann::json& prov = data.provenance();
  if (prov.contains("image_rows") && prov.contains("image_cols")) {
    image_rows = prov["image_rows"].get<std::uint32_t>();
    image_cols = prov["image_cols"].get<std::uint32_t>();
    if (std::size_t{image_rows} * image_cols !=
        static_cast<std::size_t>(data.cols())) {
      throw DimensionMismatchError("image shape does not match column count");
    }
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + static_cast<std::size_t>(data.rows()) * data.cols());
  WriteBigEndian(out, kImageMagic);
  WriteBigEndian(out, static_cast<std::uint32_t>(data.rows()));
  WriteBigEndian(out, image_rows);
  WriteBigEndian(out, image_cols);
  for (int i = 0; i < data.rows(); ++i) {
    for (int j = 0; j < data.cols(); ++j) {
      const double v = std::clamp(data.features()(i, j) * 255.0, 0.0, 255.0);
      out.push_back(static_cast<std::uint8_t>(std::lround(v)));
    }
  }
  return out;
}

std::vector<std::uint8_t> SerializeIdxLabels(const LabeledDataset& data) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + static_cast<std::size_t>(data.rows()));
  WriteBigEndian(out, kLabelMagic);
  WriteBigEndian(out, static_cast<std::uint32_t>(data.rows()));
  for (int i = 0; i < data.rows(); ++i) {
    out.push_back(static_cast<std::uint8_t>(
        std::clamp(std::lround(data.targets()(i)), 0L, 255L)));
  }
  return out;
}

void SaveIdx(const LabeledDataset& data, const std::filesystem::path& images,
             const std::filesystem::path& labels) {
  WriteFile(images, SerializeIdxImages(data));
  WriteFile(labels, SerializeIdxLabels(data));
}

// ---------------------------------------------------------------------------
// Splits

namespace {

std::vector<int> Permutation(int n, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<int>(order));
  return order;
}

std::vector<std::vector<int>> Slice(const std::vector<int>& order,
                                    std::span<const int> bounds) {
  std::vector<std::vector<int>> parts;
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    if (bounds[p + 1] <= bounds[p]) {
      throw EmptyPartError("split part " + std::to_string(p) + " is empty");
    }
    parts.emplace_back(order.begin() + bounds[p], order.begin() + bounds[p + 1]);
  }
  return parts;
}

std::vector<LabeledDataset> Materialize(
    const LabeledDataset& data, const std::vector<std::vector<int>>& parts) {
  std::vector<LabeledDataset> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(data.Subset(p));
  return out;
}

}  // namespace

std::vector<std::vector<int>> SplitIndices(int n,
                                           std::span<const double> fractions,
                                           std::uint64_t seed) {
  if (fractions.empty()) throw std::invalid_argument("no split fractions");
  double total = 0.0;
  for (const double f : fractions) {
    if (!(f >= 0.0)) throw std::invalid_argument("negative split fraction");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
  std::vector<int> bounds{0};
  double cumulative = 0.0;
  for (std::size_t p = 0; p < fractions.size(); ++p) {
    cumulative += fractions[p];
    bounds.push_back(p + 1 == fractions.size()
                         ? n
                         : static_cast<int>(std::lround(n * cumulative)));
  }
  return Slice(Permutation(n, seed), bounds);
}

std::vector<std::vector<int>> SplitIndicesBySize(int n,
                                                 std::span<const int> sizes,
                                                 std::uint64_t seed) {
  std::vector<int> bounds{0};
  for (const int s : sizes) {
    if (s < 1) throw EmptyPartError("split part sizes must be positive");
    bounds.push_back(bounds.back() + s);
  }
  if (bounds.back() > n) {
    throw std::invalid_argument("split sizes exceed the row count");
  }
  return Slice(Permutation(n, seed), bounds);
}

std::vector<std::vector<int>> FoldIndices(int n, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("fold count must be >= 1");
  std::vector<int> bounds;
  for (int f = 0; f <= k; ++f) {
    bounds.push_back(static_cast<int>(
        std::lround(static_cast<double>(n) * f / static_cast<double>(k))));
  }
  return Slice(Permutation(n, seed), bounds);
}

std::vector<LabeledDataset> Split(const LabeledDataset& data,
                                  std::span<const double> fractions,
                                  std::uint64_t seed) {
  return Materialize(data, SplitIndices(data.rows(), fractions, seed));
}

std::vector<LabeledDataset> Folds(const LabeledDataset& data, int k,
                                  std::uint64_t seed) {
  return Materialize(data, FoldIndices(data.rows(), k, seed));
}

// ---------------------------------------------------------------------------
// Finite domains

void FiniteDomainSpec::Validate() const {
  const Eigen::Index k = points.rows();
  if (k < 1) throw std::invalid_argument("finite domain has no points");
  if (probabilities.size() != k || label_probabilities.rows() != k) {
    throw std::invalid_argument("finite domain shapes disagree");
  }
  if (label_probabilities.cols() < 1) {
    throw std::invalid_argument("finite domain has no labels");
  }
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!in_unit(probabilities(i))) {
      throw std::invalid_argument("p(x) outside [0, 1]");
    }
    for (Eigen::Index c = 0; c < label_probabilities.cols(); ++c) {
      if (!in_unit(label_probabilities(i, c))) {
        throw std::invalid_argument("p(y|x) outside [0, 1]");
      }
    }
    if (std::abs(label_probabilities.row(i).sum() - 1.0) > 1e-9) {
      throw std::invalid_argument("p(y|x) row does not sum to 1");
    }
  }
  if (std::abs(probabilities.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("p(x) does not sum to 1");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("finite domain points must be finite");
  }
}

namespace {

int DrawCategorical(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it != cdf.end()) return static_cast<int>(it - cdf.begin());
  // u landed above a total that rounded below 1: take the last positive mass.
  int last = static_cast<int>(cdf.size()) - 1;
  while (last > 0 && cdf[last] == cdf[last - 1]) --last;
  return last;
}

std::vector<double> Cumulative(const Eigen::VectorXd& p) {
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  return cdf;
}

}  // namespace

LabeledDataset SampleFiniteDomain(const FiniteDomainSpec& spec, int n) {
  return SampleFiniteDomain(spec, n, spec.seed);
}

LabeledDataset SampleFiniteDomain(const FiniteDomainSpec& spec, int n,
                                  std::uint64_t seed) {
  spec.Validate();
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  const std::vector<double> point_cdf = Cumulative(spec.probabilities);
  std::vector<std::vector<double>> label_cdfs;
  for (int i = 0; i < spec.domain_size(); ++i) {
    label_cdfs.push_back(Cumulative(spec.label_probabilities.row(i).transpose()));
  }

  Rng rng(seed);
  Eigen::MatrixXd x(n, spec.points.cols());
  Eigen::VectorXd y(n);
  std::vector<int> domain_index(n);
  for (int r = 0; r < n; ++r) {
    const int k = DrawCategorical(point_cdf, rng.Uniform());
    const int label = DrawCategorical(label_cdfs[k], rng.Uniform());
    x.row(r) = spec.points.row(k);
    y(r) = label;
    domain_index[r] = k;
  }
  return LabeledDataset(std::move(x), std::move(y), {},
                        {{"format", "finite_domain"},
                         {"seed", seed},
                         {"domain_index", domain_index}});
}

ErrorEstimate ExactExpectedError(const FiniteDomainSpec& spec,
                                 const Predictor& predict,
                                 const LossFunction& loss) {
  spec.Validate();
  double numerator = 0.0;
  double mean_actual = 0.0;
  for (int i = 0; i < spec.domain_size(); ++i) {
    const double px = spec.probabilities(i);
    if (px == 0.0) continue;
    const double prediction = predict(spec.points.row(i).transpose());
    for (int c = 0; c < spec.num_labels(); ++c) {
      const double w = px * spec.label_probabilities(i, c);
      const double y = c;
      switch (loss.kind) {
        case LossKind::kZeroOne:
          numerator += w * (prediction != y ? 1.0 : 0.0);
          break;
        case LossKind::kSquaredError:
          numerator += w * (prediction - y) * (prediction - y);
          break;
        case LossKind::kMapePercent:
          numerator += w * std::abs(prediction - y);
          mean_actual += w * y;
          break;
        case LossKind::kFeatureRecallComplement:
          throw IncompatibleLossError(
              "feature recall does not depend on the distribution");
      }
    }
  }
  double value = numerator;
  if (loss.kind == LossKind::kMapePercent) {
    if (!(mean_actual > 0.0)) {
      throw InvalidTargetError("MAPE needs a positive mean actual value");
    }
    value = 100.0 * numerator / mean_actual;
  }
  return ErrorEstimate(value, spec.domain_size(), loss.id());
}

nlohmann::json ToJson(const FiniteDomainSpec& spec) {
  nlohmann::json points = nlohmann::json::array();
  nlohmann::json conditionals = nlohmann::json::array();
  std::vector<double> marginal;
  for (int i = 0; i < spec.domain_size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < spec.points.cols(); ++j) {
      row.push_back(spec.points(i, j));
    }
    points.push_back(row);
    nlohmann::json cond = nlohmann::json::array();
    for (int c = 0; c < spec.num_labels(); ++c) {
      cond.push_back(spec.label_probabilities(i, c));
    }
    conditionals.push_back(cond);
    marginal.push_back(spec.probabilities(i));
  }
  return {{"points", points},
          {"probabilities", marginal},
          {"label_probabilities", conditionals},
          {"seed", spec.seed}};
}

FiniteDomainSpec FiniteDomainSpecFromJson(const nlohmann::json& j) {
  const auto& points = j.at("points");
  const auto& marginal = j.at("probabilities");
  const auto& conditionals = j.at("label_probabilities");
  const auto k = static_cast<Eigen::Index>(points.size());
  if (k == 0) throw std::invalid_argument("finite domain has no points");
  const auto d = static_cast<Eigen::Index>(points.at(0).size());
  const auto c = static_cast<Eigen::Index>(conditionals.at(0).size());
  FiniteDomainSpec spec;
  spec.points.resize(k, d);
  spec.probabilities.resize(k);
  spec.label_probabilities.resize(k, c);
  if (static_cast<Eigen::Index>(marginal.size()) != k ||
      static_cast<Eigen::Index>(conditionals.size()) != k) {
    throw std::invalid_argument("finite domain shapes disagree");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (static_cast<Eigen::Index>(points.at(i).size()) != d ||
        static_cast<Eigen::Index>(conditionals.at(i).size()) != c) {
      throw std::invalid_argument("ragged finite domain rows");
    }
    for (Eigen::Index a = 0; a < d; ++a) spec.points(i, a) = points[i][a].get<double>();
    for (Eigen::Index a = 0; a < c; ++a) {
      spec.label_probabilities(i, a) = conditionals[i][a].get<double>();
    }
    spec.probabilities(i) = marginal[i].get<double>();
  }
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.Validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Synthetic linear

LabeledDataset SynthLinear(const SyntheticLinearSpec& spec) {
  if (spec.d < 1 || spec.n < 1) {
    throw std::invalid_argument("synthetic spec needs d >= 1 and n >= 1");
  }
  if (static_cast<int>(spec.relevant.size()) > spec.d) {
    throw std::invalid_argument("more relevant features than dimensions");
  }
  for (const int f : spec.relevant) {
    if (f < 0 || f >= spec.d) {
      throw std::invalid_argument("relevant feature out of range");
    }
  }
  if (!spec.coefficients.empty() &&
      spec.coefficients.size() != spec.relevant.size()) {
    throw std::invalid_argument("one coefficient per relevant feature");
  }
  if (!(spec.noise >= 0.0)) throw std::invalid_argument("noise must be >= 0");

  Rng rng(spec.seed);
  Eigen::MatrixXd x(spec.n, spec.d);
  Eigen::VectorXd y(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.d; ++j) x(i, j) = rng.Normal();
    double target = 0.0;
    for (std::size_t r = 0; r < spec.relevant.size(); ++r) {
      const double c = spec.coefficients.empty() ? 1.0 : spec.coefficients[r];
      target += c * x(i, spec.relevant[r]);
    }
    y(i) = target + spec.noise * rng.Normal();
  }
  std::vector<int> truth = spec.relevant;
  std::sort(truth.begin(), truth.end());
  return LabeledDataset(std::move(x), std::move(y), {},
                        {{"format", "synthetic_linear"},
                         {"seed", spec.seed},
                         {"truth", truth}});
}

nlohmann::json ToJson(const SyntheticLinearSpec& spec) {
  return {{"d", spec.d},         {"relevant", spec.relevant},
          {"coefficients", spec.coefficients},
          {"noise", spec.noise}, {"n", spec.n},
          {"seed", spec.seed}};
}

SyntheticLinearSpec SyntheticLinearSpecFromJson(const nlohmann::json& j) {
  SyntheticLinearSpec spec;
  spec.d = j.at("d").get<int>();
  spec.relevant = j.value("relevant", std::vector<int>{});
  spec.coefficients = j.value("coefficients", std::vector<double>{});
  spec.noise = j.value("noise", 0.0);
  spec.n = j.at("n").get<int>();
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

}  // namespace interp_cert
