#ifndef ADAERM_DATA_HPP
#define ADAERM_DATA_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaerm {

struct Feature {
  std::uint32_t index;  // 0-based column
  double value;

  bool operator==(const Feature&) const = default;
};

using SparseRow = std::vector<Feature>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " at line " + std::to_string(line)),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Labeled sparse design matrix. Immutable after construction; rows keep
/// their features sorted by strictly increasing index and labels are
/// exactly -1.0 or +1.0.
class SparseDataset {
 public:
  SparseDataset(std::vector<SparseRow> rows, std::vector<double> labels,
                std::size_t n_features);

  std::size_t n_samples() const { return rows_.size(); }
  std::size_t n_features() const { return n_features_; }
  const SparseRow& row(std::size_t i) const { return rows_[i]; }
  double label(std::size_t i) const { return labels_[i]; }
  const std::vector<double>& labels() const { return labels_; }

  bool operator==(const SparseDataset&) const = default;

 private:
  std::vector<SparseRow> rows_;
  std::vector<double> labels_;
  std::size_t n_features_;
};

/// Contiguous prefix of a dataset: rows 0..size-1. Prefixes of the same
/// dataset nest, so a view of size m is a subset of any view of size n >= m.
class SampleView {
 public:
  SampleView(const SparseDataset& dataset, std::size_t size)
      : dataset_(&dataset), size_(size) {
    if (size > dataset.n_samples())
      throw std::invalid_argument("view size exceeds dataset");
  }

  static SampleView full(const SparseDataset& dataset) {
    return SampleView(dataset, dataset.n_samples());
  }

  std::size_t size() const { return size_; }
  std::size_t n_features() const { return dataset_->n_features(); }
  const SparseRow& row(std::size_t i) const { return dataset_->row(i); }
  double label(std::size_t i) const { return dataset_->label(i); }
  const SparseDataset& dataset() const { return *dataset_; }

 private:
  const SparseDataset* dataset_;
  std::size_t size_;
};

/// Parses LIBSVM text: `<label> <idx>:<val> ...` per nonempty line, indices
/// 1-based and strictly ascending. Labels map by sign (> 0 becomes +1).
/// Feature count is 1 + max observed index unless an override is given.
SparseDataset parse_libsvm(std::istream& in,
                           std::optional<std::size_t> n_features_override = {});

/// Writes the canonical LIBSVM text form; values keep 17 significant digits
/// so a reparse reproduces the dataset exactly.
void serialize_libsvm(const SparseDataset& dataset, std::ostream& out);

/// Builds a binary task from IDX image/label streams: keeps samples labeled
/// digit_pos (+1) or digit_neg (-1), divides pixels by 255 and drops zeros.
SparseDataset convert_mnist_idx(std::istream& images, std::istream& labels,
                                int digit_pos, int digit_neg);

/// Deterministic row permutation; the same seed yields a bit-identical
/// dataset on every platform.
SparseDataset shuffle(const SparseDataset& dataset, std::uint64_t seed);

/// Order-independent digest of (n_samples, n_features, rows, labels).
/// Shuffling does not change it, so references computed before the seeded
/// shuffle still match.
std::uint64_t fingerprint(const SparseDataset& dataset);

}  // namespace adaerm

#endif  // ADAERM_DATA_HPP
