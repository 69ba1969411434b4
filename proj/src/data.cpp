#include "adaerm/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "adaerm/prng.hpp"

namespace adaerm {

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double parse_real(std::string_view token, const char* what, std::size_t line) {
  std::string_view body = token;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(),
                                   value, std::chars_format::general);
  if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size())
    throw ParseError(std::string("malformed ") + what + " '" +
                         std::string(token) + "'",
                     line);
  return value;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ull;

std::uint64_t row_digest(const SparseRow& row, double label) {
  std::uint64_t h = fnv1a(kFnvOffset, &label, sizeof label);
  for (const Feature& f : row) {
    h = fnv1a(h, &f.index, sizeof f.index);
    h = fnv1a(h, &f.value, sizeof f.value);
  }
  return h;
}

std::uint32_t read_be32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("truncated IDX stream");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

SparseDataset::SparseDataset(std::vector<SparseRow> rows,
                             std::vector<double> labels,
                             std::size_t n_features)
    : rows_(std::move(rows)), labels_(std::move(labels)),
      n_features_(n_features) {
  if (rows_.size() != labels_.size())
    throw std::invalid_argument("rows/labels length mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0)
      throw std::invalid_argument("label not in {-1,+1}");
    std::int64_t prev = -1;
    for (const Feature& f : rows_[i]) {
      if (f.index >= n_features_)
        throw std::invalid_argument("feature index out of range");
      if (static_cast<std::int64_t>(f.index) <= prev)
        throw std::invalid_argument("row indices not strictly increasing");
      prev = f.index;
    }
  }
}

SparseDataset parse_libsvm(std::istream& in,
                           std::optional<std::size_t> n_features_override) {
  std::vector<SparseRow> rows;
  std::vector<double> labels;
  std::int64_t max_index = -1;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;

    std::istringstream fields(line);
    std::string token;
    fields >> token;
    double raw_label = parse_real(token, "label", line_no);
    labels.push_back(raw_label > 0 ? 1.0 : -1.0);

    SparseRow row;
    std::int64_t prev_index = 0;  // 1-based; valid indices start at 1
    while (fields >> token) {
      auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == token.size())
        throw ParseError("malformed pair '" + token + "'", line_no);

      std::int64_t index;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon,
                                       index);
      if (ec != std::errc{} || ptr != token.data() + colon || index < 1)
        throw ParseError("malformed pair '" + token + "'", line_no);
      if (index <= prev_index)
        throw ParseError("non-ascending index", line_no);
      prev_index = index;

      double value = parse_real(token.substr(colon + 1), "pair value",
                                line_no);
      row.push_back({static_cast<std::uint32_t>(index - 1), value});
      max_index = std::max(max_index, index - 1);
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ParseError("empty file, no samples", line_no);

  std::size_t n_features = n_features_override
                               ? *n_features_override
                               : static_cast<std::size_t>(max_index + 1);
  return SparseDataset(std::move(rows), std::move(labels), n_features);
}

void serialize_libsvm(const SparseDataset& dataset, std::ostream& out) {
  char buf[48];
  for (std::size_t i = 0; i < dataset.n_samples(); ++i) {
    out << (dataset.label(i) > 0 ? "+1" : "-1");
    for (const Feature& f : dataset.row(i)) {
      std::snprintf(buf, sizeof buf, " %u:%.17g", f.index + 1, f.value);
      out << buf;
    }
    out << '\n';
  }
}

SparseDataset convert_mnist_idx(std::istream& images, std::istream& labels,
                                int digit_pos, int digit_neg) {
  if (digit_pos == digit_neg)
    throw std::invalid_argument("digit_pos and digit_neg must differ");

  if (read_be32(images) != 0x00000803u)
    throw std::runtime_error("bad magic number in IDX image stream");
  std::uint32_t n_images = read_be32(images);
  std::uint32_t n_rows = read_be32(images);
  std::uint32_t n_cols = read_be32(images);

  if (read_be32(labels) != 0x00000801u)
    throw std::runtime_error("bad magic number in IDX label stream");
  std::uint32_t n_labels = read_be32(labels);
  if (n_images != n_labels)
    throw std::runtime_error("IDX image/label count mismatch");

  std::size_t pixels = std::size_t(n_rows) * n_cols;
  std::vector<unsigned char> image(pixels);
  std::vector<SparseRow> rows;
  std::vector<double> out_labels;

  for (std::uint32_t i = 0; i < n_images; ++i) {
    images.read(reinterpret_cast<char*>(image.data()),
                static_cast<std::streamsize>(pixels));
    char label_byte;
    labels.read(&label_byte, 1);
    if (!images || !labels) throw std::runtime_error("truncated IDX stream");

    int digit = static_cast<unsigned char>(label_byte);
    if (digit != digit_pos && digit != digit_neg) continue;

    SparseRow row;
    for (std::size_t p = 0; p < pixels; ++p) {
      if (image[p] != 0)
        row.push_back({static_cast<std::uint32_t>(p), image[p] / 255.0});
    }
    rows.push_back(std::move(row));
    out_labels.push_back(digit == digit_pos ? 1.0 : -1.0);
  }

  return SparseDataset(std::move(rows), std::move(out_labels), pixels);
}

SparseDataset shuffle(const SparseDataset& dataset, std::uint64_t seed) {
  auto perm = detail::identity_permutation(dataset.n_samples());
  detail::deterministic_shuffle(perm, seed);

  std::vector<SparseRow> rows;
  std::vector<double> labels;
  rows.reserve(perm.size());
  labels.reserve(perm.size());
  for (std::size_t i : perm) {
    rows.push_back(dataset.row(i));
    labels.push_back(dataset.label(i));
  }
  return SparseDataset(std::move(rows), std::move(labels),
                       dataset.n_features());
}

std::uint64_t fingerprint(const SparseDataset& dataset) {
  std::vector<std::uint64_t> digests;
  digests.reserve(dataset.n_samples());
  for (std::size_t i = 0; i < dataset.n_samples(); ++i)
    digests.push_back(row_digest(dataset.row(i), dataset.label(i)));
  std::sort(digests.begin(), digests.end());

  std::uint64_t n = dataset.n_samples();
  std::uint64_t d = dataset.n_features();
  std::uint64_t h = fnv1a(kFnvOffset, &n, sizeof n);
  h = fnv1a(h, &d, sizeof d);
  for (std::uint64_t digest : digests) h = fnv1a(h, &digest, sizeof digest);
  return h;
}

}  // namespace adaerm
