#ifndef ADAERM_TESTS_SUPPORT_HPP
#define ADAERM_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "adaerm/data.hpp"
#include "adaerm/loss.hpp"

namespace adaerm::testing {

// Dense rows of a planted logistic task: x ~ N(0, I), labels sign(<x, w*>)
// flipped with probability noise. Stored sparsely like everything else.
inline SparseDataset make_synthetic(std::size_t n, std::size_t d,
                                    std::uint64_t seed, double noise = 0.1) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  WeightVector w_true(d);
  for (double& x : w_true) x = normal(gen);

  std::vector<SparseRow> rows;
  std::vector<double> labels;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SparseRow row;
    double margin = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = normal(gen);
      margin += v * w_true[j];
      row.push_back({static_cast<std::uint32_t>(j), v});
    }
    double y = margin >= 0 ? 1.0 : -1.0;
    if (unit(gen) < noise) y = -y;
    rows.push_back(std::move(row));
    labels.push_back(y);
  }
  return SparseDataset(std::move(rows), std::move(labels), d);
}

// Planted logistic task with geometrically spread feature scales, the shape
// pixel and tf-idf designs take. The planted weights are inversely scaled so
// every direction carries equal label signal; the small-scale directions
// then matter to the loss and gradient descent needs many passes over the
// data, which is the regime adaptive sampling targets.
inline SparseDataset make_conditioned(std::size_t n, std::size_t d,
                                      std::uint64_t seed, double noise = 0.1,
                                      double condition = 25.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> scale(d, 1.0);
  for (std::size_t j = 0; d > 1 && j < d; ++j)
    scale[j] = std::pow(1.0 / std::sqrt(condition),
                        static_cast<double>(j) / static_cast<double>(d - 1));

  WeightVector w_true(d);
  for (std::size_t j = 0; j < d; ++j)
    w_true[j] = normal(gen) / (scale[j] * std::sqrt(static_cast<double>(d)));

  std::vector<SparseRow> rows;
  std::vector<double> labels;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SparseRow row;
    double margin = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = scale[j] * normal(gen);
      margin += v * w_true[j];
      row.push_back({static_cast<std::uint32_t>(j), v});
    }
    double y = margin >= 0 ? 1.0 : -1.0;
    if (unit(gen) < noise) y = -y;
    rows.push_back(std::move(row));
    labels.push_back(y);
  }
  return SparseDataset(std::move(rows), std::move(labels), d);
}

// Random sparse dataset for parser and loss property tests.
inline SparseDataset make_random_sparse(std::size_t n, std::size_t d,
                                        std::uint64_t seed,
                                        double density = 0.3) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<SparseRow> rows;
  std::vector<double> labels;
  for (std::size_t i = 0; i < n; ++i) {
    SparseRow row;
    for (std::size_t j = 0; j < d; ++j)
      if (unit(gen) < density)
        row.push_back({static_cast<std::uint32_t>(j), normal(gen)});
    rows.push_back(std::move(row));
    labels.push_back(unit(gen) < 0.5 ? 1.0 : -1.0);
  }
  return SparseDataset(std::move(rows), std::move(labels), d);
}

inline WeightVector random_weights(std::size_t d, std::uint64_t seed,
                                   double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, scale);
  WeightVector w(d);
  for (double& x : w) x = normal(gen);
  return w;
}

// Single-row-at-a-time builder for hand-constructed cases.
inline SparseDataset dataset_of(std::vector<std::vector<double>> dense_rows,
                                std::vector<double> labels) {
  std::size_t d = 0;
  for (const auto& r : dense_rows) d = std::max(d, r.size());
  std::vector<SparseRow> rows;
  for (const auto& r : dense_rows) {
    SparseRow row;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] != 0.0) row.push_back({static_cast<std::uint32_t>(j), r[j]});
    rows.push_back(std::move(row));
  }
  return SparseDataset(std::move(rows), std::move(labels), d);
}

}  // namespace adaerm::testing

#endif  // ADAERM_TESTS_SUPPORT_HPP
