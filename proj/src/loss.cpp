#include "adaerm/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "adaerm/prng.hpp"

namespace adaerm {

namespace {

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double dot_row(const SparseRow& row, const WeightVector& w) {
  double acc = 0.0;
  for (const Feature& f : row) acc += f.value * w[f.index];
  return acc;
}

void check_dims(const WeightVector& w, const SampleView& view) {
  if (w.size() != view.n_features())
    throw std::invalid_argument("weight length does not match n_features");
  if (view.size() == 0)
    throw std::invalid_argument("empty sample view");
}

void accumulate_grad(const WeightVector& w, const SampleView& view,
                     std::size_t i, WeightVector& grad) {
  double y = view.label(i);
  double coeff = -sigmoid(-y * dot_row(view.row(i), w)) * y;
  for (const Feature& f : view.row(i)) grad[f.index] += coeff * f.value;
}

}  // namespace

double logistic_loss(const WeightVector& w, const SampleView& view) {
  check_dims(w, view);
  // Kahan summation: stage losses get differenced against L_star down to
  // ~1e-10, so the plain running sum's error is not acceptable here.
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    double term = softplus(-view.label(i) * dot_row(view.row(i), w));
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(view.size());
}

WeightVector logistic_grad(const WeightVector& w, const SampleView& view) {
  check_dims(w, view);
  WeightVector grad(w.size(), 0.0);
  for (std::size_t i = 0; i < view.size(); ++i)
    accumulate_grad(w, view, i, grad);
  double inv_m = 1.0 / static_cast<double>(view.size());
  for (double& g : grad) g *= inv_m;
  return grad;
}

double logistic_loss_grad(const WeightVector& w, const SampleView& view,
                          WeightVector& grad_out) {
  check_dims(w, view);
  grad_out.assign(w.size(), 0.0);
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    double y = view.label(i);
    double z = -y * dot_row(view.row(i), w);

    double term = softplus(z) - comp;
    double t = sum + term;
    comp = (t - sum) - term;
    sum = t;

    double coeff = -sigmoid(z) * y;
    for (const Feature& f : view.row(i)) grad_out[f.index] += coeff * f.value;
  }
  double inv_m = 1.0 / static_cast<double>(view.size());
  for (double& g : grad_out) g *= inv_m;
  return sum / static_cast<double>(view.size());
}

WeightVector logistic_grad(const WeightVector& w, const SampleView& view,
                           std::span<const std::size_t> indices) {
  check_dims(w, view);
  if (indices.empty()) throw std::invalid_argument("empty index batch");
  WeightVector grad(w.size(), 0.0);
  for (std::size_t i : indices) accumulate_grad(w, view, i, grad);
  double inv_b = 1.0 / static_cast<double>(indices.size());
  for (double& g : grad) g *= inv_b;
  return grad;
}

SmoothnessEstimate smoothness_constant(const SampleView& view) {
  if (view.size() == 0) throw std::invalid_argument("empty sample view");
  constexpr double kTol = 1e-6;
  constexpr std::size_t kMaxIters = 1000;
  constexpr double kSafety = 1.01;
  constexpr double kFloor = 1e-12;

  std::size_t d = view.n_features();
  SmoothnessEstimate est;

  // Deterministic dense start vector; a seeded draw avoids accidental
  // orthogonality to the dominant eigenvector.
  WeightVector v(d);
  detail::SplitMix64 gen(0x5EEDu);
  for (double& x : v)
    x = static_cast<double>(gen() >> 11) * 0x1p-53 - 0.5;

  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0 || d == 0) {
    est.value = kFloor;
    est.degenerate = true;
    return est;
  }
  for (double& x : v) x /= norm;

  WeightVector xv(view.size());
  WeightVector gram_v(d);
  double lambda = 0.0;

  for (std::size_t iter = 1; iter <= kMaxIters; ++iter) {
    est.iterations = iter;
    // gram_v = X^T (X v), never forming the Gram matrix
    for (std::size_t i = 0; i < view.size(); ++i)
      xv[i] = dot_row(view.row(i), v);
    std::fill(gram_v.begin(), gram_v.end(), 0.0);
    for (std::size_t i = 0; i < view.size(); ++i)
      for (const Feature& f : view.row(i))
        gram_v[f.index] += f.value * xv[i];

    double new_lambda = 0.0;  // Rayleigh quotient with ||v|| = 1
    for (std::size_t j = 0; j < d; ++j) new_lambda += v[j] * gram_v[j];

    double gram_norm = 0.0;
    for (double x : gram_v) gram_norm += x * x;
    gram_norm = std::sqrt(gram_norm);
    if (gram_norm == 0.0) {
      // v is in the null space; an all-zero design matrix lands here
      est.value = kFloor;
      est.degenerate = true;
      return est;
    }
    for (std::size_t j = 0; j < d; ++j) v[j] = gram_v[j] / gram_norm;

    if (iter > 1 &&
        std::abs(new_lambda - lambda) < kTol * std::abs(new_lambda)) {
      lambda = new_lambda;
      break;
    }
    lambda = new_lambda;
  }

  if (lambda <= 0.0) {
    est.value = kFloor;
    est.degenerate = true;
    return est;
  }
  est.value = lambda / (4.0 * static_cast<double>(view.size())) * kSafety;
  return est;
}

double lipschitz_constant(const SampleView& view) {
  double max_norm = 0.0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    double sq = 0.0;
    for (const Feature& f : view.row(i)) sq += f.value * f.value;
    max_norm = std::max(max_norm, std::sqrt(sq));
  }
  return max_norm;
}

}  // namespace adaerm
