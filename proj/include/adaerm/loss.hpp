#ifndef ADAERM_LOSS_HPP
#define ADAERM_LOSS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "adaerm/data.hpp"

namespace adaerm {

using WeightVector = std::vector<double>;

/// Mean binary logistic loss over the view:
///   (1/m) sum_i softplus(-y_i <x_i, w>)
/// softplus uses the branch form max(z,0) + log1p(exp(-|z|)), so margins of
/// any magnitude stay finite. Accumulation is compensated and in row order,
/// which keeps the result reproducible and accurate enough to difference
/// losses near an optimum.
double logistic_loss(const WeightVector& w, const SampleView& view);

/// Mean loss gradient, -(1/m) sum_i sigmoid(-y_i <x_i, w>) y_i x_i,
/// accumulated into a dense vector in row order.
WeightVector logistic_grad(const WeightVector& w, const SampleView& view);

/// Loss and gradient in one pass over the view (the margins are shared).
/// grad_out is resized and overwritten.
double logistic_loss_grad(const WeightVector& w, const SampleView& view,
                          WeightVector& grad_out);

/// Gradient averaged over the subset of view rows named by `indices`.
WeightVector logistic_grad(const WeightVector& w, const SampleView& view,
                           std::span<const std::size_t> indices);

struct SmoothnessEstimate {
  double value = 0.0;       // L, includes the 1.01 safety factor
  bool degenerate = false;  // all-zero design matrix; value is the floor
  std::size_t iterations = 0;
};

/// L = lambda_max(X^T X) / (4m), the logistic Hessian bound, estimated by
/// matrix-free power iteration on the Gram operator v -> X^T (X v).
/// Stops when the eigenvalue estimate changes by less than 1e-6 relative
/// (or after 1000 iterations) and multiplies by a 1.01 safety factor.
/// An all-zero design matrix yields the 1e-12 floor with `degenerate` set.
SmoothnessEstimate smoothness_constant(const SampleView& view);

/// G = max_i ||x_i||_2. Diagnostic only; no solver consumes it.
double lipschitz_constant(const SampleView& view);

}  // namespace adaerm

#endif  // ADAERM_LOSS_HPP
