#include "adaerm/optim.hpp"

#include <cmath>

#include "adaerm/prng.hpp"

namespace adaerm {

namespace {

bool all_finite(const WeightVector& w) {
  for (double x : w)
    if (!std::isfinite(x)) return false;
  return true;
}

void check_start(const OptimizerState& state, const SampleView& view) {
  if (state.w.size() != view.n_features())
    throw std::invalid_argument("weight length does not match n_features");
}

}  // namespace

std::vector<std::size_t> adam_epoch_order(std::size_t m, std::uint64_t seed,
                                          std::size_t epoch) {
  auto order = detail::identity_permutation(m);
  detail::deterministic_shuffle(order, detail::mix_seed(seed, epoch));
  return order;
}

OptimizerState run_gd(OptimizerState state, const SampleView& view,
                      std::size_t budget_T, const GDConfig& cfg,
                      const TraceSink& sink) {
  check_start(state, view);
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size))
    throw std::invalid_argument("step_size must be finite and positive");

  constexpr auto kDiverged =
      "gradient descent diverged: non-finite loss (step size inconsistent "
      "with the smoothness constant)";

  WeightVector grad;
  for (std::size_t t = 0; t < budget_T; ++t) {
    // The fused pass makes the loss check nearly free; margins can overflow
    // to an infinite loss while the weights themselves are still finite.
    double loss = logistic_loss_grad(state.w, view, grad);
    if (!std::isfinite(loss)) throw DivergenceError(kDiverged);

    for (std::size_t j = 0; j < state.w.size(); ++j)
      state.w[j] -= cfg.step_size * grad[j];
    state.grad_evals += view.size();
    ++state.iteration;

    if (!all_finite(state.w)) throw DivergenceError(kDiverged);
    if (sink) sink(state.iteration, state.grad_evals, state.w);
  }
  if (budget_T > 0 && !std::isfinite(logistic_loss(state.w, view)))
    throw DivergenceError(kDiverged);
  return state;
}

OptimizerState run_adam(OptimizerState state, const SampleView& view,
                        std::size_t budget_T, const AdamConfig& cfg,
                        const TraceSink& sink) {
  check_start(state, view);
  if (cfg.beta1 < 0 || cfg.beta1 >= 1 || cfg.beta2 < 0 || cfg.beta2 >= 1 ||
      !(cfg.eta > 0) || !(cfg.epsilon > 0) || cfg.batch_size < 1)
    throw std::invalid_argument("invalid ADAM configuration");

  std::size_t d = view.n_features();
  if (state.adam_m.empty()) state.adam_m.assign(d, 0.0);
  if (state.adam_v.empty()) state.adam_v.assign(d, 0.0);
  if (state.adam_m.size() != d || state.adam_v.size() != d)
    throw std::invalid_argument("ADAM moment length does not match");

  for (std::size_t epoch = 0; epoch < budget_T; ++epoch) {
    // state.iteration is the cumulative epoch counter, so permutations keep
    // changing when a warm-started stage resumes the run.
    auto order = adam_epoch_order(view.size(), cfg.shuffle_seed,
                                  state.iteration);

    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
      std::size_t len = std::min(cfg.batch_size, order.size() - begin);
      WeightVector grad = logistic_grad(
          state.w, view, std::span<const std::size_t>(&order[begin], len));

      ++state.adam_t;
      double m_corr = 1.0 - std::pow(cfg.beta1,
                                     static_cast<double>(state.adam_t));
      double v_corr = 1.0 - std::pow(cfg.beta2,
                                     static_cast<double>(state.adam_t));
      for (std::size_t j = 0; j < d; ++j) {
        state.adam_m[j] = cfg.beta1 * state.adam_m[j] +
                          (1.0 - cfg.beta1) * grad[j];
        state.adam_v[j] = cfg.beta2 * state.adam_v[j] +
                          (1.0 - cfg.beta2) * grad[j] * grad[j];
        double m_hat = state.adam_m[j] / m_corr;
        double v_hat = state.adam_v[j] / v_corr;
        state.w[j] -= cfg.eta * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
      }
      if (!all_finite(state.w))
        throw DivergenceError("ADAM diverged: non-finite iterate");
    }

    state.grad_evals += view.size();
    ++state.iteration;
    if (sink) sink(state.iteration, state.grad_evals, state.w);
  }
  return state;
}

}  // namespace adaerm
