#include "adaerm/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace adaerm {

namespace {

void validate(const ScheduleConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 0.5))
    throw std::invalid_argument("alpha must lie in [0, 0.5]");
  if (!(cfg.zeta > 0.0))
    throw std::invalid_argument("zeta must be positive");
  if (cfg.m0 < 1) throw std::invalid_argument("m0 must be at least 1");
  if (!(cfg.growth > 1.0))
    throw std::invalid_argument("growth must exceed 1");
  if (cfg.stage0_budget_multiplier < 1)
    throw std::invalid_argument("stage0 budget multiplier must be >= 1");
}

std::size_t ceil_to_count(double raw) {
  double c = std::ceil(raw);
  if (!(c < 9.0e18))
    throw std::overflow_error("iteration budget exceeds a representable count");
  return std::max<std::size_t>(1, static_cast<std::size_t>(c));
}

// Budget for a warm-started stage of size n grown from m. The doubling
// schedule uses the closed-form constant; other growth factors recompute the
// constant from the general bound with delta_m = V_m.
std::size_t warm_stage_budget(const ScheduleConfig& cfg, std::size_t m,
                              std::size_t n) {
  if (cfg.growth == 2.0) return stage_budget(cfg.alpha, cfg.zeta, n);
  double v_m = statistical_accuracy(m, cfg.alpha);
  double v_n = statistical_accuracy(n, cfg.alpha);
  double bound = carried_suboptimality_bound(v_m, m, n, cfg.alpha);
  double t_raw = std::pow(bound / v_n, 1.0 / cfg.zeta);
  return ceil_to_count(t_raw * std::log(static_cast<double>(n)));
}

std::size_t next_size(const ScheduleConfig& cfg, std::size_t m,
                      std::size_t n_samples) {
  auto grown = static_cast<std::size_t>(
      std::ceil(cfg.growth * static_cast<double>(m)));
  return std::min(n_samples, std::max(m + 1, grown));
}

OptimizerState solve_stage(OptimizerState state, const SampleView& view,
                           std::size_t budget, const InnerSolverConfig& inner,
                           const TraceSink& sink) {
  if (inner.method == InnerSolverConfig::Method::gd) {
    double gamma = inner.gd_step_size
                       ? *inner.gd_step_size
                       : 1.0 / smoothness_constant(view).value;
    return run_gd(std::move(state), view, budget, GDConfig{gamma}, sink);
  }
  state.reset_adam_moments();  // only the weights warm-start a stage
  return run_adam(std::move(state), view, budget, inner.adam, sink);
}

}  // namespace

double statistical_accuracy(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  return std::pow(static_cast<double>(n), -alpha);
}

double carried_suboptimality_bound(double delta_m, std::size_t m,
                                   std::size_t n, double alpha) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (n < m) throw std::invalid_argument("n must be at least m");
  if (delta_m < 0) throw std::invalid_argument("delta_m must be nonnegative");
  if (n == m) return delta_m;  // the (n-m)/n prefactor vanishes
  double frac = static_cast<double>(n - m) / static_cast<double>(n);
  return delta_m + frac * (2.0 * statistical_accuracy(n - m, alpha) +
                           statistical_accuracy(m, alpha) +
                           statistical_accuracy(n, alpha));
}

double doubling_suboptimality_bound(double delta_m, std::size_t m,
                                    double alpha) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (delta_m < 0) throw std::invalid_argument("delta_m must be nonnegative");
  return delta_m +
         0.5 * (3.0 + std::pow(2.0, -alpha)) * statistical_accuracy(m, alpha);
}

double iteration_budget(double alpha, double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  double base = std::pow(2.0, alpha) * (2.5 + std::pow(2.0, -alpha - 1.0));
  return std::pow(base, 1.0 / zeta);
}

std::size_t stage_budget(double alpha, double zeta, std::size_t n) {
  if (n < 2) throw std::invalid_argument("stage size must be at least 2");
  return ceil_to_count(iteration_budget(alpha, zeta) *
                       std::log(static_cast<double>(n)));
}

std::vector<std::size_t> stage_sizes(const ScheduleConfig& cfg,
                                     std::size_t n_samples) {
  validate(cfg);
  if (cfg.m0 > n_samples)
    throw std::invalid_argument("m0 exceeds the dataset size");
  std::vector<std::size_t> sizes{cfg.m0};
  std::size_t m = cfg.m0;
  while (m < n_samples) {
    m = next_size(cfg, m, n_samples);
    sizes.push_back(m);
  }
  return sizes;
}

std::uint64_t planned_grad_evals(const ScheduleConfig& cfg,
                                 std::size_t n_samples) {
  auto sizes = stage_sizes(cfg, n_samples);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    std::size_t budget =
        k == 0 ? cfg.stage0_budget_multiplier *
                     (cfg.m0 >= 2 ? stage_budget(cfg.alpha, cfg.zeta, cfg.m0)
                                  : std::size_t{1})
               : warm_stage_budget(cfg, sizes[k - 1], sizes[k]);
    total += std::uint64_t{budget} * sizes[k];
  }
  return total;
}

AdaptiveResult adaptive_solve(const SparseDataset& dataset,
                              const ScheduleConfig& cfg,
                              const InnerSolverConfig& inner,
                              const StageTraceSink& sink) {
  auto sizes = stage_sizes(cfg, dataset.n_samples());

  AdaptiveResult result;
  OptimizerState state;
  state.w.assign(dataset.n_features(), 0.0);

  for (std::size_t k = 0; k < sizes.size(); ++k) {
    std::size_t n = sizes[k];
    std::size_t budget;
    double entry_bound;
    if (k == 0) {
      budget = cfg.stage0_budget_multiplier *
               (cfg.m0 >= 2 ? stage_budget(cfg.alpha, cfg.zeta, cfg.m0)
                            : std::size_t{1});
      entry_bound = statistical_accuracy(n, cfg.alpha);
    } else {
      std::size_t m = sizes[k - 1];
      budget = warm_stage_budget(cfg, m, n);
      double v_m = statistical_accuracy(m, cfg.alpha);
      entry_bound = cfg.growth == 2.0
                        ? doubling_suboptimality_bound(v_m, m, cfg.alpha)
                        : carried_suboptimality_bound(v_m, m, n, cfg.alpha);
    }

    SampleView view(dataset, n);
    std::uint64_t evals_before = state.grad_evals;
    std::size_t iters_before = state.iteration;

    TraceSink stage_sink;
    if (sink) {
      stage_sink = [&](std::size_t iteration, std::uint64_t grad_evals,
                       const WeightVector& w) {
        std::size_t local = iteration - iters_before;
        sink(StageTraceEvent{k, n, local, grad_evals, local == budget}, w);
      };
    }

    state = solve_stage(std::move(state), view, budget, inner, stage_sink);

    result.stages.push_back(StageReport{
        k, n, budget, entry_bound, state.grad_evals - evals_before, state.w});
  }

  result.w = state.w;
  return result;
}

}  // namespace adaerm
