#ifndef ADAERM_ADAPTIVE_HPP
#define ADAERM_ADAPTIVE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "adaerm/optim.hpp"

namespace adaerm {

struct ScheduleConfig {
  double alpha = 0.5;   // statistical-accuracy exponent, in [0, 0.5]
  double zeta = 1.0;    // sublinear rate exponent, > 0
  std::size_t m0 = 1;   // initial sample size
  double growth = 2.0;  // sample growth factor, > 1
  // Stage 0 has no warm start; it gets this multiple of the usual budget to
  // establish the entry accuracy the later stages assume.
  std::size_t stage0_budget_multiplier = 3;
};

struct StageReport {
  std::size_t stage_index = 0;
  std::size_t sample_size = 0;
  std::size_t budget_T = 0;
  double entry_suboptimality_bound = 0.0;
  std::uint64_t grad_evals_spent = 0;  // spent within this stage
  WeightVector w_out;
};

/// V_n = n^(-alpha), the statistical accuracy of an n-sample empirical risk.
double statistical_accuracy(std::size_t n, double alpha);

/// Suboptimality bound carried from an m-sample solution with tolerance
/// delta_m onto the n-sample risk:
///   delta_m + ((n-m)/n) * (2 V_{n-m} + V_m + V_n).
/// The second term vanishes when n == m.
double carried_suboptimality_bound(double delta_m, std::size_t m,
                                   std::size_t n, double alpha);

/// The n = 2m simplification of carried_suboptimality_bound:
///   delta_m + (1/2) (3 + 2^-alpha) V_m.
double doubling_suboptimality_bound(double delta_m, std::size_t m,
                                    double alpha);

/// Iterations a 1/T^zeta solver needs per stage to re-enter statistical
/// accuracy after doubling: (2^alpha (5/2 + 2^-(alpha+1)))^(1/zeta).
/// Raw real value, not rounded.
double iteration_budget(double alpha, double zeta);

/// Per-stage cap ceil(iteration_budget(alpha, zeta) * ln(n)), at least 1.
std::size_t stage_budget(double alpha, double zeta, std::size_t n);

struct InnerSolverConfig {
  enum class Method { gd, adam };
  Method method = Method::gd;
  // GD step size; when unset each stage uses 1/L of its own sample view.
  std::optional<double> gd_step_size;
  AdamConfig adam{};
};

struct AdaptiveResult {
  WeightVector w;
  std::vector<StageReport> stages;
};

struct StageTraceEvent {
  std::size_t stage = 0;
  std::size_t sample_size = 0;
  std::size_t iteration = 0;  // within the stage
  std::uint64_t grad_evals = 0;  // cumulative across stages
  bool stage_end = false;
};

using StageTraceSink =
    std::function<void(const StageTraceEvent&, const WeightVector& w)>;

/// The adaptive outer loop: solve on a prefix of size m0 from zero weights,
/// then repeatedly grow the prefix (n <- min(growth*m, |Z|)), warm start from
/// the previous solution and spend stage_budget(alpha, zeta, n) iterations,
/// until the full dataset has been solved. The dataset is expected to be
/// shuffled already so prefixes are valid subsamples.
AdaptiveResult adaptive_solve(const SparseDataset& dataset,
                              const ScheduleConfig& cfg,
                              const InnerSolverConfig& inner,
                              const StageTraceSink& sink = {});

/// The sample sizes adaptive_solve will visit for this dataset size.
std::vector<std::size_t> stage_sizes(const ScheduleConfig& cfg,
                                     std::size_t n_samples);

/// Total gradient evaluations the schedule will spend: sum over stages of
/// budget * size. Fixed-sample baselines match their budgets against this.
std::uint64_t planned_grad_evals(const ScheduleConfig& cfg,
                                 std::size_t n_samples);

}  // namespace adaerm

#endif  // ADAERM_ADAPTIVE_HPP
