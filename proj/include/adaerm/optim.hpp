#ifndef ADAERM_OPTIM_HPP
#define ADAERM_OPTIM_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "adaerm/loss.hpp"

namespace adaerm {

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OptimizerState {
  WeightVector w;
  std::uint64_t grad_evals = 0;  // single-sample gradient units, cumulative
  std::size_t iteration = 0;     // GD iterations or ADAM epochs, cumulative
  WeightVector adam_m;           // first moment; empty until ADAM steps
  WeightVector adam_v;           // second moment, entrywise >= 0
  std::uint64_t adam_t = 0;      // ADAM steps taken (for bias correction)

  void reset_adam_moments() {
    adam_m.clear();
    adam_v.clear();
    adam_t = 0;
  }
};

struct GDConfig {
  double step_size;  // gamma = 1/L
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eta = 0.01;
  double epsilon = 1e-8;
  std::size_t batch_size = 5;
  std::uint64_t shuffle_seed = 0;
};

/// Called after every solver iteration (GD step or ADAM epoch) with the
/// within-run iteration count, cumulative gradient evaluations and the
/// current weights.
using TraceSink = std::function<void(std::size_t iteration,
                                     std::uint64_t grad_evals,
                                     const WeightVector& w)>;

/// Runs exactly budget_T full-batch steps w <- w - gamma * grad(w, view).
/// Adds budget_T * view.size() gradient evaluations. Throws DivergenceError
/// if the iterate leaves the finite range.
OptimizerState run_gd(OptimizerState state, const SampleView& view,
                      std::size_t budget_T, const GDConfig& cfg,
                      const TraceSink& sink = {});

/// Runs budget_T epochs of mini-batch ADAM with bias correction. Each epoch
/// shuffles the view's indices with cfg.shuffle_seed mixed with the epoch
/// counter, then partitions them into batches of cfg.batch_size (last batch
/// smaller, never wrapped). Adds view.size() gradient evaluations per epoch.
OptimizerState run_adam(OptimizerState state, const SampleView& view,
                        std::size_t budget_T, const AdamConfig& cfg,
                        const TraceSink& sink = {});

/// The index order ADAM visits in the given epoch: a seeded permutation of
/// 0..m-1. Exposed so the partition contract is directly testable.
std::vector<std::size_t> adam_epoch_order(std::size_t m, std::uint64_t seed,
                                          std::size_t epoch);

}  // namespace adaerm

#endif  // ADAERM_OPTIM_HPP
