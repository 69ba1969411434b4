#ifndef ADAERM_BENCH_HPP
#define ADAERM_BENCH_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaerm/adaptive.hpp"

namespace adaerm {

enum class Method { gd, adagd, adam, adaadam };

std::string to_string(Method method);
Method parse_method(std::string_view name);  // throws std::invalid_argument
bool is_adaptive(Method method);

struct TraceRecord {
  std::string run_id;
  Method method = Method::gd;
  std::size_t stage = 0;  // 0 for fixed-sample runs
  std::size_t sample_size = 0;
  std::size_t iteration = 0;
  std::uint64_t grad_evals = 0;
  double full_loss = 0.0;      // loss on the complete training set
  double suboptimality = 0.0;  // full_loss - L_star

  bool operator==(const TraceRecord&) const = default;
};

struct ReferenceOptimum {
  double L_star = 0.0;
  WeightVector w_star;
  double grad_norm_at_star = 0.0;
  std::size_t iterations_used = 0;
  bool stale = false;  // gradient threshold unmet at max_iters
  std::uint64_t dataset_fingerprint = 0;
};

/// Full-batch GD with gamma = 1/L until ||grad||_2 <= threshold or
/// max_iters. Records the achieved gradient norm either way and flags the
/// result stale when the threshold was not met.
ReferenceOptimum compute_reference(const SparseDataset& dataset,
                                   double threshold = 1e-10,
                                   std::size_t max_iters = 1'000'000);

void save_reference(const ReferenceOptimum& ref, std::ostream& out);
ReferenceOptimum load_reference(std::istream& in);

using RecordSink = std::function<void(const TraceRecord&)>;

/// Fixed-sample run on the full dataset with an explicit budget (GD
/// iterations or ADAM epochs). Emits the initial point, then a record every
/// eval_stride iterations and at the final iteration.
std::vector<TraceRecord> run_fixed(const SparseDataset& dataset,
                                   const InnerSolverConfig& inner,
                                   std::size_t budget_T,
                                   const ReferenceOptimum& reference,
                                   std::size_t eval_stride,
                                   const std::string& run_id, Method method,
                                   const RecordSink& sink = {});

/// Adaptive run; records follow the same stride rule plus every stage end.
std::vector<TraceRecord> run_adaptive(const SparseDataset& dataset,
                                      const ScheduleConfig& schedule,
                                      const InnerSolverConfig& inner,
                                      const ReferenceOptimum& reference,
                                      std::size_t eval_stride,
                                      const std::string& run_id, Method method,
                                      const RecordSink& sink = {});

/// Dispatches on the method. Adaptive methods wrap adaptive_solve; fixed
/// methods run on the full dataset with a total gradient-evaluation budget
/// matched to what the adaptive schedule would spend, so both trace families
/// share a cost axis. Throws if the reference was computed on different data.
std::vector<TraceRecord> run_experiment(const SparseDataset& dataset,
                                        Method method,
                                        const ScheduleConfig& schedule,
                                        const InnerSolverConfig& inner,
                                        const ReferenceOptimum& reference,
                                        std::size_t eval_stride,
                                        const std::string& run_id,
                                        const RecordSink& sink = {});

/// Header `run_id,method,stage,sample_size,iteration,grad_evals,full_loss,
/// suboptimality`; reals carry 17 significant digits so a parse-back is
/// bit-exact.
void emit_csv(std::span<const TraceRecord> records, std::ostream& out);

std::vector<TraceRecord> parse_csv(std::istream& in);

/// Cumulative gradient evaluations at which the trace first reaches
/// suboptimality <= level; empty if it never does.
std::optional<std::uint64_t> first_crossing(
    std::span<const TraceRecord> records, double level);

}  // namespace adaerm

#endif  // ADAERM_BENCH_HPP
