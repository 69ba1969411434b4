#include "adaerm/bench.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace adaerm {

namespace {

constexpr char kRefMagic[8] = {'A', 'E', 'R', 'M', 'R', 'E', 'F', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated reference file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

double read_f64(std::istream& in) {
  return std::bit_cast<double>(read_u64(in));
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double grad_norm(const WeightVector& g) {
  double sq = 0.0;
  for (double x : g) sq += x * x;
  return std::sqrt(sq);
}

void check_run_id(const std::string& run_id) {
  for (char c : run_id)
    if (c == ',' || c == '"' || c == '\n' || c == '\r')
      throw std::invalid_argument("run_id must not contain CSV delimiters");
}

void check_reference(const SparseDataset& dataset,
                     const ReferenceOptimum& reference) {
  if (reference.dataset_fingerprint != fingerprint(dataset))
    throw std::invalid_argument(
        "reference optimum was computed on a different dataset");
}

TraceRecord make_record(const std::string& run_id, Method method,
                        std::size_t stage, std::size_t sample_size,
                        std::size_t iteration, std::uint64_t grad_evals,
                        const WeightVector& w, const SampleView& full_view,
                        double l_star) {
  double full_loss = logistic_loss(w, full_view);
  return TraceRecord{run_id,    method,     stage,     sample_size,
                     iteration, grad_evals, full_loss, full_loss - l_star};
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::gd: return "gd";
    case Method::adagd: return "adagd";
    case Method::adam: return "adam";
    case Method::adaadam: return "adaadam";
  }
  throw std::invalid_argument("unknown method");
}

Method parse_method(std::string_view name) {
  if (name == "gd") return Method::gd;
  if (name == "adagd") return Method::adagd;
  if (name == "adam") return Method::adam;
  if (name == "adaadam") return Method::adaadam;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

bool is_adaptive(Method method) {
  return method == Method::adagd || method == Method::adaadam;
}

ReferenceOptimum compute_reference(const SparseDataset& dataset,
                                   double threshold, std::size_t max_iters) {
  if (dataset.n_samples() == 0)
    throw std::invalid_argument("empty dataset");

  SampleView view = SampleView::full(dataset);
  double gamma = 1.0 / smoothness_constant(view).value;

  WeightVector w(dataset.n_features(), 0.0);
  WeightVector grad = logistic_grad(w, view);
  double norm = grad_norm(grad);
  std::size_t iters = 0;

  while (norm > threshold && iters < max_iters) {
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= gamma * grad[j];
    ++iters;
    for (double x : w)
      if (!std::isfinite(x))
        throw DivergenceError(
            "reference solve diverged: smoothness constant misestimated");
    grad = logistic_grad(w, view);
    norm = grad_norm(grad);
  }

  ReferenceOptimum ref;
  ref.dataset_fingerprint = fingerprint(dataset);
  ref.w_star = std::move(w);
  ref.L_star = logistic_loss(ref.w_star, view);
  if (!std::isfinite(ref.L_star))
    throw DivergenceError(
        "reference solve diverged: smoothness constant misestimated");
  ref.grad_norm_at_star = norm;
  ref.iterations_used = iters;
  ref.stale = norm > threshold;
  return ref;
}

void save_reference(const ReferenceOptimum& ref, std::ostream& out) {
  out.write(kRefMagic, sizeof kRefMagic);
  write_u64(out, ref.dataset_fingerprint);
  write_f64(out, ref.L_star);
  write_f64(out, ref.grad_norm_at_star);
  write_u64(out, ref.iterations_used);
  write_u64(out, ref.stale ? 1 : 0);
  write_u64(out, ref.w_star.size());
  for (double x : ref.w_star) write_f64(out, x);
  if (!out) throw std::runtime_error("failed to write reference file");
}

ReferenceOptimum load_reference(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kRefMagic, sizeof magic) != 0)
    throw std::runtime_error("not a reference optimum file");
  ReferenceOptimum ref;
  ref.dataset_fingerprint = read_u64(in);
  ref.L_star = read_f64(in);
  ref.grad_norm_at_star = read_f64(in);
  ref.iterations_used = static_cast<std::size_t>(read_u64(in));
  ref.stale = read_u64(in) != 0;
  std::size_t n = static_cast<std::size_t>(read_u64(in));
  ref.w_star.resize(n);
  for (double& x : ref.w_star) x = read_f64(in);
  return ref;
}

std::vector<TraceRecord> run_fixed(const SparseDataset& dataset,
                                   const InnerSolverConfig& inner,
                                   std::size_t budget_T,
                                   const ReferenceOptimum& reference,
                                   std::size_t eval_stride,
                                   const std::string& run_id, Method method,
                                   const RecordSink& record_sink) {
  check_run_id(run_id);
  check_reference(dataset, reference);
  if (eval_stride < 1) throw std::invalid_argument("eval_stride must be >= 1");

  SampleView full_view = SampleView::full(dataset);
  std::vector<TraceRecord> records;
  auto emit = [&](std::size_t iteration, std::uint64_t grad_evals,
                  const WeightVector& w) {
    records.push_back(make_record(run_id, method, 0, dataset.n_samples(),
                                  iteration, grad_evals, w, full_view,
                                  reference.L_star));
    if (record_sink) record_sink(records.back());
  };

  OptimizerState state;
  state.w.assign(dataset.n_features(), 0.0);
  emit(0, 0, state.w);

  TraceSink sink = [&](std::size_t iteration, std::uint64_t grad_evals,
                       const WeightVector& w) {
    if (iteration % eval_stride == 0 || iteration == budget_T)
      emit(iteration, grad_evals, w);
  };

  if (inner.method == InnerSolverConfig::Method::gd) {
    double gamma = inner.gd_step_size
                       ? *inner.gd_step_size
                       : 1.0 / smoothness_constant(full_view).value;
    run_gd(std::move(state), full_view, budget_T, GDConfig{gamma}, sink);
  } else {
    run_adam(std::move(state), full_view, budget_T, inner.adam, sink);
  }
  return records;
}

std::vector<TraceRecord> run_adaptive(const SparseDataset& dataset,
                                      const ScheduleConfig& schedule,
                                      const InnerSolverConfig& inner,
                                      const ReferenceOptimum& reference,
                                      std::size_t eval_stride,
                                      const std::string& run_id, Method method,
                                      const RecordSink& record_sink) {
  check_run_id(run_id);
  check_reference(dataset, reference);
  if (eval_stride < 1) throw std::invalid_argument("eval_stride must be >= 1");

  SampleView full_view = SampleView::full(dataset);
  std::vector<TraceRecord> records;
  auto emit = [&](std::size_t stage, std::size_t sample_size,
                  std::size_t iteration, std::uint64_t grad_evals,
                  const WeightVector& w) {
    records.push_back(make_record(run_id, method, stage, sample_size,
                                  iteration, grad_evals, w, full_view,
                                  reference.L_star));
    if (record_sink) record_sink(records.back());
  };

  auto sizes = stage_sizes(schedule, dataset.n_samples());
  emit(0, sizes.front(), 0, 0, WeightVector(dataset.n_features(), 0.0));

  StageTraceSink sink = [&](const StageTraceEvent& ev, const WeightVector& w) {
    if (ev.iteration % eval_stride == 0 || ev.stage_end)
      emit(ev.stage, ev.sample_size, ev.iteration, ev.grad_evals, w);
  };

  adaptive_solve(dataset, schedule, inner, sink);
  return records;
}

std::vector<TraceRecord> run_experiment(const SparseDataset& dataset,
                                        Method method,
                                        const ScheduleConfig& schedule,
                                        const InnerSolverConfig& inner,
                                        const ReferenceOptimum& reference,
                                        std::size_t eval_stride,
                                        const std::string& run_id,
                                        const RecordSink& sink) {
  InnerSolverConfig resolved = inner;
  resolved.method = (method == Method::gd || method == Method::adagd)
                        ? InnerSolverConfig::Method::gd
                        : InnerSolverConfig::Method::adam;

  if (is_adaptive(method))
    return run_adaptive(dataset, schedule, resolved, reference, eval_stride,
                        run_id, method, sink);

  // Budget-match the fixed baseline to the adaptive schedule's total cost;
  // one fixed iteration (GD step or ADAM epoch) costs n_samples evaluations.
  std::uint64_t planned = planned_grad_evals(schedule, dataset.n_samples());
  std::uint64_t n = dataset.n_samples();
  auto budget = static_cast<std::size_t>((planned + n - 1) / n);
  return run_fixed(dataset, resolved, budget, reference, eval_stride, run_id,
                   method, sink);
}

void emit_csv(std::span<const TraceRecord> records, std::ostream& out) {
  out << "run_id,method,stage,sample_size,iteration,grad_evals,full_loss,"
         "suboptimality\n";
  for (const TraceRecord& r : records) {
    out << r.run_id << ',' << to_string(r.method) << ',' << r.stage << ','
        << r.sample_size << ',' << r.iteration << ',' << r.grad_evals << ','
        << format_real(r.full_loss) << ',' << format_real(r.suboptimality)
        << '\n';
  }
  if (!out) throw std::runtime_error("failed to write CSV");
}

std::vector<TraceRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line !=
      "run_id,method,stage,sample_size,iteration,grad_evals,full_loss,"
      "suboptimality")
    throw std::runtime_error("unexpected CSV header");

  std::vector<TraceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8)
      throw std::runtime_error("bad CSV row at line " +
                               std::to_string(line_no));

    TraceRecord r;
    r.run_id = fields[0];
    r.method = parse_method(fields[1]);
    r.stage = std::stoull(fields[2]);
    r.sample_size = std::stoull(fields[3]);
    r.iteration = std::stoull(fields[4]);
    r.grad_evals = std::stoull(fields[5]);
    r.full_loss = std::stod(fields[6]);
    r.suboptimality = std::stod(fields[7]);
    records.push_back(std::move(r));
  }
  return records;
}

std::optional<std::uint64_t> first_crossing(
    std::span<const TraceRecord> records, double level) {
  std::optional<std::uint64_t> best;
  for (const TraceRecord& r : records)
    if (r.suboptimality <= level && (!best || r.grad_evals < *best))
      best = r.grad_evals;
  return best;
}

}  // namespace adaerm
