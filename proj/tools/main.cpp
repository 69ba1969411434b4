#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaerm/bench.hpp"
#include "adaerm/prng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDivergence = 2;

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

adaerm::SparseDataset load_dataset(const std::string& path,
                                   std::optional<std::size_t> features) {
  auto in = open_input(path);
  return adaerm::parse_libsvm(in, features);
}

struct ConvertArgs {
  std::string images, labels, output;
  int pos = 0, neg = 8;
};

struct ReferenceArgs {
  std::string data, output;
  double threshold = 1e-10;
  std::size_t max_iters = 1'000'000;
  std::optional<std::size_t> features;
};

struct RunArgs {
  std::string method, data, ref, output;
  double alpha = 0.5;
  double zeta = 0.0;  // 0 = pick by method: 1 for GD, 0.5 for ADAM
  std::size_t m0 = 0;  // 0 = max(64, n/64)
  double growth = 2.0;
  std::size_t stage0_multiplier = 3;
  std::uint64_t seed = 0;
  std::size_t eval_stride = 1;
  std::string run_id;
  std::optional<std::size_t> features;
  double gd_step = 0.0;  // 0 = 1/L
  adaerm::AdamConfig adam;
};

struct CompareArgs {
  std::vector<std::string> traces;
};

int do_convert(const ConvertArgs& args) {
  auto images = open_input(args.images, true);
  auto labels = open_input(args.labels, true);
  auto dataset = adaerm::convert_mnist_idx(images, labels, args.pos, args.neg);
  auto out = open_output(args.output);
  adaerm::serialize_libsvm(dataset, out);
  std::cerr << "wrote " << dataset.n_samples() << " samples, "
            << dataset.n_features() << " features to " << args.output << "\n";
  return kExitOk;
}

int do_reference(const ReferenceArgs& args) {
  auto dataset = load_dataset(args.data, args.features);
  auto ref = adaerm::compute_reference(dataset, args.threshold,
                                       args.max_iters);
  auto out = open_output(args.output, true);
  adaerm::save_reference(ref, out);
  std::fprintf(stderr,
               "L_star=%.17g grad_norm=%.3g iterations=%zu%s\n", ref.L_star,
               ref.grad_norm_at_star, ref.iterations_used,
               ref.stale ? " (stale: threshold unmet)" : "");
  return kExitOk;
}

int do_run(RunArgs args) {
  auto method = adaerm::parse_method(args.method);
  auto dataset = load_dataset(args.data, args.features);

  auto ref_in = open_input(args.ref, true);
  auto reference = adaerm::load_reference(ref_in);

  // One global seeded shuffle, so adaptive prefixes are valid subsamples.
  dataset = adaerm::shuffle(dataset, args.seed);

  bool uses_gd = method == adaerm::Method::gd ||
                 method == adaerm::Method::adagd;
  adaerm::ScheduleConfig schedule;
  schedule.alpha = args.alpha;
  schedule.zeta = args.zeta > 0 ? args.zeta : (uses_gd ? 1.0 : 0.5);
  schedule.m0 = args.m0 > 0
                    ? args.m0
                    : std::min(dataset.n_samples(),
                               std::max<std::size_t>(
                                   64, dataset.n_samples() / 64));
  schedule.growth = args.growth;
  schedule.stage0_budget_multiplier = args.stage0_multiplier;

  adaerm::InnerSolverConfig inner;
  inner.adam = args.adam;
  inner.adam.shuffle_seed = adaerm::detail::mix_seed(args.seed, 0x41444D);
  if (args.gd_step > 0) inner.gd_step_size = args.gd_step;

  std::string run_id = args.run_id.empty()
                           ? args.method + "-seed" + std::to_string(args.seed)
                           : args.run_id;

  auto records = adaerm::run_experiment(dataset, method, schedule, inner,
                                        reference, args.eval_stride, run_id);
  auto out = open_output(args.output);
  adaerm::emit_csv(records, out);
  std::cerr << "wrote " << records.size() << " trace records to "
            << args.output << "\n";
  return kExitOk;
}

int do_compare(const CompareArgs& args) {
  struct Trace {
    std::string name;
    std::vector<adaerm::TraceRecord> records;
  };
  std::vector<Trace> traces;
  double min_positive = 1.0;
  for (const auto& path : args.traces) {
    auto in = open_input(path);
    Trace t{path, adaerm::parse_csv(in)};
    if (t.records.empty())
      throw std::runtime_error("trace '" + path + "' has no records");
    t.name = t.records.front().run_id;
    for (const auto& r : t.records)
      if (r.suboptimality > 0)
        min_positive = std::min(min_positive, r.suboptimality);
    traces.push_back(std::move(t));
  }

  std::printf("%-12s", "level");
  for (const auto& t : traces) std::printf(" %20s", t.name.c_str());
  std::printf("\n");

  for (double level = 1.0; level >= min_positive * 0.999 && level > 1e-15;
       level /= 10.0) {
    std::printf("%-12.0e", level);
    for (const auto& t : traces) {
      auto crossing = adaerm::first_crossing(t.records, level);
      if (crossing)
        std::printf(" %20llu", static_cast<unsigned long long>(*crossing));
      else
        std::printf(" %20s", "-");
    }
    std::printf("\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive sample-size ERM benchmark for sublinear solvers"};
  app.require_subcommand(1);
  app.set_config("--config");

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand(
      "convert-mnist", "Convert IDX image/label files to a binary LIBSVM task");
  convert->add_option("images", convert_args.images, "IDX image file")
      ->required();
  convert->add_option("labels", convert_args.labels, "IDX label file")
      ->required();
  convert->add_option("--pos", convert_args.pos, "digit mapped to +1")
      ->capture_default_str();
  convert->add_option("--neg", convert_args.neg, "digit mapped to -1")
      ->capture_default_str();
  convert->add_option("-o,--output", convert_args.output, "output .svm path")
      ->required();

  ReferenceArgs ref_args;
  auto* reference = app.add_subcommand(
      "reference", "Compute the full-data optimum with long gradient descent");
  reference->add_option("data", ref_args.data, "LIBSVM dataset")->required();
  reference->add_option("-o,--output", ref_args.output, "output ref file")
      ->required();
  reference
      ->add_option("--threshold", ref_args.threshold,
                   "gradient norm stopping threshold")
      ->capture_default_str();
  reference->add_option("--max-iters", ref_args.max_iters, "iteration cap")
      ->capture_default_str();
  reference->add_option("--features", ref_args.features,
                        "override inferred feature count");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one solver and emit a CSV trace");
  run->add_option("--method", run_args.method, "gd|adagd|adam|adaadam")
      ->required();
  run->add_option("--data", run_args.data, "LIBSVM dataset")->required();
  run->add_option("--ref", run_args.ref, "reference optimum file")->required();
  run->add_option("--alpha", run_args.alpha, "statistical accuracy exponent")
      ->capture_default_str();
  run->add_option("--zeta", run_args.zeta,
                  "sublinear rate exponent (default 1 for GD, 0.5 for ADAM)");
  run->add_option("--m0", run_args.m0,
                  "initial sample size (default max(64, n/64))");
  run->add_option("--growth", run_args.growth, "sample growth factor")
      ->capture_default_str();
  run->add_option("--stage0-multiplier", run_args.stage0_multiplier,
                  "budget multiplier for the cold-start stage")
      ->capture_default_str();
  run->add_option("--seed", run_args.seed, "seed for data shuffle and ADAM")
      ->required();
  run->add_option("--eval-stride", run_args.eval_stride,
                  "iterations between full-loss evaluations")
      ->capture_default_str();
  run->add_option("--run-id", run_args.run_id, "trace identifier");
  run->add_option("--features", run_args.features,
                  "override inferred feature count");
  run->add_option("--gd-step", run_args.gd_step,
                  "fixed GD step size (default 1/L)");
  run->add_option("--batch-size", run_args.adam.batch_size, "ADAM batch size")
      ->capture_default_str();
  run->add_option("--eta", run_args.adam.eta, "ADAM step size")
      ->capture_default_str();
  run->add_option("--beta1", run_args.adam.beta1, "ADAM first-moment decay")
      ->capture_default_str();
  run->add_option("--beta2", run_args.adam.beta2, "ADAM second-moment decay")
      ->capture_default_str();
  run->add_option("--epsilon", run_args.adam.epsilon, "ADAM denominator guard")
      ->capture_default_str();
  run->add_option("-o,--output", run_args.output, "output CSV path")
      ->required();

  CompareArgs compare_args;
  auto* compare = app.add_subcommand(
      "compare", "Print first-crossing grad_evals per suboptimality level");
  compare
      ->add_option("--traces", compare_args.traces, "CSV traces to compare")
      ->required()
      ->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (convert->parsed()) return do_convert(convert_args);
    if (reference->parsed()) return do_reference(ref_args);
    if (run->parsed()) return do_run(run_args);
    if (compare->parsed()) return do_compare(compare_args);
  } catch (const adaerm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
