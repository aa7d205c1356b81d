// jtrx: seeded Monte Carlo experiments for the joint Tx-Rx beamforming solver.
//
//   jtrx single       --config cfg.json --seed 7 [--max-retries 3 --backoff 0.5]
//   jtrx sweep-gamma  --gamma-db -10,-5,0,5,10 --trials 100 --out sweep.csv
//   jtrx sweep-weight --weights 1,2,5,10,20 --trials 100 --format jsonl --out weight.jsonl
//   jtrx verify-link  --trials 10 --symbols 100000
//
// Exit codes: 0 success, 1 bad config, 2 all trials failed or infeasible,
// 3 IO error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "jtrx/config_io.hpp"
#include "jtrx/experiment.hpp"
#include "jtrx/results_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 1;
constexpr int kExitNoResults = 2;
constexpr int kExitIo = 3;

struct Flags {
  std::string config_path;
  std::uint64_t seed = 1;
  std::optional<int> trials;
  std::string out;
  std::string format = "csv";
  std::vector<double> gamma_db;
  std::vector<double> weights;
  std::optional<double> epsilon;
  std::optional<int> max_iters;
  bool mean_db = false;
  double backoff = 0.5;
  int max_retries = 0;
  long symbols = 100000;
  bool serial = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON system configuration (default: M=8, K=4, N=2, L=2, w=[5,5,1..], 10 dB)");
  cmd->add_option("--seed", f.seed, "base seed; trial t uses seed + t");
  cmd->add_option("--trials", f.trials, "channel draws per sweep point");
  cmd->add_option("--out", f.out, "output file (default: stdout)");
  cmd->add_option("--format", f.format, "csv|jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--gamma-db", f.gamma_db, "SINR target(s) in dB")->delimiter(',');
  cmd->add_option("--epsilon", f.epsilon, "stopping threshold on the beamformer step");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  cmd->add_flag("--mean-db", f.mean_db, "aggregate as mean of dB instead of dB of linear mean");
  cmd->add_flag("--serial", f.serial, "run trials on the serial reference path");
  cmd->add_option("--threads", f.threads, "OpenMP threads (0: runtime default)");
}

jtrx::ExperimentSpec build_spec(jtrx::ExperimentKind kind, const Flags& f) {
  using namespace jtrx;
  ExperimentSpec spec;
  spec.kind = kind;
  spec.base = f.config_path.empty() ? make_uniform_config(8, 4, 2, 2, 10.0, 5.0) : load_config(f.config_path);
  if (f.epsilon) spec.base.epsilon = *f.epsilon;
  if (f.max_iters) spec.base.max_iters = *f.max_iters;
  spec.options = SolveOptions::from(spec.base);
  spec.seed0 = f.seed;
  spec.mean_db = f.mean_db;
  spec.execution = f.serial ? Execution::Serial : Execution::Parallel;
  spec.retry = {f.backoff, f.max_retries};
  spec.link.symbols = f.symbols;

  switch (kind) {
    case ExperimentKind::SweepGamma:
      spec.sweep = f.gamma_db.empty() ? std::vector<double>{-10, -5, 0, 5, 10} : f.gamma_db;
      spec.trials = f.trials.value_or(100);
      break;
    case ExperimentKind::SweepWeight:
      spec.sweep = f.weights.empty() ? std::vector<double>{1, 2, 5, 10, 20} : f.weights;
      spec.trials = f.trials.value_or(100);
      if (f.gamma_db.size() > 1) throw Error(ErrorKind::InvalidConfig, "sweep-weight takes one --gamma-db");
      if (f.gamma_db.size() == 1) spec.base = with_gamma_db(spec.base, f.gamma_db.front());
      break;
    case ExperimentKind::Single:
    case ExperimentKind::VerifyLink:
      spec.trials = f.trials.value_or(kind == ExperimentKind::Single ? 1 : 10);
      if (f.gamma_db.size() > 1) {
        throw Error(ErrorKind::InvalidConfig, std::string(to_string(kind)) + " takes one --gamma-db");
      }
      if (f.gamma_db.size() == 1) spec.base = with_gamma_db(spec.base, f.gamma_db.front());
      break;
  }
  return spec;
}

int run(jtrx::ExperimentKind kind, const Flags& f) {
  using namespace jtrx;
  ExperimentSpec spec;
  ResultFormat format;
  try {
    spec = build_spec(kind, f);
    format = parse_format(f.format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? kExitIo : kExitBadConfig;
  }
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "invalid config: " << v << "\n";
    return kExitBadConfig;
  }
  if (f.threads > 0) omp_set_num_threads(f.threads);

  const ResultTable table = run_experiment(spec);
  try {
    if (f.out.empty()) {
      write_results(std::cout, table, format);
      print_summary(std::cerr, table);
    } else {
      emit_results(table, f.out, format);
      print_summary(std::cout, table);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  int converged = 0;
  for (const auto& p : table.summary) converged += p.converged;
  return converged > 0 ? kExitOk : kExitNoResults;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint Tx-Rx beamforming experiments (weighted sum power under per-substream SINR targets)"};
  app.require_subcommand(1);

  Flags single_flags, gamma_flags, weight_flags, link_flags;

  auto* single = app.add_subcommand("single", "solve independent channel draws, optionally relaxing infeasible targets");
  add_common(single, single_flags);
  single->add_option("--backoff", single_flags.backoff, "linear gamma factor per retry, in (0,1)");
  single->add_option("--max-retries", single_flags.max_retries, "retries after an Infeasible verdict");

  auto* sweep_gamma = app.add_subcommand("sweep-gamma", "total power versus SINR target");
  add_common(sweep_gamma, gamma_flags);

  auto* sweep_weight = app.add_subcommand("sweep-weight", "MS1 and total power versus MS1 weight");
  add_common(sweep_weight, weight_flags);
  sweep_weight->add_option("--weights", weight_flags.weights, "MS1 weight grid")->delimiter(',');

  auto* link = app.add_subcommand("verify-link", "QPSK link-level check of converged solutions");
  add_common(link, link_flags);
  link->add_option("--symbols", link_flags.symbols, "QPSK symbol vectors per instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  if (*single) return run(jtrx::ExperimentKind::Single, single_flags);
  if (*sweep_gamma) return run(jtrx::ExperimentKind::SweepGamma, gamma_flags);
  if (*sweep_weight) return run(jtrx::ExperimentKind::SweepWeight, weight_flags);
  return run(jtrx::ExperimentKind::VerifyLink, link_flags);
}
