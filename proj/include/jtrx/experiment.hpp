#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jtrx/link.hpp"
#include "jtrx/model.hpp"
#include "jtrx/solver.hpp"

namespace jtrx {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ExperimentKind { SweepGamma, SweepWeight, Single, VerifyLink };

std::string_view to_string(ExperimentKind kind);

/// How independent trials are scheduled. Serial is the reference path; the
/// parallel path distributes trials over OpenMP threads and must produce
/// identical rows.
enum class Execution { Serial, Parallel };

struct RetryPolicy {
  double backoff = 0.5;  // linear factor applied to every gamma after an Infeasible solve
  int max_retries = 0;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Single;
  std::string id;
  SystemConfig base;
  std::vector<double> sweep;  // gamma in dB (SweepGamma) or MS1 weight (SweepWeight)
  int trials = 100;
  std::uint64_t seed0 = 1;
  RetryPolicy retry;          // used by Single only
  SolveOptions options;
  LinkOptions link;           // used by VerifyLink only
  bool mean_db = false;       // aggregate as mean of dB instead of dB of mean
  Execution execution = Execution::Parallel;
};

std::vector<std::string> validate_spec(const ExperimentSpec& spec);

struct ResultRow {
  std::string experiment;
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  std::string status;
  double total_power_db = 0.0;          // NaN unless converged
  std::vector<double> user_power_db;    // empty unless converged
  double weighted_objective = 0.0;      // w^T p, NaN unless converged
  double dual_objective = 0.0;          // d^T lambda
  double duality_gap = 0.0;
  int iterations = 0;
  std::vector<double> empirical_sinr_db;  // KL entries when link-verified
};

struct SweepPoint {
  double value = 0.0;
  int trials = 0;
  int converged = 0;
  int infeasible = 0;
  int failed = 0;
  double mean_total_power_db = 0.0;  // over converged trials, NaN if none
  double mean_user1_power_db = 0.0;
  double infeasible_fraction = 0.0;
};

struct ResultTable {
  std::string experiment;
  ExperimentKind kind = ExperimentKind::Single;
  std::string config_hash;
  std::uint64_t seed0 = 0;
  int trials = 0;
  std::vector<double> sweep;
  std::vector<ResultRow> rows;       // ordered by (sweep value, seed)
  std::vector<SweepPoint> summary;   // one per sweep value
};

/// Seed of trial t; channels, initial state and link noise derive from it.
inline std::uint64_t trial_seed(const ExperimentSpec& spec, int trial) {
  return spec.seed0 + static_cast<std::uint64_t>(trial);
}

/// Config for one sweep point: all targets set to gamma_db.
SystemConfig with_gamma_db(SystemConfig config, double gamma_db);
/// Config for one sweep point: MS1's L weights set to w, everything else 1.
SystemConfig with_edge_weight(SystemConfig config, double w);

/// One solve on draw_channels(config, seed) from init_state(config, seed).
ResultRow run_trial(const std::string& experiment, const SystemConfig& config,
                    const SolveOptions& options, std::uint64_t seed, double sweep_value);

ResultTable run_sweep_gamma(const ExperimentSpec& spec);
ResultTable run_sweep_weight(const ExperimentSpec& spec);
ResultTable run_single(const ExperimentSpec& spec);
ResultTable verify_link(const ExperimentSpec& spec);
ResultTable run_experiment(const ExperimentSpec& spec);

/// Recomputes the per-sweep-value summary from rows.
std::vector<SweepPoint> aggregate(const std::vector<ResultRow>& rows,
                                  const std::vector<double>& sweep, bool mean_db);

}  // namespace jtrx
