#include "jtrx/experiment.hpp"

#include <cmath>
#include <limits>

#include "jtrx/config_io.hpp"

namespace jtrx {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SweepGamma: return "sweep-gamma";
    case ExperimentKind::SweepWeight: return "sweep-weight";
    case ExperimentKind::Single: return "single";
    case ExperimentKind::VerifyLink: return "verify-link";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, n). Each task writes only its own output slot,
// so the parallel path reproduces the serial one exactly.
template <class Body>
void for_each_task(int n, Execution execution, Body&& body) {
  if (execution == Execution::Serial) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) body(i);
}

void fill_from_report(ResultRow& row, const SystemConfig& config, const SolveReport& report) {
  row.status = std::string(to_string(report.status));
  row.iterations = report.iterations;
  row.total_power_db = kNaN;
  row.weighted_objective = kNaN;
  row.dual_objective = kNaN;
  row.duality_gap = kNaN;
  row.user_power_db.clear();
  if (report.status != SolveStatus::Converged) return;

  const RVector& p = report.state.p;
  row.total_power_db = linear_to_db(p.sum());
  for (int k = 0; k < config.K; ++k) {
    row.user_power_db.push_back(linear_to_db(p.segment(config.user_offset(k), config.L).sum()));
  }
  row.weighted_objective = report.audit->primal_objective;
  row.dual_objective = report.audit->dual_objective;
  row.duality_gap = report.audit->gap;
}

ResultRow failed_row(const std::string& experiment, std::uint64_t seed, double sweep_value) {
  ResultRow row;
  row.experiment = experiment;
  row.seed = seed;
  row.sweep_value = sweep_value;
  row.status = std::string(to_string(SolveStatus::NumericalFailure));
  row.total_power_db = row.weighted_objective = row.dual_objective = row.duality_gap = kNaN;
  return row;
}

ResultTable make_table(const ExperimentSpec& spec, std::vector<double> sweep) {
  ResultTable t;
  t.experiment = spec.id.empty() ? std::string(to_string(spec.kind)) : spec.id;
  t.kind = spec.kind;
  t.config_hash = config_hash(spec.base);
  t.seed0 = spec.seed0;
  t.trials = spec.trials;
  t.sweep = std::move(sweep);
  t.rows.resize(t.sweep.size() * static_cast<std::size_t>(spec.trials));
  return t;
}

template <class ConfigFor>
ResultTable run_grid(const ExperimentSpec& spec, ConfigFor&& config_for) {
  ResultTable table = make_table(spec, spec.sweep);
  const int points = static_cast<int>(table.sweep.size());
  std::vector<SystemConfig> configs;
  for (double v : table.sweep) configs.push_back(config_for(v));

  for_each_task(points * spec.trials, spec.execution, [&](int task) {
    const int point = task / spec.trials;
    const int trial = task % spec.trials;
    table.rows[task] = run_trial(table.experiment, configs[point], spec.options,
                                 trial_seed(spec, trial), table.sweep[point]);
  });
  table.summary = aggregate(table.rows, table.sweep, spec.mean_db);
  return table;
}

double first_target_db(const SystemConfig& config) { return linear_to_db(config.gamma(0, 0)); }

}  // namespace

std::vector<std::string> validate_spec(const ExperimentSpec& spec) {
  std::vector<std::string> out = validate_config(spec.base);
  if (spec.trials < 1) out.push_back("trials: trials >= 1");
  for (double v : spec.sweep) {
    if (!std::isfinite(v)) out.push_back("sweep: finite values");
  }
  if ((spec.kind == ExperimentKind::SweepGamma || spec.kind == ExperimentKind::SweepWeight) &&
      spec.sweep.empty()) {
    out.push_back("sweep: at least one value");
  }
  if (spec.kind == ExperimentKind::SweepWeight) {
    for (double v : spec.sweep) {
      if (!(v > 0.0)) out.push_back("sweep: weights > 0");
    }
  }
  if (!(spec.retry.backoff > 0.0 && spec.retry.backoff < 1.0)) out.push_back("backoff: in (0, 1)");
  if (spec.retry.max_retries < 0) out.push_back("max_retries: >= 0");
  if (!(spec.options.epsilon > 0.0)) out.push_back("epsilon: epsilon > 0");
  if (spec.options.max_iters < 1) out.push_back("max_iters: max_iters >= 1");
  if (spec.kind == ExperimentKind::VerifyLink && spec.link.symbols < 1) out.push_back("symbols: >= 1");
  return out;
}

SystemConfig with_gamma_db(SystemConfig config, double gamma_db) {
  config.gamma.setConstant(db_to_linear(gamma_db));
  return config;
}

SystemConfig with_edge_weight(SystemConfig config, double w) {
  config.w.setOnes();
  config.w.head(config.L).setConstant(w);
  return config;
}

ResultRow run_trial(const std::string& experiment, const SystemConfig& config,
                    const SolveOptions& options, std::uint64_t seed, double sweep_value) {
  try {
    const ChannelSet channels = draw_channels(config, seed);
    const SolveReport report = solve(config, channels, options, seed);
    ResultRow row;
    row.experiment = experiment;
    row.seed = seed;
    row.sweep_value = sweep_value;
    fill_from_report(row, config, report);
    return row;
  } catch (const std::exception&) {
    return failed_row(experiment, seed, sweep_value);
  }
}

ResultTable run_sweep_gamma(const ExperimentSpec& spec) {
  return run_grid(spec, [&](double gamma_db) { return with_gamma_db(spec.base, gamma_db); });
}

ResultTable run_sweep_weight(const ExperimentSpec& spec) {
  return run_grid(spec, [&](double w) { return with_edge_weight(spec.base, w); });
}

ResultTable run_single(const ExperimentSpec& spec) {
  ResultTable table = make_table(spec, {first_target_db(spec.base)});
  for_each_task(spec.trials, spec.execution, [&](int trial) {
    const std::uint64_t seed = trial_seed(spec, trial);
    SystemConfig config = spec.base;
    ResultRow row;
    try {
      const ChannelSet channels = draw_channels(config, seed);
      for (int attempt = 0;; ++attempt) {
        const SolveReport report = solve(config, channels, spec.options, seed);
        row.experiment = table.experiment;
        row.seed = seed;
        row.sweep_value = first_target_db(config);
        fill_from_report(row, config, report);
        if (report.status != SolveStatus::Infeasible || attempt >= spec.retry.max_retries) break;
        config.gamma *= spec.retry.backoff;
      }
    } catch (const std::exception&) {
      row = failed_row(table.experiment, seed, first_target_db(config));
    }
    table.rows[trial] = std::move(row);
  });
  table.summary = aggregate(table.rows, table.sweep, spec.mean_db);
  return table;
}

ResultTable verify_link(const ExperimentSpec& spec) {
  ResultTable table = make_table(spec, {first_target_db(spec.base)});
  const SystemConfig& config = spec.base;
  for_each_task(spec.trials, spec.execution, [&](int trial) {
    const std::uint64_t seed = trial_seed(spec, trial);
    ResultRow row;
    try {
      const ChannelSet channels = draw_channels(config, seed);
      const SolveReport report = solve(config, channels, spec.options, seed);
      row.experiment = table.experiment;
      row.seed = seed;
      row.sweep_value = table.sweep.front();
      fill_from_report(row, config, report);
      if (report.status == SolveStatus::Converged) {
        const LinkMeasurement link = measure_link(config, channels, report, spec.link, seed);
        for (int r = 0; r < config.streams(); ++r) {
          row.empirical_sinr_db.push_back(linear_to_db(
              link.empirical_sinr(index::user_of(r, config.L), index::substream_of(r, config.L))));
        }
      }
    } catch (const std::exception&) {
      row = failed_row(table.experiment, seed, table.sweep.front());
    }
    table.rows[trial] = std::move(row);
  });
  table.summary = aggregate(table.rows, table.sweep, spec.mean_db);
  return table;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::SweepGamma: return run_sweep_gamma(spec);
    case ExperimentKind::SweepWeight: return run_sweep_weight(spec);
    case ExperimentKind::Single: return run_single(spec);
    case ExperimentKind::VerifyLink: return verify_link(spec);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown experiment kind");
}

std::vector<SweepPoint> aggregate(const std::vector<ResultRow>& rows,
                                  const std::vector<double>& sweep, bool mean_db) {
  std::vector<SweepPoint> out;
  if (sweep.empty()) return out;
  const std::size_t per_point = rows.size() / sweep.size();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    SweepPoint pt;
    pt.value = sweep[i];
    double total = 0.0;
    double user1 = 0.0;
    for (std::size_t r = i * per_point; r < (i + 1) * per_point; ++r) {
      const ResultRow& row = rows[r];
      ++pt.trials;
      if (row.status == to_string(SolveStatus::Converged)) {
        ++pt.converged;
        const double u1 = row.user_power_db.empty() ? kNaN : row.user_power_db.front();
        total += mean_db ? row.total_power_db : db_to_linear(row.total_power_db);
        user1 += mean_db ? u1 : db_to_linear(u1);
      } else if (row.status == to_string(SolveStatus::Infeasible)) {
        ++pt.infeasible;
      } else {
        ++pt.failed;
      }
    }
    if (pt.converged > 0) {
      total /= pt.converged;
      user1 /= pt.converged;
      pt.mean_total_power_db = mean_db ? total : linear_to_db(total);
      pt.mean_user1_power_db = mean_db ? user1 : linear_to_db(user1);
    } else {
      pt.mean_total_power_db = pt.mean_user1_power_db = kNaN;
    }
    pt.infeasible_fraction = pt.trials ? static_cast<double>(pt.infeasible) / pt.trials : 0.0;
    out.push_back(pt);
  }
  return out;
}

}  // namespace jtrx
