// Acceptance suite: runs each numbered criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "jtrx/experiment.hpp"
#include "oracles.hpp"

using namespace jtrx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double max_db_error(const RMatrix& sinr, const RMatrix& gamma) {
  return (10.0 * (sinr.array() / gamma.array()).log10()).abs().maxCoeff();
}

Outcome scalar_closed_form() {
  const SystemConfig c = fixture::scalar_config(4.0);
  const SolveReport r = solve(c, fixture::scalar_channel(), SolveOptions::from(c), 1);
  Outcome o;
  o.pass = r.status == SolveStatus::Converged && r.iterations <= 3 &&
           std::abs(r.state.p(0) - 4.0) < 1e-10 && r.audit && r.audit->gap < 1e-12;
  o.detail = format("status %s, p = %.15g, %d iterations, gap %.2e",
                    std::string(to_string(r.status)).c_str(), r.state.p(0), r.iterations,
                    r.audit ? r.audit->gap : NAN);
  return o;
}

struct Instance {
  SystemConfig config;
  ChannelSet channels;
  SolveReport report;
};

// 50 instances of M=8, N=2, L=2, 10 dB over K = 2, 3, 4, solved once and
// shared by criteria 2 and 3.
std::vector<Instance> feasible_instances(double& elapsed) {
  std::vector<Instance> out;
  for (int i = 0; i < 50; ++i) {
    Instance in;
    in.config = make_uniform_config(8, 2 + i % 3, 2, 2, 10.0, 5.0);
    out.push_back(std::move(in));
  }
  const auto t0 = Clock::now();
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
    out[i].channels = draw_channels(out[i].config, seed);
    out[i].report = solve(out[i].config, out[i].channels, SolveOptions::from(out[i].config), seed);
  }
  elapsed = seconds_since(t0);
  return out;
}

Outcome targets_active(const std::vector<Instance>& instances, double elapsed) {
  Outcome o;
  int converged = 0;
  double worst = 0.0;
  for (const Instance& in : instances) {
    if (in.report.status != SolveStatus::Converged) {
      o.pass = false;
      continue;
    }
    ++converged;
    worst = std::max({worst, max_db_error(sinr_downlink(in.report.state, in.channels, in.config), in.config.gamma),
                      max_db_error(sinr_uplink(in.report.state, in.channels, in.config), in.config.gamma)});
  }
  o.pass = o.pass && worst <= 0.01 && elapsed < 30.0;
  o.detail = format("%d/50 converged, worst |SINR - target| %.2e dB, %.1f s", converged, worst, elapsed);
  return o;
}

Outcome duality(const std::vector<Instance>& instances) {
  Outcome o;
  double worst_gap = 0.0, worst_identity = 0.0;
  long checked = 0;
  for (const Instance& in : instances) {
    if (!in.report.audit) {
      o.pass = false;
      continue;
    }
    worst_gap = std::max(worst_gap, in.report.audit->gap);
    for (const IterationRecord& rec : in.report.trace) {
      if (!std::isfinite(rec.identity_gap)) continue;
      worst_identity = std::max(worst_identity, rec.identity_gap);
      ++checked;
    }
  }
  o.pass = o.pass && worst_gap < 1e-6 && worst_identity <= 1e-9 && checked > 0;
  o.detail = format("worst gap %.2e, worst per-iteration identity %.2e over %ld iterations",
                    worst_gap, worst_identity, checked);
  return o;
}

Outcome fixed_point_oracle() {
  std::mt19937_64 g(2024);
  double worst = 0.0;
  int solved = 0;
  for (int trial = 0; trial < 20; ++trial) {
    SystemConfig c = make_uniform_config(2, 2, 1, 1, 0.0);
    c.sigma2 = 0.5 + trial * 0.05;
    const ChannelSet ch{{oracle::random_complex(g, 1, 2), oracle::random_complex(g, 1, 2)}};
    const BeamformerState s = fixture::random_state(c, g);
    const RMatrix phi = oracle::gains(c, ch, s);
    c.gamma.setConstant(0.5 / std::sqrt(phi(0, 1) / phi(0, 0) * phi(1, 0) / phi(1, 1)));
    RVector noise(2);
    for (int r = 0; r < 2; ++r) noise(r) = c.sigma2 * s.A[r].squaredNorm();
    const RVector ref = oracle::fixed_point_powers(phi, oracle::flat_targets(c), noise, false);
    const PowerSolve dl = solve_downlink_powers(s, ch, c);
    if (!dl.feasible()) continue;
    ++solved;
    worst = std::max(worst, (dl.powers - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
  }
  return {solved == 20 && worst <= 1e-8, format("%d/20 solved, worst relative error %.2e", solved, worst)};
}

Outcome gamma_trend() {
  const auto t0 = Clock::now();
  const std::vector<double> grid{-10, -5, 0, 5, 10};
  std::vector<ResultTable> tables;
  for (int K = 2; K <= 4; ++K) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::SweepGamma;
    spec.base = make_uniform_config(8, K, 2, 2, 0.0, 5.0);
    spec.options = SolveOptions::from(spec.base);
    spec.sweep = grid;
    spec.trials = 100;
    tables.push_back(run_experiment(spec));
  }
  const double elapsed = seconds_since(t0);
  bool in_gamma = true, in_k = true;
  std::string levels;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    levels += format(" K=%zu:", k + 2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const SweepPoint& pt = tables[k].summary[i];
      levels += format(" %.1f", pt.mean_total_power_db);
      if (pt.converged == 0) in_gamma = false;
      if (i > 0 && !(pt.mean_total_power_db > tables[k].summary[i - 1].mean_total_power_db)) in_gamma = false;
      if (k > 0 && !(pt.mean_total_power_db > tables[k - 1].summary[i].mean_total_power_db)) in_k = false;
    }
  }
  return {in_gamma && in_k && elapsed < 300.0,
          format("increasing in gamma: %s, in K: %s, %.1f s;", in_gamma ? "yes" : "no",
                 in_k ? "yes" : "no", elapsed) + levels + " dB"};
}

Outcome feasibility_cliff() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SweepGamma;
  spec.base = make_uniform_config(8, 8, 2, 2, 0.0, 5.0);
  spec.options = SolveOptions::from(spec.base);
  spec.sweep = {10.0, 0.0};
  spec.trials = 50;
  const ResultTable t = run_experiment(spec);
  const SweepPoint& hi = t.summary[0];
  const SweepPoint& lo = t.summary[1];
  const bool pass_hi = hi.infeasible >= 40;
  const bool pass_lo = lo.converged >= 25;
  return {pass_hi && pass_lo,
          format("10 dB: %d/50 Infeasible (need >= 40: %s); 0 dB: %d/50 Converged (need >= 25: %s)",
                 hi.infeasible, pass_hi ? "ok" : "no", lo.converged, pass_lo ? "ok" : "no")};
}

Outcome weight_tradeoff() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SweepWeight;
  spec.base = make_uniform_config(8, 4, 2, 2, 10.0, 1.0);
  spec.options = SolveOptions::from(spec.base);
  spec.sweep = {1, 2, 5, 10, 20};
  spec.trials = 100;
  const ResultTable t = run_experiment(spec);
  const auto& s = t.summary;
  bool monotone = true;
  int converged = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    converged += s[i].converged;
    if (i > 0 && s[i].mean_user1_power_db > s[i - 1].mean_user1_power_db) monotone = false;
  }
  const double drop = s.front().mean_user1_power_db - s.back().mean_user1_power_db;
  const double rise = s.back().mean_total_power_db - s.front().mean_total_power_db;
  return {drop >= 7.0 && drop <= 13.0 && rise <= 2.5 && monotone,
          format("MS1 drop %.2f dB, total rise %.2f dB, MS1 monotone: %s, %d/500 converged", drop, rise,
                 monotone ? "yes" : "no", converged)};
}

Outcome link_level() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::VerifyLink;
  spec.base = make_uniform_config(8, 4, 2, 2, 10.0, 5.0);
  spec.options = SolveOptions::from(spec.base);
  spec.trials = 10;
  spec.link.symbols = 100000;
  const ResultTable t = run_experiment(spec);
  int measured = 0;
  double worst = 0.0;
  for (const ResultRow& r : t.rows) {
    if (r.status != "Converged") continue;
    ++measured;
    for (double db : r.empirical_sinr_db) worst = std::max(worst, std::abs(db - 10.0));
  }
  return {measured == 10 && worst <= 0.3,
          format("%d/10 instances measured, worst deviation %.3f dB", measured, worst)};
}

// Compact versions of the property suites: formula equivalence, phase
// invariance, constraint sign pattern, update optimality and monotonicity.
Outcome properties() {
  std::mt19937_64 g(77);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  SystemConfig c = make_uniform_config(4, 3, 2, 2, 3.0, 2.0);
  double eq_err = 0.0, phase_err = 0.0;
  int sign_violations = 0, quotient_violations = 0, mono_violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelSet ch = draw_channels(c, 5000 + trial);
    const BeamformerState s = fixture::random_state(c, g);
    const RMatrix dl = sinr_downlink(s, ch, c);
    const RMatrix dl_gain = sinr_downlink_from_gains(gain_tensor(s, ch, c), s, c);
    eq_err = std::max(eq_err, ((dl - dl_gain).array() / dl_gain.array()).abs().maxCoeff());

    BeamformerState rot = s;
    for (int k = 0; k < c.K; ++k) {
      for (int j = 0; j < c.L; ++j) {
        rot.A[k].col(j) *= std::polar(1.0, angle(g));
        rot.B[k].col(j) *= std::polar(1.0, angle(g));
      }
    }
    const RMatrix ul = sinr_uplink(s, ch, c);
    phase_err = std::max({phase_err, ((sinr_downlink(rot, ch, c) - dl).array() / dl.array()).abs().maxCoeff(),
                          ((sinr_uplink(rot, ch, c) - ul).array() / ul.array()).abs().maxCoeff()});

    const ConstraintSystem sys = constraint_system(s, ch, c);
    for (int r = 0; r < c.streams(); ++r) {
      for (int t = 0; t < c.streams(); ++t) sign_violations += (r == t) ? sys.C(r, t) >= 0.0 : sys.C(r, t) < 0.0;
    }

    const BeamformerState a_new = update_receive_filters(s, ch, c);
    const BeamformerState b_new = update_transmit_filters(s, ch, c);
    const int k = trial % c.K, j = trial % c.L;
    const auto dlc = downlink_covariances(s, ch, c, k, j);
    const auto ulc = uplink_covariances(s, ch, c, k, j);
    const double best_a = oracle::quotient(dlc.X, dlc.Y, a_new.A[k].col(j));
    const double best_b = oracle::quotient(ulc.X, ulc.Y, b_new.B[k].col(j));
    for (int i = 0; i < 100; ++i) {
      quotient_violations += best_a < oracle::quotient(dlc.X, dlc.Y, oracle::random_unit(g, c.N[k])) * (1 - 1e-12);
      quotient_violations += best_b < oracle::quotient(ulc.X, ulc.Y, oracle::random_unit(g, c.M)) * (1 - 1e-12);
    }

    const int t = trial % c.streams();
    BeamformerState up = s;
    up.lambda(t) *= 1.25;
    const RMatrix ul_up = sinr_uplink(up, ch, c);
    for (int r = 0; r < c.streams(); ++r) {
      const double before = ul(r / c.L, r % c.L), after = ul_up(r / c.L, r % c.L);
      mono_violations += (r == t) ? !(after > before) : !(after < before);
    }
  }
  const bool pass = eq_err <= 1e-10 && phase_err <= 1e-12 && sign_violations == 0 &&
                    quotient_violations == 0 && mono_violations == 0;
  return {pass, format("cov/gain %.1e, phase %.1e, sign %d, quotient %d, monotonicity %d violations", eq_err,
                       phase_err, sign_violations, quotient_violations, mono_violations)};
}

}  // namespace

int main() {
  double shared_elapsed = 0.0;
  std::vector<Instance> instances;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"scalar closed form", scalar_closed_form},
      {"active SINR targets", [&] {
         instances = feasible_instances(shared_elapsed);
         return targets_active(instances, shared_elapsed);
       }},
      {"duality audit", [&] { return duality(instances); }},
      {"fixed-point power oracle", fixed_point_oracle},
      {"total power trend vs gamma and K", gamma_trend},
      {"K=8 feasibility cliff", feasibility_cliff},
      {"MS1 weight trade-off", weight_tradeoff},
      {"QPSK link-level SINR", link_level},
      {"property suites", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
