#include "jtrx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jtrx {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::MaxItersExceeded: return "MaxItersExceeded";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

PowerSolve negated_solve(const RMatrix& A, const RVector& rhs) {
  PowerSolve out;
  try {
    numerics::LinearSolve ls = numerics::solve_linear(A, rhs);
    out.rcond = ls.rcond;
    out.powers = -ls.x;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular) throw;
    out.verdict = PowerSolve::Verdict::NearSingular;
    return out;
  }
  if (out.rcond < kNearSingularRcond) {
    out.verdict = PowerSolve::Verdict::NearSingular;
  } else if ((out.powers.array() < 0.0).any()) {
    out.verdict = PowerSolve::Verdict::Infeasible;
  } else {
    out.verdict = PowerSolve::Verdict::Feasible;
  }
  return out;
}

double max_relative_error(const RMatrix& sinr, const RMatrix& gamma) {
  return ((sinr.array() / gamma.array()) - 1.0).abs().maxCoeff();
}

double frobenius_step(const std::vector<CMatrix>& before, const std::vector<CMatrix>& after) {
  double s = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k) s += (before[k] - after[k]).norm();
  return s;
}

}  // namespace

PowerSolve uplink_powers(const ConstraintSystem& sys, const RVector& w) {
  return negated_solve(sys.C.transpose(), w);
}

PowerSolve downlink_powers(const ConstraintSystem& sys) { return negated_solve(sys.C, sys.d); }

double uplink_load(const ConstraintSystem& sys) {
  const Eigen::Index n = sys.C.rows();
  RMatrix F(n, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index r = 0; r < n; ++r) F(t, r) = r == t ? 0.0 : sys.C(r, t) / -sys.C(t, t);
  }
  Eigen::EigenSolver<RMatrix> es(F, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "uplink load eigenvalues did not converge");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

PowerSolve balanced_uplink_powers(const ConstraintSystem& sys, const RVector& w, double margin) {
  const double load = uplink_load(sys);
  ConstraintSystem relaxed = sys;
  if (load > 0.0) {
    // Scaling every target by s scales the load by s.
    const double scale = (1.0 - margin) / load;
    for (Eigen::Index r = 0; r < relaxed.C.rows(); ++r) relaxed.C(r, r) = sys.C(r, r) / scale;
  }
  return uplink_powers(relaxed, w);
}

PowerSolve solve_uplink_powers(const BeamformerState& state, const ChannelSet& channels,
                               const SystemConfig& config) {
  return uplink_powers(constraint_system(state, channels, config), config.w);
}

PowerSolve solve_downlink_powers(const BeamformerState& state, const ChannelSet& channels,
                                 const SystemConfig& config) {
  return downlink_powers(constraint_system(state, channels, config));
}

BeamformerState update_receive_filters(const BeamformerState& state, const ChannelSet& channels,
                                       const SystemConfig& config) {
  check_shapes(config, channels);
  check_shapes(config, state);
  BeamformerState next = state;
  for (int k = 0; k < config.K; ++k) {
    for (int j = 0; j < config.L; ++j) {
      next.A[k].col(j) =
          numerics::dominant_gen_eigvec(downlink_covariances(state, channels, config, k, j)).vector;
    }
  }
  return next;
}

BeamformerState update_transmit_filters(const BeamformerState& state, const ChannelSet& channels,
                                        const SystemConfig& config) {
  check_shapes(config, channels);
  check_shapes(config, state);
  BeamformerState next = state;
  for (int k = 0; k < config.K; ++k) {
    for (int j = 0; j < config.L; ++j) {
      next.B[k].col(j) =
          numerics::dominant_gen_eigvec(uplink_covariances(state, channels, config, k, j)).vector;
    }
  }
  return next;
}

DualityAudit audit_duality(const BeamformerState& state, const ChannelSet& channels,
                           const SystemConfig& config) {
  const ConstraintSystem sys = constraint_system(state, channels, config);
  DualityAudit a;
  a.primal_objective = config.w.dot(state.p);
  a.dual_objective = sys.d.dot(state.lambda);
  a.gap = std::abs(a.primal_objective - a.dual_objective) /
          std::max(a.primal_objective, std::numeric_limits<double>::min());
  a.max_dl_sinr_error = max_relative_error(sinr_downlink(state, channels, config), config.gamma);
  a.max_ul_sinr_error = max_relative_error(sinr_uplink(state, channels, config), config.gamma);
  return a;
}

SolveReport solve(const SystemConfig& config, const ChannelSet& channels,
                  const SolveOptions& options, std::uint64_t seed) {
  return solve_from(config, channels, options, init_state(config, seed));
}

SolveReport solve_from(const SystemConfig& config, const ChannelSet& channels,
                       const SolveOptions& options, BeamformerState initial) {
  SolveReport report;
  report.state = std::move(initial);
  BeamformerState& state = report.state;

  auto stop = [&report](SolveStatus status, std::string message) {
    report.status = status;
    report.message = std::move(message);
    return report;
  };
  auto power_failure = [&](const PowerSolve& ps, const char* which) {
    if (ps.verdict == PowerSolve::Verdict::Infeasible) {
      return stop(SolveStatus::Infeasible,
                  std::string("negative ") + which + " power: SINR targets not attainable");
    }
    return stop(SolveStatus::NumericalFailure, std::string("near-singular C in ") + which + " solve");
  };

  try {
    check_shapes(config, channels);
    check_shapes(config, state);
    for (int n = 0; n < options.max_iters; ++n) {
      report.iterations = n + 1;
      const std::vector<CMatrix> prev_A = state.A;
      const std::vector<CMatrix> prev_B = state.B;

      // 1) primal downlink: A^(n+1) from (B^(n), p^(n)), then lambda^(n).
      state = update_receive_filters(state, channels, config);
      const ConstraintSystem sys_ul = constraint_system(state, channels, config);
      PowerSolve ul = uplink_powers(sys_ul, config.w);
      bool relaxed = false;
      if (ul.verdict == PowerSolve::Verdict::Infeasible) {
        ul = balanced_uplink_powers(sys_ul, config.w, options.balance_margin);
        relaxed = true;
      }
      if (!ul.feasible()) return power_failure(ul, "uplink");
      state.lambda = ul.powers;

      // 2) virtual uplink: B^(n+1) from (A^(n+1), lambda^(n)), then p^(n+1).
      state = update_transmit_filters(state, channels, config);
      const ConstraintSystem sys = constraint_system(state, channels, config);
      const PowerSolve dl = downlink_powers(sys);
      if (!dl.feasible()) return power_failure(dl, "downlink");
      state.p = dl.powers;

      IterationRecord rec;
      rec.iteration = n + 1;
      rec.primal_objective = config.w.dot(state.p);
      rec.dual_objective = sys.d.dot(state.lambda);
      rec.step = frobenius_step(prev_A, state.A) + frobenius_step(prev_B, state.B);
      rec.min_power = state.p.minCoeff();
      rec.uplink_relaxed = relaxed;
      const PowerSolve dual_now = uplink_powers(sys, config.w);
      rec.identity_gap = std::numeric_limits<double>::quiet_NaN();
      if (dual_now.verdict != PowerSolve::Verdict::NearSingular) {
        rec.identity_gap = std::abs(rec.primal_objective - sys.d.dot(dual_now.powers)) /
                           std::abs(rec.primal_objective);
      }
      report.trace.push_back(rec);

      if (rec.step <= options.epsilon) {
        // lambda^(n) belongs to C^(n); re-solve on the final beamformers so the
        // reported pair (p, lambda) shares one constraint system.
        if (!dual_now.feasible()) return power_failure(dual_now, "final uplink");
        state.lambda = dual_now.powers;
        report.audit = audit_duality(state, channels, config);
        return stop(SolveStatus::Converged, "");
      }
    }
  } catch (const Error& e) {
    return stop(SolveStatus::NumericalFailure, e.what());
  }
  return stop(SolveStatus::MaxItersExceeded,
              "step size above epsilon after " + std::to_string(options.max_iters) + " iterations");
}

}  // namespace jtrx
