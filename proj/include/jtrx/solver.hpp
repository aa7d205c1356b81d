#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jtrx/model.hpp"
#include "jtrx/sinr.hpp"

namespace jtrx {

struct SolveOptions {
  double epsilon = 1e-4;
  int max_iters = 5000;
  double audit_tolerance = 1e-6;
  // When -(C^T)^{-1} w has a negative entry the uplink targets are scaled by
  // (1 - balance_margin) / rho, rho the spectral radius of the normalized
  // uplink cross-gain matrix, and the balanced powers drive the B update.
  double balance_margin = 1e-5;

  static SolveOptions from(const SystemConfig& config) {
    SolveOptions o;
    o.epsilon = config.epsilon;
    o.max_iters = config.max_iters;
    return o;
  }
};

enum class SolveStatus { Converged, Infeasible, MaxItersExceeded, NumericalFailure };

std::string_view to_string(SolveStatus status);

/// Reciprocal condition below which a power solve is a numerical failure
/// rather than a feasibility verdict.
inline constexpr double kNearSingularRcond = 1e-12;

struct PowerSolve {
  enum class Verdict { Feasible, Infeasible, NearSingular };
  Verdict verdict = Verdict::NearSingular;
  RVector powers;      // filled whenever the linear solve itself succeeded
  double rcond = 0.0;

  bool feasible() const { return verdict == Verdict::Feasible; }
};

/// lambda = -(C^T)^{-1} w.
PowerSolve uplink_powers(const ConstraintSystem& sys, const RVector& w);
/// p = -C^{-1} d.
PowerSolve downlink_powers(const ConstraintSystem& sys);

/// Spectral radius of the uplink cross-gain matrix normalized by the direct
/// gains and targets: F(t, r) = gamma_t phi(r, t) / phi(t, t) for r != t. The
/// uplink targets are attainable for the given beamformers iff it is < 1.
double uplink_load(const ConstraintSystem& sys);

/// Uplink powers for targets uniformly scaled to (1 - margin) / uplink_load,
/// i.e. SINR-balanced powers just inside the feasibility boundary.
PowerSolve balanced_uplink_powers(const ConstraintSystem& sys, const RVector& w, double margin);

PowerSolve solve_uplink_powers(const BeamformerState& state, const ChannelSet& channels,
                               const SystemConfig& config);
PowerSolve solve_downlink_powers(const BeamformerState& state, const ChannelSet& channels,
                                 const SystemConfig& config);

/// Each a_{k,j} becomes the dominant generalized eigenvector of its downlink
/// (signal, interference+noise) covariance pair, given B and p.
BeamformerState update_receive_filters(const BeamformerState& state, const ChannelSet& channels,
                                       const SystemConfig& config);

/// Each b_{k,j} becomes the dominant generalized eigenvector of its virtual
/// uplink covariance pair, given A and lambda.
BeamformerState update_transmit_filters(const BeamformerState& state, const ChannelSet& channels,
                                        const SystemConfig& config);

struct DualityAudit {
  double primal_objective = 0.0;  // w^T p
  double dual_objective = 0.0;    // d^T lambda
  double gap = 0.0;               // |w^T p - d^T lambda| / max(w^T p, tiny)
  double max_dl_sinr_error = 0.0; // max |SINR_DL / gamma - 1|
  double max_ul_sinr_error = 0.0;
};

DualityAudit audit_duality(const BeamformerState& state, const ChannelSet& channels,
                           const SystemConfig& config);

struct IterationRecord {
  int iteration = 0;
  double primal_objective = 0.0;  // w^T p^(n+1)
  double dual_objective = 0.0;    // d^T lambda^(n)
  double step = 0.0;              // sum_k ||dA_k||_F + sum_k ||dB_k||_F
  double min_power = 0.0;
  // |w^T(-C^{-1} d) - d^T(-(C^T)^{-1} w)| / |w^T(-C^{-1} d)| on C^(n+1), NaN
  // when either solve fails.
  double identity_gap = 0.0;
  bool uplink_relaxed = false;  // lambda^(n) came from balanced_uplink_powers
};

struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  BeamformerState state;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  std::optional<DualityAudit> audit;  // set for Converged runs
  std::string message;
};

/// Alternating downlink/virtual-uplink optimization starting from
/// init_state(config, seed).
SolveReport solve(const SystemConfig& config, const ChannelSet& channels,
                  const SolveOptions& options, std::uint64_t seed);

/// Same loop from a caller-provided starting point (B and p are used).
SolveReport solve_from(const SystemConfig& config, const ChannelSet& channels,
                       const SolveOptions& options, BeamformerState initial);

}  // namespace jtrx
