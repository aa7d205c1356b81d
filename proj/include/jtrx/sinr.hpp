#pragma once

#include "jtrx/model.hpp"
#include "jtrx/numerics.hpp"

namespace jtrx {

/// Link power gains between every transmitted substream and every receive
/// filter output: phi(r, t) = |a_r^H H_{user(r)} b_t|^2 with r, t flat
/// substream indices. The receiving user's channel is used for all t.
struct GainTensor {
  RMatrix phi;  // KL x KL, row = receiving substream, column = transmitted substream

  double at(int k, int j, int m, int n, int L) const {
    return phi(index::flat(k, j, L), index::flat(m, n, L));
  }
};

/// Linear form of the downlink SINR constraints, C p + d <= 0.
struct ConstraintSystem {
  RMatrix C;  // KL x KL
  RVector d;  // KL, sigma2 * ||a_r||^2
};

GainTensor gain_tensor(const BeamformerState& state, const ChannelSet& channels,
                       const SystemConfig& config);

/// Signal and interference-plus-noise covariances seen by receive filter
/// a_{k,j} in the downlink (N_k x N_k).
numerics::HermitianPair downlink_covariances(const BeamformerState& state,
                                             const ChannelSet& channels,
                                             const SystemConfig& config, int user, int sub);

/// Signal and interference-plus-noise covariances seen by b_{k,j} in the
/// virtual uplink (M x M). Users transmit through A_m with powers lambda over
/// H_m^H; the noise level of substream (k, j) is its weight w_{(k,j)}.
numerics::HermitianPair uplink_covariances(const BeamformerState& state,
                                           const ChannelSet& channels,
                                           const SystemConfig& config, int user, int sub);

/// Downlink post-SINR from the covariance form, K x L.
RMatrix sinr_downlink(const BeamformerState& state, const ChannelSet& channels,
                      const SystemConfig& config);

/// Downlink post-SINR from link power gains, K x L. Same quantity as
/// sinr_downlink, computed through a different path.
RMatrix sinr_downlink_from_gains(const GainTensor& gains, const BeamformerState& state,
                                 const SystemConfig& config);

/// Virtual-uplink post-SINR from the covariance form, K x L.
RMatrix sinr_uplink(const BeamformerState& state, const ChannelSet& channels,
                    const SystemConfig& config);

/// Builds C and d row by row. Row r = (k, j) carries -phi(r, r) / gamma_{k,j}
/// on the diagonal and phi(r, t) elsewhere. Throws DegenerateGain when a
/// direct gain phi(r, r) is zero.
ConstraintSystem constraint_system(const BeamformerState& state, const ChannelSet& channels,
                                   const SystemConfig& config);
ConstraintSystem constraint_system(const GainTensor& gains, const BeamformerState& state,
                                   const SystemConfig& config);

}  // namespace jtrx
