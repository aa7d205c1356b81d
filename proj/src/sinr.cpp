#include "jtrx/sinr.hpp"

#include <string>

namespace jtrx {

namespace {

std::string substream_name(int k, int j) {
  return "(" + std::to_string(index::to_one_based(k)) + "," + std::to_string(index::to_one_based(j)) + ")";
}

double quotient(const numerics::HermitianPair& pair, const CVector& v, int k, int j) {
  const double num = v.dot(pair.X * v).real();
  const double den = v.dot(pair.Y * v).real();
  if (!(den > 0.0)) {
    throw Error(ErrorKind::DegenerateDenominator, "substream " + substream_name(k, j));
  }
  return num / den;
}

}  // namespace

GainTensor gain_tensor(const BeamformerState& state, const ChannelSet& channels,
                       const SystemConfig& config) {
  check_shapes(config, channels);
  check_shapes(config, state);
  const int KL = config.streams();
  GainTensor g{RMatrix(KL, KL)};
  for (int k = 0; k < config.K; ++k) {
    // Row k of the effective channel: A_k^H H_k B_m, one block per user m.
    const CMatrix AH = state.A[k].adjoint() * channels.H[k];
    for (int m = 0; m < config.K; ++m) {
      const CMatrix block = AH * state.B[m];
      for (int j = 0; j < config.L; ++j) {
        for (int n = 0; n < config.L; ++n) {
          g.phi(index::flat(k, j, config.L), index::flat(m, n, config.L)) = std::norm(block(j, n));
        }
      }
    }
  }
  return g;
}

numerics::HermitianPair downlink_covariances(const BeamformerState& state,
                                             const ChannelSet& channels,
                                             const SystemConfig& config, int k, int j) {
  const CMatrix& H = channels.H[k];
  const int L = config.L;
  const int Nk = config.N[k];

  const CVector hb = H * state.B[k].col(j);
  numerics::HermitianPair pair;
  pair.X = state.p(index::flat(k, j, L)) * (hb * hb.adjoint());

  pair.Y = config.sigma2 * CMatrix::Identity(Nk, Nk);
  // self-interference
  for (int i = 0; i < L; ++i) {
    if (i == j) continue;
    const CVector hbi = H * state.B[k].col(i);
    pair.Y += state.p(index::flat(k, i, L)) * (hbi * hbi.adjoint());
  }
  // multiuser interference: H_k B_m diag(p_m) B_m^H H_k^H
  for (int m = 0; m < config.K; ++m) {
    if (m == k) continue;
    const CMatrix HB = H * state.B[m];
    const RVector pm = state.p.segment(config.user_offset(m), L);
    pair.Y += HB * pm.cast<cd>().asDiagonal() * HB.adjoint();
  }
  return pair;
}

numerics::HermitianPair uplink_covariances(const BeamformerState& state,
                                           const ChannelSet& channels,
                                           const SystemConfig& config, int k, int j) {
  const int L = config.L;
  const int M = config.M;
  const CMatrix HkH = channels.H[k].adjoint();

  const CVector ha = HkH * state.A[k].col(j);
  numerics::HermitianPair pair;
  pair.X = state.lambda(index::flat(k, j, L)) * (ha * ha.adjoint());

  pair.Y = config.w(index::flat(k, j, L)) * CMatrix::Identity(M, M);
  for (int i = 0; i < L; ++i) {
    if (i == j) continue;
    const CVector hai = HkH * state.A[k].col(i);
    pair.Y += state.lambda(index::flat(k, i, L)) * (hai * hai.adjoint());
  }
  for (int m = 0; m < config.K; ++m) {
    if (m == k) continue;
    const CMatrix HA = channels.H[m].adjoint() * state.A[m];
    const RVector lm = state.lambda.segment(config.user_offset(m), L);
    pair.Y += HA * lm.cast<cd>().asDiagonal() * HA.adjoint();
  }
  return pair;
}

RMatrix sinr_downlink(const BeamformerState& state, const ChannelSet& channels,
                      const SystemConfig& config) {
  check_shapes(config, channels);
  check_shapes(config, state);
  RMatrix out(config.K, config.L);
  for (int k = 0; k < config.K; ++k) {
    for (int j = 0; j < config.L; ++j) {
      out(k, j) = quotient(downlink_covariances(state, channels, config, k, j),
                           state.A[k].col(j), k, j);
    }
  }
  return out;
}

RMatrix sinr_downlink_from_gains(const GainTensor& gains, const BeamformerState& state,
                                 const SystemConfig& config) {
  const int KL = config.streams();
  RMatrix out(config.K, config.L);
  for (int r = 0; r < KL; ++r) {
    const int k = index::user_of(r, config.L);
    const int j = index::substream_of(r, config.L);
    double interference = config.sigma2 * state.A[k].col(j).squaredNorm();
    for (int t = 0; t < KL; ++t) {
      if (t != r) interference += state.p(t) * gains.phi(r, t);
    }
    if (!(interference > 0.0)) {
      throw Error(ErrorKind::DegenerateDenominator, "substream " + substream_name(k, j));
    }
    out(k, j) = state.p(r) * gains.phi(r, r) / interference;
  }
  return out;
}

RMatrix sinr_uplink(const BeamformerState& state, const ChannelSet& channels,
                    const SystemConfig& config) {
  check_shapes(config, channels);
  check_shapes(config, state);
  RMatrix out(config.K, config.L);
  for (int k = 0; k < config.K; ++k) {
    for (int j = 0; j < config.L; ++j) {
      out(k, j) = quotient(uplink_covariances(state, channels, config, k, j),
                           state.B[k].col(j), k, j);
    }
  }
  return out;
}

ConstraintSystem constraint_system(const GainTensor& gains, const BeamformerState& state,
                                   const SystemConfig& config) {
  const int KL = config.streams();
  if (gains.phi.rows() != KL || gains.phi.cols() != KL) {
    throw Error(ErrorKind::DimensionMismatch, "gain tensor is not KL x KL");
  }
  ConstraintSystem sys{gains.phi, RVector(KL)};
  for (int r = 0; r < KL; ++r) {
    const int k = index::user_of(r, config.L);
    const int j = index::substream_of(r, config.L);
    const double direct = gains.phi(r, r);
    if (!(direct > 0.0)) {
      throw Error(ErrorKind::DegenerateGain, "direct gain of substream " + substream_name(k, j));
    }
    sys.C(r, r) = -direct / config.gamma(k, j);
    sys.d(r) = config.sigma2 * state.A[k].col(j).squaredNorm();
  }
  return sys;
}

ConstraintSystem constraint_system(const BeamformerState& state, const ChannelSet& channels,
                                   const SystemConfig& config) {
  return constraint_system(gain_tensor(state, channels, config), state, config);
}

}  // namespace jtrx
