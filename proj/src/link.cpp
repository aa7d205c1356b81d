#include "jtrx/link.hpp"

#include <cmath>

namespace jtrx {

namespace {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

unsigned nearest_label(cd z) { return (z.real() < 0.0 ? 1u : 0u) | (z.imag() < 0.0 ? 2u : 0u); }

}  // namespace

cd qpsk_symbol(unsigned label) {
  const double re = (label & 1u) ? -1.0 : 1.0;
  const double im = (label & 2u) ? -1.0 : 1.0;
  return cd(re, im) * M_SQRT1_2;
}

double qpsk_ser_reference(double sinr) {
  const double q = q_function(std::sqrt(sinr));
  return 2.0 * q * (1.0 - 0.5 * q);
}

LinkMeasurement measure_link(const SystemConfig& config, const ChannelSet& channels,
                             const SolveReport& report, const LinkOptions& options,
                             std::uint64_t seed) {
  if (report.status != SolveStatus::Converged) {
    throw Error(ErrorKind::NotConverged,
                "link verification needs a converged solve, got " + std::string(to_string(report.status)));
  }
  const BeamformerState& s = report.state;
  check_shapes(config, channels);
  check_shapes(config, s);

  const int K = config.K;
  const int L = config.L;
  const int KL = config.streams();

  // Effective per-user map from the stacked symbol vector to filter outputs:
  // y_k = G_k x + A_k^H n_k, with G_k = A_k^H H_k [B_1 diag(sqrt p_1) ... ].
  CMatrix precoder(config.M, KL);
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < L; ++n) {
      const int t = index::flat(m, n, L);
      precoder.col(t) = s.B[m].col(n) * std::sqrt(s.p(t));
    }
  }
  std::vector<CMatrix> G(K);
  std::vector<CMatrix> AH(K);
  for (int k = 0; k < K; ++k) {
    AH[k] = s.A[k].adjoint();
    G[k] = AH[k] * channels.H[k] * precoder;
  }

  const double noise_std = std::sqrt(config.sigma2) * options.noise_scale;

  CVector x(KL);
  Eigen::ArrayXcd cross = Eigen::ArrayXcd::Zero(KL);  // sum y x*
  Eigen::ArrayXd power = Eigen::ArrayXd::Zero(KL);    // sum |y|^2
  Eigen::ArrayXi errors = Eigen::ArrayXi::Zero(KL);

  // Two passes with the same stream: gains first, then decisions against the
  // estimated gain. The second pass replays the identical symbols and noise.
  for (int pass = 0; pass < 2; ++pass) {
    GaussianSource rng(seed, kLinkStream);
    Eigen::ArrayXcd gain(KL);
    if (pass == 1) gain = cross / static_cast<double>(options.symbols);
    for (long t = 0; t < options.symbols; ++t) {
      std::vector<unsigned> labels(KL);
      for (int r = 0; r < KL; ++r) {
        labels[r] = rng.uniform() <= 0.5 ? 0u : 1u;
        labels[r] |= rng.uniform() <= 0.5 ? 0u : 2u;
        x(r) = qpsk_symbol(labels[r]);
      }
      for (int k = 0; k < K; ++k) {
        CVector noise(config.N[k]);
        for (int i = 0; i < config.N[k]; ++i) noise(i) = rng.complex_normal() * noise_std;
        const CVector y = G[k] * x + AH[k] * noise;
        for (int j = 0; j < L; ++j) {
          const int r = index::flat(k, j, L);
          if (pass == 0) {
            cross(r) += y(j) * std::conj(x(r));
            power(r) += std::norm(y(j));
          } else if (nearest_label(y(j) / gain(r)) != labels[r]) {
            ++errors(r);
          }
        }
      }
    }
  }
  LinkMeasurement out;
  out.symbols = options.symbols;
  out.empirical_sinr.resize(K, L);
  out.ser.resize(K, L);
  out.ser_reference.resize(K, L);
  const double n = static_cast<double>(options.symbols);
  for (int r = 0; r < KL; ++r) {
    const int k = index::user_of(r, L);
    const int j = index::substream_of(r, L);
    const cd g = cross(r) / n;
    const double signal = std::norm(g);
    const double residual = power(r) / n - signal;  // mean |y - g x|^2, |x| = 1
    out.empirical_sinr(k, j) = signal / residual;
    out.ser(k, j) = errors(r) / n;
    out.ser_reference(k, j) = qpsk_ser_reference(config.gamma(k, j));
  }
  return out;
}

}  // namespace jtrx
