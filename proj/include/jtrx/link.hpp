#pragma once

#include <cstdint>

#include "jtrx/solver.hpp"

namespace jtrx {

/// Gray-labeled unit-energy QPSK point for a 2-bit label: bit 0 picks the sign
/// of the real part, bit 1 the sign of the imaginary part.
cd qpsk_symbol(unsigned label);

/// Symbol error rate of QPSK on an AWGN link at the given linear SINR,
/// 2 Q(sqrt(g)) (1 - Q(sqrt(g)) / 2).
double qpsk_ser_reference(double sinr);

struct LinkMeasurement {
  RMatrix empirical_sinr;  // K x L, linear
  RMatrix ser;             // K x L symbol error rate
  RMatrix ser_reference;   // K x L, AWGN prediction at the target
  long symbols = 0;
};

struct LinkOptions {
  long symbols = 100000;
  double noise_scale = 1.0;  // multiplies the noise standard deviation; 0 disables noise
};

/// Pushes i.i.d. QPSK symbol vectors through y_k = A_k^H (H_k sum_i B_i
/// diag(sqrt(p_i)) x_i + n_k) with the solved filters and powers, and
/// measures each substream's SINR from the known symbols: with
/// g = mean(y x*), SINR = |g|^2 / mean|y - g x|^2.
///
/// Throws NotConverged unless report.status is Converged.
LinkMeasurement measure_link(const SystemConfig& config, const ChannelSet& channels,
                             const SolveReport& report, const LinkOptions& options,
                             std::uint64_t seed);

}  // namespace jtrx
