#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "jtrx/types.hpp"

namespace jtrx {

// Flat substream indexing. Mathematically the substream (k, j), with
// 1 <= k <= K and 1 <= j <= L, sits at m = (k-1)L + j, and the inverse map is
// k = ceil(m / L), j = m - (ceil(m / L) - 1) L. Internally everything is
// 0-based: m0 = k0 * L + j0. The functions below are the only place the two
// conventions meet.
namespace index {

inline int flat(int user0, int sub0, int L) { return user0 * L + sub0; }
inline int user_of(int flat0, int L) { return flat0 / L; }
inline int substream_of(int flat0, int L) { return flat0 % L; }

inline int flat_1based(int k, int j, int L) { return (k - 1) * L + j; }
inline int user_of_1based(int m, int L) { return (m + L - 1) / L; }  // ceil(m / L)
inline int substream_of_1based(int m, int L) { return m - (user_of_1based(m, L) - 1) * L; }

inline int to_zero_based(int m) { return m - 1; }
inline int to_one_based(int m0) { return m0 + 1; }

}  // namespace index

struct SystemConfig {
  int M = 1;               // BS transmit antennas
  int K = 1;               // users
  std::vector<int> N{1};   // receive antennas per user
  int L = 1;               // substreams per user
  RMatrix gamma;           // K x L linear SINR targets
  RVector w;               // K L weights, user-major
  double sigma2 = 1.0;     // noise variance
  double epsilon = 1e-4;   // stopping threshold
  int max_iters = 5000;

  int streams() const { return K * L; }
  int user_offset(int user0) const { return user0 * L; }
  double target(int flat0) const {
    return gamma(index::user_of(flat0, L), index::substream_of(flat0, L));
  }
};

/// Equal-antenna, equal-target configuration with weights
/// [edge_weight x L, 1, ..., 1] and unit noise variance.
SystemConfig make_uniform_config(int M, int K, int N, int L, double gamma_db,
                                 double edge_weight = 1.0);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Empty iff every SystemConfig invariant holds. Each entry reads
/// "<field>: <rule>", e.g. "N[2]: N_k >= L".
std::vector<std::string> validate_config(const SystemConfig& config);

struct ChannelSet {
  std::vector<CMatrix> H;  // H[k] is N_k x M
};

struct BeamformerState {
  std::vector<CMatrix> A;  // N_k x L receive filters
  std::vector<CMatrix> B;  // M x L transmit filters
  RVector p;               // downlink powers, user-major
  RVector lambda;          // virtual-uplink powers, same ordering
};

/// Deterministic sampler for the channel and initial-state draws.
///
/// Generator: std::mt19937_64 seeded from splitmix64(seed ^ stream). Uniform
/// variates are the top 53 bits of one draw mapped to (0, 1]. Normal pairs
/// come from the Box-Muller transform. Circularly symmetric complex Gaussian
/// samples are (g1 + i g2) / sqrt(2), one Box-Muller pair per sample.
class GaussianSource {
 public:
  GaussianSource(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // (0, 1]
  std::pair<double, double> normal_pair();
  cd complex_normal();

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kChannelStream = 0x43484e4c;  // "CHNL"
inline constexpr std::uint64_t kInitStream = 0x494e4954;     // "INIT"
inline constexpr std::uint64_t kLinkStream = 0x4c494e4b;     // "LINK"

std::uint64_t splitmix64(std::uint64_t x);

ChannelSet draw_channels(const SystemConfig& config, std::uint64_t seed);

/// Random B^(0) (Gaussian columns, unit norm, canonical phase), p^(0) uniform
/// on (0, 1], A and lambda zero.
BeamformerState init_state(const SystemConfig& config, std::uint64_t seed);

/// Throws DimensionMismatch if the channel shapes do not match the config.
void check_shapes(const SystemConfig& config, const ChannelSet& channels);
void check_shapes(const SystemConfig& config, const BeamformerState& state);

}  // namespace jtrx
