#include "jtrx/model.hpp"

#include <cmath>

#include "jtrx/numerics.hpp"

namespace jtrx {

SystemConfig make_uniform_config(int M, int K, int N, int L, double gamma_db,
                                 double edge_weight) {
  SystemConfig c;
  c.M = M;
  c.K = K;
  c.N.assign(static_cast<std::size_t>(std::max(K, 0)), N);
  c.L = L;
  c.gamma = RMatrix::Constant(K, L, db_to_linear(gamma_db));
  c.w = RVector::Ones(K * L);
  for (int j = 0; j < L && K > 0; ++j) c.w(j) = edge_weight;
  c.sigma2 = 1.0;
  return c;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<std::string> validate_config(const SystemConfig& c) {
  std::vector<std::string> out;
  auto fail = [&out](std::string field, std::string rule) {
    out.push_back(std::move(field) + ": " + std::move(rule));
  };
  if (c.M < 1) fail("M", "M >= 1");
  if (c.K < 1) fail("K", "K >= 1");
  if (c.L < 1) fail("L", "L >= 1");
  if (static_cast<int>(c.N.size()) != c.K) {
    fail("N", "length K");
  } else {
    for (int k = 0; k < c.K; ++k) {
      if (c.N[k] < c.L) fail("N[" + std::to_string(k) + "]", "N_k >= L");
    }
  }
  if (c.gamma.rows() != c.K || c.gamma.cols() != c.L) {
    fail("gamma", "shape K x L");
  } else {
    for (Eigen::Index i = 0; i < c.gamma.size(); ++i) {
      if (!(c.gamma.data()[i] > 0.0) || !std::isfinite(c.gamma.data()[i])) {
        fail("gamma", "gamma > 0");
        break;
      }
    }
  }
  if (c.w.size() != static_cast<Eigen::Index>(c.K) * c.L) {
    fail("w", "length K L");
  } else {
    for (Eigen::Index i = 0; i < c.w.size(); ++i) {
      if (!(c.w(i) > 0.0) || !std::isfinite(c.w(i))) {
        fail("w[" + std::to_string(i) + "]", "w > 0");
      }
    }
  }
  if (!(c.sigma2 > 0.0) || !std::isfinite(c.sigma2)) fail("sigma2", "sigma2 > 0");
  if (!(c.epsilon > 0.0)) fail("epsilon", "epsilon > 0");
  if (c.max_iters < 1) fail("max_iters", "max_iters >= 1");
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

GaussianSource::GaussianSource(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double GaussianSource::uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(engine_() >> 11) + 1.0) * kScale;
}

std::pair<double, double> GaussianSource::normal_pair() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

cd GaussianSource::complex_normal() {
  const auto [g1, g2] = normal_pair();
  return cd(g1, g2) * M_SQRT1_2;
}

ChannelSet draw_channels(const SystemConfig& config, std::uint64_t seed) {
  GaussianSource src(seed, kChannelStream);
  ChannelSet out;
  out.H.reserve(config.K);
  for (int k = 0; k < config.K; ++k) {
    CMatrix H(config.N[k], config.M);
    for (Eigen::Index c = 0; c < H.cols(); ++c) {
      for (Eigen::Index r = 0; r < H.rows(); ++r) H(r, c) = src.complex_normal();
    }
    out.H.push_back(std::move(H));
  }
  return out;
}

BeamformerState init_state(const SystemConfig& config, std::uint64_t seed) {
  GaussianSource src(seed, kInitStream);
  BeamformerState s;
  for (int k = 0; k < config.K; ++k) {
    CMatrix B(config.M, config.L);
    for (int j = 0; j < config.L; ++j) {
      CVector col(config.M);
      for (int i = 0; i < config.M; ++i) col(i) = src.complex_normal();
      numerics::normalize_canonical(col);
      B.col(j) = col;
    }
    s.B.push_back(std::move(B));
    s.A.push_back(CMatrix::Zero(config.N[k], config.L));
  }
  s.p.resize(config.streams());
  for (int m = 0; m < config.streams(); ++m) s.p(m) = src.uniform();
  s.lambda = RVector::Zero(config.streams());
  return s;
}

void check_shapes(const SystemConfig& config, const ChannelSet& channels) {
  if (static_cast<int>(channels.H.size()) != config.K) {
    throw Error(ErrorKind::DimensionMismatch, "channel count differs from K");
  }
  for (int k = 0; k < config.K; ++k) {
    if (channels.H[k].rows() != config.N[k] || channels.H[k].cols() != config.M) {
      throw Error(ErrorKind::DimensionMismatch, "H[" + std::to_string(k) + "] is not N_k x M");
    }
  }
}

void check_shapes(const SystemConfig& config, const BeamformerState& state) {
  if (static_cast<int>(state.A.size()) != config.K || static_cast<int>(state.B.size()) != config.K ||
      state.p.size() != config.streams() || state.lambda.size() != config.streams()) {
    throw Error(ErrorKind::DimensionMismatch, "state does not match K / L");
  }
  for (int k = 0; k < config.K; ++k) {
    if (state.A[k].rows() != config.N[k] || state.A[k].cols() != config.L ||
        state.B[k].rows() != config.M || state.B[k].cols() != config.L) {
      throw Error(ErrorKind::DimensionMismatch, "filters of user " + std::to_string(k));
    }
  }
}

}  // namespace jtrx
