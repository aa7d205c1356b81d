#pragma once

#include <random>

#include "jtrx/model.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace jtrx;

/// K = L = M = N = 1 with h = 1 and unit weight.
inline SystemConfig scalar_config(double gamma, double sigma2 = 1.0) {
  SystemConfig c;
  c.M = 1;
  c.K = 1;
  c.N = {1};
  c.L = 1;
  c.gamma = RMatrix::Constant(1, 1, gamma);
  c.w = RVector::Ones(1);
  c.sigma2 = sigma2;
  return c;
}

inline ChannelSet scalar_channel(double h = 1.0) { return ChannelSet{{CMatrix::Constant(1, 1, h)}}; }

inline BeamformerState scalar_state(double p, double lambda) {
  BeamformerState s;
  s.A = {CMatrix::Ones(1, 1)};
  s.B = {CMatrix::Ones(1, 1)};
  s.p = RVector::Constant(1, p);
  s.lambda = RVector::Constant(1, lambda);
  return s;
}

/// Unit-norm random filters and powers uniform on [0.1, 2).
inline BeamformerState random_state(const SystemConfig& c, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  BeamformerState s;
  for (int k = 0; k < c.K; ++k) {
    CMatrix A = oracle::random_complex(g, c.N[k], c.L);
    CMatrix B = oracle::random_complex(g, c.M, c.L);
    A.colwise().normalize();
    B.colwise().normalize();
    s.A.push_back(A);
    s.B.push_back(B);
  }
  s.p.resize(c.streams());
  s.lambda.resize(c.streams());
  for (int r = 0; r < c.streams(); ++r) {
    s.p(r) = u(g);
    s.lambda(r) = u(g);
  }
  return s;
}

}  // namespace fixture
