#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>

#include "jtrx/config_io.hpp"
#include "jtrx/model.hpp"

using namespace jtrx;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("draw_channels: shapes and determinism") {
  SystemConfig c = make_uniform_config(8, 2, 2, 2, 10.0);
  const ChannelSet a = draw_channels(c, 42);
  const ChannelSet b = draw_channels(c, 42);
  REQUIRE(a.H.size() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(a.H[k].rows() == 2);
    CHECK(a.H[k].cols() == 8);
    CHECK(a.H[k] == b.H[k]);
  }
  CHECK(draw_channels(c, 43).H[0] != a.H[0]);
}

TEST_CASE("draw_channels: unit-variance circular entries") {
  SystemConfig c = make_uniform_config(50, 4, 10, 1, 0.0);
  double power = 0.0, re2 = 0.0, im2 = 0.0;
  cd mean = 0.0, pseudo = 0.0;
  long count = 0;
  for (std::uint64_t seed = 1; count < 100000; ++seed) {
    for (const CMatrix& H : draw_channels(c, seed).H) {
      for (Eigen::Index i = 0; i < H.size(); ++i) {
        const cd z = H.data()[i];
        power += std::norm(z);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        mean += z;
        pseudo += z * z;
        ++count;
      }
    }
  }
  power /= count;
  CHECK(power >= 0.99);
  CHECK(power <= 1.01);
  CHECK(std::abs(mean / double(count)) < 0.01);
  CHECK(std::abs(pseudo / double(count)) < 0.02);
  CHECK(re2 / count == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im2 / count == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("GaussianSource: uniform stays in (0, 1]") {
  GaussianSource src(0, 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = src.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi <= 1.0);
}

TEST_CASE("init_state: contract") {
  SystemConfig c = make_uniform_config(8, 4, 2, 2, 10.0, 5.0);
  const BeamformerState s = init_state(c, 9);
  REQUIRE(s.B.size() == 4);
  for (const CMatrix& B : s.B) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) CHECK(std::abs(B.col(j).norm() - 1.0) < 1e-12);
  }
  for (Eigen::Index r = 0; r < s.p.size(); ++r) {
    CHECK(s.p(r) > 0.0);
    CHECK(s.p(r) <= 1.0);
  }
  CHECK(s.lambda.size() == 8);
  CHECK(s.lambda.isZero(0.0));
  const BeamformerState t = init_state(c, 9);
  CHECK(t.p == s.p);
  for (int k = 0; k < 4; ++k) CHECK(t.B[k] == s.B[k]);
  CHECK_NOTHROW(check_shapes(c, s));
}

TEST_CASE("check_shapes rejects mismatched channels") {
  SystemConfig c = make_uniform_config(4, 2, 2, 1, 0.0);
  ChannelSet ch = draw_channels(c, 1);
  ch.H[1] = CMatrix::Zero(2, 3);
  try {
    check_shapes(c, ch);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("validate_config") {
  SystemConfig c = make_uniform_config(8, 4, 2, 2, 10.0, 5.0);
  CHECK(validate_config(c).empty());

  SystemConfig three = make_uniform_config(8, 4, 2, 2, 10.0);
  three.L = 3;
  three.gamma = RMatrix::Ones(4, 3);
  three.w = RVector::Ones(12);
  CHECK(contains(validate_config(three), "N_k >= L"));

  SystemConfig zero_w = c;
  zero_w.w(3) = 0.0;
  const auto v = validate_config(zero_w);
  REQUIRE(v.size() == 1);
  CHECK(v.front() == "w[3]: w > 0");

  SystemConfig bad_sigma = c;
  bad_sigma.sigma2 = 0.0;
  CHECK(contains(validate_config(bad_sigma), "sigma2 > 0"));
}

TEST_CASE("make_uniform_config weights and targets") {
  SystemConfig c = make_uniform_config(8, 3, 2, 2, 10.0, 5.0);
  CHECK(c.w(0) == 5.0);
  CHECK(c.w(1) == 5.0);
  CHECK(c.w(2) == 1.0);
  CHECK(c.w(5) == 1.0);
  CHECK(c.gamma(2, 1) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(c.target(5) == c.gamma(2, 1));
}

TEST_CASE("flat index round trip in both conventions") {
  for (int L = 1; L <= 4; ++L) {
    const int K = 5;
    for (int m = 1; m <= K * L; ++m) {
      const int k = index::user_of_1based(m, L);
      const int j = index::substream_of_1based(m, L);
      CHECK(k >= 1);
      CHECK(k <= K);
      CHECK(j >= 1);
      CHECK(j <= L);
      CHECK(index::flat_1based(k, j, L) == m);
      const int m0 = index::to_zero_based(m);
      CHECK(index::user_of(m0, L) == k - 1);
      CHECK(index::substream_of(m0, L) == j - 1);
      CHECK(index::to_one_based(index::flat(k - 1, j - 1, L)) == m);
    }
  }
  // m = 3 with L = 2 belongs to user ceil(3/2) = 2, substream 1.
  CHECK(index::user_of_1based(3, 2) == 2);
  CHECK(index::substream_of_1based(3, 2) == 1);
}

TEST_CASE("config JSON: accepted forms") {
  const auto doc = nlohmann::json::parse(R"({"M": 8, "K": 2, "N": 2, "L": 2,
    "gamma_db": [[10, 0], [3, 10]], "w": [5, 5, 1, 1], "sigma2": 0.5, "max_iters": 50})");
  const SystemConfig c = config_from_json(doc);
  CHECK(c.N == std::vector<int>{2, 2});
  CHECK(c.gamma(0, 0) == doctest::Approx(10.0));
  CHECK(c.gamma(0, 1) == doctest::Approx(1.0));
  CHECK(c.gamma(1, 0) == doctest::Approx(std::pow(10.0, 0.3)));
  CHECK(c.w(1) == 5.0);
  CHECK(c.sigma2 == 0.5);
  CHECK(c.max_iters == 50);
  CHECK(c.epsilon == 1e-4);

  const SystemConfig round = config_from_json(config_to_json(c));
  CHECK(round.gamma.isApprox(c.gamma, 1e-15));
  CHECK(config_hash(round) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  SystemConfig other = c;
  other.sigma2 = 1.0;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("config JSON: rejections") {
  auto kind_of = [](const char* text) {
    try {
      config_from_json(nlohmann::json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;  // sentinel: no throw
  };
  CHECK(kind_of(R"({"M":1,"K":1,"N":1,"L":1,"gamma":1,"w":1,"sigma2":1,"extra":0})") ==
        ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"M":1,"K":1,"N":1,"L":1,"gamma":1,"gamma_db":0,"w":1,"sigma2":1})") ==
        ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"M":1,"K":1,"N":1,"L":1,"gamma":1,"sigma2":1})") == ErrorKind::InvalidConfig);
  CHECK(kind_of(R"({"M":1,"K":2,"N":1,"L":1,"gamma":[1,2,3],"w":1,"sigma2":1})") ==
        ErrorKind::InvalidConfig);
}

TEST_CASE("load_config: files") {
  const std::string path = "test_model_config.json";
  {
    std::ofstream f(path);
    f << R"({"M": 2, "K": 1, "N": [1], "L": 1, "gamma": 4, "w": [1], "sigma2": 1})";
  }
  const SystemConfig c = load_config(path);
  CHECK(c.M == 2);
  CHECK(c.gamma(0, 0) == 4.0);
  std::remove(path.c_str());
  try {
    load_config("does/not/exist.json");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}
