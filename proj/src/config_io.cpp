#include "jtrx/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace jtrx {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

int get_int(const json& doc, const char* key) {
  if (!doc.contains(key)) bad(std::string("missing field ") + key);
  const json& v = doc.at(key);
  if (!v.is_number_integer()) bad(std::string(key) + " must be an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be numeric");
  return v.get<double>();
}

// Accepts a scalar (broadcast), a flat list of K*L values, or K lists of L.
RMatrix read_grid(const json& v, int K, int L, const std::string& what) {
  RMatrix out(K, L);
  if (v.is_number()) {
    out.setConstant(v.get<double>());
    return out;
  }
  if (!v.is_array()) bad(what + " must be a number or array");
  if (static_cast<int>(v.size()) == K && K > 0 && v.front().is_array()) {
    for (int k = 0; k < K; ++k) {
      if (!v[k].is_array() || static_cast<int>(v[k].size()) != L) bad(what + " rows must have L entries");
      for (int j = 0; j < L; ++j) out(k, j) = as_number(v[k][j], what);
    }
    return out;
  }
  if (static_cast<int>(v.size()) != K * L) bad(what + " must have K*L entries");
  for (int m = 0; m < K * L; ++m) out(index::user_of(m, L), index::substream_of(m, L)) = as_number(v[m], what);
  return out;
}

}  // namespace

SystemConfig config_from_json(const json& doc) {
  if (!doc.is_object()) bad("config must be a JSON object");
  static const std::set<std::string> known{"M", "K", "N", "L", "gamma", "gamma_db", "w",
                                           "sigma2", "epsilon", "max_iters"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) bad("unknown field " + key);
  }

  SystemConfig c;
  c.M = get_int(doc, "M");
  c.K = get_int(doc, "K");
  c.L = get_int(doc, "L");
  if (c.K < 1 || c.L < 1) bad("K and L must be positive");

  if (!doc.contains("N")) bad("missing field N");
  const json& n = doc.at("N");
  if (n.is_number_integer()) {
    c.N.assign(c.K, n.get<int>());
  } else if (n.is_array()) {
    c.N.clear();
    for (const auto& e : n) {
      if (!e.is_number_integer()) bad("N entries must be integers");
      c.N.push_back(e.get<int>());
    }
  } else {
    bad("N must be an integer or array");
  }

  const bool has_lin = doc.contains("gamma");
  const bool has_db = doc.contains("gamma_db");
  if (has_lin == has_db) bad("exactly one of gamma, gamma_db is required");
  if (has_lin) {
    c.gamma = read_grid(doc.at("gamma"), c.K, c.L, "gamma");
  } else {
    c.gamma = read_grid(doc.at("gamma_db"), c.K, c.L, "gamma_db")
                  .unaryExpr([](double db) { return db_to_linear(db); });
  }

  if (!doc.contains("w")) bad("missing field w");
  const RMatrix w = read_grid(doc.at("w"), c.K, c.L, "w");
  c.w.resize(c.streams());
  for (int m = 0; m < c.streams(); ++m) c.w(m) = w(index::user_of(m, c.L), index::substream_of(m, c.L));

  if (!doc.contains("sigma2")) bad("missing field sigma2");
  c.sigma2 = as_number(doc.at("sigma2"), "sigma2");
  if (doc.contains("epsilon")) c.epsilon = as_number(doc.at("epsilon"), "epsilon");
  if (doc.contains("max_iters")) c.max_iters = get_int(doc, "max_iters");
  return c;
}

json config_to_json(const SystemConfig& c) {
  json gamma = json::array();
  for (int k = 0; k < c.gamma.rows(); ++k) {
    json row = json::array();
    for (int j = 0; j < c.gamma.cols(); ++j) row.push_back(c.gamma(k, j));
    gamma.push_back(std::move(row));
  }
  json w = json::array();
  for (Eigen::Index m = 0; m < c.w.size(); ++m) w.push_back(c.w(m));
  return json{{"M", c.M},         {"K", c.K},           {"N", c.N},
              {"L", c.L},         {"gamma", gamma},     {"w", w},
              {"sigma2", c.sigma2}, {"epsilon", c.epsilon}, {"max_iters", c.max_iters}};
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  return config_from_json(doc);
}

std::string config_hash(const SystemConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace jtrx
