#include "jtrx/results_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace jtrx {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string power(double v) { return fmt(v, 6); }
std::string real(double v) { return fmt(v, 10); }

std::string join(const std::vector<double>& values, int digits) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += fmt(values[i], digits);
  }
  return out;
}

double to_double(const std::string& s) { return s.empty() ? kNaN : std::stod(s); }

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(to_double(item));
  return out;
}

// Printed-precision round trip for JSON: the value re-read from fmt().
json rounded(double v, int digits) {
  if (std::isnan(v)) return nullptr;
  return std::stod(fmt(v, digits));
}

json rounded_list(const std::vector<double>& values, int digits) {
  json out = json::array();
  for (double v : values) out.push_back(rounded(v, digits));
  return out;
}

double json_double(const json& v) { return v.is_null() ? kNaN : v.get<double>(); }

std::vector<double> json_list(const json& v) {
  std::vector<double> out;
  for (const auto& e : v) out.push_back(json_double(e));
  return out;
}

}  // namespace

ResultFormat parse_format(const std::string& name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "jsonl") return ResultFormat::JsonLines;
  throw Error(ErrorKind::InvalidConfig, "unknown format " + name + " (csv|jsonl)");
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "experiment",         "seed",           "sweep_value",    "status",
      "total_power_db",     "user_power_db",  "weighted_objective", "dual_objective",
      "duality_gap",        "iterations",     "empirical_sinr_db"};
  return cols;
}

json metadata_record(const ResultTable& table) {
  return json{{"record", "meta"},
              {"experiment", table.experiment},
              {"kind", std::string(to_string(table.kind))},
              {"config_hash", table.config_hash},
              {"seed0", table.seed0},
              {"trials", table.trials},
              {"sweep", table.sweep},
              {"tool_version", std::string(kToolVersion)}};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_results(std::ostream& out, const ResultTable& table, ResultFormat format) {
  if (format == ResultFormat::Csv) {
    out << "# " << metadata_record(table).dump() << "\r\n";
    const auto& cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\r\n";
    for (const ResultRow& r : table.rows) {
      const std::vector<std::string> fields{
          r.experiment,         std::to_string(r.seed),       real(r.sweep_value),
          r.status,             power(r.total_power_db),      join(r.user_power_db, 6),
          real(r.weighted_objective), real(r.dual_objective), real(r.duality_gap),
          std::to_string(r.iterations), join(r.empirical_sinr_db, 6)};
      for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_escape(fields[i]);
      out << "\r\n";
    }
    return;
  }
  out << metadata_record(table).dump() << "\n";
  for (const ResultRow& r : table.rows) {
    json row{{"record", "row"},
             {"experiment", r.experiment},
             {"seed", r.seed},
             {"sweep_value", rounded(r.sweep_value, 10)},
             {"status", r.status},
             {"total_power_db", rounded(r.total_power_db, 6)},
             {"user_power_db", rounded_list(r.user_power_db, 6)},
             {"weighted_objective", rounded(r.weighted_objective, 10)},
             {"dual_objective", rounded(r.dual_objective, 10)},
             {"duality_gap", rounded(r.duality_gap, 10)},
             {"iterations", r.iterations},
             {"empirical_sinr_db", rounded_list(r.empirical_sinr_db, 6)}};
    out << row.dump() << "\n";
  }
}

void emit_results(const ResultTable& table, const std::string& path, ResultFormat format) {
  if (table.rows.empty()) throw Error(ErrorKind::InvalidConfig, "refusing to emit an empty table");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  write_results(out, table, format);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool at_record_start = true;
  bool comment = false;
  char c;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    at_record_start = true;
  };
  while (in.get(c)) {
    if (comment) {
      if (c == '\n') {
        comment = false;
        at_record_start = true;
      }
      continue;
    }
    if (at_record_start && c == '#') {
      comment = true;
      continue;
    }
    at_record_start = false;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
    }
  }
  if (!at_record_start) end_record();
  return records;
}

ParsedResults read_results(std::istream& in, ResultFormat format) {
  ParsedResults out;
  if (format == ResultFormat::Csv) {
    std::string first;
    std::getline(in, first);
    if (first.rfind("# ", 0) != 0) throw Error(ErrorKind::Io, "CSV results lack a metadata line");
    if (!first.empty() && first.back() == '\r') first.pop_back();
    out.metadata = json::parse(first.substr(2));
    const auto records = parse_csv(in);
    if (records.empty() || records.front() != result_columns()) {
      throw Error(ErrorKind::Io, "unexpected CSV header");
    }
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& f = records[i];
      if (f.size() != result_columns().size()) throw Error(ErrorKind::Io, "ragged CSV record");
      ResultRow r;
      r.experiment = f[0];
      r.seed = std::stoull(f[1]);
      r.sweep_value = to_double(f[2]);
      r.status = f[3];
      r.total_power_db = to_double(f[4]);
      r.user_power_db = split_doubles(f[5]);
      r.weighted_objective = to_double(f[6]);
      r.dual_objective = to_double(f[7]);
      r.duality_gap = to_double(f[8]);
      r.iterations = std::stoi(f[9]);
      r.empirical_sinr_db = split_doubles(f[10]);
      out.rows.push_back(std::move(r));
    }
    return out;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json obj = json::parse(line);
    if (obj.at("record") == "meta") {
      out.metadata = obj;
      continue;
    }
    ResultRow r;
    r.experiment = obj.at("experiment").get<std::string>();
    r.seed = obj.at("seed").get<std::uint64_t>();
    r.sweep_value = json_double(obj.at("sweep_value"));
    r.status = obj.at("status").get<std::string>();
    r.total_power_db = json_double(obj.at("total_power_db"));
    r.user_power_db = json_list(obj.at("user_power_db"));
    r.weighted_objective = json_double(obj.at("weighted_objective"));
    r.dual_objective = json_double(obj.at("dual_objective"));
    r.duality_gap = json_double(obj.at("duality_gap"));
    r.iterations = obj.at("iterations").get<int>();
    r.empirical_sinr_db = json_list(obj.at("empirical_sinr_db"));
    out.rows.push_back(std::move(r));
  }
  return out;
}

ParsedResults read_results(const std::string& path, ResultFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_results(in, format);
}

void print_summary(std::ostream& out, const ResultTable& table) {
  const char* axis = table.kind == ExperimentKind::SweepWeight ? "w" : "gamma_db";
  out << table.experiment << "  config " << table.config_hash << "  seed0 " << table.seed0
      << "  trials " << table.trials << "\n";
  out << std::setw(10) << axis << std::setw(11) << "converged" << std::setw(11) << "infeasible"
      << std::setw(8) << "failed" << std::setw(16) << "total_power_db" << std::setw(16)
      << "ms1_power_db" << "\n";
  for (const SweepPoint& p : table.summary) {
    out << std::setw(10) << p.value << std::setw(11) << p.converged << std::setw(11) << p.infeasible
        << std::setw(8) << p.failed << std::setw(16) << std::fixed << std::setprecision(3)
        << p.mean_total_power_db << std::setw(16) << p.mean_user1_power_db << "\n"
        << std::defaultfloat;
  }
}

}  // namespace jtrx
