#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "jtrx/experiment.hpp"

namespace jtrx {

enum class ResultFormat { Csv, JsonLines };

ResultFormat parse_format(const std::string& name);

/// Column order of the CSV output and key set of every JSON-lines row.
const std::vector<std::string>& result_columns();

/// Metadata record: experiment, kind, config hash, base seed, trials, sweep
/// values and tool version.
nlohmann::json metadata_record(const ResultTable& table);

// CSV: one "# " line carrying the metadata JSON, then an RFC-4180 header and
// one record per row. List-valued fields are ';'-joined. Powers carry 6
// significant digits, other reals 10. NaN is written as an empty field.
// JSON-lines: the metadata object first ("record": "meta"), then one object
// per row ("record": "row") with NaN as null.
void write_results(std::ostream& out, const ResultTable& table, ResultFormat format);

/// Writes to path. Throws Error(Io) with the path on failure. Requires a
/// nonempty table.
void emit_results(const ResultTable& table, const std::string& path, ResultFormat format);

struct ParsedResults {
  nlohmann::json metadata;
  std::vector<ResultRow> rows;
};

ParsedResults read_results(std::istream& in, ResultFormat format);
ParsedResults read_results(const std::string& path, ResultFormat format);

/// RFC-4180 field quoting and record splitting, exposed for tests.
std::string csv_escape(const std::string& field);
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Human-readable per-sweep-point summary.
void print_summary(std::ostream& out, const ResultTable& table);

}  // namespace jtrx
