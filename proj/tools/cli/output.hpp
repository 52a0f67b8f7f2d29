#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mfhj::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Manifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t master_seed = 0;
  std::string tool_version;
};

enum class Format { csv, json };

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// RFC-4180 style: comma separated, LF line ends, header first.
std::string to_csv(const Table& t);

// {"manifest": {...}, "data": [{column: value, ...}, ...]}. The manifest's
// outputs entry carries the hash of the serialized data array.
std::string to_json(const Table& t, const Manifest& m, const std::string& path);

// Standalone manifest for a CSV file.
std::string manifest_json(const Manifest& m, const std::string& path, const std::string& content);

// Content hash recorded in manifests: "fnv1a64:" + 16 hex digits.
std::string content_hash(const std::string& content);

// Writes via a temporary file in the same directory and a rename, so a
// failed run leaves no partial file behind.
void write_atomic(const std::string& path, const std::string& content);

// Emits the table: to stdout when path is empty, else to path (plus
// path + ".manifest.json" for CSV).
void emit(const Table& t, const Manifest& m, Format f, const std::string& path);

}  // namespace mfhj::cli
