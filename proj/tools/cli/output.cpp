#include "output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"
#include "mfhj/rng.hpp"

namespace mfhj::cli {

using ordered_json = nlohmann::ordered_json;

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

ordered_json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    // JSON has no non-finite numbers.
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

ordered_json data_json(const Table& t) {
  ordered_json data = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) obj[t.columns[j]] = cell_json(row[j]);
    data.push_back(std::move(obj));
  }
  return data;
}

ordered_json manifest_object(const Manifest& m, const std::string& path, const std::string& hash) {
  ordered_json j;
  j["command"] = m.command;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  j["parameters"] = params;
  j["master_seed"] = m.master_seed;
  j["tool_version"] = m.tool_version;
  j["outputs"] = ordered_json::array({{{"path", path}, {"hash", hash}}});
  return j;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + csv_field(t.columns[j]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + csv_field(cell_text(row[j]));
    out += '\n';
  }
  return out;
}

std::string content_hash(const std::string& content) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(content)));
  return buf;
}

std::string to_json(const Table& t, const Manifest& m, const std::string& path) {
  const ordered_json data = data_json(t);
  ordered_json doc;
  doc["manifest"] = manifest_object(m, path.empty() ? "-" : path, content_hash(data.dump()));
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

std::string manifest_json(const Manifest& m, const std::string& path, const std::string& content) {
  ordered_json doc;
  doc["manifest"] = manifest_object(m, path, content_hash(content));
  return doc.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, target);
}

void emit(const Table& t, const Manifest& m, Format f, const std::string& path) {
  if (f == Format::json) {
    const std::string doc = to_json(t, m, path);
    if (path.empty())
      std::cout << doc;
    else
      write_atomic(path, doc);
    return;
  }
  const std::string csv = to_csv(t);
  if (path.empty()) {
    std::cout << csv;
    return;
  }
  // Both files are rendered before either is written.
  const std::string man = manifest_json(m, path, csv);
  write_atomic(path, csv);
  write_atomic(path + ".manifest.json", man);
}

}  // namespace mfhj::cli
