#pragma once

// Helpers for driving the mfhj executable from tests: run a command line,
// capture its streams, and reduce a JSON output to its schema.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace mfhj::cli {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs `exe args...` through the shell with stderr captured to a scratch
// file. `env` is a prefix such as "MFHJ_SEED=7".
inline ProcessResult run_process(const std::string& exe, const std::vector<std::string>& args,
                                 const std::string& env = "") {
  static std::atomic<int> counter{0};
  const auto err_path = std::filesystem::temp_directory_path() /
                        ("mfhj_stderr_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += shell_quote(exe);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>" + shell_quote(err_path.string());
  ProcessResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = read_file(err_path);
  std::filesystem::remove(err_path);
  return r;
}

// Keys of the manifest and its parameters, and the data column names.
inline nlohmann::ordered_json schema_of(const nlohmann::ordered_json& doc) {
  nlohmann::ordered_json s;
  auto keys = [](const nlohmann::ordered_json& obj) {
    nlohmann::ordered_json k = nlohmann::ordered_json::array();
    for (auto it = obj.begin(); it != obj.end(); ++it) k.push_back(it.key());
    return k;
  };
  s["top_level"] = keys(doc);
  s["manifest"] = keys(doc.at("manifest"));
  s["parameters"] = keys(doc.at("manifest").at("parameters"));
  s["data_columns"] = doc.at("data").empty() ? nlohmann::ordered_json::array() : keys(doc.at("data").front());
  return s;
}

// One small, fast invocation per subcommand; each has a golden schema file
// <name>.schema.json.
inline std::vector<std::pair<std::string, std::vector<std::string>>> golden_invocations() {
  return {
      {"curie-weiss", {"curie-weiss", "--t-grid", "0.5:1.5:3", "--h", "0.1", "--spins", "50", "--grid-size", "2001"}},
      {"inference", {"inference", "--prior", "gaussian", "--t-grid", "0.5:1.5:3"}},
      {"pca-compare", {"pca-compare", "--prior", "rademacher", "--t-grid", "0.5:1.5:3"}},
      {"sbm", {"sbm", "--t-grid", "0.5:2:4"}},
      {"pdp", {"pdp", "--zeta", "0.5", "--mc-samples", "500", "--cutoff", "200"}},
      {"cascade", {"cascade", "--levels", "2", "--mc-samples", "200"}},
      {"extremes", {"extremes", "--law", "pareto", "--n", "1000", "--mc-samples", "50"}},
      {"parisi", {"parisi", "--beta", "0", "--levels", "1"}},
      {"sk-mc", {"sk-mc", "--spins", "6", "--beta", "0.5", "--mc-samples", "20"}},
      {"rem", {"rem", "--spins", "8", "--t-grid", "0.5:2:2", "--mc-samples", "10"}},
  };
}

}  // namespace mfhj::cli
