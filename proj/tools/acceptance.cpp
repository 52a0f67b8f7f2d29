#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "cli/harness.hpp"
#include "json.hpp"
#include "mfhj/acceptance.hpp"

namespace acc = mfhj::acceptance;

namespace {

// The executable-level half of criterion 16: determinism, golden schemas,
// and the reduced selftest's wall time.
void add_cli_checks(acc::CriterionResult& r, const std::string& exe, const std::filesystem::path& golden) {
  using mfhj::cli::run_process;
  const std::vector<std::string> pdp{"pdp", "--zeta", "0.5", "--mc-samples", "10000", "--seed", "7"};
  const auto a = run_process(exe, pdp);
  const auto b = run_process(exe, pdp);
  const bool same = a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() && a.out == b.out;
  r.checks.push_back(acc::near("cli pdp output byte-identical across runs", same ? 1.0 : 0.0, 1.0, 0.0));

  int matched = 0, total = 0;
  for (const auto& [name, args] : mfhj::cli::golden_invocations()) {
    ++total;
    auto argv = args;
    argv.push_back("--format");
    argv.push_back("json");
    const auto out = run_process(exe, argv);
    if (out.exit_code != 0) continue;
    try {
      const auto doc = nlohmann::ordered_json::parse(out.out);
      const auto want = nlohmann::ordered_json::parse(mfhj::cli::read_file(golden / (name + ".schema.json")));
      if (mfhj::cli::schema_of(doc) == want) ++matched;
    } catch (const std::exception&) {
    }
  }
  r.checks.push_back(acc::near("cli json schemas matching golden files", matched, total, 0.0));

  const auto t0 = std::chrono::steady_clock::now();
  const auto st = run_process(exe, {"selftest"});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checks.push_back(acc::at_most("cli selftest wall time at reduced counts (s)", secs, 60.0));
  r.checks.push_back(acc::info("cli selftest exit code", st.exit_code, 0.0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs the numbered acceptance criteria and prints one PASS/FAIL line per criterion."};
  std::vector<int> only;
  acc::Config cfg;
  std::string cli_path, golden_dir;
  app.add_option("--only", only, "criterion ids to run (default: all)")->check(CLI::Range(1, acc::kCriterionCount));
  app.add_flag("--reduced", cfg.reduced, "smaller sample counts, same tolerances");
  app.add_option("--seed", cfg.seed, "master seed");
  auto* cli_opt = app.add_option("--cli", cli_path, "mfhj executable; adds its checks to criterion 16")
                      ->check(CLI::ExistingFile);
  app.add_option("--golden", golden_dir, "directory of golden schema files")
      ->check(CLI::ExistingDirectory)
      ->needs(cli_opt);
  cli_opt->needs(app.get_option("--golden"));
  CLI11_PARSE(app, argc, argv);
  if (only.empty())
    for (int i = 1; i <= acc::kCriterionCount; ++i) only.push_back(i);
  bool all = true;
  for (int id : std::set<int>(only.begin(), only.end())) {
    acc::CriterionResult r = acc::run_criterion(id, cfg);
    if (id == 16 && !cli_path.empty()) {
      const auto t0 = std::chrono::steady_clock::now();
      add_cli_checks(r, cli_path, golden_dir);
      r.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    std::fputs(acc::format_result(r).c_str(), stdout);
    std::fflush(stdout);
    all = all && r.pass();
  }
  return all ? 0 : 1;
}
