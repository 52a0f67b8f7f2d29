#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfhj/acceptance.hpp"
#include "mfhj/curie_weiss.hpp"
#include "mfhj/error.hpp"
#include "mfhj/grid.hpp"
#include "mfhj/inference.hpp"
#include "mfhj/mc_oracle.hpp"
#include "mfhj/parisi.hpp"
#include "mfhj/point_process.hpp"
#include "mfhj/prior.hpp"
#include "mfhj/rng.hpp"
#include "cli/output.hpp"

#ifndef MFHJ_VERSION
#define MFHJ_VERSION "0.0.0"
#endif

namespace {

using namespace mfhj;
using cli::Cell;
using cli::Table;

constexpr int kExitValidation = 2;
constexpr int kExitSelftest = 3;

// Values of every flag a subcommand may use. Each subcommand registers only
// the flags it reads, with its own defaults.
struct Options {
  std::string t_grid;
  double h = 0.0;
  std::string prior;
  std::size_t levels = 2;
  double beta = 1.0;
  std::uint64_t seed = 42;
  std::size_t mc_samples = 0;
  std::size_t grid_size = 0;
  std::string format = "csv";
  std::string out;

  double zeta = 0.5;
  std::string zetas;
  std::size_t cutoff = 1000;
  std::size_t spins = 0;
  std::string law = "pareto";
  double param = 1.0;
  std::size_t n = 100000;
  double p = 0.5;
  bool full = false;
  std::vector<int> only;
  double zeta_shift = 0.0;
};

std::vector<double> parse_t_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  require(parts.size() == 3, "--t-grid must read lo:hi:n, got '" + spec + "'");
  double lo, hi;
  long long n;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    require(used == parts[0].size(), "bad number in --t-grid");
    hi = std::stod(parts[1], &used);
    require(used == parts[1].size(), "bad number in --t-grid");
    n = std::stoll(parts[2], &used);
    require(used == parts[2].size(), "bad count in --t-grid");
  } catch (const std::logic_error&) {
    throw ValidationError("--t-grid must read lo:hi:n, got '" + spec + "'");
  }
  require(std::isfinite(lo) && std::isfinite(hi), "--t-grid bounds must be finite");
  require(n >= 1, "--t-grid needs n >= 1");
  if (n == 1) return {lo};
  require(hi > lo, "--t-grid needs hi > lo when n > 1");
  const UniformGrid g(lo, hi, static_cast<std::size_t>(n));
  std::vector<double> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = g.x(i);
  return v;
}

std::vector<double> parse_list(const std::string& spec, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      require(used == item.size(), "bad number in " + flag);
    } catch (const std::logic_error&) {
      throw ValidationError("bad number '" + item + "' in " + flag);
    }
  }
  return v;
}

ExtremeLaw parse_law(const std::string& s) {
  if (s == "pareto") return ExtremeLaw::pareto;
  if (s == "gaussian") return ExtremeLaw::gaussian;
  if (s == "bounded") return ExtremeLaw::bounded_poly;
  throw ValidationError("unknown law '" + s + "' (expected pareto, gaussian, bounded)");
}

Cell num(double x) { return x; }
Cell count(std::size_t x) { return static_cast<std::int64_t>(x); }

// ---- subcommands ---------------------------------------------------------

Table run_curie_weiss(const Options& o) {
  Table t{{"t", "h", "f", "m_star", "F_N"}, {}};
  for (double tt : parse_t_grid(o.t_grid)) {
    CwParams p;
    p.t = tt;
    p.h = o.h;
    const CwLimit lim = limit_free_energy(p, o.grid_size);
    t.add({num(tt), num(o.h), num(lim.value), num(lim.maximizer), num(finite_free_energy(o.spins, p))});
  }
  return t;
}

Table run_inference(const Options& o) {
  const ScalarChannel ch({Prior::parse(o.prior), o.grid_size});
  Table t{{"t", "psi_hstar", "f", "mmse", "mutual_info"}, {}};
  for (double tt : parse_t_grid(o.t_grid)) {
    const PenalizedSup s = limit_free_energy_inf(ch, tt, o.h);
    t.add({num(tt), num(ch.psi(o.h + s.h_star)), num(s.value), num(mmse(ch, tt)), num(mutual_information(ch, tt))});
  }
  return t;
}

Table run_pca_compare(const Options& o) {
  const ScalarChannel ch({Prior::parse(o.prior), o.grid_size});
  Table t{{"t", "mmse", "pca_mse"}, {}};
  for (double tt : parse_t_grid(o.t_grid)) t.add({num(tt), num(mmse(ch, tt)), num(pca_mse(tt))});
  return t;
}

Table run_sbm(const Options& o) {
  Table t{{"lambda", "mutual_info"}, {}};
  for (double l : parse_t_grid(o.t_grid)) t.add({num(l), num(sbm_mutual_information({o.p, l}, o.grid_size))});
  return t;
}

Table stat_table() { return Table{{"statistic", "estimate", "stderr", "target"}, {}}; }

Table run_pdp(const Options& o) {
  const RngStream base(o.seed, "cli-pdp");
  Table t = stat_table();
  const GgReport g =
      gg_identity_check(o.zeta, 2, named_overlap_function("r12"), o.mc_samples, o.cutoff, base.substream(0));
  t.add({std::string("mean_r12"), num(g.mean_r12), num(g.mean_r12_stderr), num(1.0 - o.zeta)});
  t.add({std::string("gg_n2_r12_lhs_minus_rhs"), num(g.lhs - g.rhs), num(g.diff_stderr), num(0.0)});
  const auto inv = check_pdp_invariance(o.zeta, lognormal_mark(o.zeta), o.mc_samples, o.cutoff, base.substream(1));
  t.add({std::string("log_mean_lognormal_mark"), num(inv.lhs), num(inv.stderr_), num(inv.rhs)});
  return t;
}

Table run_cascade(const Options& o) {
  std::vector<double> z;
  if (o.zetas.empty()) {
    require(o.levels >= 1, "--levels must be >= 1");
    for (std::size_t k = 1; k <= o.levels; ++k) z.push_back(static_cast<double>(k) / static_cast<double>(o.levels + 1));
  } else {
    z = parse_list(o.zetas, "--zetas");
  }
  const std::size_t K = z.size();
  const auto cut = default_cascade_cutoffs(K);
  const RngStream base(o.seed, "cli-cascade");
  Table t = stat_table();
  const OverlapLawReport law = cascade_overlap_mc(z, cut, o.mc_samples, base.substream(0));
  for (std::size_t k = 0; k <= K; ++k)
    t.add({"p_meet_" + std::to_string(k), num(law.freq[k]), num(law.stderr_[k]), num(law.target[k])});
  // X_K = mean of the marks below the root.
  const CascadeIntegrand mean_marks{[K](const std::vector<double>& w) {
                                      double s = 0.0;
                                      for (std::size_t k = 1; k <= K; ++k) s += w[k];
                                      return s / static_cast<double>(K);
                                    },
                                    1.0};
  const auto f = cascade_functional(z, cut, mean_marks, o.mc_samples, base.substream(1));
  t.add({std::string("functional_mean_marks"), num(f.lhs), num(f.stderr_), num(f.rhs)});
  return t;
}

Table run_extremes(const Options& o) {
  const ExtremeLaw law = parse_law(o.law);
  const ExtremeReport r = extreme_value_check(law, o.param, o.n, o.mc_samples, RngStream(o.seed, "cli-extremes"));
  std::vector<double> x = r.rescaled_maxima;
  std::sort(x.begin(), x.end());
  Table t{{"x", "empirical_cdf", "limit_cdf"}, {}};
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    t.add({num(x[i]), num(static_cast<double>(i + 1) / m), num(extreme_limit_cdf(law, o.param, x[i]))});
  return t;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + cli::format_double(v[i]);
  return s;
}

Table run_parisi(const Options& o) {
  ParisiGridSpec spec;
  spec.n_x = o.grid_size;
  const ParisiResult r = parisi_formula(o.beta, o.levels, spec);
  Table t{{"beta", "levels", "value", "annealed", "zeta_locations", "zeta_values"}, {}};
  t.add({num(o.beta), count(o.levels), num(r.value), num(std::numbers::ln2 + 0.5 * o.beta * o.beta),
         join(r.zeta_star.locations()), join(r.zeta_star.values())});
  return t;
}

Table run_sk(const Options& o) {
  const McReport r = sk_free_energy(o.spins, o.beta, o.mc_samples, RngStream(o.seed, "cli-sk"));
  Table t{{"N", "beta", "estimate", "stderr", "pairs"}, {}};
  t.add({count(o.spins), num(o.beta), num(r.estimate), num(r.stderr_), count(r.n_samples)});
  return t;
}

Table run_rem(const Options& o) {
  const RngStream base(o.seed, "cli-rem");
  Table t{{"t", "estimate", "stderr", "limit", "positive_count"}, {}};
  std::uint64_t k = 0;
  for (double tt : parse_t_grid(o.t_grid)) {
    const RemReport r = rem_free_energy(o.spins, tt, o.mc_samples, base.substream(k++));
    const double limit = tt > 0.0 ? rem_quantities(tt).limit_free_energy : std::numbers::ln2;
    t.add({num(tt), num(r.free_energy.estimate), num(r.free_energy.stderr_), num(limit),
           num(r.positive_count.estimate)});
  }
  return t;
}

const char* relation_name(acceptance::Relation r) {
  switch (r) {
    case acceptance::Relation::near:
      return "near";
    case acceptance::Relation::at_most:
      return "at_most";
    case acceptance::Relation::at_least:
      return "at_least";
    case acceptance::Relation::info:
      return "info";
  }
  return "";
}

// Prints each criterion as it finishes; the table, written only with --out,
// collects every check.
Table run_selftest(const Options& o, bool& all_pass) {
  acceptance::Config cfg;
  cfg.reduced = !o.full;
  cfg.seed = o.seed;
  cfg.pdp_zeta_shift = o.zeta_shift;
  std::vector<int> ids = o.only;
  if (ids.empty())
    for (int i = 1; i <= acceptance::kCriterionCount; ++i) ids.push_back(i);
  Table t{{"criterion", "title", "check", "relation", "measured", "target", "tolerance", "pass"}, {}};
  all_pass = true;
  std::size_t failed = 0;
  for (int id : std::set<int>(ids.begin(), ids.end())) {
    const acceptance::CriterionResult r = acceptance::run_criterion(id, cfg);
    std::cout << acceptance::format_result(r) << std::flush;
    if (!r.pass()) ++failed;
    all_pass = all_pass && r.pass();
    for (const auto& c : r.checks)
      t.add({static_cast<std::int64_t>(id), r.title, c.name, std::string(relation_name(c.relation)), num(c.measured),
             num(c.target), num(c.tolerance), static_cast<std::int64_t>(c.pass ? 1 : 0)});
  }
  std::cout << (all_pass ? "selftest: all criteria passed\n"
                         : "selftest: " + std::to_string(failed) + " criteria failed\n");
  return t;
}

// ---- option plumbing -----------------------------------------------------

struct Command {
  CLI::App* app;
  std::unique_ptr<Options> opts;
  std::function<Table(const Options&)> run;
};

// key=value lines become --key=value tokens placed right after the
// subcommand, ahead of the user's flags, so flags given later win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(path + ":" + std::to_string(lineno) + ": empty key");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

std::map<std::string, std::string> resolved_parameters(const CLI::App& sub) {
  std::map<std::string, std::string> params;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h" || opt->get_group().empty()) continue;
    std::string key = name.substr(name.find_first_not_of('-'));
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    // Unset options without a default (--out to stdout, --zetas) add nothing.
    if (!value.empty()) params[key] = value;
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free energies, phase transitions and Monte Carlo checks for mean-field disordered systems."};
  app.name("mfhj");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path, "file of key=value lines presetting flags");
  app.set_version_flag("--version", MFHJ_VERSION);

  std::map<std::string, Command> commands;
  auto add = [&](const std::string& name, const std::string& help, std::function<Table(const Options&)> run) {
    Command c{app.add_subcommand(name, help), std::make_unique<Options>(), std::move(run)};
    Options& o = *c.opts;
    // -h would collide with the --h field flag.
    c.app->set_help_flag("--help", "print this help and exit");
    c.app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c.app->add_option("--out", o.out, "output path (default: stdout)");
    auto& ref = commands.emplace(name, std::move(c)).first->second;
    return std::make_pair(ref.app, ref.opts.get());
  };
  auto seed = [](CLI::App* a, Options* o) {
    a->add_option("--seed", o->seed, "master seed")->envname("MFHJ_SEED");
  };
  auto mc = [](CLI::App* a, Options* o, std::size_t dflt) {
    o->mc_samples = dflt;
    a->add_option("--mc-samples", o->mc_samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  };

  {
    auto [a, o] = add("curie-weiss", "limit and finite-N free energy of the Curie-Weiss model", run_curie_weiss);
    o->t_grid = "0:1:21";
    o->grid_size = 20001;
    o->spins = 4000;
    a->add_option("--t-grid", o->t_grid, "lo:hi:n");
    a->add_option("--h", o->h, "external field");
    a->add_option("--grid-size", o->grid_size, "nodes of the magnetization grid")->check(CLI::Range(2, 10000000));
    a->add_option("--spins", o->spins, "N for the finite-N column")->check(CLI::PositiveNumber);
  }
  {
    auto [a, o] = add("inference", "limit free energy, mmse and mutual information of rank-one estimation",
                      run_inference);
    o->t_grid = "0.05:2:40";
    o->prior = "rademacher";
    o->grid_size = 64;
    a->add_option("--t-grid", o->t_grid, "lo:hi:n");
    a->add_option("--h", o->h, "side-channel field")->check(CLI::NonNegativeNumber);
    a->add_option("--prior", o->prior, "gaussian, rademacher, bernoulli(p), sparse(p)");
    a->add_option("--grid-size", o->grid_size, "Gauss-Hermite nodes")->check(CLI::Range(2, 400));
  }
  {
    auto [a, o] = add("pca-compare", "mmse against the top-eigenvector estimator", run_pca_compare);
    o->t_grid = "0.05:4:80";
    o->prior = "rademacher";
    o->grid_size = 64;
    a->add_option("--t-grid", o->t_grid, "lo:hi:n");
    a->add_option("--prior", o->prior, "gaussian, rademacher, bernoulli(p), sparse(p)");
    a->add_option("--grid-size", o->grid_size, "Gauss-Hermite nodes")->check(CLI::Range(2, 400));
  }
  {
    auto [a, o] = add("sbm", "mutual information of the two-community block model", run_sbm);
    o->t_grid = "0.1:4:40";
    o->grid_size = 64;
    a->add_option("--t-grid", o->t_grid, "lambda grid lo:hi:n");
    a->add_option("--p", o->p, "community proportion")->check(CLI::Range(0.0, 1.0));
    a->add_option("--grid-size", o->grid_size, "Gauss-Hermite nodes")->check(CLI::Range(2, 400));
  }
  {
    auto [a, o] = add("pdp", "Poisson-Dirichlet overlap identities by Monte Carlo", run_pdp);
    mc(a, o, 100000);
    seed(a, o);
    a->add_option("--zeta", o->zeta, "parameter in (0,1)");
    a->add_option("--cutoff", o->cutoff, "points kept per process")->check(CLI::PositiveNumber);
  }
  {
    auto [a, o] = add("cascade", "Ruelle cascade overlap law and functional against the recursion", run_cascade);
    mc(a, o, 10000);
    seed(a, o);
    a->add_option("--levels", o->levels, "depth K, zetas k/(K+1) unless --zetas is given");
    a->add_option("--zetas", o->zetas, "comma-separated increasing zetas in (0,1)");
  }
  {
    auto [a, o] = add("extremes", "rescaled maxima against their limit law", run_extremes);
    mc(a, o, 2000);
    seed(a, o);
    a->add_option("--law", o->law, "pareto, gaussian or bounded")->check(CLI::IsMember({"pareto", "gaussian", "bounded"}));
    a->add_option("--param", o->param, "tail index (pareto, bounded)");
    a->add_option("--n", o->n, "draws per maximum")->check(CLI::Range(1000, 100000000));
  }
  {
    auto [a, o] = add("parisi", "Parisi formula for the SK model", run_parisi);
    o->grid_size = 2049;
    a->add_option("--beta", o->beta, "inverse temperature")->check(CLI::NonNegativeNumber);
    a->add_option("--levels", o->levels, "K: the order parameter has K+1 atoms");
    a->add_option("--grid-size", o->grid_size, "PDE grid nodes (odd)");
  }
  {
    auto [a, o] = add("sk-mc", "finite-N SK free energy by exact enumeration", run_sk);
    mc(a, o, 2000);
    seed(a, o);
    o->spins = 12;
    a->add_option("--beta", o->beta, "inverse temperature");
    a->add_option("--spins", o->spins, "N <= 16");
  }
  {
    auto [a, o] = add("rem", "finite-N random energy model against the closed form", run_rem);
    mc(a, o, 100);
    seed(a, o);
    o->t_grid = "0.1:3:30";
    o->spins = 16;
    a->add_option("--t-grid", o->t_grid, "lo:hi:n");
    a->add_option("--spins", o->spins, "N <= 22");
  }
  bool selftest_pass = true;
  {
    auto [a, o] = add("selftest", "acceptance criteria at reduced counts", nullptr);
    seed(a, o);
    a->add_flag("--full", o->full, "full sample counts");
    a->add_option("--only", o->only, "criterion ids")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->check(CLI::Range(1, mfhj::acceptance::kCriterionCount));
    // Mutation hook for testing the gate itself; hidden from help.
    a->add_option("--inject-zeta-shift", o->zeta_shift)->group("");
    commands.at("selftest").run = [&selftest_pass](const Options& opts) { return run_selftest(opts, selftest_pass); };
  }

  // Splice config-file flags in after the subcommand name.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size())
        path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0)
        path = args[i].substr(9);
      if (path.empty()) continue;
      const auto tokens = config_tokens(path);
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (commands.count(args[j])) {
          args.insert(args.begin() + static_cast<std::ptrdiff_t>(j) + 1, tokens.begin(), tokens.end());
          break;
        }
      }
      break;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  for (auto& [name, cmd] : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      const Options& o = *cmd.opts;
      const Table t = cmd.run(o);
      cli::Manifest m{name, resolved_parameters(*cmd.app), o.seed, MFHJ_VERSION};
      if (name != "selftest" || !o.out.empty())
        cli::emit(t, m, o.format == "json" ? cli::Format::json : cli::Format::csv, o.out);
      if (name == "selftest" && !selftest_pass) return kExitSelftest;
      return 0;
    } catch (const ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return kExitValidation;
}
