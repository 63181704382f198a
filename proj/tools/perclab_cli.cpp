// perclab command-line runner: experiment selection, parameter parsing,
// seeding, parallelism control, and bit-exact CSV/manifest emission. Every
// Monte Carlo loop goes through the deterministic indexed map, so the same
// argv and seed produce byte-identical CSV regardless of --jobs.
//
// Exit codes: 0 success, 1 check failed, 2 parameter error, 3 censored or
// insufficient-window result (partial outputs still written).
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "perclab/animals.hpp"
#include "perclab/blocks.hpp"
#include "perclab/estimators.hpp"
#include "perclab/geometry.hpp"
#include "perclab/io.hpp"
#include "perclab/parallel.hpp"
#include "perclab/percolation.hpp"
#include "perclab/slab.hpp"
#include "perclab/stats.hpp"
#include "perclab/topology.hpp"
#include "perclab/tree.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace perclab;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParamError = 2;
constexpr int kExitCensored = 3;

// ---------------------------------------------------------------------------
// Config-file plumbing: a JSON object of flag names supplies defaults for the
// invoked subcommand; flags given on the command line win.

class FlagSet {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* cmd, const std::string& flag, T& var, const std::string& desc) {
    CLI::Option* opt = cmd->add_option(flag, var, desc);
    appliers_[key_of(flag)] = {opt, [&var](const Json& j) { var = j.get<T>(); }};
    return opt;
  }

  CLI::Option* add_flag(CLI::App* cmd, const std::string& flag, bool& var, const std::string& desc) {
    CLI::Option* opt = cmd->add_flag(flag, var, desc);
    appliers_[key_of(flag)] = {opt, [&var](const Json& j) { var = j.get<bool>(); }};
    return opt;
  }

  void apply(const Json& cfg) const {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      const auto found = appliers_.find(it.key());
      if (found == appliers_.end()) throw std::invalid_argument("unknown config key: " + it.key());
      if (found->second.first->count() == 0) found->second.second(it.value());
    }
  }

 private:
  static std::string key_of(const std::string& flag) {
    std::size_t i = 0;
    while (i < flag.size() && flag[i] == '-') ++i;
    return flag.substr(i);
  }

  std::map<std::string, std::pair<CLI::Option*, std::function<void(const Json&)>>> appliers_;
};

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  return cfg;
}

// ---------------------------------------------------------------------------
// Output plumbing.

class Stopwatch {
 public:
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  return out;
}

void write_manifest(const std::string& subcommand, const Json& params, std::uint64_t seed, const Json& sample_counts,
                    const std::vector<std::string>& outputs, const Json& results, std::int64_t wall_ms) {
  if (outputs.empty()) return;
  Json m;
  m["tool_version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["params"] = params;
  m["seed"] = seed;
  m["sample_counts"] = sample_counts;
  m["outputs"] = outputs;
  if (!results.is_null()) m["results"] = results;
  m["wall_ms"] = wall_ms;
  const std::string path = outputs.front() + ".manifest.json";
  auto out = open_output(path);
  out << m.dump(2) << '\n';
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(long double v) { return format_double(static_cast<double>(v)); }
std::string fmt_bool(bool v) { return v ? "1" : "0"; }

std::string coords_field(const Coords& z, int d) {
  std::ostringstream out;
  for (int i = 0; i < d; ++i) {
    if (i) out << ' ';
    out << z[i];
  }
  return out.str();
}

std::string estimate_field(const Estimate& e) {
  std::ostringstream out;
  out << fmt(e.value) << " +- " << fmt(e.ci_half_width);
  return out.str();
}

// ---------------------------------------------------------------------------
// tree: exact solver table, pfin, and golden-file comparison.

std::map<int, double> read_golden_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open golden file: " + path);
  std::map<int, double> table;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed golden row: " + line);
    table[std::stoi(line.substr(0, comma))] = std::stod(line.substr(comma + 1));
  }
  return table;
}

struct TreeArgs {
  int b = 0;
  std::vector<double> p_values;
  std::string golden_dir = "data/golden";
  bool skip_golden = false;
  std::string out;
};

int run_tree(const TreeArgs& a) {
  Stopwatch timer;
  if (a.b < 2) throw std::invalid_argument("need --b >= 2");
  int rc = kExitOk;

  const long double pfin = pfin_tree(a.b);
  std::cout << "pfin(T_" << a.b << ") = " << fmt(pfin) << "\n";

  if (!a.skip_golden) {
    const auto compare = [&](const std::string& name, long double got, double tol) {
      std::map<int, double> table;
      try {
        table = read_golden_table(a.golden_dir + "/" + name);
      } catch (const std::invalid_argument&) {
        std::cout << "golden " << name << ": no reference available\n";
        return;
      }
      const auto it = table.find(a.b);
      if (it == table.end()) {
        std::cout << "golden " << name << ": no entry for b = " << a.b << "\n";
        return;
      }
      const double diff = std::abs(static_cast<double>(got) - it->second);
      const bool ok = diff <= tol * std::max(1.0, std::abs(it->second));
      std::cout << "golden " << name << ": " << (ok ? "match" : "MISMATCH") << " (|diff| = " << fmt(diff) << ")\n";
      if (!ok) rc = kExitCheckFailed;
    };
    compare("tree_pfin.csv", pfin, 1e-12);
    compare("tree_cb.csv", kappa_slope_at_critical(a.b).value, 1e-5);
  }

  if (!a.out.empty()) {
    std::vector<double> ps = a.p_values;
    if (ps.empty())
      for (int i = 1; i <= 99; ++i) ps.push_back(static_cast<double>(i) / 100.0);
    auto csv = open_output(a.out);
    write_csv_row(csv, {"b", "p", "eta", "t1", "k1", "percolates_x", "kappa"});
    for (const double p : ps) {
      if (p <= 0 || p >= 1) throw std::invalid_argument("tree table needs 0 < p < 1");
      const TreeSolution sol = solve_tree(a.b, p);
      write_csv_row(csv, {std::to_string(a.b), fmt(p), fmt(sol.eta), sol.critical ? "singular" : fmt(sol.t1),
                          sol.critical ? "singular" : fmt(sol.k1), fmt_bool(sol.percolates_x), fmt(kappa(a.b, p))});
    }
    Json params;
    params["b"] = a.b;
    params["p"] = ps;
    Json counts;
    counts["rows"] = ps.size();
    Json results;
    results["pfin"] = static_cast<double>(pfin);
    write_manifest("tree", params, 0, counts, {a.out}, results, timer.elapsed_ms());
  }
  return rc;
}

// ---------------------------------------------------------------------------
// topology-check: shell lemma assertions on exhaustive and random animals.

struct TopologyArgs {
  int d = 3;
  int max_size = 6;
  bool exhaustive = false;
  std::uint64_t random_sets = 0;
  int max_random_size = 40;
  int margin = 4;
  bool removal = true;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out;
};

struct AnimalCheck {
  std::uint64_t removals = 0;
  bool surface_ok = false;
  bool separates_ok = false;
  bool fill_ok = false;
  bool removal_ok = true;

  bool passed() const { return surface_ok && separates_ok && fill_ok && removal_ok; }
};

AnimalCheck check_animal(const std::vector<Vertex>& cells, int margin, bool removal) {
  AnimalCheck r;
  const VertexSet a = VertexSet::of(std::vector<Vertex>(cells));
  const Window w = Window::around(cells, margin);
  const PlaquetteSet shell = external_boundary_plaquettes(a, w);
  r.surface_ok = is_surface(shell);
  r.separates_ok = separates_from_infinity(shell, a, w);
  r.fill_ok = external_boundary_plaquettes(fill_holes(a, w), w) == shell;
  if (removal) {
    for (std::size_t j = 0; j < shell.items.size(); ++j) {
      std::vector<FacetKey> kept;
      kept.reserve(shell.items.size() - 1);
      for (std::size_t i = 0; i < shell.items.size(); ++i)
        if (i != j) kept.push_back(shell.items[i]);
      ++r.removals;
      if (separates_from_infinity(PlaquetteSet::of(std::move(kept)), a, w)) {
        r.removal_ok = false;
        break;
      }
    }
  }
  return r;
}

int run_topology_check(const TopologyArgs& a) {
  Stopwatch timer;
  if (!a.exhaustive && a.random_sets == 0)
    throw std::invalid_argument("nothing to check: pass --exhaustive and/or --random N");
  if (a.margin < 1) throw std::invalid_argument("need --margin >= 1");

  struct SuiteRow {
    std::string name;
    int max_size = 0;
    std::uint64_t sets = 0;
    std::uint64_t removals = 0;
    std::uint64_t failures = 0;
  };
  std::vector<SuiteRow> rows;

  const auto tally = [](SuiteRow& row, const std::vector<AnimalCheck>& checks) {
    for (const auto& c : checks) {
      ++row.sets;
      row.removals += c.removals;
      if (!c.passed()) ++row.failures;
    }
  };

  if (a.exhaustive) {
    const auto animals = connected_sets_up_to(a.d, a.max_size);
    const auto checks = map_indexed<AnimalCheck>(animals.size(), a.jobs, [&](std::uint64_t i) {
      return check_animal(animals[i], a.margin, a.removal);
    });
    SuiteRow row{"exhaustive", a.max_size, 0, 0, 0};
    tally(row, checks);
    rows.push_back(row);
  }
  if (a.random_sets > 0) {
    const auto checks = map_indexed<AnimalCheck>(a.random_sets, a.jobs, [&](std::uint64_t i) {
      rng::Counter pick(rng::combine(a.seed, rng::combine(0x517EULL, i)));
      const int size = 1 + static_cast<int>(pick.next_below(static_cast<std::uint64_t>(a.max_random_size)));
      // Single-plaquette removal is exercised on the exhaustive suite only;
      // random shells of 40-cell sets would dominate the runtime.
      return check_animal(random_connected_set(a.d, size, a.seed, i), a.margin, /*removal=*/false);
    });
    SuiteRow row{"random", a.max_random_size, 0, 0, 0};
    tally(row, checks);
    rows.push_back(row);
  }

  std::uint64_t failures = 0;
  for (const auto& row : rows) {
    failures += row.failures;
    std::cout << row.name << ": " << row.sets << " sets, " << row.removals << " removals, " << row.failures
              << " failures\n";
  }

  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"suite", "d", "max_size", "sets", "removals", "failures"});
    for (const auto& row : rows)
      write_csv_row(csv, {row.name, std::to_string(a.d), std::to_string(row.max_size), std::to_string(row.sets),
                          std::to_string(row.removals), std::to_string(row.failures)});
    Json params;
    params["d"] = a.d;
    params["max_size"] = a.max_size;
    params["exhaustive"] = a.exhaustive;
    params["random"] = a.random_sets;
    params["max_random_size"] = a.max_random_size;
    params["margin"] = a.margin;
    params["removal"] = a.removal;
    params["jobs"] = a.jobs;
    Json counts;
    counts["sets"] = rows.empty() ? 0 : rows.front().sets + (rows.size() > 1 ? rows.back().sets : 0);
    write_manifest("topology-check", params, a.seed, counts, {a.out}, Json(), timer.elapsed_ms());
  }
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// sample: one sampled configuration to disk, with an optional cluster table.

struct SampleArgs {
  int d = 2;
  double p = 0.5;
  int n = 16;
  int S = 0;
  int F = 0;
  std::uint64_t seed = 1;
  std::uint64_t rng_id = 0;
  std::string out;
  std::string clusters;
};

int run_sample(const SampleArgs& a) {
  Stopwatch timer;
  if (a.out.empty()) throw std::invalid_argument("need --out for the configuration image");
  const ModelParams params{a.d, a.p, a.S, a.F};
  const Box box{a.n, a.d};
  const Configuration c = Configuration::sample(params, box, a.seed, a.rng_id);
  {
    auto out = open_output(a.out);
    save_configuration(out, c);
  }
  std::vector<std::string> outputs{a.out};

  const ClusterLabeling labeling = cluster_labels(c);
  std::uint64_t largest = 0;
  std::uint64_t wired = 0;
  for (const auto& cl : labeling.clusters) {
    largest = std::max(largest, cl.size);
    wired += cl.wired_infinite ? 1 : 0;
  }
  std::cout << "vertices = " << box.size() << ", edges = " << c.edge_count() << ", open fraction = "
            << fmt(c.open_fraction()) << "\n";
  std::cout << "clusters = " << labeling.clusters.size() << ", largest = " << largest
            << ", boundary-spanning = " << wired << "\n";

  if (!a.clusters.empty()) {
    auto csv = open_output(a.clusters);
    write_csv_row(csv, {"label", "size", "touches_boundary", "wired_infinite"});
    for (std::size_t i = 0; i < labeling.clusters.size(); ++i) {
      const auto& cl = labeling.clusters[i];
      write_csv_row(csv, {std::to_string(i), std::to_string(cl.size), fmt_bool(cl.touches_boundary),
                          fmt_bool(cl.wired_infinite)});
    }
    outputs.push_back(a.clusters);
  }

  Json params_json;
  params_json["d"] = a.d;
  params_json["p"] = a.p;
  params_json["n"] = a.n;
  params_json["S"] = a.S;
  params_json["F"] = a.F;
  params_json["rng_id"] = a.rng_id;
  Json counts;
  counts["edges"] = c.edge_count();
  Json results;
  results["open_fraction"] = c.open_fraction();
  results["clusters"] = labeling.clusters.size();
  write_manifest("sample", params_json, a.seed, counts, outputs, results, timer.elapsed_ms());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// one-arm: radius-survival curve over a list of scales, plus the exponent fit.

struct OneArmArgs {
  int d = 2;
  double p = 0.5;
  int S = 0;
  std::vector<int> n_values;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out;
};

int run_one_arm(const OneArmArgs& a) {
  Stopwatch timer;
  if (a.n_values.empty()) throw std::invalid_argument("need --n with at least one scale");
  const ModelParams params{a.d, a.p, a.S, 0};

  std::vector<OneArmPoint> curve;
  for (const int n : a.n_values)
    curve.push_back({n, one_arm_probability(params, n, a.samples, a.seed, a.jobs)});

  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"d", "S", "p", "n", "estimate", "ci_half_width", "samples", "seed"});
    for (const auto& pt : curve)
      write_csv_row(csv, {std::to_string(a.d), std::to_string(a.S), fmt(a.p), std::to_string(pt.n),
                          fmt(pt.estimate.value), fmt(pt.estimate.ci_half_width), std::to_string(pt.estimate.samples),
                          std::to_string(pt.estimate.seed)});
    outputs.push_back(a.out);
  }

  for (const auto& pt : curve)
    std::cout << "n = " << pt.n << ": P(rad >= n) = " << estimate_field(pt.estimate) << "\n";

  int rc = kExitOk;
  Json fit_json;
  try {
    const ExponentFit fit = fit_one_arm_exponent(curve);
    std::cout << "power-law slope = " << fmt(fit.slope) << " +- " << fmt(fit.slope_stderr)
              << " (fit window n = " << a.n_values.front() << ".." << a.n_values.back() << ")\n";
    std::cout << "exponential model preferred = " << fmt_bool(fit.exponential_better) << "\n";
    fit_json["slope"] = fit.slope;
    fit_json["slope_stderr"] = fit.slope_stderr;
    fit_json["power_sse"] = fit.power_sse;
    fit_json["exponential_sse"] = fit.exponential_sse;
    fit_json["exponential_better"] = fit.exponential_better;
    fit_json["fit_window"] = a.n_values;
  } catch (const std::invalid_argument& e) {
    std::cout << "exponent fit unavailable: " << e.what() << "\n";
    rc = kExitCensored;
  }

  Json params_json;
  params_json["d"] = a.d;
  params_json["p"] = a.p;
  params_json["S"] = a.S;
  params_json["n"] = a.n_values;
  params_json["jobs"] = a.jobs;
  Json counts;
  counts["samples_per_scale"] = a.samples;
  write_manifest("one-arm", params_json, a.seed, counts, outputs, fit_json, timer.elapsed_ms());
  return rc;
}

// ---------------------------------------------------------------------------
// pc / pfin: bisection of a spanning probability through 1/2.

struct BisectArgs {
  int d = 2;
  int S = 0;
  int F = 0;  // pfin only
  int n = 32;
  double tol = 1e-3;
  std::uint64_t samples = 20000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out;
};

int run_bisection(const char* name, const BisectArgs& a, bool finite_complement) {
  Stopwatch timer;
  const BisectionResult res = finite_complement
                                  ? estimate_pfin(a.d, a.S, a.F, a.n, a.tol, a.samples, a.seed, a.jobs)
                                  : estimate_pc(a.d, a.S, a.n, a.tol, a.samples, a.seed, a.jobs);

  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"step", "p", "estimate", "ci_half_width", "samples", "seed"});
    for (std::size_t i = 0; i < res.steps.size(); ++i) {
      const auto& st = res.steps[i];
      write_csv_row(csv, {std::to_string(i), fmt(st.p), fmt(st.estimate.value), fmt(st.estimate.ci_half_width),
                          std::to_string(st.estimate.samples), std::to_string(st.estimate.seed)});
    }
    outputs.push_back(a.out);
  }

  std::cout << name << " = " << fmt(res.estimate.value) << " +- " << fmt(res.estimate.ci_half_width)
            << " (bracket) after " << res.steps.size() << " steps\n";
  std::cout << "stopped on CI = " << fmt_bool(res.stopped_on_ci) << "; finite-size proxy at n = " << a.n
            << ", d = " << a.d << "\n";

  Json params_json;
  params_json["d"] = a.d;
  params_json["S"] = a.S;
  if (finite_complement) params_json["F"] = a.F;
  params_json["n"] = a.n;
  params_json["tol"] = a.tol;
  params_json["jobs"] = a.jobs;
  Json counts;
  counts["samples_per_step"] = a.samples;
  counts["steps"] = res.steps.size();
  Json results;
  results["estimate"] = res.estimate.value;
  results["ci_half_width"] = res.estimate.ci_half_width;
  results["stopped_on_ci"] = res.stopped_on_ci;
  results["finite_size_caveat"] = res.finite_size_caveat;
  write_manifest(name, params_json, a.seed, counts, outputs, results, timer.elapsed_ms());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// block: coarse-graining field over a grid of blocks.

struct BlockArgs {
  int d = 2;
  double p = 0.5;
  int n = 4;
  int z_radius = 4;
  int S = 0;
  int F = 0;
  std::uint64_t seed = 1;
  std::uint64_t rng_id = 0;
  unsigned jobs = 0;
  std::string out;
};

int run_block(const BlockArgs& a) {
  Stopwatch timer;
  const ModelParams params{a.d, a.p, a.S, a.F};
  const BlockGrid grid = BlockGrid::sample(params, a.n, a.z_radius, a.seed, a.rng_id);
  const BlockFieldReport report = good_block_field(grid, a.jobs);

  std::uint64_t good = 0;
  for (const auto flag : report.good) good += flag;

  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"z", "rn_size", "num_components", "max_component", "large_component", "green_size"});
    for (const auto& entry : report.entries) {
      std::uint64_t green_size = 0;
      for (const auto g : entry.green) green_size += g;
      write_csv_row(csv, {coords_field(entry.z, entry.d), std::to_string(entry.rn_size),
                          std::to_string(entry.component_sizes.size()),
                          std::to_string(entry.component_sizes.empty() ? 0 : entry.component_sizes.front()),
                          fmt_bool(entry.large_component), std::to_string(green_size)});
    }
    outputs.push_back(a.out);
  }

  std::cout << "blocks = " << report.entries.size() << ", good = " << good
            << ", good fraction = " << fmt(static_cast<double>(good) / static_cast<double>(report.entries.size()))
            << "\n";
  std::cout << "good blocks span axis 0 = " << fmt_bool(report.spanning) << "\n";

  Json params_json;
  params_json["d"] = a.d;
  params_json["p"] = a.p;
  params_json["n"] = a.n;
  params_json["z_radius"] = a.z_radius;
  params_json["S"] = a.S;
  params_json["F"] = a.F;
  params_json["rng_id"] = a.rng_id;
  params_json["jobs"] = a.jobs;
  Json counts;
  counts["blocks"] = report.entries.size();
  Json results;
  results["good_blocks"] = good;
  results["spanning"] = report.spanning;
  write_manifest("block", params_json, a.seed, counts, outputs, results, timer.elapsed_ms());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// surface: climb interfaces in a slab, interior-boundary and injectivity
// checks per seed.

struct SurfaceArgs {
  int d = 3;
  double p = 0.04;
  int w = 16;
  int h = 16;
  double safe_threshold = 0.04;
  std::uint64_t seeds = 50;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out;
};

struct SurfaceRow {
  std::uint64_t reach = 0;
  std::uint64_t plaquettes = 0;
  bool censored = false;
  std::uint64_t interior_boundary = 0;
  bool injective = false;
};

int run_surface(const SurfaceArgs& a) {
  Stopwatch timer;
  if (a.seeds == 0) throw std::invalid_argument("need --seeds >= 1");
  if (a.p > a.safe_threshold)
    std::cerr << "note: p = " << fmt(a.p) << " exceeds the documented locality threshold " << fmt(a.safe_threshold)
              << "; the interface may be censored at the top\n";
  const SlabSpec slab{a.d, a.w, a.h};
  const ModelParams params{a.d, a.p, 0, 0};
  const Box box{slab.required_box_radius(), a.d};

  const auto rows = map_indexed<SurfaceRow>(a.seeds, a.jobs, [&](std::uint64_t i) {
    const Configuration c = Configuration::sample(params, box, a.seed, i);
    const auto reach = climb_reachable_mask(c, slab);
    const InterfaceResult iface = ascending_interface(c, slab, reach);
    SurfaceRow row;
    for (const auto flag : reach) row.reach += flag;
    row.plaquettes = iface.plaquettes.size();
    row.censored = iface.censored_top;
    for (const auto& f : boundary(iface.plaquettes))
      if (slab_interior_facet(slab, f)) ++row.interior_boundary;
    std::vector<ZeroSumPoint> centres;
    for (const auto& q : iface.plaquettes.items)
      if (slab_interior_facet(slab, q)) centres.push_back(project_zero_sum(facet_center2(q), a.d));
    std::sort(centres.begin(), centres.end());
    row.injective = std::adjacent_find(centres.begin(), centres.end()) == centres.end();
    return row;
  });

  std::uint64_t passed = 0;
  std::uint64_t censored = 0;
  for (const auto& row : rows) {
    passed += (row.interior_boundary == 0 && row.injective) ? 1 : 0;
    censored += row.censored ? 1 : 0;
  }

  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"seed_index", "reach_size", "plaquette_count", "censored_top", "interior_boundary_facets",
                        "injective"});
    for (std::size_t i = 0; i < rows.size(); ++i)
      write_csv_row(csv, {std::to_string(i), std::to_string(rows[i].reach), std::to_string(rows[i].plaquettes),
                          fmt_bool(rows[i].censored), std::to_string(rows[i].interior_boundary),
                          fmt_bool(rows[i].injective)});
    outputs.push_back(a.out);
  }

  std::cout << passed << "/" << a.seeds << " seeds: empty interior boundary and injective projection\n";
  if (censored > 0) std::cout << censored << " seeds censored at the top layer\n";

  Json params_json;
  params_json["d"] = a.d;
  params_json["p"] = a.p;
  params_json["w"] = a.w;
  params_json["h"] = a.h;
  params_json["safe_threshold"] = a.safe_threshold;
  params_json["jobs"] = a.jobs;
  Json counts;
  counts["seeds"] = a.seeds;
  Json results;
  results["passed"] = passed;
  results["censored"] = censored;
  write_manifest("surface", params_json, a.seed, counts, outputs, results, timer.elapsed_ms());
  if (passed < a.seeds) return kExitCheckFailed;
  return censored > 0 ? kExitCensored : kExitOk;
}

// ---------------------------------------------------------------------------
// pi-limit: rightward-growth shell limits per seed.

struct PiLimitArgs {
  int d = 3;
  double p = 0.15;
  int window = 64;
  std::uint64_t seeds = 100;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out;
};

int run_pi_limit(const PiLimitArgs& a) {
  Stopwatch timer;
  if (a.seeds == 0) throw std::invalid_argument("need --seeds >= 1");
  const auto rows = map_indexed<GrowthReport>(a.seeds, a.jobs, [&](std::uint64_t i) {
    return rightward_growth_experiment(a.d, a.p, a.window, a.seed, i);
  });

  std::uint64_t stabilized = 0;
  std::uint64_t censored = 0;
  for (const auto& row : rows) {
    stabilized += (row.f_stabilized && row.nonempty) ? 1 : 0;
    censored += row.censored ? 1 : 0;
  }

  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"seed_index", "steps", "censored", "f_stabilized", "line_r", "limit_size", "nonempty"});
    for (std::size_t i = 0; i < rows.size(); ++i)
      write_csv_row(csv, {std::to_string(i), std::to_string(rows[i].steps), fmt_bool(rows[i].censored),
                          fmt_bool(rows[i].f_stabilized), std::to_string(rows[i].line_r),
                          std::to_string(rows[i].limit_set.size()), fmt_bool(rows[i].nonempty)});
    outputs.push_back(a.out);
  }

  std::cout << stabilized << "/" << a.seeds << " seeds: marked line edge stabilized with nonempty shell limit\n";
  if (censored > 0) std::cout << censored << " seeds censored by the window\n";

  Json params_json;
  params_json["d"] = a.d;
  params_json["p"] = a.p;
  params_json["window"] = a.window;
  params_json["jobs"] = a.jobs;
  Json counts;
  counts["seeds"] = a.seeds;
  Json results;
  results["stabilized_nonempty"] = stabilized;
  results["censored"] = censored;
  write_manifest("pi-limit", params_json, a.seed, counts, outputs, results, timer.elapsed_ms());
  return censored > 0 ? kExitCensored : kExitOk;
}

// ---------------------------------------------------------------------------
// uniqueness: frequency of two or more spanning finite-complement components.

struct UniquenessArgs {
  int d = 2;
  int S = 0;
  int F = 0;
  std::vector<int> n_values;
  std::vector<double> p_values;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out;
};

int run_uniqueness(const UniquenessArgs& a) {
  Stopwatch timer;
  if (a.n_values.empty()) throw std::invalid_argument("need --n with at least one size");
  if (a.p_values.empty()) throw std::invalid_argument("need --p with at least one parameter");

  struct PointRow {
    int n = 0;
    double p = 0;
    Estimate estimate;
  };
  std::vector<PointRow> points;
  for (const int n : a.n_values) {
    for (const double p : a.p_values) {
      const ModelParams params{a.d, p, a.S, a.F};
      const Box box{n, a.d};
      const auto flags = map_indexed<std::uint8_t>(a.samples, a.jobs, [&](std::uint64_t i) -> std::uint8_t {
        const Configuration c = Configuration::sample(params, box, a.seed, i);
        const ClusterLabeling labeling = cluster_labels(c);
        return count_spanning_finite_complement_components(c, labeling) >= 2 ? 1 : 0;
      });
      std::uint64_t hits = 0;
      for (const auto f : flags) hits += f;
      points.push_back({n, p, binomial_estimate(hits, a.samples, a.seed)});
    }
  }

  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    auto csv = open_output(a.out);
    write_csv_row(csv, {"d", "S", "F", "n", "p", "freq_two_spanning", "ci_half_width", "samples", "seed"});
    for (const auto& pt : points)
      write_csv_row(csv, {std::to_string(a.d), std::to_string(a.S), std::to_string(a.F), std::to_string(pt.n),
                          fmt(pt.p), fmt(pt.estimate.value), fmt(pt.estimate.ci_half_width),
                          std::to_string(pt.estimate.samples), std::to_string(pt.estimate.seed)});
    outputs.push_back(a.out);
  }

  for (const auto& pt : points)
    std::cout << "n = " << pt.n << ", p = " << fmt(pt.p)
              << ": P(>= 2 spanning finite-complement components) = " << estimate_field(pt.estimate) << "\n";

  Json params_json;
  params_json["d"] = a.d;
  params_json["S"] = a.S;
  params_json["F"] = a.F;
  params_json["n"] = a.n_values;
  params_json["p"] = a.p_values;
  params_json["jobs"] = a.jobs;
  Json counts;
  counts["samples_per_point"] = a.samples;
  counts["points"] = points.size();
  write_manifest("uniqueness", params_json, a.seed, counts, outputs, Json(), timer.elapsed_ms());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perclab: finite-cluster and plaquette-surface percolation laboratory"};
  app.require_subcommand(1);

  std::function<int()> runner;

  // --- tree -----------------------------------------------------------------
  TreeArgs tree_args;
  FlagSet tree_flags;
  std::string tree_config;
  {
    CLI::App* cmd = app.add_subcommand("tree", "exact b-ary tree solver, golden comparison, CSV table");
    tree_flags.add(cmd, "--b", tree_args.b, "branching factor (>= 2)");
    tree_flags.add(cmd, "--p", tree_args.p_values, "edge parameters for the CSV table (default: 0.01..0.99)")
        ->delimiter(',');
    tree_flags.add(cmd, "--golden", tree_args.golden_dir, "directory with golden value tables");
    tree_flags.add_flag(cmd, "--skip-golden", tree_args.skip_golden, "skip the golden-file comparison");
    tree_flags.add(cmd, "--out", tree_args.out, "CSV output path");
    cmd->add_option("--config", tree_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!tree_config.empty()) tree_flags.apply(load_config(tree_config));
      runner = [&] { return run_tree(tree_args); };
    });
  }

  // --- topology-check ---------------------------------------------------------
  TopologyArgs topo_args;
  FlagSet topo_flags;
  std::string topo_config;
  {
    CLI::App* cmd = app.add_subcommand("topology-check", "shell lemma assertions on exhaustive/random animals");
    topo_flags.add(cmd, "--d", topo_args.d, "dimension");
    topo_flags.add(cmd, "--max-size", topo_args.max_size, "exhaustive suite: maximal animal size");
    topo_flags.add_flag(cmd, "--exhaustive", topo_args.exhaustive, "run the exhaustive suite");
    topo_flags.add(cmd, "--random", topo_args.random_sets, "number of random connected sets");
    topo_flags.add(cmd, "--max-random-size", topo_args.max_random_size, "random suite: maximal size");
    topo_flags.add(cmd, "--margin", topo_args.margin, "window margin around each set");
    topo_flags.add_flag(cmd, "--removal", topo_args.removal, "single-plaquette removal checks (exhaustive suite)");
    topo_flags.add(cmd, "--seed", topo_args.seed, "master seed for the random suite");
    topo_flags.add(cmd, "--jobs", topo_args.jobs, "worker threads (0 = all cores)");
    topo_flags.add(cmd, "--out", topo_args.out, "CSV output path");
    cmd->add_option("--config", topo_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!topo_config.empty()) topo_flags.apply(load_config(topo_config));
      runner = [&] { return run_topology_check(topo_args); };
    });
  }

  // --- sample -----------------------------------------------------------------
  SampleArgs sample_args;
  FlagSet sample_flags;
  std::string sample_config;
  {
    CLI::App* cmd = app.add_subcommand("sample", "sample one configuration and save its binary image");
    sample_flags.add(cmd, "--d", sample_args.d, "dimension");
    sample_flags.add(cmd, "--p", sample_args.p, "edge parameter");
    sample_flags.add(cmd, "--n", sample_args.n, "box radius");
    sample_flags.add(cmd, "--S", sample_args.S, "spread-out range (0 = nearest neighbour)");
    sample_flags.add(cmd, "--F", sample_args.F, "finite-complement fattening distance");
    sample_flags.add(cmd, "--seed", sample_args.seed, "master seed");
    sample_flags.add(cmd, "--rng-id", sample_args.rng_id, "rng stream id");
    sample_flags.add(cmd, "--out", sample_args.out, "binary configuration output path");
    sample_flags.add(cmd, "--clusters", sample_args.clusters, "optional cluster table CSV path");
    cmd->add_option("--config", sample_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!sample_config.empty()) sample_flags.apply(load_config(sample_config));
      runner = [&] { return run_sample(sample_args); };
    });
  }

  // --- one-arm ----------------------------------------------------------------
  OneArmArgs one_arm_args;
  FlagSet one_arm_flags;
  std::string one_arm_config;
  {
    CLI::App* cmd = app.add_subcommand("one-arm", "radius survival curve and exponent fit");
    one_arm_flags.add(cmd, "--d", one_arm_args.d, "dimension");
    one_arm_flags.add(cmd, "--p", one_arm_args.p, "edge parameter");
    one_arm_flags.add(cmd, "--S", one_arm_args.S, "spread-out range");
    one_arm_flags.add(cmd, "--n", one_arm_args.n_values, "scales, e.g. 4,8,16,32")->delimiter(',');
    one_arm_flags.add(cmd, "--samples", one_arm_args.samples, "samples per scale");
    one_arm_flags.add(cmd, "--seed", one_arm_args.seed, "master seed");
    one_arm_flags.add(cmd, "--jobs", one_arm_args.jobs, "worker threads (0 = all cores)");
    one_arm_flags.add(cmd, "--out", one_arm_args.out, "CSV output path");
    cmd->add_option("--config", one_arm_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!one_arm_config.empty()) one_arm_flags.apply(load_config(one_arm_config));
      runner = [&] { return run_one_arm(one_arm_args); };
    });
  }

  // --- pc / pfin ----------------------------------------------------------------
  BisectArgs pc_args;
  FlagSet pc_flags;
  std::string pc_config;
  {
    CLI::App* cmd = app.add_subcommand("pc", "bisect the open-crossing probability through 1/2");
    pc_flags.add(cmd, "--d", pc_args.d, "dimension");
    pc_flags.add(cmd, "--S", pc_args.S, "spread-out range");
    pc_flags.add(cmd, "--n", pc_args.n, "box radius (>= 8)");
    pc_flags.add(cmd, "--tol", pc_args.tol, "bracket width tolerance");
    pc_flags.add(cmd, "--samples", pc_args.samples, "samples per bisection step");
    pc_flags.add(cmd, "--seed", pc_args.seed, "master seed");
    pc_flags.add(cmd, "--jobs", pc_args.jobs, "worker threads (0 = all cores)");
    pc_flags.add(cmd, "--out", pc_args.out, "CSV output path");
    cmd->add_option("--config", pc_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!pc_config.empty()) pc_flags.apply(load_config(pc_config));
      runner = [&] { return run_bisection("pc", pc_args, /*finite_complement=*/false); };
    });
  }

  BisectArgs pfin_args;
  FlagSet pfin_flags;
  std::string pfin_config;
  {
    CLI::App* cmd = app.add_subcommand("pfin", "bisect the finite-complement spanning probability through 1/2");
    pfin_flags.add(cmd, "--d", pfin_args.d, "dimension");
    pfin_flags.add(cmd, "--S", pfin_args.S, "spread-out range");
    pfin_flags.add(cmd, "--F", pfin_args.F, "fattening distance");
    pfin_flags.add(cmd, "--n", pfin_args.n, "box radius (>= 8)");
    pfin_flags.add(cmd, "--tol", pfin_args.tol, "bracket width tolerance");
    pfin_flags.add(cmd, "--samples", pfin_args.samples, "samples per bisection step");
    pfin_flags.add(cmd, "--seed", pfin_args.seed, "master seed");
    pfin_flags.add(cmd, "--jobs", pfin_args.jobs, "worker threads (0 = all cores)");
    pfin_flags.add(cmd, "--out", pfin_args.out, "CSV output path");
    cmd->add_option("--config", pfin_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!pfin_config.empty()) pfin_flags.apply(load_config(pfin_config));
      runner = [&] { return run_bisection("pfin", pfin_args, /*finite_complement=*/true); };
    });
  }

  // --- block -------------------------------------------------------------------
  BlockArgs block_args;
  FlagSet block_flags;
  std::string block_config;
  {
    CLI::App* cmd = app.add_subcommand("block", "coarse-graining block field over one configuration");
    block_flags.add(cmd, "--d", block_args.d, "dimension");
    block_flags.add(cmd, "--p", block_args.p, "edge parameter");
    block_flags.add(cmd, "--n", block_args.n, "block radius");
    block_flags.add(cmd, "--z-radius", block_args.z_radius, "block index radius");
    block_flags.add(cmd, "--S", block_args.S, "spread-out range");
    block_flags.add(cmd, "--F", block_args.F, "fattening distance");
    block_flags.add(cmd, "--seed", block_args.seed, "master seed");
    block_flags.add(cmd, "--rng-id", block_args.rng_id, "rng stream id");
    block_flags.add(cmd, "--jobs", block_args.jobs, "worker threads (0 = all cores)");
    block_flags.add(cmd, "--out", block_args.out, "CSV output path");
    cmd->add_option("--config", block_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!block_config.empty()) block_flags.apply(load_config(block_config));
      runner = [&] { return run_block(block_args); };
    });
  }

  // --- surface -------------------------------------------------------------------
  SurfaceArgs surface_args;
  FlagSet surface_flags;
  std::string surface_config;
  {
    CLI::App* cmd = app.add_subcommand("surface", "climb interface in a slab, per-seed sheet checks");
    surface_flags.add(cmd, "--d", surface_args.d, "dimension");
    surface_flags.add(cmd, "--p", surface_args.p, "edge parameter");
    surface_flags.add(cmd, "--w", surface_args.w, "lateral half-width of the slab");
    surface_flags.add(cmd, "--height", surface_args.h, "slab height");
    surface_flags.add(cmd, "--safe-threshold", surface_args.safe_threshold,
                      "documented locality threshold for p (warn above)");
    surface_flags.add(cmd, "--seeds", surface_args.seeds, "number of independent seeds");
    surface_flags.add(cmd, "--seed", surface_args.seed, "master seed");
    surface_flags.add(cmd, "--jobs", surface_args.jobs, "worker threads (0 = all cores)");
    surface_flags.add(cmd, "--out", surface_args.out, "CSV output path");
    cmd->add_option("--config", surface_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!surface_config.empty()) surface_flags.apply(load_config(surface_config));
      runner = [&] { return run_surface(surface_args); };
    });
  }

  // --- pi-limit --------------------------------------------------------------------
  PiLimitArgs pi_args;
  FlagSet pi_flags;
  std::string pi_config;
  {
    CLI::App* cmd = app.add_subcommand("pi-limit", "rightward growth and shell limits per seed");
    pi_flags.add(cmd, "--d", pi_args.d, "dimension");
    pi_flags.add(cmd, "--p", pi_args.p, "edge parameter");
    pi_flags.add(cmd, "--window", pi_args.window, "window radius");
    pi_flags.add(cmd, "--seeds", pi_args.seeds, "number of independent seeds");
    pi_flags.add(cmd, "--seed", pi_args.seed, "master seed");
    pi_flags.add(cmd, "--jobs", pi_args.jobs, "worker threads (0 = all cores)");
    pi_flags.add(cmd, "--out", pi_args.out, "CSV output path");
    cmd->add_option("--config", pi_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!pi_config.empty()) pi_flags.apply(load_config(pi_config));
      runner = [&] { return run_pi_limit(pi_args); };
    });
  }

  // --- uniqueness --------------------------------------------------------------------
  UniquenessArgs uniq_args;
  FlagSet uniq_flags;
  std::string uniq_config;
  {
    CLI::App* cmd = app.add_subcommand("uniqueness", "frequency of multiple spanning finite-complement components");
    uniq_flags.add(cmd, "--d", uniq_args.d, "dimension");
    uniq_flags.add(cmd, "--S", uniq_args.S, "spread-out range");
    uniq_flags.add(cmd, "--F", uniq_args.F, "fattening distance");
    uniq_flags.add(cmd, "--n", uniq_args.n_values, "box radii, e.g. 32,64")->delimiter(',');
    uniq_flags.add(cmd, "--p", uniq_args.p_values, "edge parameters, e.g. 0.48,0.5,0.52")->delimiter(',');
    uniq_flags.add(cmd, "--samples", uniq_args.samples, "samples per (n, p) point");
    uniq_flags.add(cmd, "--seed", uniq_args.seed, "master seed");
    uniq_flags.add(cmd, "--jobs", uniq_args.jobs, "worker threads (0 = all cores)");
    uniq_flags.add(cmd, "--out", uniq_args.out, "CSV output path");
    cmd->add_option("--config", uniq_config, "JSON file with default flag values");
    cmd->callback([&] {
      if (!uniq_config.empty()) uniq_flags.apply(load_config(uniq_config));
      runner = [&] { return run_uniqueness(uniq_args); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kExitParamError;
  } catch (const std::invalid_argument& e) {
    // Config-file problems surface during subcommand callbacks inside parse.
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitParamError;
  }

  try {
    return runner();
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitParamError;
  } catch (const std::domain_error& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitParamError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
