#include "trifpp/boltzmann.hpp"
#include "trifpp/exact_laws.hpp"
#include "trifpp/experiments.hpp"
#include "trifpp/halfplane.hpp"
#include "trifpp/hull.hpp"
#include "trifpp/metrics.hpp"
#include "trifpp/planar_map.hpp"
#include "trifpp/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace trifpp;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << text;
}

std::string read_in(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

json laws_dump(int kmax, int pmax) {
  json j;
  j["version"] = kVersion;
  json rows = json::array();
  for (int k = 0; k <= kmax; ++k)
    rows.push_back({{"k", k}, {"theta", theta_pmf(k)}, {"theta_survival", theta_survival(k)},
                    {"h", h_stationary(k)}});
  j["theta"] = rows;
  json z = json::array();
  for (int p = 1; p <= pmax; ++p) z.push_back({{"p", p}, {"Z", z_boltzmann(p)}, {"log_C", log_c(p)}});
  j["Z"] = z;
  j["spectral_radius"] = root_degree_spectral_radius();
  return j;
}

struct Args {
  // shared
  std::uint64_t seed = 1;
  std::string out;
  // laws
  int kmax = 50;
  int pmax = 30;
  // sample
  int p = 1;
  int count = 1;
  std::int64_t size_cap = -1;
  int depth = 4;
  std::int64_t halfwidth = 4;
  int radius = 5;
  std::string perimeters_csv;
  std::string method = "layered";
  // dist
  std::string metric = "graph";
  std::string weights = "const:1";
  std::string in;
  int source = -1;
  std::vector<int> targets;
  // estimate / hull-profile
  std::string target;
  int replicas = 8;
  std::string weight_opt;
  int threads = 1;
  int max_extensions = 12;
  std::int64_t vertex_budget = kDefaultVertexBudget;
  std::vector<int> radii;
  std::string suite;
};

int cmd_sample_boltzmann(const Args& a) {
  if (a.p < 1 || a.count < 1) throw ConfigError("--p and --count must be positive");
  std::ostringstream os;
  for (int i = 0; i < a.count; ++i) {
    Rng rng = make_stream(a.seed, {static_cast<std::int64_t>(Role::Replica), i});
    BoltzmannSample s = sample_boltzmann_pgon(a.p, rng, a.size_cap);
    if (s.truncated) {
      std::cerr << "sample " << i << ": truncated at " << s.inner_vertices << " inner vertices\n";
      return kExitFail;
    }
    os << serialize(s.map, {"INNER " + std::to_string(s.inner_vertices)});
  }
  write_out(a.out, os.str());
  return kExitOk;
}

int cmd_sample_lhpt(const Args& a) {
  if (a.depth < 1 || a.halfwidth < 0) throw ConfigError("--depth must be >= 1 and --halfwidth >= 0");
  LhptWindow w = sample_lhpt(a.depth, a.halfwidth, a.seed, a.vertex_budget);
  write_out(a.out, serialize_window(w));
  return kExitOk;
}

int cmd_sample_hull(const Args& a) {
  if (a.radius < 1 || a.count < 1) throw ConfigError("--radius and --count must be positive");
  HullOptions opt;
  if (a.method == "forest") opt.method = HullMethod::Forest;
  else if (a.method != "layered") throw ConfigError("unknown hull method: " + a.method);
  opt.vertex_budget = a.vertex_budget;
  std::ostringstream maps, csv;
  csv << "replica,seed,r,perimeter\n";
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t s = replica_seed(a.seed, i);
    HullMap h = sample_hull(a.radius, s, opt);
    const auto L = h.perimeters();
    for (std::size_t r = 0; r < L.size(); ++r) csv << i << ',' << s << ',' << r + 1 << ',' << L[r] << '\n';
    if (!a.out.empty()) maps << serialize_hull(h);
  }
  if (!a.perimeters_csv.empty()) write_out(a.perimeters_csv, csv.str());
  if (!a.out.empty()) write_out(a.out, maps.str());
  if (a.out.empty() && a.perimeters_csv.empty()) write_out("-", csv.str());
  return kExitOk;
}

int cmd_dist(const Args& a) {
  std::vector<std::string> extra;
  HalfEdgeMap map = deserialize(read_in(a.in), &extra);
  if (!validate(map).ok) {
    std::cerr << "dist: input map fails validation\n";
    return kExitFail;
  }
  const Metric m = parse_metric(a.metric);
  const bool dual = m == Metric::Dual || m == Metric::Eden;
  const int nodes = dual ? map.num_faces : map.num_vertices;
  const int src = a.source >= 0 ? a.source : (dual ? map.face[map.root] : map.origin[map.root]);
  if (src >= nodes) throw ConfigError("--source out of range");
  WeightAssignment w = assign_weights(map, WeightSpec::parse(a.weights), dual ? WeightScope::Dual : WeightScope::Primal,
                                      derive_seed(a.seed, {static_cast<std::int64_t>(Role::Weight)}));
  DistanceResult r;
  switch (m) {
    case Metric::Graph: r = bfs_distance(map, {src}); break;
    case Metric::Fpp: r = fpp_distance(map, w, {src}); break;
    case Metric::Dual: r = dual_distance(map, {src}); break;
    case Metric::Eden: r = eden_distance(map, w, {src}); break;
  }
  json j;
  j["version"] = kVersion;
  j["metric"] = metric_name(m);
  j["weights"] = w.spec.str();
  j["seed"] = a.seed;
  j["source"] = src;
  auto val = [](double d) { return d == kInf ? json(nullptr) : json(d); };
  if (a.targets.empty()) {
    json all = json::array();
    for (double d : r.values) all.push_back(val(d));
    j["distances"] = all;
  } else {
    json t = json::object();
    for (int v : a.targets) {
      if (v < 0 || v >= nodes) throw ConfigError("target out of range: " + std::to_string(v));
      t[std::to_string(v)] = val(r.values[v]);
    }
    j["distances"] = t;
  }
  write_out(a.out, j.dump(2));
  return kExitOk;
}

ExperimentConfig experiment_config(const Args& a, Target t) {
  ExperimentConfig cfg;
  cfg.target = t;
  cfg.depth = a.depth;
  cfg.replicas = a.replicas;
  if (!a.weight_opt.empty()) cfg.weights = WeightSpec::parse(a.weight_opt);
  cfg.seed = a.seed;
  cfg.halfwidth = a.halfwidth;
  cfg.max_extensions = a.max_extensions;
  cfg.vertex_budget = a.vertex_budget;
  cfg.threads = a.threads;
  cfg.radii = a.radii;
  validate_config(cfg);
  return cfg;
}

int cmd_estimate(const Args& a) {
  const Target t = parse_target(a.target);
  if (t != Target::C0 && t != Target::C1 && t != Target::C2)
    throw ConfigError("estimate: --target must be c0, c1 or c2");
  EstimateReport rep = run_estimate(experiment_config(a, t));
  write_out(a.out, rep.to_json().dump(2));
  return kExitOk;
}

int cmd_hull_profile(const Args& a) {
  HullProfileReport rep = run_hull_profile(experiment_config(a, Target::HullProfile));
  write_out(a.out, rep.to_json().dump(2));
  return kExitOk;
}

int report_checks(const std::vector<CheckResult>& checks, const std::string& out) {
  json j;
  j["version"] = kVersion;
  j["checks"] = checks_json(checks);
  j["pass"] = all_pass(checks);
  write_out(out, j.dump(2));
  for (const auto& c : checks) std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  return all_pass(checks) ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact laws, samplers and first-passage estimates for random planar triangulations"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Args a;

  auto* laws = app.add_subcommand("laws", "exact law tables");
  laws->require_subcommand(1);
  auto* laws_dump_cmd = laws->add_subcommand("dump", "theta, h, Z tables as JSON");
  laws_dump_cmd->add_option("--kmax", a.kmax, "largest k for theta and h")->check(CLI::NonNegativeNumber);
  laws_dump_cmd->add_option("--pmax", a.pmax, "largest perimeter for Z")->check(CLI::PositiveNumber);
  laws_dump_cmd->add_option("--out", a.out);
  auto* laws_check = laws->add_subcommand("check", "identity checks");
  laws_check->add_option("--out", a.out);

  auto* sample = app.add_subcommand("sample", "emit samples");
  sample->require_subcommand(1);
  auto* s_boltz = sample->add_subcommand("boltzmann", "free Boltzmann p-gon triangulations");
  s_boltz->add_option("--p", a.p)->required();
  s_boltz->add_option("--count", a.count);
  s_boltz->add_option("--size-cap", a.size_cap, "give up past this many inner vertices");
  auto* s_lhpt = sample->add_subcommand("lhpt", "finite window of the lower half-plane triangulation");
  s_lhpt->add_option("--depth", a.depth)->required();
  s_lhpt->add_option("--halfwidth", a.halfwidth);
  s_lhpt->add_option("--vertex-budget", a.vertex_budget);
  auto* s_hull = sample->add_subcommand("hull", "UIPT hulls");
  s_hull->add_option("--radius", a.radius)->required();
  s_hull->add_option("--count", a.count);
  s_hull->add_option("--method", a.method, "layered or forest");
  s_hull->add_option("--emit-perimeters", a.perimeters_csv, "CSV of L_1..L_R per sample");
  s_hull->add_option("--vertex-budget", a.vertex_budget);
  for (auto* s : {s_boltz, s_lhpt, s_hull}) {
    s->add_option("--seed", a.seed);
    s->add_option("--out", a.out);
  }

  auto* dist = app.add_subcommand("dist", "distances on a serialized map");
  dist->add_option("--metric", a.metric, "graph, fpp, dual or eden");
  dist->add_option("--weights", a.weights);
  dist->add_option("--seed", a.seed, "weight seed");
  dist->add_option("--in", a.in, "PMAP file, - for stdin");
  dist->add_option("--source", a.source, "vertex (primal) or face (dual); default: the root");
  dist->add_option("--targets", a.targets);
  dist->add_option("--out", a.out);

  auto* est = app.add_subcommand("estimate", "time-constant estimate on LHPT windows");
  est->add_option("--target", a.target)->required();
  est->add_option("--depth", a.depth)->required();
  est->add_option("--replicas", a.replicas);
  est->add_option("--halfwidth", a.halfwidth, "initial halfwidth; default max(8, depth^2/2)");
  est->add_option("--max-extensions", a.max_extensions);

  auto* prof = app.add_subcommand("hull-profile", "min/max of d(root, cycle R)/R over hulls");
  prof->add_option("--radius", a.radii, "repeatable")->required();
  prof->add_option("--replicas", a.replicas);

  for (auto* s : {est, prof}) {
    s->add_option("--weights", a.weight_opt);
    s->add_option("--seed", a.seed);
    s->add_option("--threads", a.threads);
    s->add_option("--vertex-budget", a.vertex_budget);
    s->add_option("--out", a.out);
  }

  auto* verify = app.add_subcommand("verify", "invariant suites with pinned seeds");
  verify->add_option("suite", a.suite, "laws, samplers, structure, tails or all")->required();
  verify->add_option("--seed", a.seed);
  verify->add_option("--out", a.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  // estimate defaults the halfwidth per depth
  if (est->parsed() && est->count("--halfwidth") == 0) a.halfwidth = -1;
  if (prof->parsed()) {
    a.depth = a.radii.empty() ? 1 : a.radii.front();
    a.halfwidth = -1;
  }

  try {
    if (laws_dump_cmd->parsed()) {
      write_out(a.out, laws_dump(a.kmax, a.pmax).dump(2));
      return kExitOk;
    }
    if (laws_check->parsed()) {
      auto checks = check_exact_laws();
      checks.push_back(check_spectral_radius());
      return report_checks(checks, a.out);
    }
    if (s_boltz->parsed()) return cmd_sample_boltzmann(a);
    if (s_lhpt->parsed()) return cmd_sample_lhpt(a);
    if (s_hull->parsed()) return cmd_sample_hull(a);
    if (dist->parsed()) return cmd_dist(a);
    if (est->parsed()) return cmd_estimate(a);
    if (prof->parsed()) return cmd_hull_profile(a);
    if (verify->parsed()) return report_checks(run_suite(parse_suite(a.suite), a.seed), a.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}
