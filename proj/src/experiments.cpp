#include "trifpp/experiments.hpp"

#include "trifpp/boltzmann.hpp"
#include "trifpp/exact_laws.hpp"
#include "trifpp/lazy_map.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace trifpp {

namespace {

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

// Least-squares line through (x, y); returns slope, intercept, r^2.
struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = x[i];
    A(i, 1) = 1.0;
    b(i) = y[i];
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  LineFit f{c(0), c(1), 0};
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (A * c - b).squaredNorm();
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

double log_big(const BigInt& x) {
  const unsigned bits = boost::multiprecision::msb(x) + 1;
  const unsigned shift = bits > 60 ? bits - 60 : 0;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

double hurwitz_tail(double s, int from) {
  double head = 0;
  for (int k = from - 1; k >= 1; --k) head += std::pow(static_cast<double>(k), -s);
  return boost::math::zeta(s) - head;
}

std::vector<std::pair<int, std::uint64_t>> hole_list(const HullMap& h) {
  std::vector<std::pair<int, std::uint64_t>> holes;
  for (std::size_t k = 0; k < h.open_slots.size(); ++k) holes.emplace_back(h.open_slot_faces[k], h.slot_key(h.open_slots[k]));
  return holes;
}

}  // namespace

Target parse_target(const std::string& text) {
  if (text == "c0") return Target::C0;
  if (text == "c1") return Target::C1;
  if (text == "c2") return Target::C2;
  if (text == "hull_profile" || text == "hull-profile") return Target::HullProfile;
  if (text == "law_check" || text == "law-check") return Target::LawCheck;
  throw ConfigError("unknown target '" + text + "'");
}

std::string target_name(Target t) {
  switch (t) {
    case Target::C0: return "c0";
    case Target::C1: return "c1";
    case Target::C2: return "c2";
    case Target::HullProfile: return "hull_profile";
    case Target::LawCheck: return "law_check";
  }
  return "?";
}

WeightSpec effective_weights(const ExperimentConfig& cfg) {
  if (cfg.weights) return *cfg.weights;
  switch (cfg.target) {
    case Target::C1: return WeightSpec::parse("const:1");
    case Target::C2: return WeightSpec::parse("exp:1");
    default: return WeightSpec::parse("uniform:0.5,1");
  }
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.depth < 1) throw ConfigError("depth must be at least 1");
  if (cfg.replicas < 1) throw ConfigError("replicas must be at least 1");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (cfg.max_extensions < 0) throw ConfigError("max_extensions must be non-negative");
  if (cfg.halfwidth != -1 && cfg.halfwidth < 1) throw ConfigError("halfwidth must be at least 1");
  for (int r : cfg.radii) {
    if (r < 1) throw ConfigError("radii must be positive");
  }
  const WeightSpec w = effective_weights(cfg);
  switch (cfg.target) {
    case Target::C0:
    case Target::HullProfile:
      if (w.law == WeightLaw::Exponential || !(w.lo() > 0) || w.hi() > 1) {
        throw ConfigError("primal weights must be supported in [kappa, 1] with kappa > 0");
      }
      break;
    case Target::C1:
      if (w.law != WeightLaw::Constant || w.a != 1.0) throw ConfigError("c1 uses the unweighted dual graph (const:1)");
      break;
    case Target::C2:
      if (w.law != WeightLaw::Exponential || w.b != 1.0) throw ConfigError("c2 uses rate-1 exponential weights (exp:1)");
      break;
    case Target::LawCheck:
      break;
  }
}

std::int64_t default_halfwidth(int depth) {
  return std::max<std::int64_t>(8, static_cast<std::int64_t>(depth) * depth / 2);
}

std::uint64_t replica_seed(std::uint64_t master, int index) {
  return derive_seed(master, {static_cast<std::int64_t>(Role::Replica), index});
}

std::optional<double> reference_constant(const ExperimentConfig& cfg) {
  switch (cfg.target) {
    case Target::C1: return 1.0 + 2.0 * std::sqrt(3.0);
    case Target::C2: return 2.0 * std::sqrt(3.0);
    case Target::C0: {
      WeightSpec w = effective_weights(cfg);
      if (w.law == WeightLaw::Constant) return w.a;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["target"] = target_name(cfg.target);
  j["depth"] = cfg.depth;
  j["replicas"] = cfg.replicas;
  j["weights"] = effective_weights(cfg).str();
  j["seed"] = cfg.seed;
  j["halfwidth"] = cfg.halfwidth == -1 ? default_halfwidth(cfg.depth) : cfg.halfwidth;
  j["max_extensions"] = cfg.max_extensions;
  j["vertex_budget"] = cfg.vertex_budget;
  if (!cfg.radii.empty()) j["radii"] = cfg.radii;
  return j;
}

ReplicaResult run_replica(const ExperimentConfig& cfg, int index) {
  ReplicaResult r;
  r.index = index;
  r.seed = replica_seed(cfg.seed, index);
  r.value = std::nan("");
  const Metric metric = cfg.target == Target::C1 ? Metric::Dual : cfg.target == Target::C2 ? Metric::Eden : Metric::Fpp;
  const bool dual = metric == Metric::Dual || metric == Metric::Eden;
  const std::int64_t hw = cfg.halfwidth == -1 ? default_halfwidth(cfg.depth) : cfg.halfwidth;
  FillPolicy policy;
  policy.lazy = true;
  try {
    LhptWindow w = sample_lhpt(cfg.depth + (dual ? 1 : 0), hw, r.seed, cfg.vertex_budget, policy);
    WindowDistance d = certified_window_distance(w, metric, cfg.depth, effective_weights(cfg),
                                                 derive_seed(r.seed, {static_cast<std::int64_t>(Role::Weight)}),
                                                 cfg.max_extensions, cfg.vertex_budget);
    r.distance = d.value;
    r.extensions = d.extensions;
    r.i_min = d.i_min;
    r.i_max = d.i_max;
    r.revealed = d.revealed;
    if (d.certified) {
      r.status = "ok";
      r.value = d.value / cfg.depth;
    } else {
      r.status = "uncertified";
    }
  } catch (const WindowBudgetExceeded&) {
    r.status = "budget";
  } catch (const std::bad_alloc&) {
    r.status = "memory";
  }
  return r;
}

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = config_json(config);
  j["replicas"] = nlohmann::json::array();
  for (const auto& r : replicas) {
    nlohmann::json x;
    x["seed"] = r.seed;
    x["value"] = r.value;
    x["status"] = r.status;
    x["distance"] = r.distance;
    x["extensions"] = r.extensions;
    x["columns"] = {r.i_min, r.i_max};
    x["revealed"] = r.revealed;
    j["replicas"].push_back(x);
  }
  j["mean"] = mean;
  j["stderr"] = stderr_;
  j["reference"] = reference ? nlohmann::json(*reference) : nlohmann::json(nullptr);
  j["failures"] = failures;
  return j;
}

EstimateReport run_estimate(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.target != Target::C0 && cfg.target != Target::C1 && cfg.target != Target::C2) {
    throw ConfigError("estimate needs target c0, c1 or c2");
  }
  EstimateReport rep;
  rep.config = cfg;
  rep.replicas.resize(cfg.replicas);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next++) < cfg.replicas;) rep.replicas[i] = run_replica(cfg, i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min(cfg.threads, cfg.replicas); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<double> ok;
  for (const auto& r : rep.replicas) {
    if (r.status == "ok") {
      ok.push_back(r.value);
    } else {
      ++rep.failures;
    }
  }
  rep.mean = std::nan("");
  rep.stderr_ = std::nan("");
  if (!ok.empty()) {
    double s = 0;
    for (double v : ok) s += v;
    rep.mean = s / ok.size();
    if (ok.size() > 1) {
      double ss = 0;
      for (double v : ok) ss += (v - rep.mean) * (v - rep.mean);
      rep.stderr_ = std::sqrt(ss / (ok.size() - 1) / ok.size());
    }
  }
  rep.reference = reference_constant(cfg);
  return rep;
}

HullMap sample_lazy_hull(int R, std::uint64_t seed, std::int64_t vertex_budget) {
  HullOptions opt;
  opt.fill.lazy = true;
  opt.vertex_budget = vertex_budget;
  return sample_hull(R, seed, opt);
}

std::int64_t hull_distance_violations(const HullMap& hull) {
  std::vector<int> targets, level;
  for (int j = 0; j <= hull.radius(); ++j) {
    for (int v : hull.strata.levels[j].vertices) {
      targets.push_back(v);
      level.push_back(j);
    }
  }
  HalfEdgeMap copy = hull.map;
  LazyMap lm(std::move(copy), hole_list(hull), kDefaultVertexBudget);
  std::vector<double> d = lazy_vertex_distances(lm, hull.root_vertex(), targets, WeightSpec{}, 0);
  std::int64_t bad = 0;
  for (std::size_t i = 0; i < d.size(); ++i) bad += d[i] != level[i];
  return bad;
}

nlohmann::json HullProfileReport::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = config_json(config);
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"replica", r.replica}, {"seed", r.seed}, {"radius", r.radius}, {"perimeter", r.perimeter},
                         {"min", r.min}, {"max", r.max}, {"status", r.status}});
  }
  return j;
}

HullProfileReport run_hull_profile(const ExperimentConfig& cfg) {
  validate_config(cfg);
  HullProfileReport rep;
  rep.config = cfg;
  const std::vector<int> radii = cfg.radii.empty() ? std::vector<int>{cfg.depth} : cfg.radii;
  const WeightSpec spec = effective_weights(cfg);
  for (int i = 0; i < cfg.replicas; ++i) {
    const std::uint64_t seed = replica_seed(cfg.seed, i);
    for (int R : radii) {
      HullProfileRow row;
      row.replica = i;
      row.seed = seed;
      row.radius = R;
      row.min = row.max = std::nan("");
      try {
        HullMap hull = sample_lazy_hull(R, seed, cfg.vertex_budget);
        row.perimeter = hull.skeleton.perimeters.back();
        std::vector<int> top = hull.strata.levels[R].vertices;
        const int root = hull.root_vertex();
        LazyMap lm(std::move(hull.map), hole_list(hull), cfg.vertex_budget);
        std::vector<double> d =
            lazy_vertex_distances(lm, root, top, spec,
                                  derive_seed(seed, {static_cast<std::int64_t>(Role::Weight)}));
        auto [mn, mx] = std::minmax_element(d.begin(), d.end());
        row.min = *mn / R;
        row.max = *mx / R;
        row.status = "ok";
      } catch (const WindowBudgetExceeded&) {
        row.status = "budget";
      } catch (const AttemptBudgetExceeded&) {
        row.status = "attempts";
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

nlohmann::json checks_json(const std::vector<CheckResult>& checks) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["pass"] = all_pass(checks);
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return j;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<CheckResult> check_exact_laws() {
  std::vector<CheckResult> out;
  {
    // Head sums plus closed-form tails: sum theta = 1, mean = 1.
    const std::int64_t K = 100000;
    long double mass = 0, mean = 0;
    for (std::int64_t k = 0; k < K; ++k) {
      const long double t = theta_pmf(k);
      mass += t;
      mean += k * t;
    }
    mass += theta_survival(K);
    // sum_{k>=K} k theta(k) = K P(theta >= K) + sum_{k>K} P(theta >= k), and
    // P(theta >= k) = 2(h(k) - h(k+1)) telescopes.
    mean += K * theta_survival(K) + 2.0L * h_stationary(K + 1);
    const double e1 = std::abs(static_cast<double>(mass - 1)), e2 = std::abs(static_cast<double>(mean - 1));
    out.push_back({"theta normalization and mean", e1 <= 1e-10 && e2 <= 1e-10,
                   "|sum-1| = " + fmt(e1) + ", |mean-1| = " + fmt(e2)});
  }
  {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double x = i / 100.0;
      double y = x;
      for (int r = 1; r <= 64; ++r) {
        y = g_theta(y);
        const double s = r + 1.0 / std::sqrt(1.0 - x);
        worst = std::max(worst, std::abs(y - (1.0 - 1.0 / (s * s))));
        worst = std::max(worst, std::abs(y - g_theta_iter(r, x)));
      }
    }
    out.push_back({"g_theta iterate closed form", worst <= 1e-12, "max error " + fmt(worst)});
  }
  {
    const int pmax = 40;
    double worst = 0;
    for (int r = 1; r <= 8; ++r) {
      GwTable one = gw_generation_pmf(1, r, pmax);
      std::vector<double> pw = one.pmf;  // law of Y_r from q = 1 individuals, truncated
      std::vector<double> acc(pmax + 1, 0.0);
      const double scale = (r + 1.0) * (r + 1.0);
      for (std::int64_t q = 1;; ++q) {
        double mass = 0;
        for (int p = 1; p <= pmax; ++p) {
          acc[p] += h_stationary(q) * pw[p];
          mass += pw[p];
        }
        if (q > 4 * pmax * scale && h_stationary(q) * mass < 1e-14) break;
        pw = convolve_truncated(pw, one.pmf, pmax);
      }
      for (int p = 1; p <= pmax; ++p) worst = std::max(worst, std::abs(acc[p] - h_stationary(p)));
    }
    out.push_back({"stationarity of h", worst <= 1e-6, "max error " + fmt(worst)});
  }
  {
    double worst = 0;
    for (double z : {-0.08, -0.05, -0.02, -0.001, 0.001, 0.02, 0.05, 0.08}) {
      long double s = 0;
      for (std::int64_t p = 1; p <= 3000; ++p) s += z_scaled(p) * std::pow(12.0L * z, p) / z;
      worst = std::max(worst, std::abs(static_cast<double>(s) - z_generating_series(z)));
    }
    out.push_back({"generating series of Z", worst <= 1e-10, "max error " + fmt(worst)});
  }
  {
    // sum_n #T(n,p) rho^-n = Z(p): exact head to N, tail from the asymptotic
    // C(p) n^-5/2 (1 + a/n + b/n^2 + c/n^3) with a, b, c fitted on the head.
    const int N = 800;
    double worst = 0;
    for (int p = 1; p <= 6; ++p) {
      const double C = std::exp(log_c(p));
      std::vector<double> t(N + 1, 0.0);
      long double head = 0;
      for (int n = 0; n <= N; ++n) {
        BigInt c = count_tri(n, p).value;
        if (c > 0) t[n] = std::exp(log_big(c) - n * std::log(kRho));
        head += t[n];
      }
      const int lo = N / 2;
      Eigen::MatrixXd A(N - lo + 1, 3);
      Eigen::VectorXd y(N - lo + 1);
      for (int n = lo; n <= N; ++n) {
        const double nn = n;
        A.row(n - lo) << 1 / nn, 1 / (nn * nn), 1 / (nn * nn * nn);
        y(n - lo) = t[n] * std::pow(nn, 2.5) / C - 1.0;
      }
      Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
      const double tail = C * (hurwitz_tail(2.5, N + 1) + c(0) * hurwitz_tail(3.5, N + 1) +
                               c(1) * hurwitz_tail(4.5, N + 1) + c(2) * hurwitz_tail(5.5, N + 1));
      const double z = z_boltzmann(p);
      worst = std::max(worst, std::abs(static_cast<double>(head) + tail - z) / z);
    }
    out.push_back({"counts against Z", worst <= 1e-8, "max relative error " + fmt(worst)});
  }
  return out;
}

CheckResult check_spectral_radius() {
  const double rho = root_degree_spectral_radius();
  return {"spectral radius", std::abs(rho - 0.917457) <= 1e-5, "radius " + fmt(rho, 9)};
}

std::vector<CheckResult> check_boltzmann_law(std::int64_t samples, std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto oracle = [](int n, int p) {
    return std::exp(log_big(count_tri(n, p).value) - n * std::log(kRho)) / z_boltzmann(p);
  };
  {
    Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Replica), 2});
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
      BoltzmannSample s = sample_boltzmann_pgon(2, rng, 1000);
      hits += !s.truncated && s.inner_vertices == 0;
    }
    const double f = static_cast<double>(hits) / samples, ref = 1.0 / z_boltzmann(2);
    out.push_back({"p=2 edge-triangulation frequency", std::abs(f - ref) <= 0.002,
                   "freq " + fmt(f) + " vs " + fmt(ref)});
  }
  {
    Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Replica), 1});
    std::int64_t hits[4] = {0, 0, 0, 0};
    for (std::int64_t i = 0; i < samples; ++i) {
      // A capped sample has more than 1000 inner vertices; small counts stay exact.
      BoltzmannSample s = sample_boltzmann_pgon(1, rng, 1000);
      if (!s.truncated && s.inner_vertices <= 3) ++hits[s.inner_vertices];
    }
    for (int n = 1; n <= 3; ++n) {
      const double f = static_cast<double>(hits[n]) / samples, ref = oracle(n, 1);
      out.push_back({"p=1 frequency of n=" + std::to_string(n), std::abs(f - ref) <= 0.003,
                     "freq " + fmt(f) + " vs " + fmt(ref)});
    }
  }
  return out;
}

std::vector<CheckResult> check_structure(int max_radius, int replicas, std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::vector<int> radii;
  for (int r : {1, 2, 3, 5, 10, 20, 40}) {
    if (r <= max_radius) radii.push_back(r);
  }
  if (radii.empty() || radii.back() != max_radius) radii.push_back(max_radius);
  {
    int maps = 0, bad = 0;
    Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Replica), 10});
    for (int i = 0; i < 50 * replicas; ++i) {
      BoltzmannSample s = sample_boltzmann_pgon(1 + i % 5, rng, 20000);
      if (s.truncated) continue;
      ++maps;
      bad += !validate(s.map).ok;
    }
    for (int i = 0; i < replicas; ++i) {
      for (int r : radii) {
        if (r > 10) continue;
        HullMap h = sample_hull(r, replica_seed(seed, i));
        ++maps;
        bad += !validate(h.map).ok;
        HalfEdgeMap plane = plane_hull(h);
        ++maps;
        bad += !validate(plane).ok;
        LhptWindow w = sample_lhpt(r, 8, replica_seed(seed, i));
        ++maps;
        bad += !validate(w.map).ok;
      }
    }
    out.push_back({"maps validate", bad == 0, std::to_string(bad) + " invalid of " + std::to_string(maps)});
  }
  {
    int hulls = 0;
    std::int64_t bad = 0;
    for (int i = 0; i < replicas; ++i) {
      for (int r : radii) {
        HullMap h = sample_lazy_hull(r, replica_seed(seed, 100 + i));
        ++hulls;
        bad += hull_distance_violations(h);
      }
    }
    out.push_back({"hull cycle j at distance j", bad == 0,
                   std::to_string(bad) + " violations over " + std::to_string(hulls) + " hulls"});
  }
  {
    int runs = 0, bad = 0, uncertified = 0;
    for (int i = 0; i < replicas; ++i) {
      for (int r : radii) {
        FillPolicy policy;
        policy.lazy = true;
        LhptWindow w = sample_lhpt(r, default_halfwidth(r), replica_seed(seed, 200 + i), kDefaultVertexBudget, policy);
        WindowDistance d = certified_window_distance(w, Metric::Graph, r, WeightSpec{}, 0, 12);
        ++runs;
        if (!d.certified) {
          ++uncertified;
        } else if (d.value != r) {
          ++bad;
        }
      }
    }
    out.push_back({"LHPT origin to row r at distance r", bad == 0 && uncertified == 0,
                   std::to_string(bad) + " wrong, " + std::to_string(uncertified) + " uncertified of " +
                       std::to_string(runs)});
  }
  return out;
}

std::vector<CheckResult> check_perimeter_laws(std::int64_t l1_samples, int R, int mean_samples, std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::int64_t ones = 0;
  for (std::int64_t i = 0; i < l1_samples; ++i) {
    HullSkeleton sk = sample_hull_skeleton(1, derive_seed(seed, {1, i}));
    ones += sk.perimeters[1] == 1;
  }
  const double f = static_cast<double>(ones) / l1_samples;
  out.push_back({"P(L1 = 1)", std::abs(f - 0.125) <= 0.004, "freq " + fmt(f) + " vs 0.125"});
  double s = 0;
  for (int i = 0; i < mean_samples; ++i) {
    HullSkeleton sk = sample_hull_skeleton(R, derive_seed(seed, {2, i}));
    s += static_cast<double>(sk.perimeters[R]) / (static_cast<double>(R) * R);
  }
  const double m = s / mean_samples;
  const double exact = (1.0 + 1.5 * (1.0 - 1.0 / ((R + 1.0) * (R + 1.0))) * (R + 1.0) * (R + 1.0)) / (R * R);
  out.push_back({"mean L_R / R^2 at R=" + std::to_string(R), std::abs(m - 1.5) <= 0.15,
                 "mean " + fmt(m) + " vs 1.5 (finite-R exact mean " + fmt(exact) + ")"});
  return out;
}

std::vector<CheckResult> check_c0(int depth, int replicas, std::uint64_t seed) {
  std::vector<CheckResult> out;
  ExperimentConfig cfg;
  cfg.target = Target::C0;
  cfg.depth = depth;
  cfg.replicas = replicas;
  cfg.seed = seed;
  cfg.weights = WeightSpec::parse("const:1");
  EstimateReport a = run_estimate(cfg);
  bool exact = a.failures == 0;
  for (const auto& r : a.replicas) exact = exact && r.value == 1.0;
  out.push_back({"c0 with constant weights", exact, "mean " + fmt(a.mean, 12) + ", failures " + std::to_string(a.failures)});
  cfg.weights = WeightSpec::parse("uniform:0.5,1");
  EstimateReport b = run_estimate(cfg);
  bool in_range = b.failures == 0;
  for (const auto& r : b.replicas) in_range = in_range && r.value >= 0.5 && r.value <= 1.0;
  out.push_back({"c0 with uniform(0.5,1) weights in [0.5,1]", in_range,
                 "mean " + fmt(b.mean) + " +- " + fmt(b.stderr_) + ", failures " + std::to_string(b.failures)});
  return out;
}

std::vector<CheckResult> check_root_degree_tail(std::int64_t samples, std::uint64_t seed) {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> survival;
  std::string detail;
  bool ok = true;
  for (int p : {1, 2, 5}) {
    Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Replica), 300 + p});
    std::vector<std::int64_t> count;
    for (std::int64_t i = 0; i < samples; ++i) {
      BoltzmannSample s = sample_boltzmann_pgon(p, rng);
      if (static_cast<std::size_t>(s.root_degree) >= count.size()) count.resize(s.root_degree + 1, 0);
      ++count[s.root_degree];
    }
    std::vector<double> S(count.size() + 1, 0.0);
    for (int k = static_cast<int>(count.size()) - 1; k >= 0; --k) S[k] = S[k + 1] + static_cast<double>(count[k]) / samples;
    std::vector<double> x, y;
    for (std::size_t k = 3; k < S.size(); ++k) {
      if (S[k] * samples < 50) break;
      x.push_back(static_cast<double>(k));
      y.push_back(std::log(S[k]));
    }
    LineFit f = fit_line(x, y);
    const double lam = std::exp(f.slope);
    lambdas.push_back(lam);
    survival.push_back(S);
    ok = ok && lam < 1 && f.r2 >= 0.97 && x.size() >= 5;
    detail += "p=" + std::to_string(p) + ": lambda " + fmt(lam, 4) + " r2 " + fmt(f.r2, 4) + "; ";
  }
  const double lam = *std::max_element(lambdas.begin(), lambdas.end());
  const double spread = lam - *std::min_element(lambdas.begin(), lambdas.end());
  double K0 = 0;
  for (const auto& S : survival) {
    for (std::size_t k = 0; k < S.size(); ++k) {
      if (S[k] > 0) K0 = std::max(K0, S[k] / std::pow(lam, static_cast<double>(k)));
    }
  }
  detail += "common lambda " + fmt(lam, 4) + ", K0 " + fmt(K0, 4) + ", spread " + fmt(spread, 3);
  return {{"root degree tail log-linear with one lambda < 1", ok && lam < 1 && spread <= 0.05, detail}};
}

CheckResult check_downward_path_tail(std::int64_t samples, std::uint64_t seed) {
  std::vector<std::int64_t> count;
  std::int64_t incomplete = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    FillPolicy policy;
    policy.lazy = true;
    LhptWindow w = sample_lhpt(2, 16, derive_seed(seed, {3, i}), kDefaultVertexBudget, policy);
    for (int attempt = 0;; ++attempt) {
      const std::int64_t k = w.origin_index[0] - 1;
      std::vector<std::pair<int, std::uint64_t>> holes;
      for (std::size_t j = 0; j < w.open_slots.size(); ++j) holes.emplace_back(w.open_slot_faces[j], w.slot_key(w.open_slots[j]));
      HalfEdgeMap copy = w.map;
      LazyMap lm(std::move(copy), holes, kDefaultVertexBudget);
      DownwardPath path = downward_path(lm, w.strata, 2, static_cast<std::size_t>(k), 1);
      if (path.complete) {
        if (path.length() >= count.size()) count.resize(path.length() + 1, 0);
        ++count[path.length()];
        break;
      }
      if (attempt == 6) {
        ++incomplete;
        break;
      }
      w = regrow(w, -w.i_min, w.i_max + 1, w.fill);
    }
  }
  std::vector<double> x, y;
  std::int64_t above = samples - incomplete;
  for (std::size_t t = 0; t < count.size(); ++t) {
    above -= count[t];  // paths longer than t
    if (t >= 1 && above >= 30) {
      x.push_back(static_cast<double>(t));
      y.push_back(std::log(static_cast<double>(above) / samples));
    }
  }
  LineFit f = fit_line(x, y);
  const bool ok = incomplete == 0 && x.size() >= 4 && f.slope < 0 && f.r2 >= 0.9;
  return {"downward path length tail at r=1", ok,
          "slope " + fmt(f.slope, 4) + " r2 " + fmt(f.r2, 4) + " over " + std::to_string(x.size()) +
              " points, incomplete " + std::to_string(incomplete)};
}

Suite parse_suite(const std::string& text) {
  if (text == "laws") return Suite::Laws;
  if (text == "samplers") return Suite::Samplers;
  if (text == "structure") return Suite::Structure;
  if (text == "tails") return Suite::Tails;
  if (text == "all") return Suite::All;
  throw ConfigError("unknown suite '" + text + "'");
}

std::vector<CheckResult> run_suite(Suite s, std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto add = [&out](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (s == Suite::Laws || s == Suite::All) {
    add(check_exact_laws());
    out.push_back(check_spectral_radius());
  }
  if (s == Suite::Samplers || s == Suite::All) {
    add(check_boltzmann_law(1000000, seed));
    add(check_perimeter_laws(100000, 40, 500, seed));
  }
  if (s == Suite::Structure || s == Suite::All) add(check_structure(40, 3, seed));
  if (s == Suite::Tails || s == Suite::All) {
    add(check_root_degree_tail(100000, seed));
    out.push_back(check_downward_path_tail(20000, seed));
  }
  return out;
}

}  // namespace trifpp
