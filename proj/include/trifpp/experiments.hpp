#pragma once

#include "trifpp/halfplane.hpp"
#include "trifpp/hull.hpp"
#include "trifpp/metrics.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trifpp {

inline constexpr const char* kVersion = "trifpp 1.0.0";

enum class Target { C0, C1, C2, HullProfile, LawCheck };
Target parse_target(const std::string& text);
std::string target_name(Target t);

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Target target = Target::C1;
  int depth = 16;  // radius for hull profiles
  int replicas = 8;
  std::optional<WeightSpec> weights;  // per-target default when unset
  std::uint64_t seed = 1;
  std::int64_t halfwidth = -1;  // -1: default_halfwidth(depth)
  int max_extensions = 12;
  std::int64_t vertex_budget = kDefaultVertexBudget;
  int threads = 1;
  std::vector<int> radii;  // hull profile; empty means {depth}
};

// c0: uniform:0.5,1; c1: const:1; c2: exp:1; hull profile: uniform:0.5,1.
WeightSpec effective_weights(const ExperimentConfig& cfg);
// Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);
std::int64_t default_halfwidth(int depth);
std::uint64_t replica_seed(std::uint64_t master, int index);
// c1 = 1 + 2 sqrt3, c2 = 2 sqrt3, c0 = c for constant weights c.
std::optional<double> reference_constant(const ExperimentConfig& cfg);
nlohmann::json config_json(const ExperimentConfig& cfg);

struct ReplicaResult {
  int index = 0;
  std::uint64_t seed = 0;
  double value = 0;  // distance / depth, NaN unless status is "ok"
  std::string status;  // ok | uncertified | budget | memory
  double distance = 0;
  int extensions = 0;
  std::int64_t i_min = 0;
  std::int64_t i_max = 0;
  std::int64_t revealed = 0;
};

// One LHPT replica: distance from the origin to row `depth`, over depth.
ReplicaResult run_replica(const ExperimentConfig& cfg, int index);

struct EstimateReport {
  ExperimentConfig config;
  std::vector<ReplicaResult> replicas;
  double mean = 0;
  double stderr_ = 0;
  std::optional<double> reference;
  int failures = 0;
  nlohmann::json to_json() const;
};

EstimateReport run_estimate(const ExperimentConfig& cfg);

struct HullProfileRow {
  int replica = 0;
  std::uint64_t seed = 0;
  int radius = 0;
  std::int64_t perimeter = 0;
  double min = 0;  // min over cycle-R vertices of d(root, v) / R, inside the hull
  double max = 0;
  std::string status;
};

struct HullProfileReport {
  ExperimentConfig config;
  std::vector<HullProfileRow> rows;
  nlohmann::json to_json() const;
};

// Replica i uses the same seed at every radius, so smaller hulls are sub-hulls.
HullProfileReport run_hull_profile(const ExperimentConfig& cfg);

// Lazy hull filling: slots are revealed where a search goes.
HullMap sample_lazy_hull(int R, std::uint64_t seed, std::int64_t vertex_budget = kDefaultVertexBudget);
// Cycle vertices whose graph distance to the root differs from their level.
std::int64_t hull_distance_violations(const HullMap& hull);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
nlohmann::json checks_json(const std::vector<CheckResult>& checks);
bool all_pass(const std::vector<CheckResult>& checks);

// Identity suite of the exact laws.
std::vector<CheckResult> check_exact_laws();
CheckResult check_spectral_radius();
// Inner-vertex frequencies of Boltzmann p-gons against counts / Z.
std::vector<CheckResult> check_boltzmann_law(std::int64_t samples, std::uint64_t seed);
// Map validation, hull cycle distances, LHPT row distances.
std::vector<CheckResult> check_structure(int max_radius, int replicas, std::uint64_t seed);
std::vector<CheckResult> check_perimeter_laws(std::int64_t l1_samples, int R, int mean_samples, std::uint64_t seed);
// Constant weights give exactly 1; uniform(kappa,1) weights land in [kappa,1].
std::vector<CheckResult> check_c0(int depth, int replicas, std::uint64_t seed);
std::vector<CheckResult> check_root_degree_tail(std::int64_t samples, std::uint64_t seed);
CheckResult check_downward_path_tail(std::int64_t samples, std::uint64_t seed);

enum class Suite { Laws, Samplers, Structure, Tails, All };
Suite parse_suite(const std::string& text);
std::vector<CheckResult> run_suite(Suite s, std::uint64_t seed);

}  // namespace trifpp
