#pragma once

#include "trifpp/halfplane.hpp"
#include "trifpp/lazy_map.hpp"
#include "trifpp/planar_map.hpp"
#include "trifpp/strata.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace trifpp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class WeightLaw { Constant, Uniform, TwoPoint, Exponential };
enum class WeightScope { Primal, Dual };

// Text forms: const:c, uniform:k,1, twopoint:k,1,p (mass p at k), exp:1.
struct WeightSpec {
  WeightLaw law = WeightLaw::Constant;
  double a = 1.0;  // constant value, or lower end kappa
  double b = 1.0;  // upper end, or exponential rate
  double p = 0.5;  // two-point mass at the lower end

  static WeightSpec parse(const std::string& text);
  std::string str() const;
  double lo() const;
  double hi() const;  // infinity for the exponential law
  double quantile(double u) const;
};

struct WeightAssignment {
  WeightSpec spec;
  WeightScope scope = WeightScope::Primal;
  std::vector<double> values;  // per edge id
};

// Weight of edge e is quantile(unit(mix(seed, scope, edge_key[e]))); maps without keys
// fall back to the edge id.
WeightAssignment assign_weights(const HalfEdgeMap& map, const WeightSpec& spec, WeightScope scope,
                                std::uint64_t seed);

struct SearchOptions {
  const std::vector<char>* targets = nullptr;  // stop once a target is settled
  const std::vector<char>* blocked = nullptr;  // never entered
  bool keep_parents = false;
};

struct DistanceResult {
  std::vector<double> values;  // per node, kInf when unreached
  std::vector<int> order;      // settle order
  std::vector<He> parent;      // half-edge used to reach each node (keep_parents)
  int target = -1;             // first settled target
  double target_value = kInf;

  std::vector<He> witness(const HalfEdgeMap& map, int node, bool dual) const;
};

DistanceResult bfs_distance(const HalfEdgeMap& map, const std::vector<int>& sources,
                            const SearchOptions& opt = {});
DistanceResult fpp_distance(const HalfEdgeMap& map, const WeightAssignment& w,
                            const std::vector<int>& sources, const SearchOptions& opt = {});
// Dual searches run on faces; marked faces are blocked.
DistanceResult dual_distance(const HalfEdgeMap& map, const std::vector<int>& source_faces,
                             const SearchOptions& opt = {});
DistanceResult eden_distance(const HalfEdgeMap& map, const WeightAssignment& w,
                             const std::vector<int>& source_faces, const SearchOptions& opt = {});

struct DownwardPath {
  std::vector<int> faces;        // start face first
  std::vector<He> crossed;       // half-edge crossed at each step, on the side of the earlier face
  std::vector<int> level_faces;  // downward triangle reached at each level
  bool complete = false;         // false when the walk left a finite window
  std::size_t length() const { return crossed.size(); }
};

// Canonical dual path from the downward triangle of edge k on `level` to `stop_level`:
// turn counterclockwise around the apex until the next lower downward triangle.
DownwardPath downward_path(const HalfEdgeMap& map, const Strata& s, int level, std::size_t k,
                           int stop_level);
// Same walk on a lazy map, revealing the slots it crosses.
DownwardPath downward_path(LazyMap& map, const Strata& s, int level, std::size_t k, int stop_level);
double path_weight(const DownwardPath& path, const HalfEdgeMap& map, const WeightAssignment& w);

enum class Metric { Graph, Fpp, Dual, Eden };
Metric parse_metric(const std::string& text);
std::string metric_name(Metric m);

// Distance from the window origin to the bottom row (primal: vertex (0,0) to row r;
// dual: face f_(0,0) to the downward triangles of row r, which needs depth r + 1).
// Certificate: every path leaving the window passes a side vertex (primal) or a face
// touching one (dual). If each such zone node z has d(z) + lb(z) >= d(target), where lb
// bounds the remaining cost to the bottom row, the window value is exact. Otherwise the
// window doubles on the offending side and the search reruns on the same sample.
// Open slots are peeled where the search needs them. The window map is consumed.
struct WindowDistance {
  double value = kInf;
  bool certified = false;
  int extensions = 0;
  std::int64_t i_min = 0;
  std::int64_t i_max = 0;
  int vertices = 0;
  std::int64_t revealed = 0;    // slot vertices revealed by the search
  std::int64_t peel_steps = 0;
};

WindowDistance certified_window_distance(LhptWindow& w, Metric metric, int rows, const WeightSpec& spec,
                                         std::uint64_t weight_seed, int max_extensions,
                                         std::int64_t vertex_budget = kDefaultVertexBudget);

// Vertex distances from `source` to each target on a lazy map, revealing holes around
// settled vertices. Weights are keyed as in assign_weights (primal scope).
std::vector<double> lazy_vertex_distances(LazyMap& lm, int source, const std::vector<int>& targets,
                                          const WeightSpec& spec, std::uint64_t weight_seed);

}  // namespace trifpp
