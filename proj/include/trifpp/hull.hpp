#pragma once

#include "trifpp/halfplane.hpp"
#include "trifpp/planar_map.hpp"
#include "trifpp/rng.hpp"
#include "trifpp/strata.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace trifpp {

// One hull layer: the outer cycle has q_out edges, outer edge i has children[i] inner
// edges. children[0] is the tree of the inner cycle's marked edge, which is child number
// `distinguished` (0-based) of outer edge 0.
struct LayerSkeleton {
  std::int64_t p_in = 0;
  std::int64_t q_out = 0;
  std::vector<std::int64_t> children;
  std::int64_t distinguished = 0;
};

struct AttemptBudgetExceeded : std::runtime_error {
  AttemptBudgetExceeded(const std::string& what, int radius) : std::runtime_error(what), completed_radius(radius) {}
  int completed_radius;
};

// Default number of rejection attempts for one layer over a p-cycle. The acceptance
// probability is h(p)/2, about 1/(2 sqrt(pi p)).
std::int64_t default_layer_attempts(std::int64_t p);

// Exact draw of one layer above a p-cycle. Throws AttemptBudgetExceeded (radius 0).
LayerSkeleton sample_layer(std::int64_t p, Rng& rng, std::int64_t max_attempts = -1);

// Direct draw of L_R by inverse transform of its law from the 1-gon.
std::int64_t sample_hull_perimeter(int R, Rng& rng);

enum class HullMethod {
  Layered,  // one sample_layer per radius
  Forest,   // L_R first, then the whole forest with its one-survivor conditioning
};

struct HullSkeleton {
  std::vector<std::int64_t> perimeters;  // L_0 = 1, L_1, ..., L_R
  std::vector<LayerSkeleton> layers;     // layers[j - 1] lies between cycles j - 1 and j
  int radius() const { return static_cast<int>(layers.size()); }
};

HullSkeleton sample_hull_skeleton(int R, std::uint64_t seed, HullMethod method = HullMethod::Layered,
                                  std::int64_t max_attempts = -1);

// Slot under outer edge `idx` of layer `layer`.
struct HullSlotId {
  int layer = 0;
  std::int64_t idx = 0;
  auto operator<=>(const HullSlotId&) const = default;
};

// Hull of the UIPT of the 1-gon. The bottom face is the loop's outer side, marked
// "bottom"; the face outside the last cycle is marked "top". levels[j] is cycle j.
struct HullMap {
  HalfEdgeMap map;
  Strata strata;
  HullSkeleton skeleton;
  std::uint64_t seed = 0;
  FillPolicy fill;
  std::vector<HullSlotId> open_slots;
  std::vector<int> open_slot_faces;

  int radius() const { return skeleton.radius(); }
  int root_vertex() const { return map.origin[map.root]; }
  // [L_1, ..., L_R]
  std::vector<std::int64_t> perimeters() const;
  std::uint64_t slot_key(const HullSlotId& id) const;
};

// Glues the layers of a skeleton. A prefix of the skeleton gives the hull of that radius
// with the same content, since slot fillings are keyed by (layer, edge).
HullMap realize_hull(const HullSkeleton& sk, std::uint64_t seed, std::int64_t vertex_budget = kDefaultVertexBudget,
                     const FillPolicy& policy = {});

struct HullOptions {
  HullMethod method = HullMethod::Layered;
  FillPolicy fill;
  std::int64_t vertex_budget = kDefaultVertexBudget;
  std::int64_t max_attempts = -1;
};

HullMap sample_hull(int R, std::uint64_t seed, const HullOptions& opt = {});

// PMAP text plus `CYCLE j <vertex list>` lines.
std::string serialize_hull(const HullMap& hull);

// Fully filled hull with the loop removed: a hull of the plane UIPT.
HalfEdgeMap plane_hull(const HullMap& hull);

}  // namespace trifpp
