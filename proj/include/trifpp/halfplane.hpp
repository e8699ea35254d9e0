#pragma once

#include "trifpp/planar_map.hpp"
#include "trifpp/rng.hpp"
#include "trifpp/strata.hpp"

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace trifpp {

// Child counts of a tree truncated at height `depth`, generation by generation.
// gens[g][k] is the number of children of the k-th vertex of generation g (g < depth).
struct ColumnTree {
  std::vector<std::vector<std::int64_t>> gens;
  std::vector<std::int64_t> spine;  // size-biased trees: spine position per generation 0..depth
  std::int64_t generation_size(int g) const;
};

// GW(theta) tree of column `column`, drawn from its own stream.
ColumnTree sample_column_tree(std::uint64_t seed, std::int64_t column, int depth);
// Size-biased tree: spine offspring from theta_bar, uniform spine rank, other vertices GW(theta).
ColumnTree sample_spine_tree(std::uint64_t seed, int depth);

enum class WindowKind { Lower, Upper };

// Slot of the idx-th vertex of generation `gen` in column `col`.
struct SlotId {
  std::int64_t col = 0;
  int gen = 0;
  std::int64_t idx = 0;
  auto operator<=>(const SlotId&) const = default;
};

// Lazy windows leave slots with more than eager_max_children children open (a face
// marked "slot") for a search to reveal; eager_max_children = -1 leaves all open.
struct FillPolicy {
  bool lazy = false;
  std::int64_t eager_max_children = -1;
};

// Slot fillings have about p^2 vertices for perimeter p, so a single large child count
// can make a window huge. Realization stops with this error past the vertex budget.
struct WindowBudgetExceeded : std::length_error {
  using std::length_error::length_error;
};
constexpr std::int64_t kDefaultVertexBudget = 8'000'000;

// Finite window of a half-plane triangulation: columns [i_min, i_max] of trees rooted on
// the top row, strips realized down to `depth` generations.
struct HalfPlaneWindow {
  WindowKind kind = WindowKind::Lower;
  HalfEdgeMap map;
  Strata strata;  // levels[0] is the deepest row
  int depth = 0;
  std::int64_t i_min = 0;
  std::int64_t i_max = 0;
  std::uint64_t seed = 0;
  std::vector<ColumnTree> columns;           // columns[i - i_min]
  std::vector<std::int64_t> origin_index;    // per generation: row index of the origin column's first vertex
  std::vector<std::vector<std::int64_t>> row_children;  // per generation g < depth, child counts
  std::vector<char> lateral;                 // per vertex: bit 1 on the left side, bit 2 on the right
  std::vector<He> right_boundary;            // right lateral edges, both half-edges; keys depend on the width
  FillPolicy fill;
  std::vector<SlotId> open_slots;
  std::vector<int> open_slot_faces;

  // Row of generation g (LHPT: row -g; UHPT: row depth - g).
  const Level& generation(int g) const { return strata.levels[depth - g]; }
  int level_of_generation(int g) const { return depth - g; }
  // LHPT vertex (0, -g); UHPT vertex at the left end of the spine edge of generation g.
  int origin_vertex(int g) const;
  // Stream key of an open slot when it is revealed lazily.
  std::uint64_t slot_key(const SlotId& id) const;
  // LHPT face f_(0,g): downward triangle of the row-g edge ending at (0, -g). -1 if absent.
  int origin_face(int g) const;
};

using LhptWindow = HalfPlaneWindow;
using UhptWindow = HalfPlaneWindow;

HalfPlaneWindow build_lhpt(std::uint64_t seed, int depth, std::int64_t i_min, std::int64_t i_max,
                           std::int64_t vertex_budget = kDefaultVertexBudget, const FillPolicy& policy = {});
LhptWindow sample_lhpt(int depth, std::int64_t halfwidth, std::uint64_t seed,
                       std::int64_t vertex_budget = kDefaultVertexBudget, const FillPolicy& policy = {});

enum class Side { Left, Right };
// Same window with `count` more columns on one side; shared content is unchanged.
LhptWindow extend_columns(const LhptWindow& w, Side side, std::int64_t count,
                          std::int64_t vertex_budget = kDefaultVertexBudget);
// Rebuild with extra columns on each side and a new fill policy.
HalfPlaneWindow regrow(const HalfPlaneWindow& w, std::int64_t add_left, std::int64_t add_right,
                       const FillPolicy& policy, std::int64_t vertex_budget = kDefaultVertexBudget);

UhptWindow sample_uhpt(int depth, std::int64_t halfwidth, std::uint64_t seed,
                       std::int64_t vertex_budget = kDefaultVertexBudget);

// Realizes a window from explicit column trees. For the upper model the column at
// index 0 carries the spine and the root sits on the bottom row at the spine end.
// custom_fill replaces the Boltzmann slot filling (fixtures).
HalfPlaneWindow realize_window(WindowKind kind, std::uint64_t seed, int depth, std::int64_t i_min,
                               std::vector<ColumnTree> columns, const SlotFillFn* custom_fill = nullptr,
                               std::int64_t vertex_budget = kDefaultVertexBudget, const FillPolicy& policy = {});

// PMAP text plus `ROW j <vertex list>` lines, j = generation.
std::string serialize_window(const HalfPlaneWindow& w);

}  // namespace trifpp
