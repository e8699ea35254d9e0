#pragma once

#include "trifpp/planar_map.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace trifpp {

// Edge roles inside a strip, used for structural edge keys.
enum StripRole : int { kSideLeft = 0, kSideRight = 1, kLateral = 2, kSlot = 3, kRowEdge = 4 };

using EdgeKeyFn = std::function<std::uint64_t(std::size_t i, int role)>;
// Receives the hole of slot i (face order, peel edge first, root vertex at its end).
using SlotFillFn = std::function<void(std::deque<He>& hole, std::size_t i)>;

struct StripBorders {
  He left_slot = kNoHe;    // lateral edge on the slot side (linear strips)
  He left_outer = kNoHe;   // its twin, outside the window
  He right_outer = kNoHe;  // right lateral half-edge, outside the window; its key depends on the window
};

// Builds one strip between an upper row and a lower row.
//
// upper_west[i] runs from u_{i+1} to u_i and receives the downward triangle of upper
// edge i on its left. lower_east[k] runs from v_k to v_{k+1} and receives a slot face.
// Upper edge i owns children[i] consecutive lower edges; in a cyclic strip the
// children of upper edge 0 start at lower index `offset`. The apex of the downward
// triangle of edge i is the right end of its children block (the left end of the
// next non-empty block when children[i] = 0).
StripBorders realize_strip(MapBuilder& b, const std::vector<He>& upper_west,
                           const std::vector<He>& lower_east,
                           const std::vector<std::int64_t>& children, bool cyclic,
                           std::int64_t offset, const EdgeKeyFn& key, const SlotFillFn& fill);

// Builder-side description of one row or cycle.
struct RowRecord {
  std::vector<He> west;  // west[k] runs from v_{k+1} to v_k
  He tail = kNoHe;       // linear rows: a half-edge leaving the last vertex
  bool cyclic = false;
};

struct Level {
  std::vector<He> west;
  std::vector<int> vertices;  // v_0 .. v_n (linear) or v_0 .. v_{n-1} (cyclic)
  bool cyclic = false;
  std::size_t edges() const { return west.size(); }
};

// Rows or cycles of a layered map; levels[0] is the base that paths descend to.
struct Strata {
  std::vector<Level> levels;
  std::vector<int> vertex_level;  // -1 off the levels
  std::vector<int> vertex_index;  // position of the vertex in its level
  std::vector<int> face_level;    // level of the row edge whose downward triangle this is, or -1
  std::vector<int> face_index;

  static Strata build(const HalfEdgeMap& map, const std::vector<RowRecord>& base_first,
                      const std::vector<He>& remap);

  He east(const HalfEdgeMap& map, int level, std::size_t k) const {
    return map.twin[levels[level].west[k]];
  }
  int downward_face(const HalfEdgeMap& map, int level, std::size_t k) const {
    return map.face[levels[level].west[k]];
  }
};

struct GeodesicPath {
  std::vector<int> vertices;  // from the start down to level 0
  std::vector<He> half_edges;
};

// Left-most geodesic from vertex k of the given level down to level 0.
GeodesicPath leftmost_geodesic(const HalfEdgeMap& map, const Strata& s, int level, std::size_t k);

}  // namespace trifpp
