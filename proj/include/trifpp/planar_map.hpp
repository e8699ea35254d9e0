#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace trifpp {

using He = std::int32_t;
inline constexpr He kNoHe = -1;

// Rooted combinatorial planar map stored as half-edge permutations.
//
// Convention: next(h) is the following half-edge along the face lying on the left
// of h (faces are traversed counterclockwise). Vertices are the orbits of
// h -> next(twin(h)), which turns clockwise around origin(h). A boundary cycle
// oriented clockwise has the region closer to its bottom on the right of each
// half-edge. The root half-edge has the bottom face on its right.
struct HalfEdgeMap {
  std::vector<He> twin;
  std::vector<He> next;
  He root = 0;
  // Face marks: (representative half-edge, label), sorted by representative.
  std::vector<std::pair<He, std::string>> marks;
  // Optional structural key per edge id, used to derive reproducible weights.
  std::vector<std::uint64_t> edge_key;  // per edge; empty for maps parsed from text

  // Derived registries, filled by derive().
  std::vector<He> prev;
  std::vector<int> origin;
  std::vector<int> face;
  std::vector<int> edge;
  std::vector<He> edge_rep;
  std::vector<int> out_start;
  std::vector<He> out_he;
  std::vector<int> face_start;
  std::vector<He> face_he;
  std::vector<int> face_mark;  // index into marks, or -1
  int num_vertices = 0;
  int num_edges = 0;
  int num_faces = 0;

  std::size_t size() const { return twin.size(); }
  int dest(He h) const { return origin[twin[h]]; }
  int degree(int v) const { return out_start[v + 1] - out_start[v]; }
  int face_degree(int f) const { return face_start[f + 1] - face_start[f]; }
  bool is_marked(int f) const { return face_mark[f] >= 0; }
  // Label of a marked face; empty otherwise.
  const std::string& label(int f) const;
  // Face carrying the label, or -1.
  int marked_face(const std::string& label) const;

  // Recompute vertex/face/edge registries from twin, next and marks.
  // Requires valid permutations.
  void derive();
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler() const { return vertices - edges + faces; }
};

// Checks permutations, connectivity, Euler's formula and that every unmarked face is a triangle.
ValidationReport validate(const HalfEdgeMap& map);

// Append-only builder. Glued half-edges are dropped by freeze().
class MapBuilder {
 public:
  MapBuilder() = default;
  explicit MapBuilder(std::size_t reserve) {
    twin_.reserve(reserve);
    next_.reserve(reserve);
  }

  // New edge; returns its two half-edges (h, twin h).
  std::pair<He, He> add_edge(std::uint64_t key = 0);
  void set_next(He a, He b) { next_[a] = b; }
  // Closes a face through the given half-edges in order.
  void make_face(std::initializer_list<He> hs);
  void make_face(const std::vector<He>& hs);
  // Identifies the edges of a 2-gon {a, b}: twin(a) and twin(b) become twins.
  // a and b are dropped and forwarded to the surviving half-edge with their direction.
  void glue(He a, He b);
  He resolve(He h) const;
  void set_root(He h) { root_ = h; }
  void mark(He rep, std::string label) { marks_.emplace_back(rep, std::move(label)); }

  He twin(He h) const { return twin_[h]; }
  He next(He h) const { return next_[h]; }
  He root() const { return root_; }
  bool dead(He h) const { return dead_[h] != 0; }
  std::size_t size() const { return twin_.size(); }
  std::uint64_t key(He h) const { return key_[h]; }

  // Compacts live half-edges into dense ids; remap[old] = new id, where dropped
  // half-edges map to the id of their forwarded survivor.
  HalfEdgeMap freeze(std::vector<He>* remap = nullptr) const&;
  // Same, releasing the builder's storage on the way.
  HalfEdgeMap freeze(std::vector<He>* remap = nullptr) &&;

 private:
  std::vector<He> twin_;
  std::vector<He> next_;
  std::vector<std::uint8_t> dead_;
  std::vector<He> forward_;
  std::vector<std::uint64_t> key_;
  std::vector<std::pair<He, std::string>> marks_;
  He root_ = 0;
};

// One p-cycle bounding an inner face marked "unfilled" and an outer face marked "bottom".
HalfEdgeMap build_polygon(int p);

// Builder-level polygon: returns the inner half-edges in cyclic order; the root is the
// first of them and the outer face is marked "bottom".
std::vector<He> add_polygon(MapBuilder& b, int p);

struct DualGraph {
  int num_nodes = 0;
  // One dual edge per primal edge id: the faces on both sides.
  std::vector<std::pair<int, int>> edges;
  // (vertex, face) incidences, one per corner.
  std::vector<std::pair<int, int>> incidences;
};

DualGraph dual_graph(const HalfEdgeMap& map);

// Plane triangulation (no marks, at least 3 vertices) -> triangulation of the 1-gon.
HalfEdgeMap root_transform(const HalfEdgeMap& plane);
// Triangulation of the 1-gon -> plane triangulation.
HalfEdgeMap root_transform_inverse(const HalfEdgeMap& monogon);

// Relabels half-edges in breadth-first order from the root.
HalfEdgeMap canonical_form(const HalfEdgeMap& map);
bool same_map(const HalfEdgeMap& a, const HalfEdgeMap& b);

std::string serialize(const HalfEdgeMap& map, const std::vector<std::string>& extra_lines = {});
// Unknown keyword lines are returned through extra when given.
HalfEdgeMap deserialize(const std::string& text, std::vector<std::string>* extra = nullptr);

}  // namespace trifpp
