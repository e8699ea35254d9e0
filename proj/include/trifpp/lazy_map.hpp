#pragma once

#include "trifpp/planar_map.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace trifpp {

// A planar map whose open holes are Boltzmann triangulations revealed on demand, one
// peeling step at a time, at the edge a search asks for. Each hole draws from its own
// keyed sequence, so the revealed map depends only on the order of peel requests per
// hole. The log of requests can be replayed on a rebuilt skeleton.
class LazyMap {
 public:
  struct Hole {
    std::int64_t perimeter = 0;
    std::uint64_t key = 0;
    std::uint32_t draws = 0;
    std::uint32_t edges = 0;
    int tag = -1;
  };
  struct LogEntry {
    std::uint64_t hole_key;
    std::uint64_t edge_key;
  };

  // Takes over a frozen map; `holes` lists (face id, key) of faces left open.
  LazyMap(HalfEdgeMap&& frozen, const std::vector<std::pair<int, std::uint64_t>>& holes,
          std::int64_t vertex_budget);

  He twin(He h) const { return twin_[h]; }
  He next(He h) const { return next_[h]; }
  He prev(He h) const { return prev_[h]; }
  int origin(He h) const { return origin_[h]; }
  int dest(He h) const { return origin_[twin_[h]]; }
  int face(He h) const { return face_[h]; }
  std::uint64_t key(He h) const { return key_[h]; }
  He vertex_rep(int v) const { return vertex_rep_[v]; }
  He face_rep(int f) const { return face_rep_[f]; }
  int num_vertices() const { return static_cast<int>(vertex_rep_.size()); }
  int num_faces() const { return static_cast<int>(face_rep_.size()); }
  std::size_t size() const { return twin_.size(); }
  bool is_hole(int f) const { return face_hole_[f] >= 0; }
  // Holes, marked faces and faces closed by a glue are not searchable.
  bool is_blocked(int f) const { return face_kind_[f] != kPlain; }
  bool is_marked(int f) const { return face_kind_[f] == kMarked; }
  // Label of a marked face; empty otherwise.
  const std::string& label(int f) const;
  std::int64_t revealed_vertices() const { return revealed_; }
  // Tags of the initial holes, in constructor order. Faces and vertices revealed inside a
  // hole carry its tag; everything else has -1.
  void set_hole_tags(const std::vector<int>& tags);
  int face_tag(int f) const { return face_tag_[f]; }
  int vertex_tag(int v) const { return v < static_cast<int>(vertex_tag_.size()) ? vertex_tag_[v] : -1; }
  std::int64_t peel_steps() const { return static_cast<std::int64_t>(log_.size()); }
  const std::vector<LogEntry>& log() const { return log_; }

  // One peeling step of the hole on the left of h, at edge h. False if there is no hole.
  bool peel(He h);
  // Peels until the face across g is not a hole; returns it.
  int reveal_across(He g);
  // Peels until no hole has a corner at v.
  void reveal_around(int v);
  // Peels every hole to the end (tests and small maps).
  void reveal_all();
  // Current state as a frozen map; open holes are marked "slot". vertex_map receives
  // the snapshot id of each lazy vertex.
  HalfEdgeMap snapshot(std::vector<int>* vertex_map = nullptr) const;
  // Re-applies a log recorded on a map with the same skeleton and hole keys.
  void replay(const std::vector<LogEntry>& entries);

 private:
  enum : char { kPlain = 0, kHoleFace = 1, kMarked = 2, kClosed = 3 };

  He add_edge(std::uint64_t key);
  int add_face(char kind, He rep, int tag);
  void glue(He a, He b);

  std::vector<He> twin_, next_, prev_;
  std::vector<int> origin_, face_;
  std::vector<std::uint64_t> key_;
  std::vector<He> vertex_rep_, face_rep_;
  std::vector<char> face_kind_;
  std::vector<int> face_hole_;
  std::vector<int> face_tag_;
  std::vector<int> vertex_tag_;  // from the first revealed vertex on; shorter means -1
  std::vector<std::pair<int, std::string>> marked_;
  std::vector<Hole> holes_;
  std::vector<LogEntry> log_;
  std::int64_t revealed_ = 0;
  std::int64_t budget_;
};

}  // namespace trifpp
