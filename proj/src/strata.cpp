#include "trifpp/strata.hpp"

#include <stdexcept>
#include <string>

namespace trifpp {

StripBorders realize_strip(MapBuilder& b, const std::vector<He>& upper_west,
                           const std::vector<He>& lower_east,
                           const std::vector<std::int64_t>& children, bool cyclic,
                           std::int64_t offset, const EdgeKeyFn& key, const SlotFillFn& fill) {
  const std::size_t q = upper_west.size();
  const std::int64_t n = static_cast<std::int64_t>(lower_east.size());
  if (children.size() != q) throw std::invalid_argument("realize_strip: one child count per upper edge");
  std::int64_t total = 0;
  for (std::int64_t c : children) total += c;
  if (total != n) throw std::invalid_argument("realize_strip: child counts do not match the lower row");
  if (q == 0) throw std::invalid_argument("realize_strip: empty upper row");
  if (cyclic && n == 0) throw std::invalid_argument("realize_strip: empty lower cycle");

  // side_in[i]: u_i -> apex; side_out[i]: apex -> u_{i+1}. A side_out edge is keyed by
  // the slot on its right, so a window's left lateral edge keeps its key when columns
  // are added on the left. Only the right boundary edge has a window-dependent key.
  std::vector<He> side_in(q), side_out(q);
  for (std::size_t i = 0; i < q; ++i) {
    side_in[i] = b.add_edge(key(i, kSideLeft)).first;
    const bool last = i + 1 == q;
    side_out[i] = b.add_edge(last ? (cyclic ? key(0, kSideRight) : key(i, kLateral)) : key(i + 1, kSideRight)).first;
    b.make_face({upper_west[i], side_in[i], side_out[i]});
  }
  StripBorders borders;
  if (!cyclic) {
    auto [x, xt] = b.add_edge(key(0, kSideRight));
    borders.left_slot = x;
    borders.left_outer = xt;
    borders.right_outer = b.twin(side_out[q - 1]);
  }
  std::int64_t pos = cyclic ? ((offset % n) + n) % n : 0;
  for (std::size_t i = 0; i < q; ++i) {
    He left = i > 0 ? b.twin(side_out[i - 1]) : (cyclic ? b.twin(side_out[q - 1]) : borders.left_slot);
    He root = b.twin(side_in[i]);
    const std::int64_t c = children[i];
    std::deque<He> hole;
    if (c == 0) {
      hole = {left, root};
    } else {
      auto lower = [&](std::int64_t t) { return lower_east[cyclic ? (pos + t) % n : pos + t]; };
      hole.push_back(lower(c - 1));
      hole.push_back(root);
      hole.push_back(left);
      for (std::int64_t t = 0; t + 1 < c; ++t) hole.push_back(lower(t));
    }
    fill(hole, i);
    pos += c;
  }
  return borders;
}

Strata Strata::build(const HalfEdgeMap& map, const std::vector<RowRecord>& base_first,
                     const std::vector<He>& remap) {
  Strata s;
  s.vertex_level.assign(map.num_vertices, -1);
  s.vertex_index.assign(map.num_vertices, -1);
  s.face_level.assign(map.num_faces, -1);
  s.face_index.assign(map.num_faces, -1);
  for (std::size_t l = 0; l < base_first.size(); ++l) {
    const RowRecord& rec = base_first[l];
    Level lev;
    lev.cyclic = rec.cyclic;
    lev.west.reserve(rec.west.size());
    for (He h : rec.west) lev.west.push_back(remap[h]);
    for (He h : lev.west) lev.vertices.push_back(map.dest(h));
    if (!rec.cyclic) {
      if (!lev.west.empty()) {
        lev.vertices.push_back(map.origin[lev.west.back()]);
      } else if (rec.tail != kNoHe) {
        lev.vertices.push_back(map.origin[remap[rec.tail]]);
      }
    }
    for (std::size_t k = 0; k < lev.vertices.size(); ++k) {
      int v = lev.vertices[k];
      if (s.vertex_level[v] != -1 && s.vertex_level[v] != static_cast<int>(l)) {
        throw std::logic_error("Strata: vertex on two levels");
      }
      s.vertex_level[v] = static_cast<int>(l);
      s.vertex_index[v] = static_cast<int>(k);
    }
    if (l > 0) {
      for (std::size_t k = 0; k < lev.west.size(); ++k) {
        int f = map.face[lev.west[k]];
        s.face_level[f] = static_cast<int>(l);
        s.face_index[f] = static_cast<int>(k);
      }
    }
    s.levels.push_back(std::move(lev));
  }
  return s;
}

GeodesicPath leftmost_geodesic(const HalfEdgeMap& map, const Strata& s, int level, std::size_t k) {
  if (level < 0 || level >= static_cast<int>(s.levels.size()) || k >= s.levels[level].vertices.size()) {
    throw std::invalid_argument("leftmost_geodesic: start is not on a level");
  }
  GeodesicPath path;
  int v = s.levels[level].vertices[k];
  path.vertices.push_back(v);
  for (int l = level; l > 0; --l) {
    const Level& lev = s.levels[l];
    std::size_t idx = static_cast<std::size_t>(s.vertex_index[v]);
    He start;
    if (idx < lev.west.size()) {
      start = map.twin[lev.west[idx]];  // the level edge leaving v clockwise
    } else if (!lev.west.empty()) {
      start = lev.west.back();  // last vertex of a linear row
    } else {
      start = map.out_he[map.out_start[v]];
    }
    He best = kNoHe;
    He h = start;
    do {
      int w = map.dest(h);
      if (s.vertex_level[w] == l - 1) best = h;
      h = map.next[map.twin[h]];
    } while (h != start);
    if (best == kNoHe) {
      throw std::logic_error("leftmost_geodesic: no edge to level " + std::to_string(l - 1));
    }
    path.half_edges.push_back(best);
    v = map.dest(best);
    path.vertices.push_back(v);
  }
  return path;
}

}  // namespace trifpp
