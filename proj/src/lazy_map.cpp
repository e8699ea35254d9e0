#include "trifpp/lazy_map.hpp"

#include "trifpp/boltzmann.hpp"
#include "trifpp/halfplane.hpp"
#include "trifpp/rng.hpp"

#include <stdexcept>
#include <unordered_map>

namespace trifpp {

LazyMap::LazyMap(HalfEdgeMap&& m, const std::vector<std::pair<int, std::uint64_t>>& holes,
                 std::int64_t vertex_budget)
    : budget_(vertex_budget) {
  const std::size_t n = m.size();
  key_.resize(n);
  for (std::size_t h = 0; h < n; ++h) key_[h] = m.edge_key.empty() ? 0 : m.edge_key[m.edge[h]];
  vertex_rep_.resize(m.num_vertices);
  for (int v = 0; v < m.num_vertices; ++v) vertex_rep_[v] = m.out_he[m.out_start[v]];
  face_rep_.resize(m.num_faces);
  face_kind_.assign(m.num_faces, kPlain);
  face_hole_.assign(m.num_faces, -1);
  face_tag_.assign(m.num_faces, -1);
  for (auto [f, k] : holes) face_kind_[f] = kHoleFace;
  for (int f = 0; f < m.num_faces; ++f) {
    face_rep_[f] = m.face_he[m.face_start[f]];
    // a hole's own mark goes away with the hole
    if (m.is_marked(f) && face_kind_[f] != kHoleFace) {
      face_kind_[f] = kMarked;
      marked_.emplace_back(f, m.label(f));
    }
  }
  for (auto [f, k] : holes) {
    face_hole_[f] = static_cast<int>(holes_.size());
    holes_.push_back(Hole{m.face_degree(f), k, 0, 0});
  }
  twin_ = std::move(m.twin);
  next_ = std::move(m.next);
  prev_ = std::move(m.prev);
  origin_ = std::move(m.origin);
  face_ = std::move(m.face);
  m = HalfEdgeMap{};
}

He LazyMap::add_edge(std::uint64_t key) {
  He h = static_cast<He>(twin_.size());
  twin_.push_back(h + 1);
  twin_.push_back(h);
  for (auto* v : {&next_, &prev_}) v->insert(v->end(), 2, kNoHe);
  origin_.insert(origin_.end(), 2, -1);
  face_.insert(face_.end(), 2, -1);
  key_.insert(key_.end(), 2, key);
  return h;
}

void LazyMap::set_hole_tags(const std::vector<int>& tags) {
  if (tags.size() > holes_.size()) throw std::invalid_argument("set_hole_tags: more tags than holes");
  for (std::size_t i = 0; i < tags.size(); ++i) holes_[i].tag = tags[i];
  for (std::size_t f = 0; f < face_hole_.size(); ++f) {
    if (face_hole_[f] >= 0) face_tag_[f] = holes_[face_hole_[f]].tag;
  }
}

int LazyMap::add_face(char kind, He rep, int tag) {
  face_rep_.push_back(rep);
  face_kind_.push_back(kind);
  face_hole_.push_back(-1);
  face_tag_.push_back(tag);
  return static_cast<int>(face_rep_.size()) - 1;
}

void LazyMap::glue(He a, He b) {
  He ta = twin_[a];
  He tb = twin_[b];
  twin_[ta] = tb;
  twin_[tb] = ta;
  key_[tb] = key_[ta];
  // a runs v -> x and b runs x -> v.
  if (vertex_rep_[origin_[a]] == a) vertex_rep_[origin_[a]] = tb;
  if (vertex_rep_[origin_[b]] == b) vertex_rep_[origin_[b]] = ta;
  int f = face_[a];
  face_kind_[f] = kClosed;
  face_hole_[f] = -1;
  face_rep_[f] = kNoHe;
  face_[a] = face_[b] = -1;
}

bool LazyMap::peel(He h) {
  const int F = face_[h];
  if (F < 0 || face_hole_[F] < 0) return false;
  const int hi = face_hole_[F];
  const std::int64_t p = holes_[hi].perimeter;
  const std::uint64_t hkey = holes_[hi].key;
  const std::uint32_t draw = ++holes_[hi].draws;
  log_.push_back(LogEntry{hkey, key_[h]});
  PeelDraw d = draw_peel(p, unit_from_bits(mix64(hkey ^ mix64(draw))));

  if (d.outcome == PeelOutcome::Glue) {
    glue(h, next_[h]);
    return true;
  }
  const He b1 = next_[h];
  const He bl = prev_[h];
  const int v = origin_[h];
  const int x = dest(h);
  // Split: A = [a1t, b1..bk], B = [a2t, b_{k+1}..b_{p-1}]. Walk from the nearer end.
  const std::int64_t k = d.split;
  He bk = h;
  He bk1 = kNoHe;
  if (d.outcome == PeelOutcome::Split) {
    if (k <= p - 1 - k) {
      for (std::int64_t i = 0; i < k; ++i) bk = next_[bk];
    } else {
      bk = bl;
      for (std::int64_t i = p - 1; i > k; --i) bk = prev_[bk];
    }
    bk1 = k == p - 1 ? kNoHe : (k == 0 ? b1 : next_[bk]);
  }
  auto new_key = [&]() { return mix64(hkey + (++holes_[hi].edges)); };
  const He a1 = add_edge(new_key());
  const He a1t = a1 + 1;
  const He a2 = add_edge(new_key());
  const He a2t = a2 + 1;
  const int tag = holes_[hi].tag;
  const int T = add_face(kPlain, h, tag);
  next_[h] = a1;
  next_[a1] = a2;
  next_[a2] = h;
  prev_[a1] = h;
  prev_[a2] = a1;
  prev_[h] = a2;
  face_[h] = face_[a1] = face_[a2] = T;
  origin_[a1] = x;
  origin_[a2t] = v;

  if (d.outcome == PeelOutcome::NewVertex) {
    const int t = static_cast<int>(vertex_rep_.size());
    vertex_rep_.push_back(a1t);
    if (tag >= 0 || !vertex_tag_.empty()) {
      vertex_tag_.resize(vertex_rep_.size(), -1);
      vertex_tag_[t] = tag;
    }
    if (++revealed_ > budget_) throw WindowBudgetExceeded("revealed slot vertices exceed the vertex budget");
    origin_[a2] = origin_[a1t] = t;
    // Hole becomes ... bl, a2t, a1t, b1 ...
    if (p == 1) {
      next_[a2t] = a1t;
      next_[a1t] = a2t;
      prev_[a1t] = a2t;
      prev_[a2t] = a1t;
    } else {
      next_[bl] = a2t;
      prev_[a2t] = bl;
      next_[a2t] = a1t;
      prev_[a1t] = a2t;
      next_[a1t] = b1;
      prev_[b1] = a1t;
    }
    face_[a1t] = face_[a2t] = F;
    face_rep_[F] = a1t;
    holes_[hi].perimeter = p + 1;
    return true;
  }

  const int t = k == 0 ? x : dest(bk);
  origin_[a2] = origin_[a1t] = t;
  if (k == 0) {
    next_[a1t] = prev_[a1t] = a1t;
  } else {
    next_[a1t] = b1;
    prev_[b1] = a1t;
    next_[bk] = a1t;
    prev_[a1t] = bk;
  }
  if (k == p - 1) {
    next_[a2t] = prev_[a2t] = a2t;
  } else {
    next_[a2t] = bk1;
    prev_[bk1] = a2t;
    next_[bl] = a2t;
    prev_[a2t] = bl;
  }
  const std::int64_t size_a = k + 1;
  const std::int64_t size_b = p - k;
  const bool a_small = size_a <= size_b;
  const He keep_rep = a_small ? a2t : a1t;
  const He move_rep = a_small ? a1t : a2t;
  face_[keep_rep] = F;
  face_rep_[F] = keep_rep;
  holes_[hi].perimeter = a_small ? size_b : size_a;
  const int G = add_face(kHoleFace, move_rep, tag);
  face_hole_[G] = static_cast<int>(holes_.size());
  holes_.push_back(Hole{a_small ? size_a : size_b, derive_seed(hkey, {static_cast<std::int64_t>(draw), 1}), 0, 0, tag});
  He g = move_rep;
  do {
    face_[g] = G;
    g = next_[g];
  } while (g != move_rep);
  return true;
}

const std::string& LazyMap::label(int f) const {
  static const std::string none;
  for (const auto& [g, l] : marked_) {
    if (g == f) return l;
  }
  return none;
}

int LazyMap::reveal_across(He g) {
  while (is_hole(face_[twin_[g]])) peel(twin_[g]);
  return face_[twin_[g]];
}

void LazyMap::reveal_around(int v) {
  for (;;) {
    const He start = vertex_rep_[v];
    He h = start;
    bool restart = false;
    do {
      while (face_[h] >= 0 && is_hole(face_[h])) {
        peel(h);
        if (face_[h] < 0) {  // glued away
          restart = true;
          break;
        }
      }
      if (restart) break;
      // a peel at h puts the new out-edge right after h in this direction
      h = twin_[prev_[h]];
    } while (h != start);
    if (!restart) return;
  }
}

void LazyMap::reveal_all() {
  for (std::size_t i = 0; i < face_hole_.size(); ++i) {
    while (face_hole_[i] >= 0) peel(face_rep_[i]);
  }
}

HalfEdgeMap LazyMap::snapshot(std::vector<int>* vertex_map) const {
  std::vector<He> id(twin_.size(), kNoHe);
  He live = 0;
  for (std::size_t h = 0; h < twin_.size(); ++h) {
    if (face_[h] >= 0) id[h] = live++;
  }
  HalfEdgeMap m;
  m.twin.resize(live);
  m.next.resize(live);
  std::vector<std::uint64_t> keys(live);
  for (std::size_t h = 0; h < twin_.size(); ++h) {
    if (id[h] == kNoHe) continue;
    m.twin[id[h]] = id[twin_[h]];
    m.next[id[h]] = id[next_[h]];
    keys[id[h]] = key_[h];
  }
  for (const auto& [f, label] : marked_) m.marks.emplace_back(id[face_rep_[f]], label);
  for (std::size_t f = 0; f < face_hole_.size(); ++f) {
    if (face_hole_[f] >= 0) m.marks.emplace_back(id[face_rep_[f]], "slot");
  }
  m.root = m.marks.empty() ? 0 : m.twin[m.marks.front().first];
  m.derive();
  m.edge_key.resize(m.num_edges);
  for (int e = 0; e < m.num_edges; ++e) m.edge_key[e] = keys[m.edge_rep[e]];
  if (vertex_map) {
    vertex_map->resize(vertex_rep_.size());
    for (std::size_t v = 0; v < vertex_rep_.size(); ++v) (*vertex_map)[v] = m.origin[id[vertex_rep_[v]]];
  }
  return m;
}

void LazyMap::replay(const std::vector<LogEntry>& entries) {
  if (entries.empty()) return;
  std::unordered_multimap<std::uint64_t, He> by_key;
  by_key.reserve(twin_.size());
  for (std::size_t h = 0; h < twin_.size(); ++h) {
    if (face_[h] >= 0 && is_hole(face_[h])) by_key.emplace(key_[h], static_cast<He>(h));
  }
  for (const LogEntry& e : entries) {
    He found = kNoHe;
    auto [lo, hi] = by_key.equal_range(e.edge_key);
    for (auto it = lo; it != hi; ++it) {
      He h = it->second;
      if (face_[h] >= 0 && is_hole(face_[h]) && holes_[face_hole_[face_[h]]].key == e.hole_key) {
        found = h;
        break;
      }
    }
    if (found == kNoHe) throw std::logic_error("replay: peel target not found");
    std::size_t before = twin_.size();
    peel(found);
    for (std::size_t h = before; h < twin_.size(); ++h) by_key.emplace(key_[h], static_cast<He>(h));
  }
}

}  // namespace trifpp
