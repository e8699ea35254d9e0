#include "trifpp/planar_map.hpp"
#include "trifpp/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace trifpp {

namespace {

// Counting sort of half-edges by an integer label.
void build_csr(const std::vector<int>& label, int n, std::vector<int>& start, std::vector<He>& items) {
  start.assign(n + 1, 0);
  for (int x : label) ++start[x + 1];
  for (int i = 0; i < n; ++i) start[i + 1] += start[i];
  items.resize(label.size());
  std::vector<int> fill(start.begin(), start.end() - 1);
  for (std::size_t h = 0; h < label.size(); ++h) items[fill[label[h]]++] = static_cast<He>(h);
}

}  // namespace

int HalfEdgeMap::marked_face(const std::string& label) const {
  for (const auto& [rep, l] : marks) {
    if (l == label) return face[rep];
  }
  return -1;
}

void HalfEdgeMap::derive() {
  const He n = static_cast<He>(twin.size());
  prev.assign(n, kNoHe);
  for (He h = 0; h < n; ++h) prev[next[h]] = h;

  origin.assign(n, -1);
  num_vertices = 0;
  for (He h = 0; h < n; ++h) {
    if (origin[h] >= 0) continue;
    He g = h;
    do {
      origin[g] = num_vertices;
      g = next[twin[g]];
    } while (g != h);
    ++num_vertices;
  }

  face.assign(n, -1);
  num_faces = 0;
  for (He h = 0; h < n; ++h) {
    if (face[h] >= 0) continue;
    He g = h;
    do {
      face[g] = num_faces;
      g = next[g];
    } while (g != h);
    ++num_faces;
  }

  edge.assign(n, -1);
  edge_rep.clear();
  num_edges = 0;
  for (He h = 0; h < n; ++h) {
    if (edge[h] >= 0) continue;
    edge[h] = edge[twin[h]] = num_edges++;
    edge_rep.push_back(h);
  }

  build_csr(origin, num_vertices, out_start, out_he);
  build_csr(face, num_faces, face_start, face_he);

  std::sort(marks.begin(), marks.end());
  face_mark.assign(num_faces, -1);
  for (std::size_t k = 0; k < marks.size(); ++k) face_mark[face[marks[k].first]] = static_cast<int>(k);
}

const std::string& HalfEdgeMap::label(int f) const {
  static const std::string none;
  return face_mark[f] >= 0 ? marks[face_mark[f]].second : none;
}

ValidationReport validate(const HalfEdgeMap& map) {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };
  const He n = static_cast<He>(map.twin.size());
  if (map.next.size() != map.twin.size()) {
    fail("twin and next have different sizes");
    return rep;
  }
  if (n == 0) {
    fail("empty map");
    return rep;
  }
  for (He h = 0; h < n; ++h) {
    He t = map.twin[h];
    if (t < 0 || t >= n) {
      fail("twin out of range at " + std::to_string(h));
    } else if (t == h) {
      fail("involution has fixed point at " + std::to_string(h));
    } else if (map.twin[t] != h) {
      fail("twin is not an involution at " + std::to_string(h));
    }
  }
  std::vector<int> indeg(n, 0);
  for (He h = 0; h < n; ++h) {
    He x = map.next[h];
    if (x < 0 || x >= n) {
      fail("next out of range at " + std::to_string(h));
    } else {
      ++indeg[x];
    }
  }
  for (He h = 0; h < n; ++h) {
    if (indeg[h] != 1) {
      fail("next is not a permutation at " + std::to_string(h));
      break;
    }
  }
  if (map.root < 0 || map.root >= n) fail("root out of range");
  for (const auto& [r, label] : map.marks) {
    if (r < 0 || r >= n) fail("mark representative out of range: " + label);
  }
  if (!rep.ok) return rep;

  HalfEdgeMap m;
  m.twin = map.twin;
  m.next = map.next;
  m.root = map.root;
  m.marks = map.marks;
  m.derive();
  rep.vertices = m.num_vertices;
  rep.edges = m.num_edges;
  rep.faces = m.num_faces;

  // connectivity over half-edges through twin and next
  std::vector<char> seen(n, 0);
  std::vector<He> stack{0};
  seen[0] = 1;
  He reached = 1;
  while (!stack.empty()) {
    He h = stack.back();
    stack.pop_back();
    for (He g : {m.twin[h], m.next[h], m.prev[h]}) {
      if (!seen[g]) {
        seen[g] = 1;
        ++reached;
        stack.push_back(g);
      }
    }
  }
  if (reached != n) fail("map is not connected");
  if (rep.euler() != 2) fail("Euler characteristic is " + std::to_string(rep.euler()));
  for (int f = 0; f < m.num_faces; ++f) {
    if (!m.is_marked(f) && m.face_degree(f) != 3) {
      fail("unmarked face " + std::to_string(f) + " has degree " +
           std::to_string(m.face_degree(f)));
    }
  }
  return rep;
}

std::pair<He, He> MapBuilder::add_edge(std::uint64_t key) {
  He h = static_cast<He>(twin_.size());
  twin_.push_back(h + 1);
  twin_.push_back(h);
  next_.push_back(kNoHe);
  next_.push_back(kNoHe);
  dead_.push_back(0);
  dead_.push_back(0);
  forward_.push_back(kNoHe);
  forward_.push_back(kNoHe);
  key_.push_back(key);
  key_.push_back(key);
  return {h, h + 1};
}

void MapBuilder::make_face(std::initializer_list<He> hs) {
  const He* b = hs.begin();
  std::size_t k = hs.size();
  for (std::size_t i = 0; i < k; ++i) next_[b[i]] = b[(i + 1) % k];
}

void MapBuilder::make_face(const std::vector<He>& hs) {
  std::size_t k = hs.size();
  for (std::size_t i = 0; i < k; ++i) next_[hs[i]] = hs[(i + 1) % k];
}

void MapBuilder::glue(He a, He b) {
  He ta = twin_[a];
  He tb = twin_[b];
  twin_[ta] = tb;
  twin_[tb] = ta;
  key_[tb] = key_[ta];
  dead_[a] = dead_[b] = 1;
  forward_[a] = tb;
  forward_[b] = ta;
  if (root_ == a) root_ = tb;
  if (root_ == b) root_ = ta;
}

He MapBuilder::resolve(He h) const {
  while (dead_[h]) h = forward_[h];
  return h;
}

HalfEdgeMap MapBuilder::freeze(std::vector<He>* remap) const& {
  MapBuilder copy(*this);
  return std::move(copy).freeze(remap);
}

HalfEdgeMap MapBuilder::freeze(std::vector<He>* remap) && {
  const std::size_t n = twin_.size();
  std::vector<He> id(n, kNoHe);
  He live = 0;
  for (std::size_t h = 0; h < n; ++h) {
    if (!dead_[h]) id[h] = live++;
  }
  HalfEdgeMap m;
  m.twin.resize(live);
  m.next.resize(live);
  std::vector<std::uint64_t> he_key(live);
  for (std::size_t h = 0; h < n; ++h) {
    if (dead_[h]) continue;
    He t = id[twin_[h]];
    He x = next_[h] == kNoHe ? kNoHe : id[next_[h]];
    if (t == kNoHe || x == kNoHe) throw std::logic_error("freeze: live half-edge points to a dropped one");
    m.twin[id[h]] = t;
    m.next[id[h]] = x;
    he_key[id[h]] = key_[h];
  }
  m.root = id[resolve(root_)];
  m.marks.reserve(marks_.size());
  for (auto& [rep, label] : marks_) m.marks.emplace_back(id[resolve(rep)], std::move(label));
  if (remap) {
    for (std::size_t h = 0; h < n; ++h) {
      if (dead_[h]) id[h] = id[resolve(static_cast<He>(h))];
    }
    *remap = std::move(id);
  }
  // The builder is spent; drop its arrays before deriving.
  *this = MapBuilder{};
  m.derive();
  m.edge_key.resize(m.num_edges);
  for (int e = 0; e < m.num_edges; ++e) m.edge_key[e] = he_key[m.edge_rep[e]];
  return m;
}

std::vector<He> add_polygon(MapBuilder& b, int p) {
  if (p < 1) throw std::invalid_argument("add_polygon: p must be positive");
  std::vector<He> inner(p), outer(p);
  for (int k = 0; k < p; ++k) std::tie(inner[k], outer[k]) = b.add_edge(static_cast<std::uint64_t>(k));
  for (int k = 0; k < p; ++k) {
    b.set_next(inner[k], inner[(k + 1) % p]);
    b.set_next(outer[k], outer[(k + p - 1) % p]);
  }
  b.set_root(inner[0]);
  b.mark(outer[0], "bottom");
  return inner;
}

HalfEdgeMap build_polygon(int p) {
  MapBuilder b;
  std::vector<He> inner = add_polygon(b, p);
  b.mark(inner[0], "unfilled");
  return b.freeze();
}

DualGraph dual_graph(const HalfEdgeMap& map) {
  DualGraph g;
  g.num_nodes = map.num_faces;
  g.edges.reserve(map.num_edges);
  for (int e = 0; e < map.num_edges; ++e) {
    He h = map.edge_rep[e];
    g.edges.emplace_back(map.face[h], map.face[map.twin[h]]);
  }
  g.incidences.reserve(map.size());
  for (He h = 0; h < static_cast<He>(map.size()); ++h) g.incidences.emplace_back(map.origin[h], map.face[h]);
  return g;
}

HalfEdgeMap root_transform(const HalfEdgeMap& plane) {
  if (!plane.marks.empty()) throw std::invalid_argument("root_transform: source must be unmarked");
  if (plane.num_vertices < 3) throw std::invalid_argument("root_transform: need at least 3 vertices");
  HalfEdgeMap m;
  m.twin = plane.twin;
  m.next = plane.next;
  const He n = static_cast<He>(plane.size());
  const He rho = plane.root;
  const He rho_t = plane.twin[rho];
  // new half-edges: x (v->u) twin of rho, y (u->v) twin of rho_t, loop l and its twin
  const He x = n, y = n + 1, l = n + 2, lt = n + 3;
  m.twin.resize(n + 4);
  m.next.resize(n + 4);
  m.twin[rho] = x;
  m.twin[x] = rho;
  m.twin[rho_t] = y;
  m.twin[y] = rho_t;
  m.twin[l] = lt;
  m.twin[lt] = l;
  m.next[x] = l;
  m.next[l] = y;
  m.next[y] = x;
  m.next[lt] = lt;
  m.root = l;
  m.marks.emplace_back(lt, "bottom");
  m.derive();
  if (!plane.edge_key.empty()) {
    // the root edge splits in two; the copy and the loop get derived keys
    m.edge_key.assign(m.num_edges, 0);
    for (He h = 0; h < n; ++h) m.edge_key[m.edge[h]] = plane.edge_key[plane.edge[h]];
    const std::uint64_t k = plane.edge_key[plane.edge[rho]];
    m.edge_key[m.edge[rho_t]] = mix64(k ^ 0x52);
    m.edge_key[m.edge[l]] = mix64(k ^ 0x4c);
  }
  return m;
}

HalfEdgeMap root_transform_inverse(const HalfEdgeMap& mono) {
  const He l = mono.root;
  const He lt = mono.twin[l];
  if (mono.next[lt] != lt || mono.label(mono.face[lt]) != "bottom") {
    throw std::invalid_argument("root_transform_inverse: boundary is not a rooted loop");
  }
  const He y = mono.next[l];
  const He x = mono.next[y];
  if (mono.next[x] != l) throw std::invalid_argument("root_transform_inverse: root face is not a triangle");
  if (mono.twin[x] == y) {
    throw std::invalid_argument("root_transform_inverse: both sides of the root triangle are one edge");
  }
  const He n = static_cast<He>(mono.size());
  // Drop the loop and the two sides x, y; their twins become one edge.
  HalfEdgeMap m;
  m.twin = mono.twin;
  m.next = mono.next;
  He a = mono.twin[x];
  He c = mono.twin[y];
  m.twin[a] = c;
  m.twin[c] = a;
  std::vector<He> id(n, kNoHe);
  He live = 0;
  for (He h = 0; h < n; ++h) {
    if (h != x && h != y && h != l && h != lt) id[h] = live++;
  }
  HalfEdgeMap out;
  out.twin.resize(live);
  out.next.resize(live);
  for (He h = 0; h < n; ++h) {
    if (id[h] == kNoHe) continue;
    out.twin[id[h]] = id[m.twin[h]];
    out.next[id[h]] = id[m.next[h]];
  }
  out.root = id[a];
  for (const auto& [rep, lab] : mono.marks) {
    if (lab != "bottom" && id[rep] != kNoHe) out.marks.emplace_back(id[rep], lab);
  }
  out.derive();
  if (!mono.edge_key.empty()) {
    out.edge_key.assign(out.num_edges, 0);
    for (He h = 0; h < n; ++h) {
      if (id[h] != kNoHe) out.edge_key[out.edge[id[h]]] = mono.edge_key[mono.edge[h]];
    }
  }
  return out;
}

HalfEdgeMap canonical_form(const HalfEdgeMap& map) {
  const He n = static_cast<He>(map.size());
  std::vector<He> label(n, kNoHe);
  std::vector<He> order;
  order.reserve(n);
  label[map.root] = 0;
  order.push_back(map.root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    He h = order[i];
    for (He g : {map.next[h], map.twin[h]}) {
      if (label[g] == kNoHe) {
        label[g] = static_cast<He>(order.size());
        order.push_back(g);
      }
    }
  }
  if (static_cast<He>(order.size()) != n) throw std::invalid_argument("canonical_form: map is not connected");
  HalfEdgeMap c;
  c.twin.resize(n);
  c.next.resize(n);
  for (He h = 0; h < n; ++h) {
    c.twin[label[h]] = label[map.twin[h]];
    c.next[label[h]] = label[map.next[h]];
  }
  c.root = 0;
  for (const auto& [rep, lab] : map.marks) {
    // smallest new label in the marked face
    He best = label[rep];
    He g = rep;
    do {
      best = std::min(best, label[g]);
      g = map.next[g];
    } while (g != rep);
    c.marks.emplace_back(best, lab);
  }
  c.derive();
  if (!map.edge_key.empty()) {
    c.edge_key.assign(c.num_edges, 0);
    for (int e = 0; e < map.num_edges; ++e) c.edge_key[c.edge[label[map.edge_rep[e]]]] = map.edge_key[e];
  }
  return c;
}

bool same_map(const HalfEdgeMap& a, const HalfEdgeMap& b) {
  if (a.size() != b.size()) return false;
  HalfEdgeMap ca = canonical_form(a);
  HalfEdgeMap cb = canonical_form(b);
  return ca.twin == cb.twin && ca.next == cb.next && ca.marks == cb.marks;
}

std::string serialize(const HalfEdgeMap& map, const std::vector<std::string>& extra_lines) {
  std::ostringstream os;
  os << "PMAP v1 H=" << map.size() << " ROOT=" << map.root << '\n';
  for (He h = 0; h < static_cast<He>(map.size()); ++h) {
    os << h << ' ' << map.twin[h] << ' ' << map.next[h] << '\n';
  }
  std::vector<std::pair<He, std::string>> marks = map.marks;
  std::sort(marks.begin(), marks.end());
  for (const auto& [rep, label] : marks) os << "MARK " << rep << ' ' << label << '\n';
  for (const auto& line : extra_lines) os << line << '\n';
  return os.str();
}

HalfEdgeMap deserialize(const std::string& text, std::vector<std::string>* extra) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto err = [&lineno](const std::string& what) {
    return std::runtime_error("line " + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(is, line)) throw std::runtime_error("line 1: empty input");
  ++lineno;
  long long h_count = -1, root = -1;
  if (std::sscanf(line.c_str(), "PMAP v1 H=%lld ROOT=%lld", &h_count, &root) != 2 || h_count < 0) {
    throw err("bad header");
  }
  HalfEdgeMap m;
  m.twin.assign(h_count, kNoHe);
  m.next.assign(h_count, kNoHe);
  std::vector<char> seen(h_count, 0);
  long long rows = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("MARK ", 0) == 0) {
      std::istringstream ls(line.substr(5));
      long long rep;
      std::string label;
      if (!(ls >> rep >> label) || rep < 0 || rep >= h_count) throw err("bad MARK line");
      m.marks.emplace_back(static_cast<He>(rep), label);
      continue;
    }
    if (!line.empty() && std::isalpha(static_cast<unsigned char>(line[0]))) {
      if (extra) extra->push_back(line);
      continue;
    }
    std::istringstream ls(line);
    long long id, t, x;
    if (!(ls >> id >> t >> x)) throw err("expected '<id> <twin> <next>'");
    if (id < 0 || id >= h_count || seen[id]) throw err("bad or repeated half-edge id " + std::to_string(id));
    if (t < 0 || t >= h_count) throw err("twin[" + std::to_string(id) + "] out of range");
    if (x < 0 || x >= h_count) throw err("next[" + std::to_string(id) + "] out of range");
    seen[id] = 1;
    m.twin[id] = static_cast<He>(t);
    m.next[id] = static_cast<He>(x);
    ++rows;
  }
  if (rows != h_count) throw std::runtime_error("line " + std::to_string(lineno) + ": missing half-edge lines");
  for (long long h = 0; h < h_count; ++h) {
    He t = m.twin[h];
    if (t == h || m.twin[t] != h) throw std::runtime_error("twin[" + std::to_string(h) + "] inconsistent");
  }
  std::vector<char> hit(h_count, 0);
  for (long long h = 0; h < h_count; ++h) {
    if (hit[m.next[h]]) throw std::runtime_error("next[" + std::to_string(h) + "] is not a permutation");
    hit[m.next[h]] = 1;
  }
  if (root < 0 || root >= h_count) throw std::runtime_error("line 1: root out of range");
  m.root = static_cast<He>(root);
  m.derive();
  return m;
}

}  // namespace trifpp
