#include "trifpp/metrics.hpp"

#include "trifpp/lazy_map.hpp"
#include "trifpp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace trifpp {

namespace {

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("weight spec: bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

constexpr std::uint64_t kPrimalSalt = 0x51a7e0c4d9b28f13ULL;
constexpr std::uint64_t kDualSalt = 0xc3e1b7a9250d64f7ULL;

// Dijkstra over a half-edge neighbourhood. Ties settle by node index.
// around(u) is a range into a CSR of half-edges, he_at maps an entry to its half-edge
// and across(h) is the node on the other side.
template <class Around, class HeAt, class Across>
DistanceResult dijkstra(int n, const std::vector<int>& sources, const SearchOptions& opt,
                        const std::vector<double>* weights, const HalfEdgeMap& map, Around around,
                        HeAt he_at, Across across) {
  if (sources.empty()) throw std::invalid_argument("distance search: empty source set");
  DistanceResult r;
  r.values.assign(n, kInf);
  if (opt.keep_parents) r.parent.assign(n, kNoHe);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int s : sources) {
    if (s < 0 || s >= n) throw std::out_of_range("distance search: source out of range");
    r.values[s] = 0.0;
    pq.emplace(0.0, s);
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    r.order.push_back(u);
    if (opt.targets && (*opt.targets)[u]) {
      r.target = u;
      r.target_value = d;
      return r;
    }
    auto [b, e] = around(u);
    for (int i = b; i < e; ++i) {
      He h = he_at(i);
      int v = across(h);
      if (v < 0 || done[v] || (opt.blocked && (*opt.blocked)[v])) continue;
      double nd = d + (weights ? (*weights)[map.edge[h]] : 1.0);
      if (nd < r.values[v]) {
        r.values[v] = nd;
        if (opt.keep_parents) r.parent[v] = h;
        pq.emplace(nd, v);
      }
    }
  }
  return r;
}

std::vector<char> blocked_marked_faces(const HalfEdgeMap& map, const SearchOptions& opt) {
  std::vector<char> blocked(map.num_faces, 0);
  for (int f = 0; f < map.num_faces; ++f) blocked[f] = map.is_marked(f) ? 1 : 0;
  if (opt.blocked) {
    for (int f = 0; f < map.num_faces; ++f) blocked[f] |= (*opt.blocked)[f];
  }
  return blocked;
}

DistanceResult primal_search(const HalfEdgeMap& map, const std::vector<double>* weights,
                             const std::vector<int>& sources, const SearchOptions& opt) {
  return dijkstra(
      map.num_vertices, sources, opt, weights, map,
      [&](int v) { return std::pair<int, int>(map.out_start[v], map.out_start[v + 1]); },
      [&](int i) { return map.out_he[i]; }, [&](He h) { return map.dest(h); });
}

DistanceResult dual_search(const HalfEdgeMap& map, const std::vector<double>* weights,
                           const std::vector<int>& sources, const SearchOptions& opt) {
  std::vector<char> blocked = blocked_marked_faces(map, opt);
  SearchOptions o = opt;
  o.blocked = &blocked;
  return dijkstra(
      map.num_faces, sources, o, weights, map,
      [&](int f) { return std::pair<int, int>(map.face_start[f], map.face_start[f + 1]); },
      [&](int i) { return map.face_he[i]; }, [&](He h) { return map.face[map.twin[h]]; });
}

}  // namespace

WeightSpec WeightSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::vector<double> v = colon == std::string::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1));
  WeightSpec s;
  if (name == "const" || name == "constant") {
    if (v.size() > 1) throw std::invalid_argument("weight spec: const takes one value");
    s.law = WeightLaw::Constant;
    s.a = s.b = v.empty() ? 1.0 : v[0];
    if (!(s.a > 0)) throw std::invalid_argument("weight spec: constant must be positive");
  } else if (name == "uniform") {
    if (v.size() != 2) throw std::invalid_argument("weight spec: uniform:k,1");
    s.law = WeightLaw::Uniform;
    s.a = v[0];
    s.b = v[1];
    if (!(s.a > 0 && s.a <= s.b)) throw std::invalid_argument("weight spec: need 0 < k <= upper");
  } else if (name == "twopoint") {
    if (v.size() != 3) throw std::invalid_argument("weight spec: twopoint:k,1,p");
    s.law = WeightLaw::TwoPoint;
    s.a = v[0];
    s.b = v[1];
    s.p = v[2];
    if (!(s.a > 0 && s.a <= s.b && s.p >= 0 && s.p <= 1)) throw std::invalid_argument("weight spec: bad two-point parameters");
  } else if (name == "exp" || name == "exponential") {
    if (v.size() > 1) throw std::invalid_argument("weight spec: exp takes one rate");
    s.law = WeightLaw::Exponential;
    s.a = 0.0;
    s.b = v.empty() ? 1.0 : v[0];
    if (!(s.b > 0)) throw std::invalid_argument("weight spec: rate must be positive");
  } else {
    throw std::invalid_argument("weight spec: unknown law '" + name + "'");
  }
  return s;
}

std::string WeightSpec::str() const {
  std::ostringstream os;
  os.precision(17);
  switch (law) {
    case WeightLaw::Constant: os << "const:" << a; break;
    case WeightLaw::Uniform: os << "uniform:" << a << ',' << b; break;
    case WeightLaw::TwoPoint: os << "twopoint:" << a << ',' << b << ',' << p; break;
    case WeightLaw::Exponential: os << "exp:" << b; break;
  }
  return os.str();
}

double WeightSpec::lo() const { return law == WeightLaw::Exponential ? 0.0 : a; }
double WeightSpec::hi() const { return law == WeightLaw::Exponential ? kInf : b; }

double WeightSpec::quantile(double u) const {
  switch (law) {
    case WeightLaw::Constant: return a;
    case WeightLaw::Uniform: return a + (b - a) * u;
    case WeightLaw::TwoPoint: return u < p ? a : b;
    case WeightLaw::Exponential: return -std::log1p(-u) / b;
  }
  return a;
}

WeightAssignment assign_weights(const HalfEdgeMap& map, const WeightSpec& spec, WeightScope scope,
                                std::uint64_t seed) {
  WeightAssignment w;
  w.spec = spec;
  w.scope = scope;
  w.values.resize(map.num_edges);
  std::uint64_t base = mix64(seed ^ (scope == WeightScope::Primal ? kPrimalSalt : kDualSalt));
  bool keyed = map.edge_key.size() == static_cast<std::size_t>(map.num_edges);
  for (int e = 0; e < map.num_edges; ++e) {
    std::uint64_t k = keyed ? map.edge_key[e] : static_cast<std::uint64_t>(e);
    w.values[e] = spec.quantile(unit_from_bits(mix64(base ^ mix64(k))));
  }
  return w;
}

std::vector<He> DistanceResult::witness(const HalfEdgeMap& map, int node, bool dual) const {
  if (parent.empty()) throw std::logic_error("witness: search ran without parents");
  std::vector<He> path;
  while (node >= 0 && values[node] > 0) {
    He h = parent[node];
    if (h == kNoHe) break;
    path.push_back(h);
    node = dual ? map.face[h] : map.origin[h];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

DistanceResult bfs_distance(const HalfEdgeMap& map, const std::vector<int>& sources, const SearchOptions& opt) {
  return primal_search(map, nullptr, sources, opt);
}

DistanceResult fpp_distance(const HalfEdgeMap& map, const WeightAssignment& w, const std::vector<int>& sources,
                            const SearchOptions& opt) {
  if (w.scope != WeightScope::Primal) throw std::invalid_argument("fpp_distance: weights are not primal");
  return primal_search(map, &w.values, sources, opt);
}

DistanceResult dual_distance(const HalfEdgeMap& map, const std::vector<int>& source_faces,
                             const SearchOptions& opt) {
  return dual_search(map, nullptr, source_faces, opt);
}

DistanceResult eden_distance(const HalfEdgeMap& map, const WeightAssignment& w,
                             const std::vector<int>& source_faces, const SearchOptions& opt) {
  if (w.scope != WeightScope::Dual) throw std::invalid_argument("eden_distance: weights are not dual");
  return dual_search(map, &w.values, source_faces, opt);
}

namespace {

struct FrozenWalk {
  const HalfEdgeMap& m;
  He next(He h) const { return m.next[h]; }
  He prev(He h) const { return m.prev[h]; }
  He twin(He h) const { return m.twin[h]; }
  int face(He h) const { return m.face[h]; }
  int across(He g) const { return m.face[m.twin[g]]; }
  bool is_marked(int f) const { return m.is_marked(f); }
  const std::string& label(int f) const { return m.label(f); }
  std::size_t size() const { return m.size(); }
};

struct LazyWalk {
  LazyMap& m;
  He next(He h) const { return m.next(h); }
  He prev(He h) const { return m.prev(h); }
  He twin(He h) const { return m.twin(h); }
  int face(He h) const { return m.face(h); }
  int across(He g) const { return m.reveal_across(g); }
  bool is_marked(int f) const { return m.is_marked(f); }
  const std::string& label(int f) const { return m.label(f); }
  std::size_t size() const { return m.size(); }
};

// Faces of the strata keep their ids in a lazy map; revealed faces lie past them.
int strata_face_level(const Strata& s, int f) {
  return f < static_cast<int>(s.face_level.size()) ? s.face_level[f] : -1;
}

template <class Walk>
DownwardPath walk_down(const Walk& map, const Strata& s, int level, std::size_t k, int stop_level) {
  if (level < 1 || level >= static_cast<int>(s.levels.size()) || k >= s.levels[level].west.size()) {
    throw std::invalid_argument("downward_path: start is not a downward triangle");
  }
  if (stop_level < 0 || stop_level >= level) throw std::invalid_argument("downward_path: bad stop level");
  DownwardPath p;
  int f = map.face(s.levels[level].west[k]);
  if (strata_face_level(s, f) != level) throw std::invalid_argument("downward_path: start is not a downward triangle");
  p.faces.push_back(f);
  p.level_faces.push_back(f);
  int cur = level;
  He h = map.next(map.next(s.levels[level].west[k]));
  std::size_t guard = map.size() + 1;
  while (cur > stop_level) {
    He g = map.prev(h);
    int nf = map.across(g);
    He nh = map.twin(g);
    p.crossed.push_back(g);
    p.faces.push_back(nf);
    guard = std::max(guard, map.size() + 1);
    if (p.crossed.size() > guard) throw std::logic_error("downward_path: no progress");
    if (map.is_marked(nf)) {
      if (cur == 1 && map.label(nf) == "bottom") {
        p.level_faces.push_back(nf);
        p.complete = true;
      }
      return p;
    }
    if (strata_face_level(s, nf) == cur - 1) {
      --cur;
      p.level_faces.push_back(nf);
      h = map.next(map.next(s.levels[cur].west[s.face_index[nf]]));
    } else {
      h = nh;
    }
  }
  p.complete = true;
  return p;
}

}  // namespace

DownwardPath downward_path(const HalfEdgeMap& map, const Strata& s, int level, std::size_t k, int stop_level) {
  return walk_down(FrozenWalk{map}, s, level, k, stop_level);
}

DownwardPath downward_path(LazyMap& map, const Strata& s, int level, std::size_t k, int stop_level) {
  return walk_down(LazyWalk{map}, s, level, k, stop_level);
}

double path_weight(const DownwardPath& path, const HalfEdgeMap& map, const WeightAssignment& w) {
  double t = 0;
  for (He h : path.crossed) t += w.values[map.edge[h]];
  return t;
}

Metric parse_metric(const std::string& text) {
  if (text == "graph") return Metric::Graph;
  if (text == "fpp") return Metric::Fpp;
  if (text == "dual") return Metric::Dual;
  if (text == "eden") return Metric::Eden;
  throw std::invalid_argument("unknown metric '" + text + "'");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::Graph: return "graph";
    case Metric::Fpp: return "fpp";
    case Metric::Dual: return "dual";
    case Metric::Eden: return "eden";
  }
  return "?";
}

namespace {

double keyed_weight(const WeightSpec& spec, std::uint64_t base, std::uint64_t key) {
  return spec.quantile(unit_from_bits(mix64(base ^ mix64(key))));
}

}  // namespace

WindowDistance certified_window_distance(LhptWindow& w, Metric metric, int rows, const WeightSpec& spec,
                                         std::uint64_t weight_seed, int max_extensions,
                                         std::int64_t vertex_budget) {
  const bool dual = metric == Metric::Dual || metric == Metric::Eden;
  if (rows < 1 || rows + (dual ? 1 : 0) > w.depth) throw std::invalid_argument("window too shallow for the target rows");
  const bool weighted = metric == Metric::Fpp || metric == Metric::Eden;
  const std::uint64_t base = mix64(weight_seed ^ (dual ? kDualSalt : kPrimalSalt));
  // Lower bound on the cost from a zone node to the bottom row through any path.
  // Rows are crossed one at a time: a primal edge spans at most one row, a dual path
  // needs two steps per row (one when it starts in a slot).
  const double per_row = metric == Metric::Graph ? 1.0 : metric == Metric::Fpp ? spec.lo() : 0.0;
  std::vector<LazyMap::LogEntry> log;
  WindowDistance out;
  int grow_left = 0, grow_right = 0;
  for (int round = 0;; ++round) {
    if (round > 0) w = regrow(w, grow_left, grow_right, w.fill, vertex_budget);
    const int skeleton_vertices = w.map.num_vertices;
    const int skeleton_faces = w.map.num_faces;
    std::vector<char> targets(dual ? skeleton_faces : skeleton_vertices, 0);
    const Level& bottom = w.generation(rows);
    int source = -1;
    if (dual) {
      source = w.origin_face(0);
      for (He h : bottom.west) targets[w.map.face[h]] = 1;
    } else {
      source = w.origin_vertex(0);
      for (int v : bottom.vertices) targets[v] = 1;
    }
    auto row_gap = [&](int v) { return rows - (w.depth - w.strata.vertex_level[v]); };
    std::vector<std::pair<int, std::uint64_t>> holes;
    for (std::size_t k = 0; k < w.open_slots.size(); ++k) holes.emplace_back(w.open_slot_faces[k], w.slot_key(w.open_slots[k]));
    // A path through the right boundary edge meets a lateral vertex first, so skipping
    // the edge keeps the certificate exact while its weight key is not final.
    std::vector<char> skip(w.map.size(), 0);
    for (He h : w.right_boundary) skip[h] = 1;
    std::vector<int> hole_gen;
    for (const SlotId& id : w.open_slots) hole_gen.push_back(id.gen);
    LazyMap lm(std::move(w.map), holes, vertex_budget);
    lm.set_hole_tags(hole_gen);
    lm.replay(log);

    // Remaining-cost bound used both as the search heuristic and for the certificate.
    // Slot contents sit in the strip below generation `tag`. With eagerly filled slots
    // the strip of a face is unknown and the search falls back to plain Dijkstra.
    const bool strips_known = w.fill.lazy && w.fill.eager_max_children < 0;
    auto bound = [&](int u) -> double {
      if (!strips_known) return 0.0;
      if (dual) {
        if (metric == Metric::Eden) return 0.0;
        if (u < skeleton_faces && w.strata.face_level[u] >= 0) {
          return 2.0 * std::max(0, rows - (w.depth - w.strata.face_level[u]));
        }
        const int tag = lm.face_tag(u);
        return tag < 0 ? 0.0 : std::max(0.0, 2.0 * (rows - tag) - 1.0);
      }
      if (u < skeleton_vertices && w.strata.vertex_level[u] >= 0) return per_row * std::max(0, row_gap(u));
      const int tag = lm.vertex_tag(u);
      return tag < 0 ? 0.0 : per_row * std::max(0, rows - tag);
    };

    std::vector<double> dist;
    std::vector<char> done;
    auto ensure = [&](int n) {
      if (n >= static_cast<int>(dist.size())) {
        std::size_t sz = std::max<std::size_t>(n + 1, 2 * dist.size());
        dist.resize(sz, kInf);
        done.resize(sz, 0);
      }
    };
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    double target_value = kInf;
    int bad = 0;
    std::vector<std::pair<double, int>> zone_hits;  // (value + lower bound, side bits)
    // A* with a consistent bound: nodes settle in order of d + bound
    auto relax = [&](int v, double nd) {
      ensure(v);
      if (!done[v] && nd < dist[v]) {
        dist[v] = nd;
        pq.emplace(nd + bound(v), v);
      }
    };
    if (source >= 0) relax(source, 0.0);
    while (!pq.empty()) {
      const int u = pq.top().second;
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      const double d = dist[u];
      if (u < static_cast<int>(targets.size()) && targets[u]) {
        target_value = d;
        break;
      }
      if (dual) {
        int side = 0;
        double lb = kInf;
        He g = lm.face_rep(u);
        do {
          int v = lm.origin(g);
          if (v < skeleton_vertices && w.lateral[v]) {
            side |= w.lateral[v];
            lb = std::min(lb, metric == Metric::Dual ? std::max(0.0, 2.0 * row_gap(v) - 1.0) : 0.0);
          }
          g = lm.next(g);
        } while (g != lm.face_rep(u));
        if (side) zone_hits.emplace_back(d + std::max(lb, bound(u)), side);
        g = lm.face_rep(u);
        do {
          int nf = lm.reveal_across(g);
          if (!lm.is_blocked(nf)) relax(nf, d + (weighted ? keyed_weight(spec, base, lm.key(g)) : 1.0));
          g = lm.next(g);
        } while (g != lm.face_rep(u));
      } else {
        if (u < skeleton_vertices && w.lateral[u]) {
          zone_hits.emplace_back(d + per_row * std::max(0, row_gap(u)), w.lateral[u]);
        }
        lm.reveal_around(u);
        const He start = lm.vertex_rep(u);
        He h = start;
        do {
          if (h >= static_cast<He>(skip.size()) || !skip[h]) {
            relax(lm.dest(h), d + (weighted ? keyed_weight(spec, base, lm.key(h)) : 1.0));
          }
          h = lm.next(lm.twin(h));
        } while (h != start);
      }
    }
    if (target_value == kInf) bad = 3;
    for (auto [v, side] : zone_hits) {
      if (v < target_value) bad |= side;
    }
    out.value = target_value;
    out.extensions = round;
    out.i_min = w.i_min;
    out.i_max = w.i_max;
    out.vertices = lm.num_vertices();
    out.revealed = lm.revealed_vertices();
    out.peel_steps = lm.peel_steps();
    if (bad == 0) {
      out.certified = true;
      return out;
    }
    if (round >= max_extensions) return out;
    log = lm.log();
    grow_left = (bad & 1) ? -w.i_min : 0;
    grow_right = (bad & 2) ? w.i_max + 1 : 0;
  }
}

}  // namespace trifpp

namespace trifpp {

std::vector<double> lazy_vertex_distances(LazyMap& lm, int source, const std::vector<int>& targets,
                                          const WeightSpec& spec, std::uint64_t weight_seed) {
  const std::uint64_t base = mix64(weight_seed ^ kPrimalSalt);
  std::vector<double> dist(lm.num_vertices(), kInf);
  std::vector<char> done(lm.num_vertices(), 0), want(lm.num_vertices(), 0);
  std::size_t missing = 0;
  for (int t : targets) {
    if (!want[t]) ++missing;
    want[t] = 1;
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty() && missing > 0) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u < static_cast<int>(want.size()) && want[u]) --missing;
    lm.reveal_around(u);
    if (dist.size() < static_cast<std::size_t>(lm.num_vertices())) {
      dist.resize(lm.num_vertices(), kInf);
      done.resize(lm.num_vertices(), 0);
    }
    const He start = lm.vertex_rep(u);
    He h = start;
    do {
      int v = lm.dest(h);
      double nd = d + keyed_weight(spec, base, lm.key(h));
      if (!done[v] && nd < dist[v]) {
        dist[v] = nd;
        pq.emplace(nd, v);
      }
      h = lm.next(lm.twin(h));
    } while (h != start);
  }
  std::vector<double> out;
  out.reserve(targets.size());
  for (int t : targets) out.push_back(dist[t]);
  return out;
}

}  // namespace trifpp
