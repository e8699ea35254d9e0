#include "trifpp/boltzmann.hpp"
#include "trifpp/halfplane.hpp"
#include "trifpp/lazy_map.hpp"
#include "trifpp/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

using namespace trifpp;

namespace {

// Plain triangulations of the plane from Boltzmann 1-gons, at most max_edges edges.
std::vector<HalfEdgeMap> plane_samples(int count, std::uint64_t seed, int min_inner, int max_edges) {
  std::vector<HalfEdgeMap> out;
  Rng rng(seed);
  while (static_cast<int>(out.size()) < count) {
    BoltzmannSample s = sample_boltzmann_pgon(1, rng, 2000);
    if (s.truncated || s.inner_vertices < min_inner) continue;
    HalfEdgeMap m = root_transform_inverse(s.map);
    if (m.num_edges > max_edges) continue;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<double> bellman_ford(int n, const std::vector<std::tuple<int, int, double>>& arcs, int source) {
  std::vector<double> d(n, kInf);
  d[source] = 0;
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (auto [a, b, w] : arcs) {
      if (d[a] + w < d[b]) {
        d[b] = d[a] + w;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d;
}

std::vector<std::tuple<int, int, double>> primal_arcs(const HalfEdgeMap& m, const WeightAssignment& w) {
  std::vector<std::tuple<int, int, double>> arcs;
  for (He h = 0; h < static_cast<He>(m.size()); ++h) arcs.emplace_back(m.origin[h], m.dest(h), w.values[m.edge[h]]);
  return arcs;
}

std::vector<std::tuple<int, int, double>> dual_arcs(const HalfEdgeMap& m, const WeightAssignment& w) {
  std::vector<std::tuple<int, int, double>> arcs;
  for (He h = 0; h < static_cast<He>(m.size()); ++h) {
    const int a = m.face[h], b = m.face[m.twin[h]];
    if (m.is_marked(a) || m.is_marked(b)) continue;
    arcs.emplace_back(a, b, w.values[m.edge[h]]);
  }
  return arcs;
}

HalfEdgeMap tetrahedron() {
  MapBuilder b;
  auto [ab, ba] = b.add_edge();
  auto [bc, cb] = b.add_edge();
  auto [ca, ac] = b.add_edge();
  auto [ad, da] = b.add_edge();
  auto [bd, db] = b.add_edge();
  auto [cd, dc] = b.add_edge();
  b.make_face({ab, bd, da});
  b.make_face({bc, cd, db});
  b.make_face({ca, ad, dc});
  b.make_face({ac, cb, ba});
  b.set_root(ab);
  return b.freeze();
}

std::vector<std::pair<int, std::uint64_t>> holes_of(const HalfPlaneWindow& w) {
  std::vector<std::pair<int, std::uint64_t>> h;
  for (std::size_t k = 0; k < w.open_slots.size(); ++k) h.emplace_back(w.open_slot_faces[k], w.slot_key(w.open_slots[k]));
  return h;
}

}  // namespace

TEST(Weights, ParseAndPrint) {
  for (const char* text : {"const:1", "const:2.5", "uniform:0.5,1", "twopoint:0.25,1,0.3", "exp:1"}) {
    WeightSpec s = WeightSpec::parse(text);
    EXPECT_EQ(WeightSpec::parse(s.str()).str(), s.str()) << text;
  }
  WeightSpec u = WeightSpec::parse("uniform:0.5,1");
  EXPECT_EQ(u.lo(), 0.5);
  EXPECT_EQ(u.hi(), 1.0);
  EXPECT_EQ(WeightSpec::parse("exp:1").hi(), kInf);
  EXPECT_THROW(WeightSpec::parse("uniform:1,0.5"), std::invalid_argument);
  EXPECT_THROW(WeightSpec::parse("gamma:2"), std::invalid_argument);
  EXPECT_THROW(WeightSpec::parse("const:-1"), std::invalid_argument);
}

TEST(Weights, QuantilesInSupport) {
  WeightSpec t = WeightSpec::parse("twopoint:0.25,1,0.3");
  EXPECT_EQ(t.quantile(0.1), 0.25);
  EXPECT_EQ(t.quantile(0.9), 1.0);
  WeightSpec e = WeightSpec::parse("exp:1");
  EXPECT_NEAR(e.quantile(0.5), std::log(2.0), 1e-12);
  WeightSpec u = WeightSpec::parse("uniform:0.5,1");
  for (double x : {1e-9, 0.3, 0.999999}) {
    EXPECT_GE(u.quantile(x), 0.5);
    EXPECT_LE(u.quantile(x), 1.0);
  }
}

TEST(Dijkstra, MatchesBellmanFord) {
  int checked = 0;
  for (const HalfEdgeMap& m : plane_samples(40, 3, 5, 1000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("exp:1"), WeightScope::Primal, 11);
    auto want = bellman_ford(m.num_vertices, primal_arcs(m, w), 0);
    DistanceResult got = fpp_distance(m, w, {0});
    for (int v = 0; v < m.num_vertices; ++v) EXPECT_NEAR(got.values[v], want[v], 1e-12);

    WeightAssignment wd = assign_weights(m, WeightSpec::parse("exp:1"), WeightScope::Dual, 11);
    auto want_dual = bellman_ford(m.num_faces, dual_arcs(m, wd), 0);
    DistanceResult eden = eden_distance(m, wd, {0});
    for (int f = 0; f < m.num_faces; ++f) EXPECT_NEAR(eden.values[f], want_dual[f], 1e-12);

    WeightAssignment one = assign_weights(m, WeightSpec::parse("const:1"), WeightScope::Dual, 0);
    auto hops = bellman_ford(m.num_faces, dual_arcs(m, one), 0);
    DistanceResult dual = dual_distance(m, {0});
    for (int f = 0; f < m.num_faces; ++f) EXPECT_EQ(dual.values[f], hops[f]);
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(Fpp, ConstantIsScaledGraphDistance) {
  for (const HalfEdgeMap& m : plane_samples(20, 4, 10, 3000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("const:2.5"), WeightScope::Primal, 1);
    DistanceResult bfs = bfs_distance(m, {0});
    DistanceResult fpp = fpp_distance(m, w, {0});
    for (int v = 0; v < m.num_vertices; ++v) EXPECT_DOUBLE_EQ(fpp.values[v], 2.5 * bfs.values[v]);
  }
}

TEST(Fpp, SandwichedByGraphDistance) {
  const double kappa = 0.3;
  for (const HalfEdgeMap& m : plane_samples(20, 5, 10, 3000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("uniform:0.3,1"), WeightScope::Primal, 2);
    DistanceResult bfs = bfs_distance(m, {0});
    DistanceResult fpp = fpp_distance(m, w, {0});
    for (int v = 0; v < m.num_vertices; ++v) {
      EXPECT_LE(kappa * bfs.values[v], fpp.values[v] + 1e-12);
      EXPECT_LE(fpp.values[v], bfs.values[v] + 1e-12);
    }
  }
}

TEST(Fpp, TriangleInequality) {
  for (const HalfEdgeMap& m : plane_samples(10, 6, 20, 3000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("exp:1"), WeightScope::Primal, 3);
    std::vector<std::vector<double>> d;
    const int k = std::min(m.num_vertices, 12);
    for (int s = 0; s < k; ++s) d.push_back(fpp_distance(m, w, {s}).values);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) EXPECT_LE(d[a][c], d[a][b] + d[b][c] + 1e-12);
  }
}

TEST(Dual, TetrahedronFacesAtDistanceOne) {
  HalfEdgeMap m = tetrahedron();
  for (int f = 0; f < 4; ++f) {
    DistanceResult d = dual_distance(m, {f});
    for (int g = 0; g < 4; ++g) EXPECT_EQ(d.values[g], f == g ? 0 : 1);
  }
}

TEST(Dual, MarkedFacesBlocked) {
  HalfEdgeMap m = build_polygon(3);
  const int bottom = m.marked_face("bottom");
  const int inner = 1 - bottom;
  DistanceResult d = dual_distance(m, {inner});
  EXPECT_EQ(d.values[bottom], kInf);
}

// Faces at adjacent vertices are close: walk around u to the shared edge, then around v.
TEST(Dual, AdjacentVertexFacesWithinDegree) {
  for (const HalfEdgeMap& m : plane_samples(10, 7, 10, 2000)) {
    DualGraph g = dual_graph(m);
    std::vector<std::vector<int>> faces_at(m.num_vertices);
    for (auto [v, f] : g.incidences) faces_at[v].push_back(f);
    for (He h = 0; h < static_cast<He>(m.size()); h += 7) {
      const int u = m.origin[h], v = m.dest(h);
      const int bound = std::max(m.degree(u), m.degree(v)) + 1;
      DistanceResult d = dual_distance(m, {faces_at[u].front()});
      for (int f : faces_at[v]) EXPECT_LE(d.values[f], bound);
    }
  }
}

TEST(Eden, SettleOrderStrictlyIncreasing) {
  for (const HalfEdgeMap& m : plane_samples(10, 8, 50, 5000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("exp:1"), WeightScope::Dual, 4);
    DistanceResult d = eden_distance(m, w, {0});
    ASSERT_EQ(static_cast<int>(d.order.size()), m.num_faces);
    for (std::size_t i = 1; i < d.order.size(); ++i) EXPECT_LT(d.values[d.order[i - 1]], d.values[d.order[i]]);
  }
}

TEST(Search, TargetsStopEarlyWithSameValue) {
  for (const HalfEdgeMap& m : plane_samples(10, 9, 30, 3000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("exp:1"), WeightScope::Primal, 5);
    DistanceResult full = fpp_distance(m, w, {0});
    std::vector<char> targets(m.num_vertices, 0);
    targets[m.num_vertices - 1] = 1;
    SearchOptions opt;
    opt.targets = &targets;
    opt.keep_parents = true;
    DistanceResult early = fpp_distance(m, w, {0}, opt);
    EXPECT_EQ(early.target, m.num_vertices - 1);
    EXPECT_DOUBLE_EQ(early.target_value, full.values[m.num_vertices - 1]);
    // the witness path costs the distance
    double cost = 0;
    for (He h : early.witness(m, early.target, false)) cost += w.values[m.edge[h]];
    EXPECT_NEAR(cost, early.target_value, 1e-12);
  }
}

TEST(Weights, VaryAcrossEdges) {
  for (const HalfEdgeMap& m : plane_samples(5, 12, 20, 3000)) {
    WeightAssignment w = assign_weights(m, WeightSpec::parse("exp:1"), WeightScope::Primal, 1);
    std::set<double> distinct(w.values.begin(), w.values.end());
    EXPECT_EQ(static_cast<int>(distinct.size()), m.num_edges);
    // parsed maps carry no keys and fall back to edge ids
    HalfEdgeMap parsed = deserialize(serialize(m));
    WeightAssignment p = assign_weights(parsed, WeightSpec::parse("exp:1"), WeightScope::Primal, 1);
    std::set<double> distinct_parsed(p.values.begin(), p.values.end());
    EXPECT_EQ(static_cast<int>(distinct_parsed.size()), parsed.num_edges);
  }
}

TEST(Weights, KeysStableUnderRegrow) {
  LhptWindow w = sample_lhpt(5, 6, 13);
  HalfPlaneWindow wide = regrow(w, 3, 4, w.fill);
  WeightSpec spec = WeightSpec::parse("exp:1");
  WeightAssignment a = assign_weights(w.map, spec, WeightScope::Primal, 9);
  WeightAssignment b = assign_weights(wide.map, spec, WeightScope::Primal, 9);
  std::map<std::uint64_t, double> by_key;
  for (int e = 0; e < wide.map.num_edges; ++e) by_key[wide.map.edge_key[e]] = b.values[e];
  std::set<int> right;
  for (He h : w.right_boundary) right.insert(w.map.edge[h]);
  int shared = 0;
  for (int e = 0; e < w.map.num_edges; ++e) {
    if (right.count(e)) continue;  // right lateral keys depend on the width
    auto it = by_key.find(w.map.edge_key[e]);
    ASSERT_NE(it, by_key.end());
    EXPECT_EQ(it->second, a.values[e]);
    ++shared;
  }
  EXPECT_GT(shared, 0);
}

TEST(WindowDistance, GraphDistanceIsDepth) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int r : {1, 4, 9}) {
      LhptWindow w = sample_lhpt(r, std::max<std::int64_t>(8, r * r / 2), seed);
      WindowDistance d = certified_window_distance(w, Metric::Graph, r, WeightSpec::parse("const:1"), 0, 12);
      EXPECT_TRUE(d.certified);
      EXPECT_EQ(d.value, r) << seed << "," << r;
    }
  }
}

TEST(WindowDistance, DualAtLeastTwicePerRow) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int r = 6;
    LhptWindow w = sample_lhpt(r + 1, 18, seed);
    WindowDistance d = certified_window_distance(w, Metric::Dual, r, WeightSpec::parse("const:1"), 0, 12);
    ASSERT_TRUE(d.certified);
    EXPECT_GE(d.value, 2 * r) << seed;
  }
}

TEST(WindowDistance, ConstantFppMatchesGraph) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    LhptWindow w = sample_lhpt(6, 18, seed);
    WindowDistance d = certified_window_distance(w, Metric::Fpp, 6, WeightSpec::parse("const:0.75"), 3, 12);
    ASSERT_TRUE(d.certified);
    EXPECT_DOUBLE_EQ(d.value, 0.75 * 6);
  }
}

// The certificate must give the distance an unbounded search would find: compare with a
// much wider eager window of the same sample.
TEST(WindowDistance, CertifiedValueMatchesWideWindow) {
  WeightSpec spec = WeightSpec::parse("exp:1");
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const int r = 6;
    LhptWindow narrow = sample_lhpt(r, 8, seed);
    WindowDistance d = certified_window_distance(narrow, Metric::Fpp, r, spec, 21, 12);
    ASSERT_TRUE(d.certified);

    LhptWindow wide = sample_lhpt(r, 8 + 200, seed);
    WeightAssignment w = assign_weights(wide.map, spec, WeightScope::Primal, 21);
    std::vector<char> bottom(wide.map.num_vertices, 0);
    for (int v : wide.generation(r).vertices) bottom[v] = 1;
    SearchOptions opt;
    opt.targets = &bottom;
    DistanceResult full = fpp_distance(wide.map, w, {wide.origin_vertex(0)}, opt);
    EXPECT_NEAR(d.value, full.target_value, 1e-12) << seed;
  }
}

// After reveal_around(v) the star of v never changes again.
TEST(LazySearch, RevealedStarsAreFinal) {
  auto star = [](const LazyMap& lm, int v) {
    std::multiset<std::pair<int, std::uint64_t>> s;
    const He start = lm.vertex_rep(v);
    He h = start;
    do {
      s.insert({lm.dest(h), lm.key(h)});
      h = lm.next(lm.twin(h));
    } while (h != start);
    return s;
  };
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    LhptWindow w = sample_lhpt(4, 8, seed, kDefaultVertexBudget, FillPolicy{true, -1});
    LazyMap lm(HalfEdgeMap(w.map), holes_of(w), kDefaultVertexBudget);
    std::map<int, std::multiset<std::pair<int, std::uint64_t>>> seen;
    for (int v = 0; v < lm.num_vertices(); v += 3) {
      lm.reveal_around(v);
      seen[v] = star(lm, v);
    }
    lm.reveal_all();
    for (const auto& [v, s] : seen) EXPECT_EQ(star(lm, v), s) << "seed " << seed << " vertex " << v;
  }
}

TEST(LazySearch, AgreesWithFullyRevealedMap) {
  WeightSpec spec = WeightSpec::parse("exp:1");
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    LhptWindow w = sample_lhpt(4, 8, seed, kDefaultVertexBudget, FillPolicy{true, -1});
    const int source = w.origin_vertex(0);
    std::vector<int> targets = w.generation(4).vertices;
    LazyMap lm(HalfEdgeMap(w.map), holes_of(w), kDefaultVertexBudget);
    std::vector<double> lazy = lazy_vertex_distances(lm, source, targets, spec, 5);
    lm.reveal_all();
    std::vector<int> id;
    HalfEdgeMap full = lm.snapshot(&id);
    ASSERT_TRUE(validate(full).ok);
    DistanceResult d = fpp_distance(full, assign_weights(full, spec, WeightScope::Primal, 5), {id[source]});
    ASSERT_EQ(lazy.size(), targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
      EXPECT_NEAR(lazy[k], d.values[id[targets[k]]], 1e-12) << seed;
      ++compared;
    }
  }
  EXPECT_GT(compared, 20);
}

TEST(DownwardPath, WalksToTheBaseOnEagerWindows) {
  int complete = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    LhptWindow w = sample_lhpt(6, 40, seed);
    const int top = w.level_of_generation(0);
    const int start_face = w.origin_face(0);
    ASSERT_GE(start_face, 0);
    const std::size_t k = w.strata.face_index[start_face];
    DownwardPath p = downward_path(w.map, w.strata, top, k, 1);
    if (!p.complete) continue;  // left the window sideways
    ++complete;
    ASSERT_EQ(p.faces.front(), start_face);
    ASSERT_EQ(p.level_faces.size(), static_cast<std::size_t>(top));
    for (int i = 0; i < top; ++i) EXPECT_EQ(w.strata.face_level[p.level_faces[i]], top - i);
    ASSERT_EQ(p.faces.size(), p.crossed.size() + 1);
    for (std::size_t i = 0; i < p.crossed.size(); ++i) {
      EXPECT_EQ(w.map.face[p.crossed[i]], p.faces[i]);
      EXPECT_EQ(w.map.face[w.map.twin[p.crossed[i]]], p.faces[i + 1]);
    }
    DistanceResult d = dual_distance(w.map, {start_face});
    EXPECT_GE(static_cast<double>(p.length()), d.values[p.faces.back()]);
    EXPECT_GE(p.length(), static_cast<std::size_t>(2 * (top - 1)));
  }
  EXPECT_GE(complete, 5);
}

TEST(DownwardPath, LazyWalkMatchesEagerStructure) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    LhptWindow w = sample_lhpt(5, 30, seed, kDefaultVertexBudget, FillPolicy{true, -1});
    const int top = w.level_of_generation(0);
    const int start_face = w.origin_face(0);
    ASSERT_GE(start_face, 0);
    const std::size_t k = w.strata.face_index[start_face];
    LazyMap lm(HalfEdgeMap(w.map), holes_of(w), kDefaultVertexBudget);
    DownwardPath p = downward_path(lm, w.strata, top, k, 1);
    if (!p.complete) continue;
    ASSERT_EQ(p.faces.size(), p.crossed.size() + 1);
    for (std::size_t i = 0; i < p.crossed.size(); ++i) {
      EXPECT_EQ(lm.face(p.crossed[i]), p.faces[i]);
      EXPECT_EQ(lm.face(lm.twin(p.crossed[i])), p.faces[i + 1]);
      EXPECT_FALSE(lm.is_hole(p.faces[i + 1]));
    }
    EXPECT_GE(p.length(), static_cast<std::size_t>(2 * (top - 1)));
  }
}
