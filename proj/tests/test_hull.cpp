#include "trifpp/exact_laws.hpp"
#include "trifpp/experiments.hpp"
#include "trifpp/hull.hpp"
#include "trifpp/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace trifpp;

namespace {

double binomial_se(double p, int n) { return std::sqrt(p * (1 - p) / n); }

void expect_hull_structure(const HullMap& h) {
  ValidationReport r = validate(h.map);
  ASSERT_TRUE(r.ok) << r.violations[0];
  EXPECT_EQ(r.euler(), 2);
  const int R = h.radius();
  ASSERT_EQ(static_cast<int>(h.strata.levels.size()), R + 1);
  for (int j = 0; j <= R; ++j) EXPECT_EQ(static_cast<std::int64_t>(h.strata.levels[j].edges()), h.skeleton.perimeters[j]);
  for (int f = 0; f < h.map.num_faces; ++f) {
    if (!h.map.is_marked(f)) EXPECT_EQ(h.map.face_degree(f), 3);
  }
  // one downward triangle per cycle edge, apex one cycle down
  for (int j = 1; j <= R; ++j) {
    for (He e : h.strata.levels[j].west) {
      const int f = h.map.face[e];
      ASSERT_EQ(h.map.face_degree(f), 3);
      EXPECT_EQ(h.strata.vertex_level[h.map.dest(h.map.next[e])], j - 1);
    }
  }
  if (h.open_slots.empty()) {
    DistanceResult d = bfs_distance(h.map, {h.root_vertex()});
    for (int j = 0; j <= R; ++j)
      for (int v : h.strata.levels[j].vertices) EXPECT_EQ(d.values[v], j) << "cycle " << j;
  }
}

}  // namespace

TEST(SampleLayer, OneGonExamples) {
  const int n = 1'000'000;
  Rng rng(3);
  int q1 = 0, q2 = 0;
  for (int i = 0; i < n; ++i) {
    LayerSkeleton l = sample_layer(1, rng);
    ASSERT_EQ(std::accumulate(l.children.begin(), l.children.end(), std::int64_t{0}), 1);
    ASSERT_EQ(static_cast<std::int64_t>(l.children.size()), l.q_out);
    ASSERT_EQ(l.children[0], 1);
    ASSERT_EQ(l.distinguished, 0);
    if (l.q_out == 1) ++q1;
    if (l.q_out == 2) ++q2;
  }
  EXPECT_NEAR(q1 / double(n), 1.0 / 8, 3 * binomial_se(1.0 / 8, n));
  EXPECT_NEAR(q2 / double(n), 9.0 / 64, 3 * binomial_se(9.0 / 64, n));
  EXPECT_NEAR(perimeter_pmf(1, 1), 1.0 / 8, 1e-15);
}

TEST(SampleLayer, OutDegreeLawMatchesConvolution) {
  // P(q) = h(q) Q_q(p) / h(p)
  const LawTables& T = LawTables::instance();
  for (int p : {2, 3, 5, 9}) {
    const int n = 200000;
    Rng rng(40 + p);
    std::map<std::int64_t, int> count;
    for (int i = 0; i < n; ++i) ++count[sample_layer(p, rng).q_out];
    for (int q = 1; q <= 8; ++q) {
      const double want = T.h(q) * T.theta_convolution(q, p)[p] / T.h(p);
      EXPECT_NEAR(count[q] / double(n), want, 4 * binomial_se(want, n) + 1e-9) << "p=" << p << " q=" << q;
    }
  }
}

TEST(SampleLayer, DistinguishedUniformInFirstTree) {
  Rng rng(8);
  std::map<std::pair<std::int64_t, std::int64_t>, int> count;
  std::map<std::int64_t, int> first;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    LayerSkeleton l = sample_layer(4, rng);
    ASSERT_GE(l.children[0], 1);
    ASSERT_LT(l.distinguished, l.children[0]);
    ++count[{l.children[0], l.distinguished}];
    ++first[l.children[0]];
  }
  for (auto [key, c] : count) {
    const int m = first[key.first];
    if (m < 2000) continue;
    const double want = 1.0 / key.first;
    EXPECT_NEAR(c / double(m), want, 4 * binomial_se(want, m)) << key.first << "," << key.second;
  }
}

TEST(SampleLayer, BudgetAndArguments) {
  Rng rng(1);
  EXPECT_THROW(sample_layer(0, rng), std::invalid_argument);
  EXPECT_THROW(sample_layer(400, rng, 0), AttemptBudgetExceeded);
  EXPECT_GT(default_layer_attempts(10000), default_layer_attempts(100));
}

TEST(HullPerimeter, FiniteRadiusMeanMatchesLaw) {
  // E[L_R] = 1 + 1.5 b (R+1)^2 with b = 1 - (R+1)^-2
  for (int R : {1, 2, 5, 40}) {
    double mean = 0, mass = 0;
    for (std::int64_t p = 1; p < 400LL * (R + 1) * (R + 1); ++p) {
      mean += p * perimeter_pmf(R, p);
      mass += perimeter_pmf(R, p);
    }
    const double r1 = R + 1.0;
    EXPECT_NEAR(mass, 1.0, 1e-9);
    EXPECT_NEAR(mean, 1 + 1.5 * (1 - 1 / (r1 * r1)) * r1 * r1, 1e-6 * mean) << R;
  }
}

TEST(HullPerimeter, InverseTransformMatchesPmf) {
  for (int R : {1, 2, 3}) {
    const int n = 200000;
    Rng rng(60 + R);
    std::map<std::int64_t, int> count;
    for (int i = 0; i < n; ++i) ++count[sample_hull_perimeter(R, rng)];
    for (int p = 1; p <= 12; ++p) {
      const double want = perimeter_pmf(R, p);
      EXPECT_NEAR(count[p] / double(n), want, 4 * binomial_se(want, n)) << "R=" << R << " p=" << p;
    }
  }
}

// Layered and forest skeletons against the exact perimeter law.
TEST(HullSkeleton, PerimeterChainMatchesPmf) {
  const int n = 100000;
  for (HullMethod method : {HullMethod::Layered, HullMethod::Forest}) {
    for (int R : {1, 2}) {
      std::vector<std::map<std::int64_t, int>> count(R + 1);
      for (int i = 0; i < n; ++i) {
        HullSkeleton sk = sample_hull_skeleton(R, derive_seed(500 + R, {i}), method);
        for (int r = 1; r <= R; ++r) ++count[r][sk.perimeters[r]];
      }
      for (int r = 1; r <= R; ++r) {
        // cells covering at least 99% of the mass
        double covered = 0;
        for (int p = 1; covered < 0.99; ++p) {
          const double want = perimeter_pmf(r, p);
          covered += want;
          EXPECT_NEAR(count[r][p] / double(n), want, 4 * binomial_se(want, n) + 1e-9)
              << (method == HullMethod::Layered ? "layered" : "forest") << " R=" << R << " r=" << r << " p=" << p;
        }
      }
    }
  }
}

TEST(HullSkeleton, ForestMarginalAtSmallerRadius) {
  // L_1 of a forest-sampled 3-hull has the law of L_1
  const int n = 100000;
  std::map<std::int64_t, int> count;
  for (int i = 0; i < n; ++i) ++count[sample_hull_skeleton(3, derive_seed(77, {i}), HullMethod::Forest).perimeters[1]];
  for (int p = 1; p <= 8; ++p) {
    const double want = perimeter_pmf(1, p);
    EXPECT_NEAR(count[p] / double(n), want, 4 * binomial_se(want, n)) << p;
  }
}

TEST(HullSkeleton, LayersFit) {
  for (HullMethod method : {HullMethod::Layered, HullMethod::Forest}) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      HullSkeleton sk = sample_hull_skeleton(6, seed, method);
      ASSERT_EQ(sk.radius(), 6);
      EXPECT_EQ(sk.perimeters[0], 1);
      for (int j = 1; j <= 6; ++j) {
        const LayerSkeleton& l = sk.layers[j - 1];
        EXPECT_EQ(l.p_in, sk.perimeters[j - 1]);
        EXPECT_EQ(l.q_out, sk.perimeters[j]);
        EXPECT_EQ(std::accumulate(l.children.begin(), l.children.end(), std::int64_t{0}), l.p_in);
        EXPECT_GE(l.children[0], 1);
        EXPECT_LT(l.distinguished, l.children[0]);
      }
    }
  }
}

TEST(HullSkeleton, LayeredIsPrefixConsistent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    HullSkeleton big = sample_hull_skeleton(8, seed);
    HullSkeleton small = sample_hull_skeleton(3, seed);
    for (int j = 0; j <= 3; ++j) EXPECT_EQ(big.perimeters[j], small.perimeters[j]);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(big.layers[j].children, small.layers[j].children);
  }
}

TEST(HullSkeleton, BudgetCarriesCompletedRadius) {
  bool thrown = false;
  for (std::uint64_t seed = 1; seed <= 20 && !thrown; ++seed) {
    try {
      sample_hull_skeleton(30, seed, HullMethod::Layered, 1);
    } catch (const AttemptBudgetExceeded& e) {
      thrown = true;
      EXPECT_GE(e.completed_radius, 0);
      EXPECT_LT(e.completed_radius, 30);
      // the layers before the failure are those of an unbounded run
      HullSkeleton full = sample_hull_skeleton(30, seed);
      HullSkeleton part = e.completed_radius > 0 ? sample_hull_skeleton(e.completed_radius, seed, HullMethod::Layered, 1)
                                                 : HullSkeleton{};
      for (int j = 0; j < e.completed_radius; ++j) EXPECT_EQ(part.layers[j].children, full.layers[j].children);
    }
  }
  EXPECT_TRUE(thrown);
}

TEST(HullPerimeter, TailDecays) {
  const int r = 10;
  std::vector<double> tail;
  for (int a = 0; a <= 6; ++a) {
    double t = 0;
    for (std::int64_t p = a * r * r + 1; p < 100 * r * r; ++p) t += perimeter_pmf(r, p);
    tail.push_back(t);
  }
  for (int a = 1; a <= 6; ++a) {
    EXPECT_LT(tail[a], tail[a - 1]);
    EXPECT_LT(tail[a], 10 * std::exp(-a / 5.0));
  }
}

TEST(RealizeHull, StructureAndDistances) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    HullMap h = sample_hull(5, seed);
    expect_hull_structure(h);
    EXPECT_EQ(h.map.label(h.map.face[h.map.twin[h.map.root]]), "bottom");
    EXPECT_GE(h.map.marked_face("top"), 0);
    EXPECT_EQ(h.perimeters().size(), 5u);
  }
}

TEST(RealizeHull, ForestSkeletonRealizes) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    HullOptions opt;
    opt.method = HullMethod::Forest;
    expect_hull_structure(sample_hull(4, seed, opt));
  }
}

TEST(RealizeHull, FanLayer) {
  // all children on the first outer edge
  HullSkeleton sk;
  sk.perimeters = {1, 4, 6};
  sk.layers.push_back(LayerSkeleton{1, 4, {1, 0, 0, 0}, 0});
  sk.layers.push_back(LayerSkeleton{4, 6, {4, 0, 0, 0, 0, 0}, 2});
  HullMap h = realize_hull(sk, 5);
  expect_hull_structure(h);
  EXPECT_EQ(h.strata.levels[2].edges(), 6u);
}

TEST(RealizeHull, MismatchRejected) {
  HullSkeleton sk;
  sk.perimeters = {1, 2};
  sk.layers.push_back(LayerSkeleton{2, 2, {1, 1}, 0});
  EXPECT_THROW(realize_hull(sk, 1), std::invalid_argument);
}

TEST(RealizeHull, PrefixGivesSmallerHull) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    HullSkeleton big = sample_hull_skeleton(6, seed);
    HullSkeleton prefix;
    prefix.perimeters.assign(big.perimeters.begin(), big.perimeters.begin() + 4);
    prefix.layers.assign(big.layers.begin(), big.layers.begin() + 3);
    EXPECT_EQ(serialize_hull(realize_hull(prefix, seed)), serialize_hull(sample_hull(3, seed)));
  }
}

TEST(PlaneHull, TriangulationWithoutMarksBelow) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    HullMap h = sample_hull(3, seed);
    HalfEdgeMap plane = plane_hull(h);
    ValidationReport r = validate(plane);
    ASSERT_TRUE(r.ok) << r.violations[0];
    EXPECT_EQ(plane.marks.size(), 1u);
    EXPECT_EQ(plane.marks[0].second, "top");
  }
}

TEST(LazyHull, CycleDistancesExact) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    HullMap h = sample_lazy_hull(10, seed);
    EXPECT_FALSE(h.open_slots.empty());
    expect_hull_structure(h);
    EXPECT_EQ(hull_distance_violations(h), 0) << seed;
  }
}

TEST(LazyHull, SameSkeletonAsEager) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    HullMap lazy = sample_lazy_hull(6, seed);
    HullMap eager = sample_hull(6, seed);
    EXPECT_EQ(lazy.perimeters(), eager.perimeters());
  }
}
