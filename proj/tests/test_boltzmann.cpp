#include "trifpp/boltzmann.hpp"
#include "trifpp/exact_laws.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>

using namespace trifpp;

TEST(PeelLaw, OneGon) {
  PeelLaw l = peel_law(1);
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(l.prob_new_vertex, (2 + s3) / 4, 1e-14);
  ASSERT_EQ(l.split_probs.size(), 1u);
  EXPECT_NEAR(l.split_probs[0], (2 - s3) / 4, 1e-14);
  EXPECT_EQ(l.prob_edge_glue, 0.0);
  EXPECT_NEAR(l.total(), 1.0, 1e-14);
  EXPECT_NEAR(l.prob_new_vertex, 1 - z_boltzmann(1), 1e-14);
}

TEST(PeelLaw, TwoGon) {
  PeelLaw l = peel_law(2);
  EXPECT_NEAR(l.prob_new_vertex, std::sqrt(3.0) / 18, 1e-14);
  EXPECT_NEAR(l.split_probs[0], z_boltzmann(1), 1e-14);
  EXPECT_NEAR(l.split_probs[1], z_boltzmann(1), 1e-14);
  EXPECT_NEAR(l.prob_edge_glue, 1 / z_boltzmann(2), 1e-14);
  EXPECT_NEAR(l.prob_edge_glue, 0.76980, 1e-5);
  EXPECT_NEAR(l.total(), 1.0, 1e-14);
}

TEST(PeelLaw, ThreeGon) {
  PeelLaw l = peel_law(3);
  EXPECT_NEAR(l.prob_new_vertex, 0.21650, 1e-5);
  EXPECT_NEAR(l.split_probs[0], z_boltzmann(1), 1e-14);
  EXPECT_NEAR(l.split_probs[1], z_boltzmann(2) * z_boltzmann(2) / z_boltzmann(3), 1e-14);
  EXPECT_NEAR(l.split_probs[1], 0.64952, 1e-5);
  EXPECT_NEAR(l.split_probs[2], z_boltzmann(1), 1e-14);
  EXPECT_NEAR(l.total(), 1.0, 1e-14);
}

TEST(PeelLaw, NormalizedUpTo10000) {
  for (int p = 1; p <= 10000; ++p) ASSERT_NEAR(peel_law(p).total(), 1.0, 1e-12) << p;
}

TEST(PeelLaw, SplitsSymmetric) {
  for (int p : {4, 7, 50, 501}) {
    PeelLaw l = peel_law(p);
    for (int k = 0; k < p; ++k) EXPECT_NEAR(l.split_probs[k], l.split_probs[p - 1 - k], 1e-15) << p << "," << k;
  }
}

TEST(DrawPeel, InverseCdfMatchesLaw) {
  // Lebesgue measure of each outcome on a fine u grid
  const int grid = 2'000'000;
  for (int p : {1, 2, 3, 6, 11}) {
    PeelLaw l = peel_law(p);
    double nv = 0, glue = 0;
    std::vector<double> split(p, 0.0);
    for (int i = 0; i < grid; ++i) {
      PeelDraw d = draw_peel(p, (i + 0.5) / grid);
      if (d.outcome == PeelOutcome::NewVertex) nv += 1;
      else if (d.outcome == PeelOutcome::Glue) glue += 1;
      else split[d.split] += 1;
    }
    const double tol = 2.0 / grid;
    EXPECT_NEAR(nv / grid, l.prob_new_vertex, tol) << p;
    EXPECT_NEAR(glue / grid, l.prob_edge_glue, tol) << p;
    for (int k = 0; k < p; ++k) EXPECT_NEAR(split[k] / grid, l.split_probs[k], tol) << p << "," << k;
  }
}

TEST(Sampler, OutputsValidate) {
  Rng rng(31);
  for (int p : {1, 2, 3, 5, 10}) {
    for (int i = 0; i < 400; ++i) {
      BoltzmannSample s = sample_boltzmann_pgon(p, rng, 50000);
      if (s.truncated) continue;
      ValidationReport r = validate(s.map);
      ASSERT_TRUE(r.ok) << "p=" << p << " " << r.violations[0];
      EXPECT_EQ(r.euler(), 2);
      EXPECT_EQ(s.map.num_vertices, p + s.inner_vertices);
      const int bottom = s.map.marked_face("bottom");
      ASSERT_GE(bottom, 0);
      EXPECT_EQ(s.map.face_degree(bottom), p);
      for (int f = 0; f < s.map.num_faces; ++f)
        if (f != bottom) EXPECT_EQ(s.map.face_degree(f), 3);
      EXPECT_EQ(s.root_degree, s.map.degree(s.map.origin[s.map.root]));
    }
  }
}

TEST(Sampler, SizeCapTruncates) {
  Rng rng(5);
  int truncated = 0;
  for (int i = 0; i < 2000; ++i) {
    BoltzmannSample s = sample_boltzmann_pgon(1, rng, 3);
    if (s.truncated) {
      ++truncated;
      EXPECT_GT(s.inner_vertices, 3);
      EXPECT_EQ(s.map.size(), 0u);
    } else {
      EXPECT_LE(s.inner_vertices, 3);
    }
  }
  EXPECT_GT(truncated, 0);
}

TEST(Sampler, Reproducible) {
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) {
    BoltzmannSample x = sample_boltzmann_pgon(4, a), y = sample_boltzmann_pgon(4, b);
    EXPECT_EQ(serialize(x.map), serialize(y.map));
  }
}

// Frequencies of n inner vertices against rho^-n #T(n,p) / Z(p).
TEST(Sampler, LawMatchSmallSizes) {
  const int samples = 1'000'000;
  for (int p : {1, 2, 3}) {
    Rng rng(1000 + p);
    std::vector<int> count(5, 0);
    int edge_glue = 0;
    for (int i = 0; i < samples; ++i) {
      BoltzmannSample s = sample_boltzmann_pgon(p, rng, 4);
      if (s.truncated) continue;
      ++count[s.inner_vertices];
      if (p == 2 && s.inner_vertices == 0 && s.map.num_edges == 1) ++edge_glue;
    }
    for (int n = 0; n <= 4; ++n) {
      const double want = count_tri(n, p).value.convert_to<double>() * std::pow(kRho, -n) / z_boltzmann(p);
      const double se = std::sqrt(want * (1 - want) / samples);
      EXPECT_NEAR(count[n] / double(samples), want, 3 * se + 1e-12) << "p=" << p << " n=" << n;
    }
    if (p == 2) EXPECT_NEAR(edge_glue / double(samples), 0.76980, 0.002);
    if (p == 1) {
      EXPECT_NEAR(count[1] / double(samples), 0.71824, 0.003);
      EXPECT_NEAR(count[2] / double(samples), 0.13823, 0.003);
      EXPECT_NEAR(count[3] / double(samples), 0.05333, 0.003);
    }
  }
}

TEST(RootDegreeMatrix, Entries) {
  Eigen::Matrix3d m = root_degree_matrix();
  EXPECT_NEAR(m(0, 0), 2 * z_boltzmann(1), 1e-15);
  EXPECT_NEAR(m(0, 1), z_boltzmann(1), 1e-15);
  EXPECT_NEAR(m(0, 2), z_boltzmann(1), 1e-15);
  EXPECT_TRUE((m.array() >= 0).all());
}

TEST(RootDegreeMatrix, SpectralRadius) {
  EXPECT_NEAR(root_degree_spectral_radius(), 0.917457, 1e-5);
  // independent: largest eigenvalue modulus from Eigen's solver
  Eigen::EigenSolver<Eigen::Matrix3d> es(root_degree_matrix());
  double best = 0;
  for (int i = 0; i < 3; ++i) best = std::max(best, std::abs(es.eigenvalues()[i]));
  EXPECT_NEAR(root_degree_spectral_radius(), best, 1e-12);
}

TEST(FillHole, KeysMakeFillingsReproducible) {
  auto fill = [](std::uint64_t seed) {
    MapBuilder b;
    std::vector<He> inner = add_polygon(b, 5);
    std::deque<He> hole(inner.begin(), inner.end());
    Rng rng(seed);
    FillStats st = fill_hole(b, hole, rng, 1234);
    HalfEdgeMap m = b.freeze();
    EXPECT_TRUE(validate(m).ok);
    EXPECT_EQ(m.num_vertices, 5 + st.new_vertices);
    return m;
  };
  HalfEdgeMap a = fill(3), b = fill(3);
  EXPECT_EQ(serialize(a), serialize(b));
  EXPECT_EQ(a.edge_key, b.edge_key);
}
