#pragma once

#include "trifpp/planar_map.hpp"
#include "trifpp/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <deque>
#include <vector>

namespace trifpp {

// One-step law of peeling the edge of a Boltzmann p-gon whose terminal vertex is the root vertex.
struct PeelLaw {
  int p = 1;
  double prob_new_vertex = 0;
  std::vector<double> split_probs;  // third vertex k edges away from the root vertex
  double prob_edge_glue = 0;        // p = 2 only
  double total() const;
};

PeelLaw peel_law(int p);

enum class PeelOutcome { NewVertex, Split, Glue };
struct PeelDraw {
  PeelOutcome outcome = PeelOutcome::NewVertex;
  std::int64_t split = 0;  // third vertex is the end of the split-th edge after the peeled one
};
// One peeling step of a p-gon driven by a single uniform u in (0, 1).
PeelDraw draw_peel(std::int64_t p, double u);

struct FillStats {
  std::int64_t new_vertices = 0;
  std::int64_t peel_steps = 0;
  bool truncated = false;
};

// Fills a hole with an independent Boltzmann triangulation. `hole` lists the hole's
// half-edges in face order; hole.front() is peeled first and its terminal vertex is
// the root vertex. Stops early (truncated) once new_vertices exceeds size_cap >= 0.
FillStats fill_hole(MapBuilder& b, std::deque<He> hole, Rng& rng, std::uint64_t key_base = 0,
                    std::int64_t size_cap = -1);

struct BoltzmannSample {
  HalfEdgeMap map;  // empty when truncated
  std::int64_t inner_vertices = 0;
  int root_degree = 0;
  bool truncated = false;
};

BoltzmannSample sample_boltzmann_pgon(int p, Rng& rng, std::int64_t size_cap = -1);

// Mean offspring matrix of the three-type branching process dominating the root degree.
Eigen::Matrix3d root_degree_matrix();
double root_degree_spectral_radius();

}  // namespace trifpp
