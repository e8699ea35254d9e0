#include "trifpp/boltzmann.hpp"

#include "trifpp/exact_laws.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace trifpp {

namespace {

// Z(k+1) Z(p-k) / Z(p) in scaled form.
inline double split_prob(const LawTables& t, std::int64_t p, std::int64_t k) {
  return 12.0 * t.z_scaled(k + 1) * t.z_scaled(p - k) / t.z_scaled(p);
}

inline double new_vertex_prob(const LawTables& t, std::int64_t p) {
  return t.z_scaled(p + 1) / (kSqrt3 * t.z_scaled(p));
}

using Step = PeelOutcome;

// Draws the peeling outcome of a p-gon from u in (0, 1); k is the split index.
Step draw_step(const LawTables& t, std::int64_t p, double u, std::int64_t& k) {
  if (p == 2) {
    double g = 1.0 / (3.0 * kSqrt3 / 4.0);
    if (u < g) return Step::Glue;
    u -= g;
  }
  double pn = new_vertex_prob(t, p);
  if (u < pn) return Step::NewVertex;
  u -= pn;
  // Walk the split indices from both ends: k and p-1-k are equally likely.
  std::int64_t last = 0;
  for (std::int64_t m = 0; 2 * m <= p - 1; ++m) {
    double q = split_prob(t, p, m);
    last = m;
    if (u < q) {
      k = m;
      return Step::Split;
    }
    u -= q;
    if (2 * m == p - 1) break;
    if (u < q) {
      k = p - 1 - m;
      return Step::Split;
    }
    u -= q;
  }
  k = last;  // rounding residue
  return Step::Split;
}

}  // namespace

PeelDraw draw_peel(std::int64_t p, double u) {
  if (p < 1) throw std::invalid_argument("draw_peel: p must be positive");
  PeelDraw d;
  d.outcome = draw_step(LawTables::instance(), p, u, d.split);
  return d;
}

double PeelLaw::total() const {
  double s = prob_new_vertex + prob_edge_glue;
  for (double x : split_probs) s += x;
  return s;
}

PeelLaw peel_law(int p) {
  if (p < 1) throw std::invalid_argument("peel_law: p must be positive");
  const LawTables& t = LawTables::instance();
  PeelLaw law;
  law.p = p;
  law.prob_new_vertex = new_vertex_prob(t, p);
  law.split_probs.resize(p);
  for (int k = 0; k < p; ++k) law.split_probs[k] = split_prob(t, p, k);
  law.prob_edge_glue = p == 2 ? 1.0 / z_boltzmann(2) : 0.0;
  return law;
}

FillStats fill_hole(MapBuilder& b, std::deque<He> hole, Rng& rng, std::uint64_t key_base,
                    std::int64_t size_cap) {
  const LawTables& t = LawTables::instance();
  FillStats st;
  std::uint64_t counter = 0;
  auto new_edge = [&]() { return b.add_edge(mix64(key_base + (++counter))); };
  std::vector<std::deque<He>> stack;
  stack.push_back(std::move(hole));
  while (!stack.empty()) {
    std::deque<He> d = std::move(stack.back());
    stack.pop_back();
    const std::int64_t p = static_cast<std::int64_t>(d.size());
    std::int64_t k = 0;
    Step s = draw_step(t, p, uniform_open(rng), k);
    ++st.peel_steps;
    if (s == Step::Glue) {
      b.glue(d[0], d[1]);
      continue;
    }
    const He b0 = d.front();
    d.pop_front();
    auto [a1, a1t] = new_edge();  // root vertex -> third vertex
    auto [a2, a2t] = new_edge();  // third vertex -> origin of b0
    b.make_face({b0, a1, a2});
    if (s == Step::NewVertex) {
      ++st.new_vertices;
      d.push_front(a1t);
      d.push_back(a2t);
      stack.push_back(std::move(d));
      if (size_cap >= 0 && st.new_vertices > size_cap) {
        st.truncated = true;
        return st;
      }
      continue;
    }
    // d now holds b1..b_{p-1}; hole A takes b1..bk, hole B takes b_{k+1}..b_{p-1}.
    std::deque<He> other;
    const std::int64_t tail = p - 1 - k;
    if (k <= tail) {
      for (std::int64_t i = 0; i < k; ++i) {
        other.push_back(d.front());
        d.pop_front();
      }
      other.push_front(a1t);
      d.push_front(a2t);
      stack.push_back(std::move(d));
      stack.push_back(std::move(other));
    } else {
      for (std::int64_t i = 0; i < tail; ++i) {
        other.push_front(d.back());
        d.pop_back();
      }
      other.push_front(a2t);
      d.push_front(a1t);
      stack.push_back(std::move(other));
      stack.push_back(std::move(d));
    }
  }
  return st;
}

BoltzmannSample sample_boltzmann_pgon(int p, Rng& rng, std::int64_t size_cap) {
  MapBuilder b;
  std::vector<He> inner = add_polygon(b, p);
  std::deque<He> hole;
  hole.push_back(inner[p - 1]);
  for (int i = 0; i + 1 < p; ++i) hole.push_back(inner[i]);
  FillStats st = fill_hole(b, std::move(hole), rng, 0, size_cap);
  BoltzmannSample out;
  out.inner_vertices = st.new_vertices;
  out.truncated = st.truncated;
  if (st.truncated) return out;
  out.map = b.freeze();
  out.root_degree = out.map.degree(out.map.origin[out.map.root]);
  return out;
}

Eigen::Matrix3d root_degree_matrix() {
  const double z1 = z_boltzmann(1), z2 = z_boltzmann(2), z3 = z_boltzmann(3);
  Eigen::Matrix3d m;
  m << 2 * z1, z1, z1,
       z2 / (kRho * z1), 2 * z1, z2 / 12.0,
       0.0, z3 / (kRho * z2), 1.0 - z2 / 12.0;
  return m;
}

double root_degree_spectral_radius() {
  const Eigen::Matrix3d m = root_degree_matrix();
  Eigen::Vector3d v = Eigen::Vector3d::Ones();
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::Vector3d w = m * v;
    double next = w.norm() / v.norm();
    v = w / w.norm();
    if (std::abs(next - lambda) < 1e-15) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace trifpp
