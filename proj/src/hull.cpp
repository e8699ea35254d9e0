#include "trifpp/hull.hpp"

#include "trifpp/boltzmann.hpp"
#include "trifpp/exact_laws.hpp"
#include "trifpp/theta_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trifpp {

namespace {

constexpr std::uint64_t kHullKeySalt = 0x3c94e1d07b5a2f68ULL;

std::uint64_t hull_key(int role, int layer, std::int64_t idx) {
  return derive_seed(kHullKeySalt, {role, layer, idx});
}

std::int64_t uniform_below(Rng& rng, std::int64_t n) {
  auto k = static_cast<std::int64_t>(uniform_open(rng) * static_cast<double>(n));
  return std::min(k, n - 1);
}

// Rotates `children` so that the tree holding inner position t comes first.
LayerSkeleton pointed_layer(std::int64_t p, std::vector<std::int64_t> children, std::int64_t t) {
  std::size_t i = 0;
  std::int64_t start = 0;
  while (start + children[i] <= t) start += children[i++];
  std::rotate(children.begin(), children.begin() + static_cast<std::ptrdiff_t>(i), children.end());
  LayerSkeleton sk;
  sk.p_in = p;
  sk.q_out = static_cast<std::int64_t>(children.size());
  sk.children = std::move(children);
  sk.distinguished = t - start;
  return sk;
}

HullSkeleton forest_skeleton(int R, std::uint64_t seed) {
  Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Layer), -1});
  const std::int64_t q = sample_hull_perimeter(R, rng);
  // Generation 0 is the outer cycle. The single vertex of generation R descends from
  // vertex 0 through the spine; every other subtree dies out before generation R.
  std::vector<std::vector<std::int64_t>> kids(R);
  std::vector<std::int64_t> spine(R + 1, 0), rank(R, 0);
  std::int64_t size = q;
  for (int g = 0; g < R; ++g) {
    const double x = 1.0 - 1.0 / (static_cast<double>(R - g) * (R - g));
    auto& row = kids[g];
    row.resize(size);
    std::int64_t before = 0;
    for (std::int64_t i = 0; i < size; ++i) {
      std::int64_t k;
      if (i == spine[g]) {
        do k = sample_theta_sizebiased(rng);
        while (k > 1 && uniform_open(rng) >= std::pow(x, static_cast<double>(k - 1)));
        rank[g] = uniform_below(rng, k);
        spine[g + 1] = before + rank[g];
      } else {
        do k = sample_theta(rng);
        while (k > 0 && uniform_open(rng) >= std::pow(x, static_cast<double>(k)));
      }
      row[i] = k;
      before += k;
    }
    size = before;
  }
  if (size != 1) throw std::logic_error("forest_skeleton: generation R must be a single vertex");

  HullSkeleton sk;
  sk.perimeters.assign(R + 1, 1);
  sk.layers.resize(R);
  for (int j = 1; j <= R; ++j) {
    const int g = R - j;
    LayerSkeleton& layer = sk.layers[j - 1];
    layer.children = kids[g];
    std::rotate(layer.children.begin(), layer.children.begin() + spine[g], layer.children.end());
    layer.q_out = static_cast<std::int64_t>(kids[g].size());
    layer.p_in = 0;
    for (std::int64_t c : kids[g]) layer.p_in += c;
    layer.distinguished = rank[g];
    sk.perimeters[j] = layer.q_out;
  }
  return sk;
}

}  // namespace

std::int64_t default_layer_attempts(std::int64_t p) {
  return 1000 + static_cast<std::int64_t>(200.0 * std::sqrt(static_cast<double>(p)));
}

LayerSkeleton sample_layer(std::int64_t p, Rng& rng, std::int64_t max_attempts) {
  if (p < 1) throw std::invalid_argument("sample_layer: p must be positive");
  if (max_attempts < 0) max_attempts = default_layer_attempts(p);
  const LawTables& T = LawTables::instance();
  std::vector<std::int64_t> c;
  for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    // The prefix before the first draw that pushes the sum past p has law
    // prop. to prod theta on {sum = p}; 2h(q) <= 1 tilts it by h(q).
    c.clear();
    std::int64_t sum = 0;
    for (;;) {
      std::int64_t x = sample_theta(rng);
      if (x > p - sum) break;
      c.push_back(x);
      sum += x;
    }
    if (sum != p) continue;
    if (uniform_open(rng) >= 2.0 * T.h(static_cast<std::int64_t>(c.size()))) continue;
    return pointed_layer(p, c, uniform_below(rng, p));
  }
  throw AttemptBudgetExceeded("sample_layer: attempt budget exceeded for p = " + std::to_string(p), 0);
}

std::int64_t sample_hull_perimeter(int R, Rng& rng) {
  if (R < 1) throw std::invalid_argument("sample_hull_perimeter: R must be positive");
  const double r1 = R + 1.0;
  const double b = 1.0 - 1.0 / (r1 * r1);
  // P(L_R = q) = 2 q h(q) (R+1)^-3 b^(q-1); the q = 1 term is (R+1)^-3.
  double term = 1.0 / (r1 * r1 * r1);
  double cum = term;
  const double u = uniform_open(rng);
  std::int64_t q = 1;
  while (cum < u) {
    const double qd = static_cast<double>(q);
    term *= (qd + 1.0) / qd * (2.0 * qd + 1.0) / (2.0 * qd + 2.0) * b;
    ++q;
    cum += term;
    if (term < 1e-18 * cum && qd > r1 * r1) break;  // rounding left u above the total mass
  }
  return q;
}

HullSkeleton sample_hull_skeleton(int R, std::uint64_t seed, HullMethod method, std::int64_t max_attempts) {
  if (R < 1) throw std::invalid_argument("sample_hull_skeleton: R must be positive");
  if (method == HullMethod::Forest) return forest_skeleton(R, seed);
  HullSkeleton sk;
  sk.perimeters.push_back(1);
  for (int j = 1; j <= R; ++j) {
    Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Layer), j});
    try {
      sk.layers.push_back(sample_layer(sk.perimeters.back(), rng, max_attempts));
    } catch (const AttemptBudgetExceeded& e) {
      throw AttemptBudgetExceeded(e.what(), j - 1);
    }
    sk.perimeters.push_back(sk.layers.back().q_out);
  }
  return sk;
}

std::vector<std::int64_t> HullMap::perimeters() const {
  return {skeleton.perimeters.begin() + 1, skeleton.perimeters.end()};
}

std::uint64_t HullMap::slot_key(const HullSlotId& id) const {
  return derive_seed(seed, {static_cast<std::int64_t>(Role::Hull), id.layer, id.idx, 1});
}

HullMap realize_hull(const HullSkeleton& sk, std::uint64_t seed, std::int64_t vertex_budget,
                     const FillPolicy& policy) {
  HullMap hull;
  hull.skeleton = sk;
  hull.seed = seed;
  hull.fill = policy;
  std::int64_t remaining = vertex_budget;
  for (std::int64_t L : sk.perimeters) remaining -= L;
  if (remaining < 0) throw WindowBudgetExceeded("hull cycles exceed the vertex budget");

  MapBuilder b;
  auto [e, et] = b.add_edge(hull_key(kRowEdge, 0, 0));
  b.make_face({et});
  b.mark(et, "bottom");
  b.set_root(e);
  std::vector<RowRecord> records{RowRecord{{et}, kNoHe, true}};
  std::vector<He> cur_east{e};
  std::vector<He> open_reps;

  for (int j = 1; j <= sk.radius(); ++j) {
    const LayerSkeleton& layer = sk.layers[j - 1];
    const auto p = static_cast<std::int64_t>(cur_east.size());
    if (layer.p_in != p) throw std::invalid_argument("realize_hull: layer does not fit the inner cycle");
    std::vector<He> east(layer.q_out), west(layer.q_out);
    for (std::int64_t i = 0; i < layer.q_out; ++i) std::tie(east[i], west[i]) = b.add_edge(hull_key(kRowEdge, j, i));
    EdgeKeyFn key = [&](std::size_t i, int role) { return hull_key(role, j, static_cast<std::int64_t>(i)); };
    SlotFillFn fill = [&](std::deque<He>& hole, std::size_t i) {
      const auto idx = static_cast<std::int64_t>(i);
      if (policy.lazy && layer.children[i] > policy.eager_max_children) {
        b.make_face(std::vector<He>(hole.begin(), hole.end()));
        b.mark(hole.front(), "slot");
        open_reps.push_back(hole.front());
        hull.open_slots.push_back(HullSlotId{j, idx});
        return;
      }
      Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Hull), j, idx});
      FillStats st = fill_hole(b, std::move(hole), rng, hull_key(kSlot, j, idx), remaining);
      if (st.truncated) throw WindowBudgetExceeded("hull slot fillings exceed the vertex budget");
      remaining -= st.new_vertices;
    };
    const std::int64_t offset = (p - layer.distinguished % p) % p;
    realize_strip(b, west, cur_east, layer.children, true, offset, key, fill);
    records.push_back(RowRecord{west, kNoHe, true});
    cur_east = std::move(east);
  }
  b.make_face(cur_east);
  b.mark(cur_east[0], "top");

  std::vector<He> remap;
  hull.map = std::move(b).freeze(&remap);
  hull.strata = Strata::build(hull.map, records, remap);
  for (He h : open_reps) hull.open_slot_faces.push_back(hull.map.face[remap[h]]);
  return hull;
}

HullMap sample_hull(int R, std::uint64_t seed, const HullOptions& opt) {
  HullSkeleton sk = sample_hull_skeleton(R, seed, opt.method, opt.max_attempts);
  return realize_hull(sk, seed, opt.vertex_budget, opt.fill);
}

std::string serialize_hull(const HullMap& hull) {
  std::vector<std::string> lines;
  for (int j = 0; j <= hull.radius(); ++j) {
    std::ostringstream os;
    os << "CYCLE " << j;
    for (int v : hull.strata.levels[j].vertices) os << ' ' << v;
    lines.push_back(os.str());
  }
  return serialize(hull.map, lines);
}

HalfEdgeMap plane_hull(const HullMap& hull) {
  if (!hull.open_slots.empty()) throw std::invalid_argument("plane_hull: hull has open slots");
  return root_transform_inverse(hull.map);
}

}  // namespace trifpp
