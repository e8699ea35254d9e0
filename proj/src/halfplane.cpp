#include "trifpp/halfplane.hpp"

#include "trifpp/boltzmann.hpp"
#include "trifpp/theta_sampler.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace trifpp {

namespace {

constexpr std::uint64_t kKeySalt = 0x7269f1c3a5d2b04bULL;

std::uint64_t structural_key(int role, std::int64_t col, int gen, std::int64_t idx) {
  return derive_seed(kKeySalt, {role, col, gen, idx});
}

}  // namespace

std::int64_t ColumnTree::generation_size(int g) const {
  if (g == 0) return 1;
  std::int64_t s = 0;
  for (std::int64_t c : gens[g - 1]) s += c;
  return s;
}

ColumnTree sample_column_tree(std::uint64_t seed, std::int64_t column, int depth) {
  Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Column), column});
  ColumnTree t;
  t.gens.resize(depth);
  std::int64_t width = 1;
  for (int g = 0; g < depth; ++g) {
    t.gens[g].resize(width);
    std::int64_t sum = 0;
    for (std::int64_t k = 0; k < width; ++k) {
      t.gens[g][k] = sample_theta(rng);
      sum += t.gens[g][k];
      if (sum > kDefaultVertexBudget) throw WindowBudgetExceeded("column tree exceeds the vertex budget");
    }
    width = sum;
  }
  return t;
}

ColumnTree sample_spine_tree(std::uint64_t seed, int depth) {
  Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Column), 0});
  Rng spine_rng = make_stream(seed, {static_cast<std::int64_t>(Role::Spine), 0});
  ColumnTree t;
  t.gens.resize(depth);
  t.spine.assign(depth + 1, 0);
  std::int64_t width = 1;
  for (int g = 0; g < depth; ++g) {
    t.gens[g].resize(width);
    std::int64_t sum = 0;
    for (std::int64_t k = 0; k < width; ++k) {
      std::int64_t c;
      if (k == t.spine[g]) {
        c = sample_theta_sizebiased(spine_rng);
        std::uniform_int_distribution<std::int64_t> rank(0, c - 1);
        t.spine[g + 1] = sum + rank(spine_rng);
      } else {
        c = sample_theta(rng);
      }
      t.gens[g][k] = c;
      sum += c;
      if (sum > kDefaultVertexBudget) throw WindowBudgetExceeded("spine tree exceeds the vertex budget");
    }
    width = sum;
  }
  return t;
}

int HalfPlaneWindow::origin_vertex(int g) const {
  const Level& lev = generation(g);
  std::int64_t k = origin_index[g];
  if (k < 0 || k >= static_cast<std::int64_t>(lev.vertices.size())) return -1;
  return lev.vertices[k];
}

std::uint64_t HalfPlaneWindow::slot_key(const SlotId& id) const {
  return derive_seed(seed, {static_cast<std::int64_t>(Role::Slot), id.col, id.gen, id.idx, 1});
}

int HalfPlaneWindow::origin_face(int g) const {
  if (g >= depth) return -1;
  const Level& lev = generation(g);
  std::int64_t k = origin_index[g] - 1;
  if (k < 0 || k >= static_cast<std::int64_t>(lev.west.size())) return -1;
  return map.face[lev.west[k]];
}

HalfPlaneWindow realize_window(WindowKind kind, std::uint64_t seed, int depth, std::int64_t i_min,
                               std::vector<ColumnTree> columns, const SlotFillFn* custom_fill,
                               std::int64_t vertex_budget, const FillPolicy& policy) {
  if (depth < 1) throw std::invalid_argument("realize_window: depth must be positive");
  if (columns.empty()) throw std::invalid_argument("realize_window: no columns");
  const std::int64_t ncol = static_cast<std::int64_t>(columns.size());
  const std::int64_t spine_slot = -i_min;
  if (kind == WindowKind::Upper && (spine_slot < 0 || spine_slot >= ncol || columns[spine_slot].spine.empty())) {
    throw std::invalid_argument("realize_window: upper window needs a spine column at index 0");
  }

  HalfPlaneWindow w;
  w.kind = kind;
  w.depth = depth;
  w.i_min = i_min;
  w.i_max = i_min + ncol - 1;
  w.seed = seed;
  w.fill = policy;

  // Row layout: per generation, the owning column and index of every edge.
  std::vector<std::vector<std::int64_t>> row_col(depth + 1), row_idx(depth + 1);
  w.row_children.resize(depth);
  w.origin_index.assign(depth + 1, 0);
  for (int g = 0; g <= depth; ++g) {
    for (std::int64_t c = 0; c < ncol; ++c) {
      std::int64_t sz = columns[c].generation_size(g);
      if (c < spine_slot) w.origin_index[g] += sz;
      if (kind == WindowKind::Upper && c == spine_slot) w.origin_index[g] += columns[c].spine[g];
      for (std::int64_t k = 0; k < sz; ++k) {
        row_col[g].push_back(i_min + c);
        row_idx[g].push_back(k);
      }
      if (g < depth) {
        const auto& gen = columns[c].gens[g];
        w.row_children[g].insert(w.row_children[g].end(), gen.begin(), gen.end());
      }
    }
  }

  std::int64_t tree_vertices = 0;
  for (const auto& r : row_col) tree_vertices += static_cast<std::int64_t>(r.size()) + 1;
  std::int64_t remaining = vertex_budget - tree_vertices;
  if (remaining < 0) throw WindowBudgetExceeded("window rows exceed the vertex budget");

  MapBuilder b(static_cast<std::size_t>(6 * tree_vertices));
  std::vector<He> top_east;
  std::vector<He> cur_west;
  for (std::size_t k = 0; k < row_col[0].size(); ++k) {
    auto [e, wst] = b.add_edge(structural_key(kRowEdge, row_col[0][k], 0, row_idx[0][k]));
    top_east.push_back(e);
    cur_west.push_back(wst);
  }
  std::vector<RowRecord> top_down;
  top_down.push_back(RowRecord{cur_west, kNoHe, false});
  std::vector<He> right_outer, left_outer;
  std::vector<He> open_reps;

  for (int g = 0; g < depth; ++g) {
    if (cur_west.empty()) {
      top_down.push_back(RowRecord{});
      continue;
    }
    const auto& lc = row_col[g + 1];
    const auto& li = row_idx[g + 1];
    std::vector<He> lower_east(lc.size()), lower_west(lc.size());
    for (std::size_t k = 0; k < lc.size(); ++k) {
      std::tie(lower_east[k], lower_west[k]) = b.add_edge(structural_key(kRowEdge, lc[k], g + 1, li[k]));
    }
    if (kind == WindowKind::Upper && g + 1 == depth) b.set_root(lower_east[w.origin_index[depth]]);
    const auto& uc = row_col[g];
    const auto& ui = row_idx[g];
    EdgeKeyFn key = [&](std::size_t i, int role) { return structural_key(role, uc[i], g, ui[i]); };
    const auto& kids = w.row_children[g];
    SlotFillFn fill = [&](std::deque<He>& hole, std::size_t i) {
      if (policy.lazy && kids[i] > policy.eager_max_children) {
        b.make_face(std::vector<He>(hole.begin(), hole.end()));
        b.mark(hole.front(), "slot");
        open_reps.push_back(hole.front());
        w.open_slots.push_back(SlotId{uc[i], g, ui[i]});
        return;
      }
      Rng rng = make_stream(seed, {static_cast<std::int64_t>(Role::Slot), uc[i], g, ui[i]});
      FillStats st = fill_hole(b, std::move(hole), rng, structural_key(kSlot, uc[i], g, ui[i]), remaining);
      if (st.truncated) throw WindowBudgetExceeded("slot fillings exceed the vertex budget");
      remaining -= st.new_vertices;
    };
    StripBorders br = realize_strip(b, cur_west, lower_east, w.row_children[g], false, 0, key,
                                    custom_fill ? *custom_fill : fill);
    right_outer.push_back(br.right_outer);
    left_outer.push_back(br.left_outer);
    top_down.push_back(RowRecord{lower_west, b.twin(br.right_outer), false});
    cur_west = std::move(lower_west);
  }

  std::vector<He> ext = top_east;
  ext.insert(ext.end(), right_outer.begin(), right_outer.end());
  ext.insert(ext.end(), cur_west.rbegin(), cur_west.rend());
  ext.insert(ext.end(), left_outer.rbegin(), left_outer.rend());
  b.make_face(ext);
  b.mark(top_east[0], "exterior");
  if (kind == WindowKind::Lower) {
    std::int64_t k = w.origin_index[0];
    if (k >= static_cast<std::int64_t>(top_east.size())) k = static_cast<std::int64_t>(top_east.size()) - 1;
    b.set_root(top_east[k]);
  }

  std::vector<He> remap;
  w.map = std::move(b).freeze(&remap);
  std::vector<RowRecord> base_first(top_down.rbegin(), top_down.rend());
  w.strata = Strata::build(w.map, base_first, remap);
  w.lateral.assign(w.map.num_vertices, 0);
  for (int side = 1; side <= 2; ++side) {
    for (He h : side == 1 ? left_outer : right_outer) {
      He x = remap[h];
      w.lateral[w.map.origin[x]] |= side;
      w.lateral[w.map.dest(x)] |= side;
    }
  }
  for (He h : right_outer) {
    w.right_boundary.push_back(remap[h]);
    w.right_boundary.push_back(w.map.twin[remap[h]]);
  }
  for (He h : open_reps) w.open_slot_faces.push_back(w.map.face[remap[h]]);
  w.columns = std::move(columns);
  return w;
}

HalfPlaneWindow build_lhpt(std::uint64_t seed, int depth, std::int64_t i_min, std::int64_t i_max,
                           std::int64_t vertex_budget, const FillPolicy& policy) {
  if (i_max < i_min) throw std::invalid_argument("build_lhpt: empty column range");
  std::vector<ColumnTree> cols;
  cols.reserve(i_max - i_min + 1);
  for (std::int64_t i = i_min; i <= i_max; ++i) cols.push_back(sample_column_tree(seed, i, depth));
  return realize_window(WindowKind::Lower, seed, depth, i_min, std::move(cols), nullptr, vertex_budget, policy);
}

LhptWindow sample_lhpt(int depth, std::int64_t halfwidth, std::uint64_t seed, std::int64_t vertex_budget,
                       const FillPolicy& policy) {
  if (halfwidth < 1) throw std::invalid_argument("sample_lhpt: halfwidth must be positive");
  return build_lhpt(seed, depth, -halfwidth, halfwidth, vertex_budget, policy);
}

LhptWindow extend_columns(const LhptWindow& w, Side side, std::int64_t count, std::int64_t vertex_budget) {
  if (count < 0) throw std::invalid_argument("extend_columns: negative count");
  if (count == 0) return w;
  return side == Side::Left ? regrow(w, count, 0, w.fill, vertex_budget) : regrow(w, 0, count, w.fill, vertex_budget);
}

HalfPlaneWindow regrow(const HalfPlaneWindow& w, std::int64_t add_left, std::int64_t add_right,
                       const FillPolicy& policy, std::int64_t vertex_budget) {
  if (add_left < 0 || add_right < 0) throw std::invalid_argument("regrow: negative column count");
  std::vector<ColumnTree> cols;
  cols.reserve(w.columns.size() + add_left + add_right);
  const std::int64_t i_min = w.i_min - add_left;
  for (std::int64_t i = i_min; i < w.i_min; ++i) cols.push_back(sample_column_tree(w.seed, i, w.depth));
  cols.insert(cols.end(), w.columns.begin(), w.columns.end());
  for (std::int64_t i = w.i_max + 1; i <= w.i_max + add_right; ++i) cols.push_back(sample_column_tree(w.seed, i, w.depth));
  return realize_window(w.kind, w.seed, w.depth, i_min, std::move(cols), nullptr, vertex_budget, policy);
}

UhptWindow sample_uhpt(int depth, std::int64_t halfwidth, std::uint64_t seed, std::int64_t vertex_budget) {
  if (halfwidth < 0) throw std::invalid_argument("sample_uhpt: negative halfwidth");
  std::vector<ColumnTree> cols;
  for (std::int64_t i = -halfwidth; i <= halfwidth; ++i) {
    cols.push_back(i == 0 ? sample_spine_tree(seed, depth) : sample_column_tree(seed, i, depth));
  }
  return realize_window(WindowKind::Upper, seed, depth, -halfwidth, std::move(cols), nullptr, vertex_budget);
}

std::string serialize_window(const HalfPlaneWindow& w) {
  std::vector<std::string> rows;
  for (int g = 0; g <= w.depth; ++g) {
    std::ostringstream os;
    os << "ROW " << g;
    for (int v : w.generation(g).vertices) os << ' ' << v;
    rows.push_back(os.str());
  }
  return serialize(w.map, rows);
}

}  // namespace trifpp
