#include "taletorium/scene_composer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "taletorium/seeding.hpp"

namespace taletorium::layout {
namespace {

using concepts::SizeClass;

constexpr double kTol = 1e-9;

int class_rank(SizeClass c) {
  switch (c) {
    case SizeClass::Scene: return 0;
    case SizeClass::Prop: return 1;
    case SizeClass::Character: return 2;
  }
  return 1;
}

// One axis of a box: start and extent.
struct Span1 {
  double& pos;
  double len;
  double room_up() const { return 1.0 - (pos + len); }
  double room_down() const { return pos; }
};

// Increase (a - b) along one axis by d, moving a by +s and b by -(d - s),
// each limited by the canvas room in its direction.
void shift_apart(Span1 a, Span1 b, double d) {
  if (d == 0.0) return;
  const double sign = d > 0 ? 1.0 : -1.0;
  const double need = std::abs(d);
  const double room_a = std::max(0.0, sign > 0 ? a.room_up() : a.room_down());
  const double room_b = std::max(0.0, sign > 0 ? b.room_down() : b.room_up());
  double move_a = std::min(room_a, need / 2);
  double move_b = std::min(room_b, need - move_a);
  move_a = std::min(room_a, need - move_b);
  a.pos += sign * move_a;
  b.pos -= sign * move_b;
}

Span1 xs(LayoutBox& b) { return {b.x, b.w}; }
Span1 ys(LayoutBox& b) { return {b.y, b.h}; }

double x_overlap(const LayoutBox& a, const LayoutBox& b) {
  return std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
}
double y_overlap(const LayoutBox& a, const LayoutBox& b) {
  return std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
}

void clamp_box(LayoutBox& b) {
  b.w = std::min(b.w, 1.0);
  b.h = std::min(b.h, 1.0);
  b.x = std::clamp(b.x, 0.0, 1.0 - b.w);
  b.y = std::clamp(b.y, 0.0, 1.0 - b.h);
}

std::optional<std::string> check(const RelationConstraint& c, const LayoutBox& a, const LayoutBox& b,
                                 const ComposerConfig& cfg) {
  std::ostringstream why;
  switch (c.kind) {
    case RelationKind::Below:
      if (a.cy() - b.cy() > cfg.margin) return std::nullopt;
      why << "center_y gap " << a.cy() - b.cy();
      break;
    case RelationKind::Above:
      if (b.cy() - a.cy() > cfg.margin) return std::nullopt;
      why << "center_y gap " << b.cy() - a.cy();
      break;
    case RelationKind::LeftOf:
      if (b.cx() - a.cx() > cfg.margin) return std::nullopt;
      why << "center_x gap " << b.cx() - a.cx();
      break;
    case RelationKind::RightOf:
      if (a.cx() - b.cx() > cfg.margin) return std::nullopt;
      why << "center_x gap " << a.cx() - b.cx();
      break;
    case RelationKind::On: {
      const double bottom = a.y + a.h;
      const bool rests = bottom >= b.y - cfg.epsilon - kTol && bottom <= b.y + 0.25 * b.h + kTol;
      const bool over = x_overlap(a, b) >= 0.5 * std::min(a.w, b.w) - kTol;
      if (rests && over) return std::nullopt;
      why << "bottom offset " << bottom - b.y << ", x-overlap " << x_overlap(a, b);
      break;
    }
    case RelationKind::In:
      if (a.x >= b.x - kTol && a.y >= b.y - kTol && a.x + a.w <= b.x + b.w + kTol &&
          a.y + a.h <= b.y + b.h + kTol)
        return std::nullopt;
      why << "not contained";
      break;
    case RelationKind::Near: {
      const double d = std::hypot(a.cx() - b.cx(), a.cy() - b.cy());
      if (d <= cfg.near_distance + kTol) return std::nullopt;
      why << "center distance " << d;
      break;
    }
  }
  return why.str();
}

void project(const RelationConstraint& c, LayoutBox& a, LayoutBox& b, const ComposerConfig& cfg) {
  const double gap = cfg.margin + cfg.slack;
  switch (c.kind) {
    case RelationKind::Below:
      if (a.cy() - b.cy() < gap) shift_apart(ys(a), ys(b), gap - (a.cy() - b.cy()));
      break;
    case RelationKind::Above:
      if (b.cy() - a.cy() < gap) shift_apart(ys(b), ys(a), gap - (b.cy() - a.cy()));
      break;
    case RelationKind::RightOf:
      if (a.cx() - b.cx() < gap) shift_apart(xs(a), xs(b), gap - (a.cx() - b.cx()));
      break;
    case RelationKind::LeftOf:
      if (b.cx() - a.cx() < gap) shift_apart(xs(b), xs(a), gap - (b.cx() - a.cx()));
      break;
    case RelationKind::On: {
      const double v = (a.y + a.h) - b.y;
      if (v < -cfg.epsilon || v > 0.25 * b.h) shift_apart(ys(a), ys(b), 0.1 * b.h - v);
      const double max_dist = (a.w + b.w) / 2 - 0.6 * std::min(a.w, b.w);
      const double dx = a.cx() - b.cx();
      if (std::abs(dx) > max_dist) {
        const double target = dx > 0 ? max_dist : -max_dist;
        shift_apart(xs(a), xs(b), target - dx);
      }
      break;
    }
    case RelationKind::In: {
      a.x = std::clamp(a.x, b.x, b.x + b.w - a.w);
      a.y = std::clamp(a.y, b.y, b.y + b.h - a.h);
      break;
    }
    case RelationKind::Near: {
      const double dx = a.cx() - b.cx(), dy = a.cy() - b.cy();
      const double d = std::hypot(dx, dy);
      const double target = cfg.near_distance - cfg.slack;
      if (d > target) {
        const double k = (d - target) / d;
        shift_apart(xs(a), xs(b), -dx * k);
        shift_apart(ys(a), ys(b), -dy * k);
      }
      break;
    }
  }
}

// Difference constraints on one axis: pos[v] - pos[u] <= w.
struct DiffEdge {
  std::size_t u, v;
  double w;
};

// Solves the system with every box inside [0, 1], starting from the current
// positions so that only boxes that must move do. Bellman-Ford over a
// virtual origin; returns false on a negative cycle (infeasible).
bool solve_axis(std::vector<double>& pos, const std::vector<double>& len, std::vector<DiffEdge> edges) {
  const std::size_t n = pos.size(), s = n;
  for (std::size_t v = 0; v < n; ++v) {
    edges.push_back({s, v, 1.0 - len[v]});
    edges.push_back({v, s, 0.0});
  }
  std::vector<double> d(pos);
  d.push_back(0.0);
  for (std::size_t round = 0; round <= n + 1; ++round) {
    bool changed = false;
    for (const auto& e : edges)
      if (d[e.u] + e.w < d[e.v]) {
        d[e.v] = d[e.u] + e.w;
        changed = true;
      }
    if (!changed) {
      for (std::size_t v = 0; v < n; ++v) pos[v] = std::clamp(d[v] - d[s], 0.0, 1.0 - len[v]);
      return true;
    }
  }
  return false;
}

// Exact repair of the hard constraints with sizes held fixed.
bool repair(std::vector<LayoutBox>& boxes, std::span<const RelationConstraint> cons,
            std::span<const std::pair<std::size_t, std::size_t>> pairs, const ComposerConfig& cfg) {
  std::vector<DiffEdge> ex, ey;
  auto at_least = [](std::vector<DiffEdge>& e, std::size_t a, std::size_t b, double c) {
    e.push_back({a, b, -c});  // pos[a] - pos[b] >= c
  };
  auto at_most = [](std::vector<DiffEdge>& e, std::size_t a, std::size_t b, double c) {
    e.push_back({b, a, c});  // pos[a] - pos[b] <= c
  };
  const double gap = cfg.margin + cfg.slack;
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const auto [i, j] = pairs[k];
    const auto& a = boxes[i];
    const auto& b = boxes[j];
    switch (cons[k].kind) {
      case RelationKind::Below: at_least(ey, i, j, gap + (b.h - a.h) / 2); break;
      case RelationKind::Above: at_least(ey, j, i, gap + (a.h - b.h) / 2); break;
      case RelationKind::RightOf: at_least(ex, i, j, gap + (b.w - a.w) / 2); break;
      case RelationKind::LeftOf: at_least(ex, j, i, gap + (a.w - b.w) / 2); break;
      case RelationKind::On: {
        const double lo = -cfg.epsilon, hi = 0.25 * b.h;
        const double pad = std::min(cfg.slack, (hi - lo) / 4);
        at_least(ey, i, j, lo + pad - a.h);
        at_most(ey, i, j, hi - pad - a.h);
        const double reach = (a.w + b.w) / 2 - 0.5 * std::min(a.w, b.w);
        const double pad_x = std::min(cfg.slack, reach / 4);
        at_most(ex, i, j, reach - pad_x - (a.w - b.w) / 2);
        at_least(ex, i, j, -(reach - pad_x) - (a.w - b.w) / 2);
        break;
      }
      case RelationKind::In:
        at_least(ex, i, j, 0.0);
        at_most(ex, i, j, b.w - a.w);
        at_least(ey, i, j, 0.0);
        at_most(ey, i, j, b.h - a.h);
        break;
      case RelationKind::Near: break;
    }
  }
  std::vector<double> px, py, lx, ly;
  for (const auto& b : boxes) {
    px.push_back(b.x);
    py.push_back(b.y);
    lx.push_back(b.w);
    ly.push_back(b.h);
  }
  if (!solve_axis(px, lx, std::move(ex)) || !solve_axis(py, ly, std::move(ey))) return false;
  for (std::size_t v = 0; v < boxes.size(); ++v) {
    boxes[v].x = px[v];
    boxes[v].y = py[v];
  }
  return true;
}

// Contents of an `in` constraint scale down uniformly to at most `fill` of
// the container on each axis, innermost last.
void fit_contents(std::vector<LayoutBox>& boxes, std::span<const RelationConstraint> cons,
                  std::span<const std::pair<std::size_t, std::size_t>> pairs, double fill) {
  for (std::size_t round = 0; round <= boxes.size(); ++round) {
    bool changed = false;
    for (std::size_t k = 0; k < cons.size(); ++k) {
      if (cons[k].kind != RelationKind::In) continue;
      auto& a = boxes[pairs[k].first];
      const auto& b = boxes[pairs[k].second];
      const double f = std::min({1.0, fill * b.w / a.w, fill * b.h / a.h});
      if (f < 1.0 - 1e-12) {
        a.w *= f;
        a.h *= f;
        changed = true;
      }
    }
    if (!changed) break;
  }
}

bool all_hard_hold(const std::vector<LayoutBox>& boxes, std::span<const RelationConstraint> cons,
                   std::span<const std::pair<std::size_t, std::size_t>> pairs, const ComposerConfig& cfg) {
  for (std::size_t k = 0; k < cons.size(); ++k)
    if (cons[k].hard && check(cons[k], boxes[pairs[k].first], boxes[pairs[k].second], cfg)) return false;
  return true;
}

}  // namespace

std::string_view relation_kind_name(RelationKind k) {
  switch (k) {
    case RelationKind::LeftOf: return "left-of";
    case RelationKind::RightOf: return "right-of";
    case RelationKind::Above: return "above";
    case RelationKind::Below: return "below";
    case RelationKind::On: return "on";
    case RelationKind::In: return "in";
    case RelationKind::Near: return "near";
  }
  return "near";
}

std::optional<RelationKind> relation_kind_from_name(std::string_view name) {
  for (auto k : {RelationKind::LeftOf, RelationKind::RightOf, RelationKind::Above, RelationKind::Below,
                 RelationKind::On, RelationKind::In, RelationKind::Near})
    if (relation_kind_name(k) == name) return k;
  return std::nullopt;
}

bool is_hard_kind(RelationKind k) { return k != RelationKind::Near; }

const LayoutBox* SceneLayout::find(EntityId id) const {
  auto it = std::lower_bound(boxes.begin(), boxes.end(), id, [](const LayoutBox& b, EntityId v) { return b.id < v; });
  return it != boxes.end() && it->id == id ? &*it : nullptr;
}

std::size_t SceneLayout::hard_violations() const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [](const Violation& v) { return v.constraint.hard; }));
}

bool inside_canvas(const LayoutBox& b) {
  return b.w > 0 && b.h > 0 && b.x >= -kTol && b.y >= -kTol && b.x + b.w <= 1 + kTol && b.y + b.h <= 1 + kTol;
}

std::vector<RelationConstraint> derive_constraints(const concepts::CanonicalSceneGraph& graph,
                                                   const std::map<std::string, std::string, std::less<>>& relation_map) {
  std::vector<RelationConstraint> out;
  for (const auto& e : graph.edges) {
    if (e.src == e.dst) continue;
    RelationKind kind = RelationKind::Near;
    if (auto it = relation_map.find(e.relation); it != relation_map.end())
      kind = relation_kind_from_name(it->second).value_or(RelationKind::Near);
    out.push_back({kind, e.src, e.dst, is_hard_kind(kind)});
  }
  return out;
}

std::vector<Violation> validate_layout(const SceneLayout& layout, std::span<const RelationConstraint> constraints,
                                       const ComposerConfig& config) {
  std::vector<Violation> out;
  for (const auto& c : constraints) {
    const auto* a = layout.find(c.src);
    const auto* b = layout.find(c.dst);
    if (!a || !b) {
      out.push_back({c, "missing box"});
      continue;
    }
    if (auto why = check(c, *a, *b, config)) out.push_back({c, *why});
  }
  return out;
}

SceneLayout compose_layout(const concepts::CanonicalSceneGraph& graph, std::span<const RelationConstraint> constraints,
                           double canvas_aspect, std::uint64_t seed, const ComposerConfig& cfg) {
  SceneLayout layout;
  const std::size_t n = graph.nodes.size();
  if (n == 0) return layout;
  if (!(canvas_aspect > 0)) canvas_aspect = 1.0;

  std::map<EntityId, std::size_t> index;
  std::vector<SizeClass> cls(n);
  SeededRng rng(combine(seed, n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = graph.nodes[i];
    index.emplace(node.id, i);
    cls[i] = node.size_class;
    LayoutBox box{node.id};
    if (node.size_class == SizeClass::Scene) {
      box.w = cfg.scene_w;
      box.h = cfg.scene_h;
    } else {
      const double base = node.size_class == SizeClass::Character ? cfg.character_size : cfg.prop_size;
      const double s = base * (1.0 + rng.uniform(-cfg.jitter, cfg.jitter));
      box.w = s;
      box.h = std::min(s * canvas_aspect, 0.9);
    }
    layout.boxes.push_back(box);
  }

  std::vector<std::pair<std::size_t, std::size_t>> resolved;
  std::set<std::pair<std::size_t, std::size_t>> stacked;  // on/in pairs are allowed to overlap
  std::vector<RelationConstraint> usable;
  for (const auto& c : constraints) {
    auto ia = index.find(c.src), ib = index.find(c.dst);
    if (ia == index.end() || ib == index.end() || ia->second == ib->second) continue;
    resolved.emplace_back(ia->second, ib->second);
    usable.push_back(c);
    if (c.kind == RelationKind::On || c.kind == RelationKind::In)
      stacked.insert(std::minmax(ia->second, ib->second));
  }
  const bool has_in = std::any_of(usable.begin(), usable.end(), [](auto& c) { return c.kind == RelationKind::In; });

  const auto sized = layout.boxes;
  const SeededRng placement_rng = rng;
  std::vector<LayoutBox> fallback;
  for (const double fill : {0.9, 0.6, 0.35, 0.1, 0.03}) {
    layout.boxes = sized;
    rng = placement_rng;
    fit_contents(layout.boxes, usable, resolved, fill);
    if (n == 1) {
      auto& b = layout.boxes[0];
      b.x = 0.5 - b.w / 2;
      b.y = 0.5 - b.h / 2;
    } else {
      // seeded grid for characters/props; scenes anchored to the bottom edge
      const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
      const std::size_t rows = (n + cols - 1) / cols;
      std::vector<std::size_t> cells(cols * rows);
      std::iota(cells.begin(), cells.end(), 0);
      for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.below(i)]);
      for (std::size_t i = 0; i < n; ++i) {
        auto& b = layout.boxes[i];
        if (cls[i] == SizeClass::Scene) {
          b.x = 0.5 - b.w / 2;
          b.y = 1.0 - b.h;
          continue;
        }
        const double cx = (static_cast<double>(cells[i] % cols) + 0.5) / static_cast<double>(cols);
        const double cy = (static_cast<double>(cells[i] / cols) + 0.5) / static_cast<double>(rows);
        b.x = cx - b.w / 2;
        b.y = cy - b.h / 2;
        clamp_box(b);
      }
    }

    auto& boxes = layout.boxes;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
      bool overlapping = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] == SizeClass::Scene) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (cls[j] == SizeClass::Scene || stacked.contains({i, j})) continue;
          auto& a = boxes[i];
          auto& b = boxes[j];
          const double ox = x_overlap(a, b), oy = y_overlap(a, b);
          if (ox <= 0 || oy <= 0) continue;
          overlapping = true;
          if (ox < oy) {
            const double sign = a.cx() < b.cx() || (a.cx() == b.cx() && i < j) ? -1.0 : 1.0;
            shift_apart(xs(a), xs(b), sign * ox * cfg.repulsion_gain);
          } else {
            const double sign = a.cy() < b.cy() || (a.cy() == b.cy() && i < j) ? -1.0 : 1.0;
            shift_apart(ys(a), ys(b), sign * oy * cfg.repulsion_gain);
          }
        }
      }
      for (std::size_t k = 0; k < usable.size(); ++k)
        project(usable[k], boxes[resolved[k].first], boxes[resolved[k].second], cfg);
      for (auto& b : boxes) clamp_box(b);

      bool satisfied = true;
      for (std::size_t k = 0; k < usable.size() && satisfied; ++k)
        satisfied = !check(usable[k], boxes[resolved[k].first], boxes[resolved[k].second], cfg);
      if (satisfied && !overlapping) break;
    }
    if (all_hard_hold(boxes, usable, resolved, cfg)) break;
    if (repair(boxes, usable, resolved, cfg) && all_hard_hold(boxes, usable, resolved, cfg)) break;
    if (fallback.empty()) fallback = boxes;
    if (!has_in) break;
  }
  if (!all_hard_hold(layout.boxes, usable, resolved, cfg) && !fallback.empty()) layout.boxes = fallback;
  auto& boxes = layout.boxes;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& na = graph.nodes[a];
    const auto& nb = graph.nodes[b];
    if (class_rank(na.size_class) != class_rank(nb.size_class))
      return class_rank(na.size_class) < class_rank(nb.size_class);
    if (na.first_mention != nb.first_mention) return na.first_mention < nb.first_mention;
    return na.id < nb.id;
  });
  for (std::size_t z = 0; z < n; ++z) boxes[order[z]].z = static_cast<int>(z);

  std::sort(boxes.begin(), boxes.end(), [](const LayoutBox& a, const LayoutBox& b) { return a.id < b.id; });
  layout.violations = validate_layout(layout, constraints, cfg);
  return layout;
}

std::vector<SceneLayout> compose_layouts_serial(std::span<const LayoutJob> jobs, const ComposerConfig& config) {
  std::vector<SceneLayout> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) out.push_back(compose_layout(*j.graph, j.constraints, j.canvas_aspect, j.seed, config));
  return out;
}

std::vector<SceneLayout> compose_layouts(std::span<const LayoutJob> jobs, const ComposerConfig& config) {
  std::vector<SceneLayout> out(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& j = jobs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = compose_layout(*j.graph, j.constraints, j.canvas_aspect, j.seed, config);
  }
  return out;
}

}  // namespace taletorium::layout
