#pragma once

// Deterministic layout solver: canonical relations become geometric
// constraints, satisfied by iterative projection over normalized boxes.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/ids.hpp"

namespace taletorium::layout {

enum class RelationKind { LeftOf, RightOf, Above, Below, On, In, Near };

std::string_view relation_kind_name(RelationKind k);
std::optional<RelationKind> relation_kind_from_name(std::string_view name);
/// Everything except near.
bool is_hard_kind(RelationKind k);

struct RelationConstraint {
  RelationKind kind = RelationKind::Near;
  EntityId src;
  EntityId dst;
  bool hard = false;

  friend bool operator==(const RelationConstraint&, const RelationConstraint&) = default;
};

struct LayoutBox {
  EntityId id;
  double x = 0, y = 0, w = 0, h = 0;  // top-left origin, y grows downward
  int z = 0;

  double cx() const { return x + w / 2; }
  double cy() const { return y + h / 2; }
  friend bool operator==(const LayoutBox&, const LayoutBox&) = default;
};

struct Violation {
  RelationConstraint constraint;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct SceneLayout {
  std::vector<LayoutBox> boxes;  // ascending id
  std::vector<Violation> violations;

  const LayoutBox* find(EntityId id) const;
  std::size_t hard_violations() const;
  friend bool operator==(const SceneLayout&, const SceneLayout&) = default;
};

struct ComposerConfig {
  double margin = 0.02;
  double epsilon = 0.01;
  double repulsion_gain = 0.5;
  int max_iterations = 200;
  double near_distance = 0.3;
  double jitter = 0.1;
  double scene_w = 0.9, scene_h = 0.5;
  double character_size = 0.22;
  double prop_size = 0.12;
  /// Targets sit this far inside each feasible region so that float noise
  /// cannot flip a strict inequality.
  double slack = 0.005;
};

/// `relation_map` maps canonical relations to kind names; unmapped relations
/// become soft near constraints.
std::vector<RelationConstraint> derive_constraints(const concepts::CanonicalSceneGraph& graph,
                                                   const std::map<std::string, std::string, std::less<>>& relation_map);

/// `canvas_aspect` is width / height; character and prop boxes stay square
/// on screen.
SceneLayout compose_layout(const concepts::CanonicalSceneGraph& graph, std::span<const RelationConstraint> constraints,
                           double canvas_aspect, std::uint64_t seed, const ComposerConfig& config = {});

/// Geometric re-check of every constraint, in constraint order.
std::vector<Violation> validate_layout(const SceneLayout& layout, std::span<const RelationConstraint> constraints,
                                       const ComposerConfig& config = {});

bool inside_canvas(const LayoutBox& box);

struct LayoutJob {
  const concepts::CanonicalSceneGraph* graph = nullptr;
  std::vector<RelationConstraint> constraints;
  double canvas_aspect = 1.0;
  std::uint64_t seed = 0;
};

/// Batch layout: OpenMP kernel and its serial reference.
std::vector<SceneLayout> compose_layouts(std::span<const LayoutJob> jobs, const ComposerConfig& config = {});
std::vector<SceneLayout> compose_layouts_serial(std::span<const LayoutJob> jobs, const ComposerConfig& config = {});

}  // namespace taletorium::layout
