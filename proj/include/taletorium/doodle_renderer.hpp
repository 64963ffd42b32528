#pragma once

// Stroke-template doodles and layered SVG composition.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/ids.hpp"
#include "taletorium/scene_composer.hpp"

namespace taletorium::render {

struct Point {
  double x = 0, y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

using Polyline = std::vector<Point>;

struct BBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double w() const { return x1 - x0; }
  double h() const { return y1 - y0; }
};

BBox bounding_box(const std::vector<Polyline>& strokes);

struct StrokeTemplate {
  std::string category;
  std::vector<Polyline> strokes;
  BBox bbox;
};

/// Builds a template, validating stroke shape and computing the bbox.
StrokeTemplate make_template(std::string category, std::vector<Polyline> strokes);

class TemplateBank {
 public:
  /// QuickDraw simplified-drawing NDJSON: {"word": ..., "drawing": [[[x...],[y...]], ...]}
  static TemplateBank load(const std::string& path);
  static TemplateBank parse(std::string_view ndjson);

  void add(StrokeTemplate t);
  /// First template of the category in file order.
  const StrokeTemplate* find(std::string_view category) const;
  /// Distinct categories in file order.
  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<StrokeTemplate>& templates() const { return templates_; }
  bool empty() const { return templates_.empty(); }

  /// Exact match, else the bank category the mapper finds closest to
  /// `category` in `context`. Throws MissingTemplate.
  const StrokeTemplate& resolve(std::string_view category, const concepts::ConceptMapper* mapper,
                                std::string_view context = {}) const;

 private:
  std::vector<StrokeTemplate> templates_;
  std::vector<std::string> categories_;
};

struct PathGroup {
  std::vector<Polyline> strokes;  // normalized canvas coordinates
  std::string color;
  double stroke_weight = 2.0;
};

/// Letterboxed, aspect-preserving fit of the template into `box`.
PathGroup render_node(const StrokeTemplate& tmpl, const layout::LayoutBox& box, std::string color,
                      double stroke_weight);

struct EntityStyle {
  std::string category;
  std::string color = "#000000";
  double stroke_weight = 2.0;
  std::string context;  // text used when the template has to be resolved
};

std::map<EntityId, EntityStyle> styles_of(const concepts::CanonicalSceneGraph& graph);

inline constexpr double kCanvasUnits = 1000.0;

struct SvgScene {
  std::string document;
  std::size_t group_count = 0;
};

/// Groups in ascending z, one per box, id "entity-<id>".
SvgScene render_scene(const layout::SceneLayout& layout, const TemplateBank& bank,
                      const std::map<EntityId, EntityStyle>& styles,
                      const concepts::ConceptMapper* mapper = nullptr);

}  // namespace taletorium::render
