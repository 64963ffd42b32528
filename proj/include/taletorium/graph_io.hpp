#pragma once

// JSON documents for graphs, layouts, stories and stroke sets.

#include <json.hpp>
#include <map>
#include <string>
#include <string_view>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/doodle_renderer.hpp"
#include "taletorium/fragment_parser.hpp"
#include "taletorium/scene_composer.hpp"
#include "taletorium/sketch_recognizer.hpp"
#include "taletorium/story_engine.hpp"

namespace taletorium::io {

using Json = nlohmann::ordered_json;

Json to_json(const parser::DoodlerGraph& graph);
parser::DoodlerGraph doodler_graph_from_json(const Json& j);

Json to_json(const concepts::CanonicalSceneGraph& graph);
concepts::CanonicalSceneGraph scene_graph_from_json(const Json& j);

/// Boxes carry category/color/stroke_weight when `styles` has the entity,
/// so a layout file alone is enough to render.
Json to_json(const layout::SceneLayout& layout, const std::map<EntityId, render::EntityStyle>& styles = {});
layout::SceneLayout layout_from_json(const Json& j);
std::map<EntityId, render::EntityStyle> styles_from_layout_json(const Json& j);

Json to_json(const std::vector<layout::RelationConstraint>& constraints);
std::vector<layout::RelationConstraint> constraints_from_json(const Json& j);

Json to_json(const story::Story& story);
Json to_json(const story::StoryFragment& fragment);

/// {"strokes": [[[x...],[y...],[t...]], ...]}; t is optional.
sketch::StrokeSet strokes_from_json(const Json& j);
Json to_json(const sketch::StrokeSet& strokes);

/// Parse with errors reported as Error(Parse).
Json parse(std::string_view text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace taletorium::io
