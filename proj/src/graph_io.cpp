#include "taletorium/graph_io.hpp"

#include <fstream>

#include "taletorium/error.hpp"
#include "taletorium/text.hpp"

namespace taletorium::io {
namespace {

Json location_json(const MentionLocation& m) {
  return {{"fragment", m.fragment}, {"sentence", m.sentence}, {"token", m.token}};
}

MentionLocation location_from(const Json& j) {
  if (!j.is_object()) return {};
  return {j.value("fragment", 0), j.value("sentence", 0), j.value("token", 0)};
}

EntityId id_from(const Json& j) { return EntityId{j.get<std::uint64_t>()}; }

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, e.what());
  }
}

}  // namespace

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, e.what());
  }
}

Json read_json_file(const std::string& path) { return parse(text::read_file(path)); }

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::Io, "write failed: " + path);
}

Json to_json(const parser::DoodlerGraph& graph) {
  Json nodes = Json::array();
  for (const auto& [id, n] : graph.nodes) {
    nodes.push_back({{"id", id.value},
                     {"category", n.category},
                     {"color", n.color},
                     {"stroke_weight", n.stroke_weight},
                     {"attributes", n.attributes},
                     {"first_mention", location_json(n.first_mention)}});
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"src", e.src.value}, {"dst", e.dst.value}, {"relation", e.relation}, {"fragment", e.fragment}});
  return {{"nodes", nodes}, {"edges", edges}, {"next_id", graph.next_id}};
}

parser::DoodlerGraph doodler_graph_from_json(const Json& j) {
  return guarded([&] {
    parser::DoodlerGraph g;
    std::uint64_t max_id = 0;
    for (const auto& n : j.at("nodes")) {
      parser::DoodlerNode node;
      node.id = id_from(n.at("id"));
      node.category = n.at("category").get<std::string>();
      node.color = n.value("color", std::string("#000000"));
      node.stroke_weight = n.value("stroke_weight", 2.0);
      node.attributes = n.value("attributes", std::vector<std::string>{});
      node.first_mention = location_from(n.value("first_mention", Json::object()));
      if (node.category.empty()) throw Error(Errc::Parse, "node without category");
      max_id = std::max(max_id, node.id.value);
      if (!g.nodes.emplace(node.id, node).second)
        throw Error(Errc::Parse, "duplicate node id " + std::to_string(node.id.value));
    }
    for (const auto& e : j.value("edges", Json::array())) {
      parser::DoodlerEdge edge{id_from(e.at("src")), id_from(e.at("dst")), e.at("relation").get<std::string>(),
                               e.value("fragment", 0)};
      if (!g.add_edge(edge)) throw Error(Errc::Parse, "invalid edge " + edge.relation);
    }
    g.next_id = std::max(j.value("next_id", std::uint64_t{1}), max_id + 1);
    return g;
  });
}

Json to_json(const concepts::CanonicalSceneGraph& graph) {
  Json nodes = Json::array();
  for (const auto& n : graph.nodes) {
    nodes.push_back({{"id", n.id.value},
                     {"category", n.category},
                     {"display", n.display},
                     {"color", n.color},
                     {"stroke_weight", n.stroke_weight},
                     {"size_class", concepts::size_class_name(n.size_class)},
                     {"first_mention", location_json(n.first_mention)}});
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"src", e.src.value}, {"dst", e.dst.value}, {"relation", e.relation}, {"display", e.display}});
  return {{"nodes", nodes}, {"edges", edges}};
}

concepts::CanonicalSceneGraph scene_graph_from_json(const Json& j) {
  return guarded([&] {
    concepts::CanonicalSceneGraph g;
    for (const auto& n : j.at("nodes")) {
      concepts::SceneNode node;
      node.id = id_from(n.at("id"));
      node.category = n.at("category").get<std::string>();
      node.display = n.value("display", node.category);
      node.color = n.value("color", std::string("#000000"));
      node.stroke_weight = n.value("stroke_weight", 2.0);
      auto sc = concepts::size_class_from_name(n.value("size_class", std::string("prop")));
      if (!sc) throw Error(Errc::Parse, "bad size_class for " + node.category);
      node.size_class = *sc;
      node.first_mention = location_from(n.value("first_mention", Json::object()));
      g.nodes.push_back(std::move(node));
    }
    std::sort(g.nodes.begin(), g.nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& e : j.value("edges", Json::array())) {
      const auto rel = e.at("relation").get<std::string>();
      g.edges.push_back({id_from(e.at("src")), id_from(e.at("dst")), rel, e.value("display", rel)});
    }
    return g;
  });
}

Json to_json(const std::vector<layout::RelationConstraint>& constraints) {
  Json out = Json::array();
  for (const auto& c : constraints)
    out.push_back({{"kind", layout::relation_kind_name(c.kind)},
                   {"src", c.src.value},
                   {"dst", c.dst.value},
                   {"hard", c.hard}});
  return out;
}

std::vector<layout::RelationConstraint> constraints_from_json(const Json& j) {
  return guarded([&] {
    std::vector<layout::RelationConstraint> out;
    for (const auto& c : j) {
      auto kind = layout::relation_kind_from_name(c.at("kind").get<std::string>());
      if (!kind) throw Error(Errc::Parse, "bad constraint kind");
      out.push_back({*kind, id_from(c.at("src")), id_from(c.at("dst")), c.value("hard", layout::is_hard_kind(*kind))});
    }
    return out;
  });
}

Json to_json(const layout::SceneLayout& layout, const std::map<EntityId, render::EntityStyle>& styles) {
  Json boxes = Json::array();
  for (const auto& b : layout.boxes) {
    Json box = {{"id", b.id.value}, {"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}, {"z", b.z}};
    if (auto it = styles.find(b.id); it != styles.end()) {
      box["category"] = it->second.category;
      box["color"] = it->second.color;
      box["stroke_weight"] = it->second.stroke_weight;
      if (!it->second.context.empty()) box["context"] = it->second.context;
    }
    boxes.push_back(std::move(box));
  }
  Json violations = Json::array();
  for (const auto& v : layout.violations) {
    violations.push_back({{"kind", layout::relation_kind_name(v.constraint.kind)},
                          {"src", v.constraint.src.value},
                          {"dst", v.constraint.dst.value},
                          {"hard", v.constraint.hard},
                          {"detail", v.detail}});
  }
  return {{"boxes", boxes}, {"violations", violations}};
}

layout::SceneLayout layout_from_json(const Json& j) {
  return guarded([&] {
    layout::SceneLayout out;
    for (const auto& b : j.at("boxes")) {
      out.boxes.push_back({id_from(b.at("id")), b.at("x").get<double>(), b.at("y").get<double>(),
                           b.at("w").get<double>(), b.at("h").get<double>(), b.value("z", 0)});
    }
    std::sort(out.boxes.begin(), out.boxes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& v : j.value("violations", Json::array())) {
      auto kind = layout::relation_kind_from_name(v.at("kind").get<std::string>());
      if (!kind) throw Error(Errc::Parse, "bad violation kind");
      out.violations.push_back(
          {{*kind, id_from(v.at("src")), id_from(v.at("dst")), v.value("hard", true)}, v.value("detail", "")});
    }
    return out;
  });
}

std::map<EntityId, render::EntityStyle> styles_from_layout_json(const Json& j) {
  return guarded([&] {
    std::map<EntityId, render::EntityStyle> out;
    for (const auto& b : j.at("boxes")) {
      if (!b.contains("category")) continue;
      out[id_from(b.at("id"))] = {b.at("category").get<std::string>(), b.value("color", std::string("#000000")),
                                  b.value("stroke_weight", 2.0), b.value("context", std::string())};
    }
    return out;
  });
}

Json to_json(const story::StoryFragment& fragment) {
  Json sentences = Json::array();
  for (const auto& [id, s] : fragment.sentences) sentences.push_back({{"character", id.value}, {"text", s}});
  return {{"index", fragment.index}, {"text", fragment.text}, {"sentences", sentences}};
}

Json to_json(const story::Story& story) {
  Json cast = Json::array();
  for (const auto& c : story.cast) cast.push_back({{"id", c.id.value}, {"name", c.name}});
  Json fragments = Json::array();
  for (const auto& f : story.fragments) fragments.push_back(to_json(f));
  return {{"title", story.title}, {"length", story.length}, {"seed", story.seed}, {"cast", cast},
          {"fragments", fragments}};
}

sketch::StrokeSet strokes_from_json(const Json& j) {
  return guarded([&] {
    const Json& list = j.is_array() ? j : j.at("strokes");
    sketch::StrokeSet out;
    for (const auto& s : list) {
      const auto& xs = s.at(0);
      const auto& ys = s.at(1);
      const bool timed = s.size() > 2;
      if (xs.size() != ys.size() || (timed && s.at(2).size() != xs.size()))
        throw Error(Errc::Parse, "stroke coordinate arrays differ in length");
      sketch::TimedStroke ts;
      for (std::size_t i = 0; i < xs.size(); ++i)
        ts.push_back({xs[i].get<double>(), ys[i].get<double>(), timed ? s.at(2)[i].get<double>() : 0.0});
      out.strokes.push_back(std::move(ts));
    }
    return out;
  });
}

Json to_json(const sketch::StrokeSet& strokes) {
  Json list = Json::array();
  for (const auto& s : strokes.strokes) {
    Json xs = Json::array(), ys = Json::array(), ts = Json::array();
    for (const auto& p : s) {
      xs.push_back(p.x);
      ys.push_back(p.y);
      ts.push_back(p.t);
    }
    list.push_back(Json::array({xs, ys, ts}));
  }
  return {{"strokes", list}};
}

}  // namespace taletorium::io
