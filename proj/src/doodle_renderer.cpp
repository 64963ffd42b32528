#include "taletorium/doodle_renderer.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "taletorium/error.hpp"
#include "taletorium/text.hpp"

namespace taletorium::render {
namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

BBox bounding_box(const std::vector<Polyline>& strokes) {
  BBox b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
         std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& s : strokes)
    for (const auto& p : s) {
      b.x0 = std::min(b.x0, p.x);
      b.y0 = std::min(b.y0, p.y);
      b.x1 = std::max(b.x1, p.x);
      b.y1 = std::max(b.y1, p.y);
    }
  return b;
}

StrokeTemplate make_template(std::string category, std::vector<Polyline> strokes) {
  if (category.empty()) throw Error(Errc::TemplateBankError, "template without category");
  if (strokes.empty()) throw Error(Errc::TemplateBankError, "template '" + category + "' has no strokes");
  for (const auto& s : strokes)
    if (s.size() < 2) throw Error(Errc::TemplateBankError, "stroke with fewer than 2 points in '" + category + "'");
  StrokeTemplate t{std::move(category), std::move(strokes), {}};
  t.bbox = bounding_box(t.strokes);
  return t;
}

TemplateBank TemplateBank::parse(std::string_view ndjson) {
  TemplateBank bank;
  std::size_t line_no = 0;
  std::istringstream in{std::string(ndjson)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      std::vector<Polyline> strokes;
      for (const auto& s : j.at("drawing")) {
        const auto& xs = s.at(0);
        const auto& ys = s.at(1);
        if (xs.size() != ys.size()) throw Error(Errc::TemplateBankError, "x/y length mismatch");
        Polyline pl;
        for (std::size_t i = 0; i < xs.size(); ++i) pl.push_back({xs[i].get<double>(), ys[i].get<double>()});
        strokes.push_back(std::move(pl));
      }
      bank.add(make_template(text::to_lower(j.at("word").get<std::string>()), std::move(strokes)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::TemplateBankError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (bank.empty()) throw Error(Errc::TemplateBankError, "template bank is empty");
  return bank;
}

TemplateBank TemplateBank::load(const std::string& path) {
  std::string content;
  try {
    content = text::read_file(path);
  } catch (const Error& e) {
    throw Error(Errc::TemplateBankError, e.what());
  }
  return parse(content);
}

void TemplateBank::add(StrokeTemplate t) {
  if (std::find(categories_.begin(), categories_.end(), t.category) == categories_.end())
    categories_.push_back(t.category);
  templates_.push_back(std::move(t));
}

const StrokeTemplate* TemplateBank::find(std::string_view category) const {
  for (const auto& t : templates_)
    if (t.category == category) return &t;
  return nullptr;
}

const StrokeTemplate& TemplateBank::resolve(std::string_view category, const concepts::ConceptMapper* mapper,
                                            std::string_view context) const {
  if (const auto* t = find(category)) return *t;
  if (mapper && !categories_.empty()) {
    try {
      const auto m = mapper->map_to(category, context.empty() ? category : context, categories_);
      if (const auto* t = find(m.target)) return *t;
    } catch (const Error&) {
    }
  }
  throw Error(Errc::MissingTemplate, "no template for category '" + std::string(category) + "'");
}

PathGroup render_node(const StrokeTemplate& tmpl, const layout::LayoutBox& box, std::string color,
                      double stroke_weight) {
  if (!(box.w > 0) || !(box.h > 0)) throw Error(Errc::DegenerateBox, "box has zero area");
  const double tw = tmpl.bbox.w(), th = tmpl.bbox.h();
  double s = 0.0;
  if (tw > 0 && th > 0) {
    s = std::min(box.w / tw, box.h / th);
  } else if (tw > 0) {
    s = box.w / tw;
  } else if (th > 0) {
    s = box.h / th;
  }
  const double ox = box.x + (box.w - tw * s) / 2;
  const double oy = box.y + (box.h - th * s) / 2;
  PathGroup g{{}, std::move(color), stroke_weight};
  for (const auto& stroke : tmpl.strokes) {
    Polyline pl;
    pl.reserve(stroke.size());
    for (const auto& p : stroke) pl.push_back({ox + (p.x - tmpl.bbox.x0) * s, oy + (p.y - tmpl.bbox.y0) * s});
    g.strokes.push_back(std::move(pl));
  }
  return g;
}

std::map<EntityId, EntityStyle> styles_of(const concepts::CanonicalSceneGraph& graph) {
  std::map<EntityId, EntityStyle> out;
  for (const auto& n : graph.nodes) out[n.id] = {n.category, n.color, n.stroke_weight, n.display};
  return out;
}

SvgScene render_scene(const layout::SceneLayout& layout, const TemplateBank& bank,
                      const std::map<EntityId, EntityStyle>& styles, const concepts::ConceptMapper* mapper) {
  std::vector<const layout::LayoutBox*> order;
  for (const auto& b : layout.boxes) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->z < b->z; });

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
        "viewBox=\"0 0 1000 1000\">\n";
  SvgScene scene;
  for (const auto* box : order) {
    auto it = styles.find(box->id);
    if (it == styles.end())
      throw Error(Errc::MissingTemplate, "no category for entity " + std::to_string(box->id.value));
    const auto& style = it->second;
    const auto& tmpl = bank.resolve(style.category, mapper, style.context);
    const auto group = render_node(tmpl, *box, style.color, style.stroke_weight);
    os << "  <g id=\"entity-" << box->id.value << "\" data-category=\"" << xml_escape(style.category)
       << "\" data-z=\"" << box->z << "\" stroke=\"" << xml_escape(group.color) << "\" stroke-width=\""
       << number(group.stroke_weight) << "\" fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
    for (const auto& pl : group.strokes) {
      os << "    <polyline points=\"";
      for (std::size_t i = 0; i < pl.size(); ++i) {
        if (i) os << ' ';
        os << fixed3(pl[i].x * kCanvasUnits) << ',' << fixed3(pl[i].y * kCanvasUnits);
      }
      os << "\"/>\n";
    }
    os << "  </g>\n";
    ++scene.group_count;
  }
  os << "</svg>\n";
  scene.document = os.str();
  return scene;
}

}  // namespace taletorium::render
