#include <doctest.h>

#include <regex>

#include "support.hpp"
#include "taletorium/doodle_renderer.hpp"
#include "taletorium/error.hpp"

namespace tt = taletorium;
using namespace tt::render;
using tt::layout::LayoutBox;
using tt::layout::SceneLayout;

namespace {

const tt::session::Resources& res() { return support::resources(); }

using support::error_code;

std::vector<std::string> group_ids(const std::string& svg) {
  static const std::regex re(R"re(<g id="entity-(\d+)")re");
  std::vector<std::string> out;
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) out.push_back((*it)[1]);
  return out;
}

std::vector<int> group_z(const std::string& svg) {
  static const std::regex re(R"re(data-z="(-?\d+)")re");
  std::vector<int> out;
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) out.push_back(std::stoi((*it)[1]));
  return out;
}

struct Story0 {
  tt::concepts::CanonicalSceneGraph graph;
  SceneLayout layout;
};

Story0 story0() {
  Story0 s{support::story0_scene(), {}};
  const auto c = tt::layout::derive_constraints(s.graph, res().vocab.relation_kinds);
  s.layout = tt::layout::compose_layout(s.graph, c, 1.0, 0);
  return s;
}

}  // namespace

TEST_SUITE("doodle_renderer") {
  TEST_CASE("bank lookup") {
    const auto* cat = res().bank.find("cat");
    REQUIRE(cat != nullptr);
    CHECK(cat->category == "cat");
    CHECK(&res().bank.resolve("cat", nullptr) == cat);
    CHECK(res().bank.find("unicorn") == nullptr);
  }

  TEST_CASE("missing categories fall back to the mapped template") {
    const support::MappingOracle oracle(support::data_dir() / "vectors.txt");
    const std::string context = "the unicorn trapped in the tree";
    const auto& t = res().bank.resolve("unicorn", res().mapper.get(), context);
    CHECK(t.category == oracle.argmax("unicorn", context, res().bank.categories()));
    CHECK(t.category == "horse");
    CHECK(error_code([] { res().bank.resolve("unicorn", nullptr); }) == tt::Errc::MissingTemplate);
  }

  TEST_CASE("bank errors") {
    CHECK(error_code([] { TemplateBank::parse(""); }) == tt::Errc::TemplateBankError);
    CHECK(error_code([] { TemplateBank::parse("{\"word\":\"x\",\"drawing\":[[[1],[1]]]}\n"); }) ==
          tt::Errc::TemplateBankError);
    CHECK(error_code([] { TemplateBank::parse("not json\n"); }) == tt::Errc::TemplateBankError);
    CHECK(error_code([] { TemplateBank::load("/nonexistent/bank.ndjson"); }) == tt::Errc::TemplateBankError);
    const auto two = TemplateBank::parse(
        "{\"word\":\"a\",\"drawing\":[[[0,10],[0,10]]]}\n{\"word\":\"a\",\"drawing\":[[[0,5],[0,9]]]}\n");
    CHECK(two.templates().size() == 2);
    CHECK(two.categories().size() == 1);
    CHECK(two.find("a")->strokes[0][1] == Point{10, 10});
  }

  TEST_CASE("identity fit") {
    const auto t = make_template("box", {{{0, 0}, {0.25, 0.5}}, {{0.1, 0.2}, {0.2, 0.1}}});
    const LayoutBox box{tt::EntityId{1}, t.bbox.x0, t.bbox.y0, t.bbox.w(), t.bbox.h(), 0};
    const auto g = render_node(t, box, "#FF0000", 3.0);
    REQUIRE(g.strokes.size() == t.strokes.size());
    for (std::size_t s = 0; s < g.strokes.size(); ++s)
      for (std::size_t i = 0; i < g.strokes[s].size(); ++i) {
        CHECK(g.strokes[s][i].x == doctest::Approx(t.strokes[s][i].x).epsilon(1e-6));
        CHECK(g.strokes[s][i].y == doctest::Approx(t.strokes[s][i].y).epsilon(1e-6));
      }
    CHECK(g.color == "#FF0000");
    CHECK(g.stroke_weight == 3.0);
  }

  TEST_CASE("degenerate boxes") {
    const auto& t = *res().bank.find("cat");
    CHECK(error_code([&] { render_node(t, LayoutBox{tt::EntityId{1}, 0.1, 0.1, 0, 0.2, 0}, "#000000", 2); }) ==
          tt::Errc::DegenerateBox);
    CHECK(error_code([&] { render_node(t, LayoutBox{tt::EntityId{1}, 0.1, 0.1, 0.2, 0, 0}, "#000000", 2); }) ==
          tt::Errc::DegenerateBox);
  }

  TEST_CASE("letterboxed points stay in their box and are centered") {
    tt::SeededRng rng(5);
    for (const auto& t : res().bank.templates()) {
      const double w = rng.uniform(0.05, 0.6), h = rng.uniform(0.05, 0.6);
      const LayoutBox box{tt::EntityId{1}, rng.uniform(0, 1 - w), rng.uniform(0, 1 - h), w, h, 0};
      const auto g = render_node(t, box, "#000000", 2);
      const auto bb = bounding_box(g.strokes);
      CHECK(bb.x0 >= box.x - 1e-6);
      CHECK(bb.y0 >= box.y - 1e-6);
      CHECK(bb.x1 <= box.x + box.w + 1e-6);
      CHECK(bb.y1 <= box.y + box.h + 1e-6);
      CHECK((bb.x0 + bb.x1) / 2 == doctest::Approx(box.cx()).epsilon(1e-9));
      CHECK((bb.y0 + bb.y1) / 2 == doctest::Approx(box.cy()).epsilon(1e-9));
      // aspect preserved
      CHECK(bb.w() * t.bbox.h() == doctest::Approx(bb.h() * t.bbox.w()).epsilon(1e-9));
    }
  }

  TEST_CASE("style attributes pass through") {
    SceneLayout l;
    l.boxes = {{tt::EntityId{1}, 0.2, 0.2, 0.3, 0.3, 0}};
    const std::map<tt::EntityId, EntityStyle> styles{{tt::EntityId{1}, {"cat", "#FF0000", 3.0, ""}}};
    const auto svg = render_scene(l, res().bank, styles).document;
    CHECK(svg.find(R"(stroke="#FF0000")") != std::string::npos);
    CHECK(svg.find(R"(stroke-width="3")") != std::string::npos);
    CHECK(svg.find(R"(fill="none")") != std::string::npos);
  }

  TEST_CASE("background before characters") {
    SceneLayout l;
    l.boxes = {{tt::EntityId{1}, 0.3, 0.2, 0.2, 0.2, 2}, {tt::EntityId{2}, 0.05, 0.5, 0.9, 0.5, 0}};
    const std::map<tt::EntityId, EntityStyle> styles{{tt::EntityId{1}, {"penguin"}}, {tt::EntityId{2}, {"pool"}}};
    const auto svg = render_scene(l, res().bank, styles);
    CHECK(group_ids(svg.document) == std::vector<std::string>{"2", "1"});
    CHECK(svg.document.find("data-category=\"pool\"") < svg.document.find("data-category=\"penguin\""));
  }

  TEST_CASE("empty layout") {
    const auto svg = render_scene(SceneLayout{}, res().bank, {});
    CHECK(svg.group_count == 0);
    CHECK(support::xml_well_formed(svg.document));
    CHECK(svg.document.find(R"(viewBox="0 0 1000 1000")") != std::string::npos);
  }

  TEST_CASE("owl and penguin scene renders seven groups in z order") {
    const auto s = story0();
    const auto svg = render_scene(s.layout, res().bank, styles_of(s.graph), res().mapper.get());
    CHECK(svg.group_count == 7);
    CHECK(group_ids(svg.document).size() == 7);
    CHECK(support::xml_well_formed(svg.document));
    const auto z = group_z(svg.document);
    CHECK(std::is_sorted(z.begin(), z.end()));
  }

  TEST_CASE("random scenes give well-formed, z-ordered documents") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto rs = support::random_scene(seed, res().vocab);
      const auto l = tt::layout::compose_layout(rs.graph, rs.constraints, 1.0, seed);
      const auto svg = render_scene(l, res().bank, styles_of(rs.graph), res().mapper.get());
      CHECK(support::xml_well_formed(svg.document));
      CHECK(svg.group_count == l.boxes.size());
      const auto z = group_z(svg.document);
      CHECK(z.size() == l.boxes.size());
      CHECK(std::is_sorted(z.begin(), z.end()));
    }
  }

  TEST_CASE("group coordinates stay inside their boxes") {
    const auto s = story0();
    const auto svg = render_scene(s.layout, res().bank, styles_of(s.graph), res().mapper.get()).document;
    static const std::regex group_re(R"re(<g id="entity-(\d+)"[^>]*>([\s\S]*?)</g>)re");
    static const std::regex num_re(R"((-?\d+(?:\.\d+)?),(-?\d+(?:\.\d+)?))");
    int groups = 0;
    for (std::sregex_iterator it(svg.begin(), svg.end(), group_re), end; it != end; ++it, ++groups) {
      const auto* box = s.layout.find(tt::EntityId{std::stoull((*it)[1])});
      REQUIRE(box != nullptr);
      const std::string body = (*it)[2];
      for (std::sregex_iterator p(body.begin(), body.end(), num_re); p != end; ++p) {
        const double x = std::stod((*p)[1]) / 1000, y = std::stod((*p)[2]) / 1000;
        // 3-decimal printing in canvas units
        CHECK(x >= box->x - 1e-6 - 5e-7);
        CHECK(x <= box->x + box->w + 1e-6 + 5e-7);
        CHECK(y >= box->y - 1e-6 - 5e-7);
        CHECK(y <= box->y + box->h + 1e-6 + 5e-7);
      }
    }
    CHECK(groups == 7);
  }
}
