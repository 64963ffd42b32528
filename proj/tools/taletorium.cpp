// taletorium command-line front end.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/coref_linker.hpp"
#include "taletorium/doodle_renderer.hpp"
#include "taletorium/error.hpp"
#include "taletorium/fragment_parser.hpp"
#include "taletorium/graph_io.hpp"
#include "taletorium/http_server.hpp"
#include "taletorium/scene_composer.hpp"
#include "taletorium/session_service.hpp"
#include "taletorium/sketch_recognizer.hpp"
#include "taletorium/story_engine.hpp"
#include "taletorium/text.hpp"

namespace tt = taletorium;
namespace fs = std::filesystem;

namespace {

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    tt::io::write_text_file(out_path, content);
  }
}

std::vector<tt::story::StoryFragment> fragments_of(const tt::io::Json& doc) {
  std::vector<tt::story::StoryFragment> out;
  if (!doc.contains("fragments")) return out;
  int i = 0;
  for (const auto& f : doc["fragments"]) out.push_back({i++, f.get<std::string>(), {}});
  return out;
}

tt::http::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taletorium: fairy-tale co-creation engine"};
  app.require_subcommand(1);
  std::string data_dir = tt::session::default_data_dir().string();
  app.add_option("--data", data_dir, "data directory")->capture_default_str();
  auto paths = [&] { return tt::session::DataPaths::from_root(data_dir); };

  // train
  auto* train = app.add_subcommand("train", "build a planner model from a story corpus");
  std::string corpus, model_out;
  std::size_t fragment_count = tt::session::kFragmentsPerStory;
  train->add_option("--corpus", corpus, "corpus directory")->required();
  train->add_option("--out", model_out, "model file")->required();
  train->add_option("--fragments", fragment_count, "fragments per story")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a story");
  std::string title, characters, model_in;
  int length = 5;
  std::uint64_t seed = 0;
  bool gen_json = false;
  gen->add_option("--title", title)->required();
  gen->add_option("--characters", characters, "comma-separated cast")->required();
  gen->add_option("--length", length)->capture_default_str();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--model", model_in, "planner model (trained from the bundled corpus when omitted)");
  gen->add_flag("--json", gen_json, "print the story as JSON");

  // parse
  auto* parse = app.add_subcommand("parse", "parse a fragment into a doodler graph");
  std::string text_in, out_path;
  parse->add_option("--text", text_in)->required();
  parse->add_option("--out", out_path);
  parse->add_option("--seed", seed);

  // update
  auto* update = app.add_subcommand("update", "apply the story-based update policy");
  std::string graph_in, fragment_in;
  bool no_coref = false;
  update->add_option("--graph", graph_in)->required();
  update->add_option("--fragment", fragment_in)->required();
  update->add_flag("--no-coref", no_coref, "disable pronoun resolution and entity linking");
  update->add_option("--out", out_path);
  update->add_option("--seed", seed);

  // map
  auto* map = app.add_subcommand("map", "map a doodler graph onto the canonical vocabulary");
  std::string vocab_in;
  map->add_option("--graph", graph_in)->required();
  map->add_option("--fragment", fragment_in, "context text (defaults to the graph's fragments)");
  map->add_option("--vocab", vocab_in);
  map->add_option("--out", out_path);

  // layout
  auto* lay = app.add_subcommand("layout", "compose a layout for a canonical scene graph");
  std::string scene_in;
  double aspect = 1.0;
  lay->add_option("--scene", scene_in)->required();
  lay->add_option("--seed", seed);
  lay->add_option("--aspect", aspect, "canvas width / height")->capture_default_str();
  lay->add_option("--out", out_path);

  // render
  auto* ren = app.add_subcommand("render", "render a layout to SVG");
  std::string layout_in, templates_in;
  ren->add_option("--layout", layout_in)->required();
  ren->add_option("--templates", templates_in);
  ren->add_option("--out", out_path);

  // recognize
  auto* rec = app.add_subcommand("recognize", "classify a stroke set");
  std::string strokes_in;
  double threshold = tt::sketch::kDefaultThreshold;
  rec->add_option("--strokes", strokes_in)->required();
  rec->add_option("--templates", templates_in);
  rec->add_option("--threshold", threshold)->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  int port = 8080;
  if (const char* env = std::getenv("TALETORIUM_PORT"); env && *env) port = std::atoi(env);
  std::string host = "127.0.0.1";
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--model", model_in);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto p = paths();
    if (*train) {
      const auto stop = tt::story::load_stoplist(p.stoplist.string());
      const auto lex = tt::parser::Lexicon::load(p.lexicon.string());
      const auto model = tt::story::train_planner(corpus, fragment_count, stop, lex);
      model.save(model_out);
      std::cout << "trained on " << tt::story::corpus_files(corpus).size() << " stories, "
                << model.keyword_scores.size() << " keywords\n";
    } else if (*gen) {
      const auto res = tt::session::Resources::load(p, model_in.empty() ? std::nullopt
                                                                         : std::optional<fs::path>(model_in));
      std::vector<tt::story::Character> cast;
      std::uint64_t next = 1;
      for (const auto& name : tt::text::split(characters, ","))
        cast.push_back(tt::story::make_character(tt::EntityId{next++}, tt::text::to_lower(tt::text::trim(name)),
                                                 res->vectors));
      const auto story = tt::story::generate_story(title, cast, length, res->model, res->sentences, seed);
      if (gen_json) {
        std::cout << tt::io::to_json(story).dump(2) << '\n';
      } else {
        for (const auto& f : story.fragments) std::cout << f.text << '\n';
      }
    } else if (*parse) {
      const auto lex = tt::parser::Lexicon::load(p.lexicon.string());
      const auto pal = tt::parser::load_palette(p.palette.string());
      auto doc = tt::io::to_json(tt::parser::parse_fragment(text_in, lex, pal, seed));
      doc["fragments"] = tt::io::Json::array({text_in});
      emit(out_path, doc.dump(2));
    } else if (*update) {
      const auto lex = tt::parser::Lexicon::load(p.lexicon.string());
      const auto pal = tt::parser::load_palette(p.palette.string());
      const auto doc = tt::io::read_json_file(graph_in);
      const auto graph = tt::io::doodler_graph_from_json(doc);
      auto prev = fragments_of(doc);
      auto registry = tt::coref::EntityRegistry::from_graph(graph, tt::coref::load_animacy(p.animacy.string()));
      const tt::story::StoryFragment fragment{static_cast<int>(prev.size()), fragment_in, {}};
      const tt::coref::ParseContext ctx{lex, pal, seed};
      const auto next = tt::coref::story_update(graph, registry, fragment, prev, ctx, {!no_coref});
      auto out = tt::io::to_json(next);
      out["fragments"] = tt::io::Json::array();
      for (const auto& f : prev) out["fragments"].push_back(f.text);
      out["fragments"].push_back(fragment_in);
      emit(out_path, out.dump(2));
    } else if (*map) {
      const auto vectors = tt::concepts::WordVectorProvider::load(p.vectors.string());
      const auto vocab = tt::concepts::CanonicalVocab::load(vocab_in.empty() ? p.vocab.string() : vocab_in);
      const auto doc = tt::io::read_json_file(graph_in);
      const auto graph = tt::io::doodler_graph_from_json(doc);
      const tt::concepts::ConceptMapper mapper(vectors, vocab);
      tt::concepts::CanonicalSceneGraph scene;
      if (!fragment_in.empty()) {
        scene = mapper.map_graph(graph, fragment_in);
      } else {
        const auto frags = fragments_of(doc);
        std::map<tt::EntityId, std::string> node_ctx;
        std::map<int, std::string> edge_ctx;
        auto text_at = [&](int i) {
          return i >= 0 && static_cast<std::size_t>(i) < frags.size() ? frags[static_cast<std::size_t>(i)].text
                                                                       : std::string();
        };
        for (const auto& [id, n] : graph.nodes) node_ctx[id] = text_at(n.first_mention.fragment);
        for (const auto& e : graph.edges) edge_ctx[e.fragment] = text_at(e.fragment);
        scene = mapper.map_graph(graph, node_ctx, edge_ctx);
      }
      auto out = tt::io::to_json(scene);
      out["constraints"] = tt::io::to_json(tt::layout::derive_constraints(scene, vocab.relation_kinds));
      emit(out_path, out.dump(2));
    } else if (*lay) {
      const auto doc = tt::io::read_json_file(scene_in);
      const auto scene = tt::io::scene_graph_from_json(doc);
      std::vector<tt::layout::RelationConstraint> constraints;
      if (doc.contains("constraints")) {
        constraints = tt::io::constraints_from_json(doc["constraints"]);
      } else {
        const auto vocab = tt::concepts::CanonicalVocab::load(p.vocab.string());
        constraints = tt::layout::derive_constraints(scene, vocab.relation_kinds);
      }
      const auto layout = tt::layout::compose_layout(scene, constraints, aspect, seed);
      emit(out_path, tt::io::to_json(layout, tt::render::styles_of(scene)).dump(2));
    } else if (*ren) {
      const auto doc = tt::io::read_json_file(layout_in);
      const auto bank = tt::render::TemplateBank::load(templates_in.empty() ? p.templates.string() : templates_in);
      const auto vectors = tt::concepts::WordVectorProvider::load(p.vectors.string());
      const auto vocab = tt::concepts::CanonicalVocab::load(p.vocab.string());
      const tt::concepts::ConceptMapper mapper(vectors, vocab);
      const auto svg = tt::render::render_scene(tt::io::layout_from_json(doc), bank,
                                                tt::io::styles_from_layout_json(doc), &mapper);
      emit(out_path, svg.document);
    } else if (*rec) {
      const auto bank = tt::render::TemplateBank::load(templates_in.empty() ? p.templates.string() : templates_in);
      const tt::sketch::Recognizer recognizer(bank);
      const auto strokes = tt::io::strokes_from_json(tt::io::read_json_file(strokes_in));
      const auto best = recognizer.best(strokes);
      tt::io::Json out = {{"recognized", nullptr}, {"best", best.category}, {"score", best.score}};
      if (best.score >= threshold) out["recognized"] = best.category;
      std::cout << out.dump(2) << '\n';
    } else if (*serve) {
      const auto res = tt::session::Resources::load(p, model_in.empty() ? std::nullopt
                                                                         : std::optional<fs::path>(model_in));
      tt::session::SessionManager sessions(res);
      tt::http::Server server(sessions);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      server.listen();
      sessions.shutdown();
    }
  } catch (const tt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
