#include "taletorium/session_service.hpp"

#include <algorithm>
#include <cstdlib>

#include "taletorium/error.hpp"
#include "taletorium/text.hpp"

namespace taletorium::session {
namespace {

constexpr const char* kSnapshotFormat = "taletorium-session/1";

struct State {
  story::Story story;
  parser::DoodlerGraph graph;
  coref::EntityRegistry registry;
  Visual visual;
  long revision = 0;
  std::set<EntityId> fresh;  // characters added since the last step
};

io::Json layout_payload(const Visual& v) { return {{"layout", io::to_json(v.layout, render::styles_of(v.scene))}}; }

std::map<EntityId, coref::Rect> box_positions(const layout::SceneLayout& layout) {
  std::map<EntityId, coref::Rect> out;
  for (const auto& b : layout.boxes) out[b.id] = {b.x, b.y, b.w, b.h};
  return out;
}

coref::Rect position_from_strokes(const DoodleRequest& req) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& s : req.strokes.strokes)
    for (const auto& p : s) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  const double cw = req.canvas_width > 0 ? req.canvas_width : 1000;
  const double ch = req.canvas_height > 0 ? req.canvas_height : 1000;
  coref::Rect r{std::clamp(x0 / cw, 0.0, 1.0), std::clamp(y0 / ch, 0.0, 1.0), 0, 0};
  r.w = std::max(0.01, std::clamp(x1 / cw, 0.0, 1.0) - r.x);
  r.h = std::max(0.01, std::clamp(y1 / ch, 0.0, 1.0) - r.y);
  return r;
}

io::Json doodle_request_json(const DoodleRequest& req) {
  io::Json j = io::to_json(req.strokes);
  if (req.position)
    j["position"] = {{"x", req.position->x}, {"y", req.position->y}, {"w", req.position->w}, {"h", req.position->h}};
  j["canvas"] = {{"width", req.canvas_width}, {"height", req.canvas_height}};
  return j;
}

DoodleRequest doodle_request_from(const io::Json& j) {
  DoodleRequest req;
  req.strokes = io::strokes_from_json(j);
  if (j.contains("position") && !j["position"].is_null()) {
    const auto& p = j["position"];
    req.position = coref::Rect{p.value("x", 0.0), p.value("y", 0.0), p.value("w", 0.0), p.value("h", 0.0)};
  }
  if (j.contains("canvas")) {
    req.canvas_width = j["canvas"].value("width", 1000.0);
    req.canvas_height = j["canvas"].value("height", 1000.0);
  }
  return req;
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("TALETORIUM_DATA"); env && *env) return env;
  return TALETORIUM_DATA_DIR;
}

DataPaths DataPaths::from_root(const std::filesystem::path& root) {
  return {root / "corpus",       root / "lexicon.tsv",  root / "palette.txt",
          root / "stoplist.txt", root / "vectors.txt",  root / "vg81.json",
          root / "strokes.ndjson", root / "sentence_templates.txt", root / "animacy.tsv"};
}

std::shared_ptr<const Resources> Resources::load(const DataPaths& paths,
                                                 const std::optional<std::filesystem::path>& model_path) {
  auto r = std::make_shared<Resources>();
  r->lexicon = parser::Lexicon::load(paths.lexicon.string());
  r->palette = parser::load_palette(paths.palette.string());
  r->stoplist = story::load_stoplist(paths.stoplist.string());
  r->vectors = concepts::WordVectorProvider::load(paths.vectors.string());
  r->vocab = concepts::CanonicalVocab::load(paths.vocab.string());
  r->bank = render::TemplateBank::load(paths.templates.string());
  r->sentences = story::SentenceTemplates::load(paths.sentences.string());
  r->animacy = coref::load_animacy(paths.animacy.string());
  r->model = model_path ? story::PlannerModel::load(model_path->string())
                        : story::train_planner(paths.corpus, kFragmentsPerStory, r->stoplist, r->lexicon);
  r->mapper = std::make_unique<concepts::ConceptMapper>(r->vectors, r->vocab);
  r->recognizer = std::make_unique<sketch::Recognizer>(r->bank);
  return r;
}

Visual visualize(const parser::DoodlerGraph& graph, const std::vector<story::StoryFragment>& fragments,
                 const Resources& res, std::uint64_t seed) {
  auto fragment_text = [&](int index) -> std::string {
    if (index >= 0 && static_cast<std::size_t>(index) < fragments.size())
      return fragments[static_cast<std::size_t>(index)].text;
    return {};
  };
  std::map<EntityId, std::string> node_ctx;
  for (const auto& [id, n] : graph.nodes) {
    auto t = fragment_text(n.first_mention.fragment);
    node_ctx[id] = t.empty() ? n.category : t;
  }
  std::map<int, std::string> edge_ctx;
  for (const auto& e : graph.edges) {
    auto t = fragment_text(e.fragment);
    if (!t.empty()) edge_ctx[e.fragment] = t;
  }
  Visual v;
  v.scene = res.mapper->map_graph(graph, node_ctx, edge_ctx);
  const auto constraints = layout::derive_constraints(v.scene, res.vocab.relation_kinds);
  v.layout = layout::compose_layout(v.scene, constraints, 1.0, seed);
  v.svg = render::render_scene(v.layout, res.bank, render::styles_of(v.scene), res.mapper.get()).document;
  return v;
}

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::FragmentAdded: return "fragment_added";
    case EventKind::NodeAdded: return "node_added";
    case EventKind::NodeRemoved: return "node_removed";
    case EventKind::LayoutUpdated: return "layout_updated";
  }
  return "layout_updated";
}

io::Json to_json(const EventRecord& e) {
  return {{"revision", e.revision}, {"kind", event_kind_name(e.kind)}, {"payload", e.payload}};
}

struct SessionManager::Session {
  CreateArgs args;
  std::mutex write;  // serializes mutations
  mutable std::mutex state_mutex;
  mutable std::condition_variable changed;
  State state;
  std::vector<EventRecord> events;
  io::Json ops = io::Json::array();

  State copy() const {
    std::lock_guard lock(state_mutex);
    return state;
  }

  std::vector<EventRecord> commit(State next, std::vector<std::pair<EventKind, io::Json>> emitted,
                                  std::optional<io::Json> op) {
    std::vector<EventRecord> out;
    {
      std::lock_guard lock(state_mutex);
      for (auto& [kind, payload] : emitted) {
        out.push_back({++next.revision, kind, std::move(payload)});
        events.push_back(out.back());
      }
      if (op) ops.push_back(std::move(*op));
      state = std::move(next);
    }
    changed.notify_all();
    return out;
  }
};

SessionManager::SessionManager(std::shared_ptr<const Resources> resources) : res_(std::move(resources)) {}

SessionManager::~SessionManager() { shutdown(); }

void SessionManager::shutdown() {
  stopping_ = true;
  std::lock_guard lock(mutex_);
  for (auto& [id, s] : sessions_) {
    std::lock_guard slock(s->state_mutex);
    s->changed.notify_all();
  }
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(Errc::NotFound, "no session '" + id + "'");
  return it->second;
}

std::string SessionManager::create_session(const CreateArgs& args) {
  if (text::trim(args.title).empty()) throw Error(Errc::BadRequest, "title is empty");
  if (args.characters.empty()) throw Error(Errc::BadRequest, "cast is empty");
  if (args.characters.size() > story::kDefaultMaxCast)
    throw Error(Errc::BadRequest, "at most " + std::to_string(story::kDefaultMaxCast) + " characters");
  if (args.length < 1) throw Error(Errc::BadRequest, "length must be >= 1");

  auto s = std::make_shared<Session>();
  s->args = args;
  State st;
  st.registry = coref::EntityRegistry(res_->animacy);
  st.story = {args.title, {}, {{0, args.title, {}}}, args.length, args.seed};
  for (const auto& raw : args.characters) {
    const auto name = text::to_lower(text::trim(raw));
    if (name.empty() || text::words(name).size() != 1)
      throw Error(Errc::BadRequest, "character name must be a single word: '" + raw + "'");
    if (st.registry.lookup(name)) throw Error(Errc::BadRequest, "duplicate character '" + name + "'");
    parser::DoodlerNode node;
    node.id = st.graph.allocate_id();
    node.category = name;
    node = parser::assign_style(std::move(node), res_->palette, args.seed);
    try {
      st.story.cast.push_back(story::make_character(node.id, name, res_->vectors));
    } catch (const Error&) {
      throw Error(Errc::BadRequest, "unknown character '" + name + "'");
    }
    st.registry.bind(name, node.id);
    st.registry.record_mention(node.id, node.first_mention);
    st.graph.nodes.emplace(node.id, std::move(node));
  }
  st.visual = visualize(st.graph, st.story.fragments, *res_, args.seed);
  auto payload = layout_payload(st.visual);
  s->commit(std::move(st), {{EventKind::LayoutUpdated, std::move(payload)}}, std::nullopt);

  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::move(s));
  return id;
}

StepResult SessionManager::step(const std::string& id) {
  auto s = find(id);
  std::lock_guard w(s->write);
  State st = s->copy();
  const auto j = st.story.fragments.size();
  if (j >= static_cast<std::size_t>(st.story.length)) throw Error(Errc::StoryFinished, "story is complete");
  if (st.story.cast.empty()) throw Error(Errc::NoCharacters, "cast is empty");

  auto plan = story::plan_keywords(st.story.fragments.back(), st.story.cast, res_->model, st.story.seed, st.fresh);
  auto fragment = story::realize_fragment(plan, st.story.cast, res_->sentences, st.story.seed);
  fragment.index = static_cast<int>(j);
  const coref::ParseContext ctx{res_->lexicon, res_->palette, st.story.seed};
  st.graph = coref::story_update(st.graph, st.registry, fragment, st.story.fragments, ctx);
  st.story.fragments.push_back(fragment);
  st.fresh.clear();
  st.visual = visualize(st.graph, st.story.fragments, *res_, st.story.seed);

  auto payload = layout_payload(st.visual);
  auto events = s->commit(std::move(st),
                          {{EventKind::FragmentAdded, {{"fragment", io::to_json(fragment)}}},
                           {EventKind::LayoutUpdated, std::move(payload)}},
                          io::Json{{"op", "step"}});
  return {fragment, events.back().revision, events};
}

DoodleResult SessionManager::submit_doodle(const std::string& id, const DoodleRequest& request) {
  auto s = find(id);
  std::size_t points = 0;
  for (const auto& st : request.strokes.strokes) points += st.size();
  if (points < 2) throw Error(Errc::BadRequest, "a doodle needs at least 2 points");

  std::optional<sketch::Recognition> rec;
  try {
    rec = res_->recognizer->recognize(request.strokes);
  } catch (const Error& e) {
    if (e.code() == Errc::DegenerateSketch) throw Error(Errc::BadRequest, e.what());
    throw;
  }

  std::lock_guard w(s->write);
  State st = s->copy();
  DoodleResult result{rec, std::nullopt, st.revision, {}};
  if (!rec) return result;

  auto& cast = st.story.cast;
  const auto member = std::find_if(cast.begin(), cast.end(), [&](const auto& c) { return c.name == rec->category; });
  if (member == cast.end() && cast.size() >= story::kDefaultMaxCast)
    throw Error(Errc::CastFull, "cast already has " + std::to_string(cast.size()) + " characters");

  parser::DoodlerNode probe;
  probe.category = rec->category;
  const auto color = parser::assign_style(probe, res_->palette, st.story.seed).color;
  const auto where = MentionLocation{static_cast<int>(st.story.fragments.size()), 0, 0};
  const auto position = request.position.value_or(position_from_strokes(request));
  auto upd = coref::character_update(st.graph, st.registry, coref::AddCharacter{rec->category, color, position},
                                     box_positions(st.visual.layout), where);
  st.graph = std::move(upd.graph);
  if (member == cast.end()) cast.push_back(story::make_character(upd.entity, rec->category, res_->vectors));
  st.fresh.insert(upd.entity);
  st.visual = visualize(st.graph, st.story.fragments, *res_, st.story.seed);

  io::Json added = {{"entity", upd.entity.value}, {"category", rec->category}, {"score", rec->score},
                    {"reused", upd.reused}};
  if (upd.position_edge)
    added["edge"] = {{"src", upd.position_edge->src.value},
                     {"dst", upd.position_edge->dst.value},
                     {"relation", upd.position_edge->relation}};
  auto payload = layout_payload(st.visual);
  auto events = s->commit(std::move(st),
                          {{EventKind::NodeAdded, std::move(added)}, {EventKind::LayoutUpdated, std::move(payload)}},
                          io::Json{{"op", "doodle"}, {"request", doodle_request_json(request)}});
  result.entity = upd.entity;
  result.revision = events.back().revision;
  result.events = std::move(events);
  return result;
}

std::vector<EventRecord> SessionManager::remove_character(const std::string& id, EntityId entity) {
  auto s = find(id);
  std::lock_guard w(s->write);
  State st = s->copy();
  if (!st.graph.nodes.contains(entity))
    throw Error(Errc::NotFound, "no entity " + std::to_string(entity.value));
  const auto category = st.graph.nodes.at(entity).category;
  auto upd = coref::character_update(st.graph, st.registry, coref::RemoveCharacter{entity}, {});
  st.graph = std::move(upd.graph);
  std::erase_if(st.story.cast, [&](const auto& c) { return c.id == entity; });
  st.fresh.erase(entity);
  st.visual = visualize(st.graph, st.story.fragments, *res_, st.story.seed);
  auto payload = layout_payload(st.visual);
  return s->commit(std::move(st),
                   {{EventKind::NodeRemoved, {{"entity", entity.value}, {"category", category}}},
                    {EventKind::LayoutUpdated, std::move(payload)}},
                   io::Json{{"op", "remove"}, {"entity", entity.value}});
}

std::string SessionManager::get_scene(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  return s->state.visual.svg;
}

story::Story SessionManager::story(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  return s->state.story;
}

std::vector<CastMember> SessionManager::cast(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  std::vector<CastMember> out;
  for (const auto& c : s->state.story.cast) out.push_back({c.id, c.name});
  return out;
}

parser::DoodlerGraph SessionManager::graph(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  return s->state.graph;
}

layout::SceneLayout SessionManager::layout(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  return s->state.visual.layout;
}

long SessionManager::revision(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  return s->state.revision;
}

std::vector<EventRecord> SessionManager::events_since(const std::string& id, long since,
                                                      std::chrono::milliseconds wait) const {
  auto s = find(id);
  std::unique_lock lock(s->state_mutex);
  auto ready = [&] { return stopping_ || (!s->events.empty() && s->events.back().revision > since); };
  if (wait.count() > 0) s->changed.wait_for(lock, wait, ready);
  std::vector<EventRecord> out;
  for (const auto& e : s->events)
    if (e.revision > since) out.push_back(e);
  return out;
}

io::Json SessionManager::snapshot(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->state_mutex);
  io::Json events = io::Json::array();
  for (const auto& e : s->events) events.push_back(to_json(e));
  return {{"format", kSnapshotFormat},
          {"create",
           {{"title", s->args.title},
            {"characters", s->args.characters},
            {"length", s->args.length},
            {"seed", s->args.seed}}},
          {"ops", s->ops},
          {"revision", s->state.revision},
          {"events", events}};
}

std::string SessionManager::restore(const io::Json& snap) {
  CreateArgs args;
  io::Json ops;
  long expected = 0;
  try {
    if (snap.at("format").get<std::string>() != kSnapshotFormat) throw Error(Errc::Parse, "unknown snapshot format");
    const auto& c = snap.at("create");
    args.title = c.at("title").get<std::string>();
    args.characters = c.at("characters").get<std::vector<std::string>>();
    args.length = c.at("length").get<int>();
    args.seed = c.at("seed").get<std::uint64_t>();
    ops = snap.at("ops");
    expected = snap.at("revision").get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("bad snapshot: ") + e.what());
  }

  const auto id = create_session(args);
  try {
    for (const auto& op : ops) {
      const auto kind = op.at("op").get<std::string>();
      if (kind == "step") {
        step(id);
      } else if (kind == "doodle") {
        submit_doodle(id, doodle_request_from(op.at("request")));
      } else if (kind == "remove") {
        remove_character(id, EntityId{op.at("entity").get<std::uint64_t>()});
      } else {
        throw Error(Errc::Parse, "unknown op '" + kind + "'");
      }
    }
    if (revision(id) != expected) throw Error(Errc::Parse, "replay did not reproduce the recorded revision");
  } catch (const nlohmann::json::exception& e) {
    std::lock_guard lock(mutex_);
    sessions_.erase(id);
    throw Error(Errc::Parse, std::string("bad snapshot op: ") + e.what());
  } catch (...) {
    std::lock_guard lock(mutex_);
    sessions_.erase(id);
    throw;
  }
  return id;
}

}  // namespace taletorium::session
