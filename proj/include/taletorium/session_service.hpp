#pragma once

// Live co-creation sessions: story generation, graph updates, layout and
// rendering behind one writer per session, with an append-only event log.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/coref_linker.hpp"
#include "taletorium/doodle_renderer.hpp"
#include "taletorium/fragment_parser.hpp"
#include "taletorium/graph_io.hpp"
#include "taletorium/scene_composer.hpp"
#include "taletorium/sketch_recognizer.hpp"
#include "taletorium/story_engine.hpp"

namespace taletorium::session {

/// Data directory: $TALETORIUM_DATA when set, else the source tree's data/.
std::filesystem::path default_data_dir();

struct DataPaths {
  std::filesystem::path corpus, lexicon, palette, stoplist, vectors, vocab, templates, sentences, animacy;

  static DataPaths from_root(const std::filesystem::path& root);
};

inline constexpr std::size_t kFragmentsPerStory = 5;

/// Everything a session needs, loaded once and shared read-only.
struct Resources {
  parser::Lexicon lexicon;
  parser::Palette palette;
  story::Stoplist stoplist;
  concepts::WordVectorProvider vectors;
  concepts::CanonicalVocab vocab;
  render::TemplateBank bank;
  story::SentenceTemplates sentences;
  coref::AnimacyLexicon animacy;
  story::PlannerModel model;
  std::unique_ptr<concepts::ConceptMapper> mapper;
  std::unique_ptr<sketch::Recognizer> recognizer;

  /// Trains the planner from the corpus unless `model_path` is given.
  static std::shared_ptr<const Resources> load(const DataPaths& paths,
                                               const std::optional<std::filesystem::path>& model_path = {});
};

/// Scene geometry and drawing for a graph, shared by the session and CLI.
struct Visual {
  concepts::CanonicalSceneGraph scene;
  layout::SceneLayout layout;
  std::string svg;
};

Visual visualize(const parser::DoodlerGraph& graph, const std::vector<story::StoryFragment>& fragments,
                 const Resources& res, std::uint64_t seed);

struct CreateArgs {
  std::string title;
  std::vector<std::string> characters;
  int length = 5;
  std::uint64_t seed = 0;
};

enum class EventKind { FragmentAdded, NodeAdded, NodeRemoved, LayoutUpdated };

std::string_view event_kind_name(EventKind k);

struct EventRecord {
  long revision = 0;
  EventKind kind = EventKind::LayoutUpdated;
  io::Json payload;
};

struct DoodleRequest {
  sketch::StrokeSet strokes;
  std::optional<coref::Rect> position;  // normalized; derived from the strokes when absent
  double canvas_width = 1000, canvas_height = 1000;
};

struct DoodleResult {
  std::optional<sketch::Recognition> recognized;
  std::optional<EntityId> entity;
  long revision = 0;
  std::vector<EventRecord> events;
};

struct StepResult {
  story::StoryFragment fragment;
  long revision = 0;
  std::vector<EventRecord> events;
};

struct CastMember {
  EntityId id;
  std::string name;
};

class SessionManager {
 public:
  explicit SessionManager(std::shared_ptr<const Resources> resources);
  ~SessionManager();

  /// Throws BadRequest for an empty title or cast, more than 4 characters,
  /// a length below 1 or a character name the embedding cannot encode.
  std::string create_session(const CreateArgs& args);
  /// Throws StoryFinished once the story has `length` fragments.
  StepResult step(const std::string& id);
  /// Unrecognized strokes change nothing. Throws BadRequest for degenerate
  /// strokes and CastFull when a new character would exceed the cap.
  DoodleResult submit_doodle(const std::string& id, const DoodleRequest& request);
  std::vector<EventRecord> remove_character(const std::string& id, EntityId entity);

  std::string get_scene(const std::string& id) const;
  story::Story story(const std::string& id) const;
  std::vector<CastMember> cast(const std::string& id) const;
  parser::DoodlerGraph graph(const std::string& id) const;
  layout::SceneLayout layout(const std::string& id) const;
  long revision(const std::string& id) const;

  /// Events with revision > `since`. Blocks up to `wait` for new ones.
  std::vector<EventRecord> events_since(const std::string& id, long since,
                                        std::chrono::milliseconds wait = std::chrono::milliseconds(0)) const;

  /// Create args plus the ordered op log and event log.
  io::Json snapshot(const std::string& id) const;
  /// Replays a snapshot into a new session; throws Parse when the replay
  /// does not reproduce the recorded revision.
  std::string restore(const io::Json& snapshot);

  /// Wakes every event waiter; further waits return immediately.
  void shutdown();
  std::size_t size() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;

  std::shared_ptr<const Resources> res_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::atomic<bool> stopping_{false};
};

io::Json to_json(const EventRecord& e);

}  // namespace taletorium::session
