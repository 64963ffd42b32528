#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/error.hpp"
#include "taletorium/coref_linker.hpp"
#include "taletorium/scene_composer.hpp"
#include "taletorium/seeding.hpp"
#include "taletorium/session_service.hpp"
#include "taletorium/sketch_recognizer.hpp"
#include "taletorium/story_engine.hpp"

namespace support {

namespace tt = taletorium;

std::filesystem::path data_dir();
/// Loaded once per process.
const tt::session::Resources& resources();
std::shared_ptr<const tt::session::Resources> shared_resources();

/// Fragment 0 is the title, fragment k the k-th paragraph.
std::vector<tt::story::StoryFragment> story_fragments(const std::string& corpus_file);

struct CorefRun {
  tt::parser::DoodlerGraph graph;
  tt::coref::EntityRegistry registry;
};
CorefRun run_story(const std::vector<tt::story::StoryFragment>& fragments, bool coreference);

// RAKE: co-occurrence matrix over candidate phrases, scored word by word.
std::vector<std::vector<tt::story::ScoredKeyword>> rake_oracle(const std::string& text, std::size_t fragment_count,
                                                               const tt::story::Stoplist& stoplist);
std::string random_text(tt::SeededRng& rng, std::size_t max_words);
tt::story::Stoplist small_stoplist();

// Fragment-substitution argmax computed straight from the vector file.
class MappingOracle {
 public:
  explicit MappingOracle(const std::filesystem::path& vectors_file);
  std::string argmax(const std::string& label, const std::string& fragment,
                     const std::vector<std::string>& candidates) const;

 private:
  std::vector<double> embed(const std::vector<std::string>& words) const;
  std::map<std::string, std::vector<double>> vectors_;
};

// Geometric re-check of hard constraints, written apart from the solver.
std::size_t hard_violations(const tt::layout::SceneLayout& layout,
                            const std::vector<tt::layout::RelationConstraint>& constraints);

struct RandomScene {
  tt::concepts::CanonicalSceneGraph graph;
  std::vector<tt::layout::RelationConstraint> constraints;
};
/// 1..8 nodes, up to 10 constraints on pairs i < j with uniform kinds. With
/// `acyclic`, a kind that would close an ordering cycle on the x or y axis
/// (left-of/right-of, above/below/on) is redrawn.
RandomScene random_scene(std::uint64_t seed, const tt::concepts::CanonicalVocab& vocab, bool acyclic = true);

bool xml_well_formed(const std::string& document);

/// Scene graph of the first paragraph of the owl and penguin story.
tt::concepts::CanonicalSceneGraph story0_scene();

// Doodles.
tt::sketch::StrokeSet scribble(std::uint64_t seed);
tt::sketch::StrokeSet transformed(const tt::render::StrokeTemplate& t, double dx, double dy, double scale,
                                  double degrees);
/// Jitter sigma 2% of the diagonal, rotation within +-20 degrees, scale 0.5-2.
tt::sketch::StrokeSet perturbed(const tt::render::StrokeTemplate& t, std::uint64_t seed);
/// Evenly spread categories of the bank.
std::vector<std::string> sample_categories(std::size_t n);

double gaussian(tt::SeededRng& rng);

/// Error code thrown by `f`, or nullopt when it returns normally.
template <class F>
std::optional<tt::Errc> error_code(F&& f) {
  try {
    f();
  } catch (const tt::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace support
