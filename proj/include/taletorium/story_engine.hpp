#pragma once

// Character-centric plan-and-write loop: RAKE storyline keywords, a
// table-driven keyword planner, and template sentence realization.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "taletorium/concept_mapper.hpp"
#include "taletorium/fragment_parser.hpp"
#include "taletorium/ids.hpp"

namespace taletorium::story {

using Stoplist = std::set<std::string, std::less<>>;

Stoplist load_stoplist(const std::string& path);

struct Character {
  EntityId id;
  std::string name;
  concepts::Vector features;

  friend bool operator==(const Character&, const Character&) = default;
};

struct StorylinePlan {
  int step = 1;
  /// character id -> keyword; nullopt when the character sits this step out.
  std::map<EntityId, std::optional<std::string>> entries;
};

struct StoryFragment {
  int index = 0;
  std::string text;
  std::vector<std::pair<EntityId, std::string>> sentences;

  friend bool operator==(const StoryFragment&, const StoryFragment&) = default;
};

struct Story {
  std::string title;
  std::vector<Character> cast;
  std::vector<StoryFragment> fragments;
  int length = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const Story&, const Story&) = default;
};

inline constexpr std::size_t kDefaultMaxCast = 4;
inline constexpr std::size_t kKeywordsPerFragment = 5;

struct ScoredKeyword {
  std::string phrase;
  double score = 0.0;

  friend bool operator==(const ScoredKeyword&, const ScoredKeyword&) = default;
};

/// Sentences split on . ! ? (trimmed, non-empty).
std::vector<std::string> split_sentences(std::string_view text);

/// Contiguous groups of near-equal size; earlier groups take the remainder.
std::vector<std::vector<std::string>> group_sentences(const std::vector<std::string>& sentences,
                                                      std::size_t fragment_count);

/// RAKE candidate phrases of one sentence (stopwords and punctuation delimit).
std::vector<std::vector<std::string>> candidate_phrases(std::string_view sentence, const Stoplist& stoplist);

/// Per-fragment top-5 keywords by RAKE degree/frequency score.
std::vector<std::vector<ScoredKeyword>> extract_keywords(std::string_view story_text, std::size_t fragment_count,
                                                         const Stoplist& stoplist);

struct Succession {
  std::string keyword;
  long count = 0;

  friend bool operator==(const Succession&, const Succession&) = default;
};

class PlannerModel {
 public:
  std::map<std::string, double> keyword_scores;
  /// keyword at step j -> ranked candidates for j+1 (count desc, then lexicographic)
  std::map<std::string, std::vector<Succession>> successions;
  std::map<std::pair<std::string, std::string>, long> affinity;  // (character, keyword)

  bool trained() const { return !keyword_scores.empty(); }
  long affinity_of(const std::string& character, const std::string& keyword) const;
  /// Re-sorts every succession list into canonical rank order.
  void rank();

  std::string to_json() const;
  static PlannerModel from_json(std::string_view json);
  void save(const std::string& path) const;
  static PlannerModel load(const std::string& path);

  friend bool operator==(const PlannerModel&, const PlannerModel&) = default;
};

/// Highest-scoring head nouns, best first (ties lexicographic).
std::vector<std::string> select_cast_names(const std::vector<std::vector<ScoredKeyword>>& per_fragment,
                                           std::size_t max_cast, const parser::Lexicon& lexicon);

std::vector<Character> select_cast(const std::vector<std::vector<ScoredKeyword>>& per_fragment,
                                   std::size_t max_cast, const parser::Lexicon& lexicon,
                                   const concepts::EmbeddingProvider& provider);

/// Character with features embedded from its name.
Character make_character(EntityId id, std::string name, const concepts::EmbeddingProvider& provider);

PlannerModel train_planner(const std::filesystem::path& corpus_dir, std::size_t fragment_count,
                           const Stoplist& stoplist, const parser::Lexicon& lexicon);

/// Corpus file: line 1 title, remainder body.
struct CorpusStory {
  std::string title;
  std::string body;
  std::vector<std::string> paragraphs;  // non-empty body lines
};
CorpusStory read_corpus_story(const std::filesystem::path& file);
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& corpus_dir);

/// `must_participate` characters always receive a keyword (used for
/// characters the user just added).
StorylinePlan plan_keywords(const StoryFragment& prev_fragment, const std::vector<Character>& cast,
                            const PlannerModel& model, std::uint64_t seed,
                            const std::set<EntityId>& must_participate = {});

struct SentenceTemplates {
  std::vector<std::string> lines;  // slots {char} {kw} {obj}

  static SentenceTemplates load(const std::string& path);
};

StoryFragment realize_fragment(const StorylinePlan& plan, const std::vector<Character>& cast,
                               const SentenceTemplates& templates, std::uint64_t seed);

Story generate_story(const std::string& title, const std::vector<Character>& cast, int length,
                     const PlannerModel& model, const SentenceTemplates& templates, std::uint64_t seed);

}  // namespace taletorium::story
