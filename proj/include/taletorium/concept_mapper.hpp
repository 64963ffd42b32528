#pragma once

// Maps doodler-graph labels onto a fixed canonical vocabulary by fragment
// substitution: the label in the fragment is replaced by each candidate and
// the candidate whose substituted fragment embeds closest (cosine) to the
// original fragment wins.

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taletorium/fragment_parser.hpp"
#include "taletorium/ids.hpp"

namespace taletorium::concepts {

using Vector = std::vector<double>;

/// Text-encoder contract. Implementations must be deterministic and safe to
/// call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  /// Throws Error(EmbeddingUnavailable) when nothing in `text` can be encoded.
  virtual Vector embed(std::string_view text) const = 0;
};

/// Built-in provider: mean of per-word vectors, unit-normalized.
class WordVectorProvider final : public EmbeddingProvider {
 public:
  WordVectorProvider() = default;
  WordVectorProvider(std::size_t dimension, std::unordered_map<std::string, Vector> vectors);

  /// Line 1: dimension D. Then "word v1 ... vD" per line.
  static WordVectorProvider load(const std::string& path);

  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) const override;
  bool contains(std::string_view word) const;
  const Vector* vector(std::string_view word) const;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, Vector> vectors_;
};

double cosine(std::span<const double> a, std::span<const double> b);

enum class SizeClass { Scene, Character, Prop };

std::string_view size_class_name(SizeClass c);
std::optional<SizeClass> size_class_from_name(std::string_view name);

struct CanonicalVocab {
  std::vector<std::string> entities;
  std::vector<std::string> relations;
  std::map<std::string, SizeClass, std::less<>> size_class;
  /// Canonical relation -> geometric kind name ("left-of", "below", ...).
  std::map<std::string, std::string, std::less<>> relation_kinds;

  /// {"entities":[{"name","size_class"}], "relations":[...], "relation_kinds":{...}}
  static CanonicalVocab load(const std::string& path);

  bool has_entity(std::string_view e) const;
  SizeClass size_of(std::string_view entity) const;
};

struct MappingResult {
  std::string source;
  std::string target;
  double similarity = 0.0;
};

/// Replaces every occurrence of `phrase` in `fragment` (word-wise, matching
/// plural noun forms too) by `replacement`. Returns the substituted word
/// sequence as text, or nullopt when the phrase does not occur.
std::optional<std::string> substitute(std::string_view fragment, std::string_view phrase,
                                      std::string_view replacement);

/// Similarity of each candidate substitution to the original embedding.
/// Serial reference and OpenMP kernel; results are identical.
std::vector<double> score_candidates_serial(const EmbeddingProvider& provider, const Vector& original,
                                            std::span<const std::string> substituted_texts);
std::vector<double> score_candidates(const EmbeddingProvider& provider, const Vector& original,
                                     std::span<const std::string> substituted_texts);

/// Uncached single mapping against an explicit candidate list.
MappingResult map_label(std::string_view label, std::string_view fragment_text,
                        std::span<const std::string> candidates, const EmbeddingProvider& provider);

MappingResult map_entity(std::string_view entity, std::string_view fragment_text, const CanonicalVocab& vocab,
                         const EmbeddingProvider& provider);
MappingResult map_relation(std::string_view relation, std::string_view fragment_text,
                           const CanonicalVocab& vocab, const EmbeddingProvider& provider);

struct SceneNode {
  EntityId id;
  std::string category;  // canonical
  std::string display;   // original doodler label
  std::string color = "#000000";
  double stroke_weight = 2.0;
  SizeClass size_class = SizeClass::Prop;
  MentionLocation first_mention;

  friend bool operator==(const SceneNode&, const SceneNode&) = default;
};

struct SceneEdge {
  EntityId src;
  EntityId dst;
  std::string relation;  // canonical
  std::string display;

  friend bool operator==(const SceneEdge&, const SceneEdge&) = default;
};

struct CanonicalSceneGraph {
  std::vector<SceneNode> nodes;  // ascending id
  std::vector<SceneEdge> edges;

  const SceneNode* find(EntityId id) const;
  friend bool operator==(const CanonicalSceneGraph&, const CanonicalSceneGraph&) = default;
};

/// Caching mapper. Cache reads are concurrent; inserts take a unique lock.
class ConceptMapper {
 public:
  ConceptMapper(const EmbeddingProvider& provider, const CanonicalVocab& vocab)
      : provider_(provider), vocab_(vocab) {}

  MappingResult map_entity(std::string_view entity, std::string_view fragment_text) const;
  MappingResult map_relation(std::string_view relation, std::string_view fragment_text) const;
  /// Maps against an arbitrary candidate list (e.g. template-bank categories).
  MappingResult map_to(std::string_view label, std::string_view fragment_text,
                       std::span<const std::string> candidates) const;

  CanonicalSceneGraph map_graph(const parser::DoodlerGraph& graph, std::string_view fragment_text) const;
  /// Per-node / per-edge context: `node_context(id)` and `edge_context(fragment)`.
  CanonicalSceneGraph map_graph(const parser::DoodlerGraph& graph,
                                const std::map<EntityId, std::string>& node_context,
                                const std::map<int, std::string>& edge_context) const;

  const CanonicalVocab& vocab() const { return vocab_; }
  const EmbeddingProvider& provider() const { return provider_; }
  std::size_t cache_size() const;

 private:
  MappingResult cached(std::string_view kind, std::string_view label, std::string_view fragment,
                       std::span<const std::string> candidates) const;

  const EmbeddingProvider& provider_;
  const CanonicalVocab& vocab_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::string, MappingResult, std::less<>> cache_;
};

CanonicalSceneGraph map_graph(const parser::DoodlerGraph& graph, std::string_view fragment_text,
                              const CanonicalVocab& vocab, const EmbeddingProvider& provider);

}  // namespace taletorium::concepts
