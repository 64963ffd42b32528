#pragma once

// Doodler-graph update policies: story-based (pronoun resolution plus entity
// linking across fragments) and character-based (user insert/remove).

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "taletorium/fragment_parser.hpp"
#include "taletorium/ids.hpp"
#include "taletorium/story_engine.hpp"

namespace taletorium::coref {

enum class Animacy { Animate, Inanimate };
enum class LinkRule { Recency, Animacy, Number };

std::string_view link_rule_name(LinkRule r);

using AnimacyLexicon = std::map<std::string, Animacy, std::less<>>;

/// Lines "category<TAB>animate|inanimate". Unlisted categories are animate.
AnimacyLexicon load_animacy(const std::string& path);

struct MentionLink {
  int sentence = 0;  // pronoun location in the new fragment
  int token = 0;
  std::string pronoun;
  std::string antecedent_category;
  std::optional<EntityId> antecedent;  // set when the registry knows the category
  LinkRule rule = LinkRule::Recency;
};

class EntityRegistry {
 public:
  EntityRegistry() = default;
  explicit EntityRegistry(AnimacyLexicon animacy) : animacy_(std::move(animacy)) {}

  std::optional<EntityId> lookup(std::string_view category) const;
  void bind(const std::string& category, EntityId id);
  void unbind(EntityId id);
  void record_mention(EntityId id, MentionLocation where);

  bool is_animate(std::string_view category) const;
  const std::vector<MentionLocation>& history(EntityId id) const;
  const std::map<std::string, EntityId, std::less<>>& entities() const { return by_category_; }

  /// Rebuilds category bindings from a graph (first node per category wins).
  static EntityRegistry from_graph(const parser::DoodlerGraph& graph, AnimacyLexicon animacy);

 private:
  std::map<std::string, EntityId, std::less<>> by_category_;
  std::map<EntityId, std::vector<MentionLocation>> history_;
  AnimacyLexicon animacy_;
};

/// Links each pronoun of `new_fragment` to the most recent compatible noun
/// mention: current fragment first (before the pronoun), then the
/// immediately previous fragment.
std::vector<MentionLink> resolve_coreference(std::span<const story::StoryFragment> prev_fragments,
                                             const story::StoryFragment& new_fragment,
                                             const EntityRegistry& registry, const parser::Lexicon& lexicon);

struct ParseContext {
  const parser::Lexicon& lexicon;
  const parser::Palette& palette;
  std::uint64_t seed = 0;
};

struct UpdateOptions {
  bool coreference = true;
};

/// Story-based policy. `prev_fragments` are the fragments before `new_fragment`.
parser::DoodlerGraph story_update(const parser::DoodlerGraph& graph, EntityRegistry& registry,
                                  const story::StoryFragment& new_fragment,
                                  std::span<const story::StoryFragment> prev_fragments, const ParseContext& ctx,
                                  UpdateOptions options = {});

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
  double cx() const { return x + w / 2; }
  double cy() const { return y + h / 2; }
};

struct AddCharacter {
  std::string category;
  std::string color;
  Rect position;  // normalized canvas coordinates
};

struct RemoveCharacter {
  EntityId id;
};

using CharacterOp = std::variant<AddCharacter, RemoveCharacter>;

struct CharacterUpdate {
  parser::DoodlerGraph graph;
  EntityId entity;            // added/reused or removed id
  bool reused = false;        // Add hit an existing category
  std::optional<parser::DoodlerEdge> position_edge;
};

/// Spatial label of `from` relative to `to`: right of / above / left of /
/// below for the four axis octants, near for the diagonals.
std::string spatial_relation(const Rect& from, const Rect& to);

/// Character-based policy. `positions` holds current boxes of existing nodes.
CharacterUpdate character_update(const parser::DoodlerGraph& graph, EntityRegistry& registry,
                                 const CharacterOp& op, const std::map<EntityId, Rect>& positions,
                                 MentionLocation where = {});

/// Cross-fragment edges: at least one endpoint first mentioned in a fragment
/// other than the edge's own.
std::size_t cross_fragment_edges(const parser::DoodlerGraph& graph);
/// Sum over categories of (node count - 1).
std::size_t duplicate_category_nodes(const parser::DoodlerGraph& graph);

}  // namespace taletorium::coref
