#pragma once

// Rule-based fragment parser: lexicon/suffix tagger, noun-phrase and
// relation extraction, and doodle style assignment.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taletorium/ids.hpp"

namespace taletorium::parser {

enum class Pos { Noun, Verb, Adj, Adp, Pron, Det, Other };

std::string_view pos_name(Pos pos);
std::optional<Pos> pos_from_name(std::string_view name);

struct Token {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::Other;
  int sentence_index = 0;
  int token_index = 0;
  bool plural = false;
};

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::map<std::string, Pos, std::less<>> entries) : entries_(std::move(entries)) {}

  /// Lines "word<TAB>POS"; '#' comments allowed.
  static Lexicon load(const std::string& path);

  std::optional<Pos> lookup(std::string_view word) const;
  bool is_noun(std::string_view word) const;
  void add(std::string word, Pos pos) { entries_[std::move(word)] = pos; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Pos, std::less<>> entries_;
};

/// Plural-to-singular: irregular table, then -ies/-es/-s rules.
std::string singularize(std::string_view word);

/// Lowercase noun lemma of a possibly plural surface form, consulting the
/// lexicon so that lexicon nouns are never over-stripped.
std::string noun_lemma(std::string_view word, const Lexicon& lexicon);

std::vector<Token> tokenize_tag(std::string_view text, const Lexicon& lexicon);

struct NamedColor {
  std::string name;
  std::string hex;  // "#RRGGBB"
};

using Palette = std::vector<NamedColor>;

/// Lines "name #RRGGBB".
Palette load_palette(const std::string& path);
bool is_hex_color(std::string_view s);

struct DoodlerNode {
  EntityId id;
  std::string category;
  std::string color = "#000000";
  double stroke_weight = 2.0;
  std::vector<std::string> attributes;
  MentionLocation first_mention;
};

struct DoodlerEdge {
  EntityId src;
  EntityId dst;
  std::string relation;
  int fragment = 0;  // fragment that produced the edge

  friend bool operator==(const DoodlerEdge&, const DoodlerEdge&) = default;
};

struct DoodlerGraph {
  std::map<EntityId, DoodlerNode> nodes;
  std::vector<DoodlerEdge> edges;
  std::uint64_t next_id = 1;

  EntityId allocate_id() { return EntityId{next_id++}; }
  const DoodlerNode* find(EntityId id) const;
  /// First node (by id) with the given category.
  const DoodlerNode* find_category(std::string_view category) const;
  /// Adds the edge unless it is a self-loop, dangles, or already exists.
  bool add_edge(DoodlerEdge edge);
  void remove_node(EntityId id);

  friend bool operator==(const DoodlerGraph& a, const DoodlerGraph& b);
};

bool operator==(const DoodlerNode& a, const DoodlerNode& b);

/// A noun-phrase head or a pronoun found in a token stream.
struct Mention {
  std::size_t token;  // index into the token vector
  std::string category;  // noun lemma; pronoun lemma for pronouns
  std::vector<std::string> attributes;
  bool plural = false;
  bool pronoun = false;
};

/// Noun-phrase heads (last noun of a compound; determiners skipped; ADJ run
/// immediately before the phrase becomes attributes) and PRON tokens, in order.
std::vector<Mention> extract_mentions(const std::vector<Token>& tokens);

/// Relation label between two mentions of one sentence: VERB/ADP lemmas
/// strictly between them, at most 3, space-joined. Empty when none.
std::string relation_between(const std::vector<Token>& tokens, std::size_t from, std::size_t to);

inline constexpr std::size_t kMaxRelationTokens = 3;
inline constexpr double kMinStrokeWeight = 0.5;
inline constexpr double kMaxStrokeWeight = 8.0;

DoodlerNode assign_style(DoodlerNode node, const Palette& palette, std::uint64_t seed);

/// Parses one fragment into a fresh graph. Same-category mentions within the
/// fragment share one node.
DoodlerGraph parse_fragment(std::string_view fragment_text, const Lexicon& lexicon,
                            const Palette& palette, std::uint64_t seed, int fragment_index = 0);

}  // namespace taletorium::parser
