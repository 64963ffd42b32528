#include "taletorium/fragment_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "taletorium/error.hpp"
#include "taletorium/seeding.hpp"
#include "taletorium/text.hpp"

namespace taletorium::parser {
namespace {

constexpr std::array<std::pair<std::string_view, Pos>, 7> kPosNames{{
    {"NOUN", Pos::Noun},
    {"VERB", Pos::Verb},
    {"ADJ", Pos::Adj},
    {"ADP", Pos::Adp},
    {"PRON", Pos::Pron},
    {"DET", Pos::Det},
    {"OTHER", Pos::Other},
}};

const std::map<std::string, std::string, std::less<>>& irregular_plurals() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"children", "child"}, {"men", "man"},     {"women", "woman"},  {"mice", "mouse"},
      {"geese", "goose"},    {"feet", "foot"},   {"teeth", "tooth"},  {"wolves", "wolf"},
      {"leaves", "leaf"},    {"knives", "knife"}, {"people", "person"}, {"sheep", "sheep"},
      {"fish", "fish"},      {"calves", "calf"}, {"elves", "elf"},    {"dwarves", "dwarf"},
      {"oxen", "ox"},        {"loaves", "loaf"}, {"shelves", "shelf"}, {"deer", "deer"},
  };
  return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_possessive(std::string_view w) {
  if (ends_with(w, "'s")) return std::string(w.substr(0, w.size() - 2));
  if (ends_with(w, "'")) return std::string(w.substr(0, w.size() - 1));
  return std::string(w);
}

}  // namespace

std::string_view pos_name(Pos pos) {
  for (const auto& [name, p] : kPosNames)
    if (p == pos) return name;
  return "OTHER";
}

std::optional<Pos> pos_from_name(std::string_view name) {
  for (const auto& [n, p] : kPosNames)
    if (n == name) return p;
  return std::nullopt;
}

Lexicon Lexicon::load(const std::string& path) {
  Lexicon lex;
  for (const auto& line : text::read_data_lines(path)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(Errc::Parse, "lexicon line without TAB: " + line);
    auto pos = pos_from_name(text::trim(line.substr(tab + 1)));
    if (!pos) throw Error(Errc::Parse, "unknown POS in lexicon line: " + line);
    lex.add(text::to_lower(text::trim(line.substr(0, tab))), *pos);
  }
  return lex;
}

std::optional<Pos> Lexicon::lookup(std::string_view word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool Lexicon::is_noun(std::string_view word) const { return lookup(word) == Pos::Noun; }

std::string singularize(std::string_view word) {
  const auto& irregular = irregular_plurals();
  if (auto it = irregular.find(word); it != irregular.end()) return it->second;
  std::string w(word);
  if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  for (std::string_view suf : {"ches", "shes", "sses", "xes", "zes"}) {
    if (w.size() > suf.size() && ends_with(w, suf)) return w.substr(0, w.size() - 2);
  }
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string noun_lemma(std::string_view word, const Lexicon& lexicon) {
  auto base = strip_possessive(text::to_lower(word));
  if (lexicon.is_noun(base)) return base;
  auto single = singularize(base);
  if (lexicon.is_noun(single)) return single;
  if (lexicon.lookup(base)) return base;
  return single;
}

std::vector<Token> tokenize_tag(std::string_view input, const Lexicon& lexicon) {
  std::vector<Token> tokens;
  int sentence = 0;
  for (const auto& piece : text::split(input, ".!?")) {
    auto ws = text::words(piece);
    if (ws.empty()) continue;
    // recover original casing for surfaces
    std::vector<std::string> surfaces;
    {
      std::string cur;
      for (char c : piece) {
        if (text::is_word_char(c)) {
          cur.push_back(c);
        } else if (!cur.empty()) {
          surfaces.push_back(cur);
          cur.clear();
        }
      }
      if (!cur.empty()) surfaces.push_back(cur);
      surfaces.erase(std::remove_if(surfaces.begin(), surfaces.end(),
                                    [](const std::string& s) {
                                      return s.find_first_not_of("'-") == std::string::npos;
                                    }),
                     surfaces.end());
    }
    int index = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      Token tok;
      tok.surface = i < surfaces.size() ? surfaces[i] : ws[i];
      tok.sentence_index = sentence;
      tok.token_index = index++;
      const std::string lower = strip_possessive(ws[i]);
      const std::optional<Pos> prev =
          tokens.empty() || tokens.back().sentence_index != sentence ? std::nullopt
                                                                     : std::optional(tokens.back().pos);
      if (auto pos = lexicon.lookup(lower)) {
        tok.pos = *pos;
        tok.lemma = lower;
        if (tok.pos == Pos::Noun) {
          auto it = irregular_plurals().find(lower);
          tok.plural = it != irregular_plurals().end() && it->second != lower;
          tok.lemma = tok.plural ? it->second : lower;
        }
      } else if (auto single = singularize(lower); single != lower && lexicon.is_noun(single)) {
        tok.pos = Pos::Noun;
        tok.lemma = single;
        tok.plural = true;
      } else if (ends_with(lower, "ly")) {
        tok.pos = Pos::Other;
        tok.lemma = lower;
      } else if ((ends_with(lower, "ed") || ends_with(lower, "ing")) &&
                 (prev == Pos::Noun || prev == Pos::Pron)) {
        tok.pos = Pos::Verb;
        tok.lemma = lower;
      } else if (ends_with(lower, "ous") || ends_with(lower, "ful")) {
        tok.pos = Pos::Adj;
        tok.lemma = lower;
      } else {
        tok.pos = Pos::Noun;
        tok.lemma = single;
        tok.plural = single != lower;
      }
      tokens.push_back(std::move(tok));
    }
    ++sentence;
  }
  return tokens;
}

Palette load_palette(const std::string& path) {
  Palette palette;
  for (const auto& line : text::read_data_lines(path)) {
    auto parts = text::split(line, " \t");
    if (parts.size() != 2 || !is_hex_color(parts[1]))
      throw Error(Errc::Parse, "bad palette line: " + line);
    std::string hex = parts[1];
    std::transform(hex.begin(), hex.end(), hex.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    palette.push_back({text::to_lower(parts[0]), hex});
  }
  return palette;
}

bool is_hex_color(std::string_view s) {
  return s.size() == 7 && s[0] == '#' &&
         std::all_of(s.begin() + 1, s.end(), [](unsigned char c) { return std::isxdigit(c); });
}

bool operator==(const DoodlerNode& a, const DoodlerNode& b) {
  return a.id == b.id && a.category == b.category && a.color == b.color &&
         a.stroke_weight == b.stroke_weight && a.attributes == b.attributes &&
         a.first_mention == b.first_mention;
}

bool operator==(const DoodlerGraph& a, const DoodlerGraph& b) {
  return a.nodes == b.nodes && a.edges == b.edges && a.next_id == b.next_id;
}

const DoodlerNode* DoodlerGraph::find(EntityId id) const {
  auto it = nodes.find(id);
  return it == nodes.end() ? nullptr : &it->second;
}

const DoodlerNode* DoodlerGraph::find_category(std::string_view category) const {
  for (const auto& [id, node] : nodes)
    if (node.category == category) return &node;
  return nullptr;
}

bool DoodlerGraph::add_edge(DoodlerEdge edge) {
  if (edge.src == edge.dst || !nodes.contains(edge.src) || !nodes.contains(edge.dst)) return false;
  for (const auto& e : edges) {
    if (e.src == edge.src && e.dst == edge.dst && e.relation == edge.relation) return false;
  }
  edges.push_back(std::move(edge));
  return true;
}

void DoodlerGraph::remove_node(EntityId id) {
  nodes.erase(id);
  std::erase_if(edges, [id](const DoodlerEdge& e) { return e.src == id || e.dst == id; });
}

std::vector<Mention> extract_mentions(const std::vector<Token>& tokens) {
  std::vector<Mention> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.pos == Pos::Pron) {
      out.push_back({i, t.lemma, {}, t.lemma == "they" || t.lemma == "them" || t.lemma == "themselves", true});
      continue;
    }
    if (t.pos != Pos::Noun) continue;
    const bool continues = i + 1 < tokens.size() && tokens[i + 1].pos == Pos::Noun &&
                           tokens[i + 1].sentence_index == t.sentence_index;
    if (continues) continue;  // only the last noun of a compound heads the phrase
    std::size_t start = i;
    while (start > 0 && tokens[start - 1].pos == Pos::Noun &&
           tokens[start - 1].sentence_index == t.sentence_index) {
      --start;
    }
    std::vector<std::string> attrs;
    std::size_t a = start;
    while (a > 0 && tokens[a - 1].pos == Pos::Adj && tokens[a - 1].sentence_index == t.sentence_index) {
      --a;
    }
    for (std::size_t k = a; k < start; ++k) attrs.push_back(tokens[k].lemma);
    out.push_back({i, t.lemma, std::move(attrs), t.plural, false});
  }
  return out;
}

std::string relation_between(const std::vector<Token>& tokens, std::size_t from, std::size_t to) {
  std::vector<std::string> parts;
  for (std::size_t k = from + 1; k < to && parts.size() < kMaxRelationTokens; ++k) {
    if (tokens[k].pos == Pos::Verb || tokens[k].pos == Pos::Adp) parts.push_back(tokens[k].lemma);
  }
  return text::join(parts, " ");
}

DoodlerNode assign_style(DoodlerNode node, const Palette& palette, std::uint64_t seed) {
  if (palette.empty()) throw Error(Errc::PaletteMissing, "palette is empty");
  std::optional<std::string> color;
  for (const auto& attr : node.attributes) {
    for (const auto& c : palette) {
      if (c.name == attr) {
        color = c.hex;
        break;
      }
    }
    if (color) break;
  }
  if (!color) color = palette[combine(fnv1a(node.category), seed) % palette.size()].hex;
  node.color = *color;

  auto has = [&](std::initializer_list<std::string_view> words) {
    return std::any_of(node.attributes.begin(), node.attributes.end(), [&](const std::string& a) {
      return std::find(words.begin(), words.end(), a) != words.end();
    });
  };
  node.stroke_weight = 2.0;
  if (has({"big", "giant", "huge"})) {
    node.stroke_weight = 3.5;
  } else if (has({"small", "tiny"})) {
    node.stroke_weight = 1.0;
  }
  return node;
}

DoodlerGraph parse_fragment(std::string_view fragment_text, const Lexicon& lexicon, const Palette& palette,
                            std::uint64_t seed, int fragment_index) {
  DoodlerGraph graph;
  auto tokens = tokenize_tag(fragment_text, lexicon);
  auto mentions = extract_mentions(tokens);

  std::map<std::string, EntityId> by_category;
  std::vector<std::pair<const Mention*, EntityId>> resolved;
  for (const auto& m : mentions) {
    if (m.pronoun) continue;
    auto it = by_category.find(m.category);
    if (it == by_category.end()) {
      DoodlerNode node;
      node.id = graph.allocate_id();
      node.category = m.category;
      node.attributes = m.attributes;
      const Token& t = tokens[m.token];
      node.first_mention = {fragment_index, t.sentence_index, t.token_index};
      it = by_category.emplace(m.category, node.id).first;
      graph.nodes.emplace(node.id, std::move(node));
    } else {
      auto& attrs = graph.nodes.at(it->second).attributes;
      for (const auto& a : m.attributes)
        if (std::find(attrs.begin(), attrs.end(), a) == attrs.end()) attrs.push_back(a);
    }
    resolved.emplace_back(&m, it->second);
  }
  for (auto& [id, node] : graph.nodes) node = assign_style(std::move(node), palette, seed);

  for (std::size_t i = 0; i + 1 < resolved.size(); ++i) {
    const auto& [a, ida] = resolved[i];
    const auto& [b, idb] = resolved[i + 1];
    if (tokens[a->token].sentence_index != tokens[b->token].sentence_index) continue;
    auto rel = relation_between(tokens, a->token, b->token);
    if (rel.empty()) continue;
    graph.add_edge({ida, idb, rel, fragment_index});
  }
  return graph;
}

}  // namespace taletorium::parser
