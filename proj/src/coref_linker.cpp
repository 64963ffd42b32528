#include "taletorium/coref_linker.hpp"

#include <algorithm>
#include <cmath>

#include "taletorium/error.hpp"
#include "taletorium/text.hpp"

namespace taletorium::coref {
namespace {

enum class Number { Singular, Plural };

struct PronounTraits {
  Number number;
  std::optional<Animacy> animacy;  // nullopt: either
};

std::optional<PronounTraits> pronoun_traits(std::string_view p) {
  if (p == "he" || p == "him" || p == "she" || p == "himself" || p == "herself")
    return PronounTraits{Number::Singular, Animacy::Animate};
  if (p == "it" || p == "itself") return PronounTraits{Number::Singular, Animacy::Inanimate};
  if (p == "they" || p == "them" || p == "themselves") return PronounTraits{Number::Plural, std::nullopt};
  return std::nullopt;
}

struct NounMention {
  std::string category;
  bool plural;
};

std::vector<NounMention> noun_mentions(const std::vector<parser::Token>& tokens,
                                       const std::vector<parser::Mention>& mentions, std::size_t before) {
  std::vector<NounMention> out;
  for (const auto& m : mentions) {
    if (m.pronoun || m.token >= before) continue;
    out.push_back({m.category, m.plural});
  }
  (void)tokens;
  return out;
}

}  // namespace

std::string_view link_rule_name(LinkRule r) {
  switch (r) {
    case LinkRule::Recency: return "recency";
    case LinkRule::Animacy: return "animacy";
    case LinkRule::Number: return "number";
  }
  return "recency";
}

AnimacyLexicon load_animacy(const std::string& path) {
  AnimacyLexicon out;
  for (const auto& line : text::read_data_lines(path)) {
    auto parts = text::split(line, "\t ");
    if (parts.size() != 2) throw Error(Errc::Parse, "bad animacy line: " + line);
    if (parts[1] == "animate") {
      out[text::to_lower(parts[0])] = Animacy::Animate;
    } else if (parts[1] == "inanimate") {
      out[text::to_lower(parts[0])] = Animacy::Inanimate;
    } else {
      throw Error(Errc::Parse, "bad animacy value: " + line);
    }
  }
  return out;
}

std::optional<EntityId> EntityRegistry::lookup(std::string_view category) const {
  auto it = by_category_.find(category);
  if (it == by_category_.end()) return std::nullopt;
  return it->second;
}

void EntityRegistry::bind(const std::string& category, EntityId id) { by_category_[category] = id; }

void EntityRegistry::unbind(EntityId id) {
  std::erase_if(by_category_, [id](const auto& kv) { return kv.second == id; });
  history_.erase(id);
}

void EntityRegistry::record_mention(EntityId id, MentionLocation where) {
  auto& h = history_[id];
  h.insert(std::upper_bound(h.begin(), h.end(), where), where);
}

bool EntityRegistry::is_animate(std::string_view category) const {
  auto it = animacy_.find(category);
  return it == animacy_.end() || it->second == Animacy::Animate;
}

const std::vector<MentionLocation>& EntityRegistry::history(EntityId id) const {
  static const std::vector<MentionLocation> empty;
  auto it = history_.find(id);
  return it == history_.end() ? empty : it->second;
}

EntityRegistry EntityRegistry::from_graph(const parser::DoodlerGraph& graph, AnimacyLexicon animacy) {
  EntityRegistry reg(std::move(animacy));
  for (const auto& [id, node] : graph.nodes) {
    if (!reg.lookup(node.category)) reg.bind(node.category, id);
    reg.record_mention(id, node.first_mention);
  }
  return reg;
}

std::vector<MentionLink> resolve_coreference(std::span<const story::StoryFragment> prev_fragments,
                                             const story::StoryFragment& new_fragment,
                                             const EntityRegistry& registry, const parser::Lexicon& lexicon) {
  const auto tokens = parser::tokenize_tag(new_fragment.text, lexicon);
  const auto mentions = parser::extract_mentions(tokens);

  std::vector<NounMention> previous;
  if (!prev_fragments.empty()) {
    const auto prev_tokens = parser::tokenize_tag(prev_fragments.back().text, lexicon);
    const auto prev_mentions = parser::extract_mentions(prev_tokens);
    previous = noun_mentions(prev_tokens, prev_mentions, prev_tokens.size());
  }

  std::vector<MentionLink> links;
  for (const auto& m : mentions) {
    if (!m.pronoun) continue;
    auto traits = pronoun_traits(m.category);
    if (!traits) continue;
    // most recent first: current fragment before the pronoun, then previous
    auto current = noun_mentions(tokens, mentions, m.token);
    std::vector<NounMention> candidates(current.rbegin(), current.rend());
    candidates.insert(candidates.end(), previous.rbegin(), previous.rend());

    bool rejected_animacy = false, rejected_number = false;
    const NounMention* chosen = nullptr;
    for (const auto& c : candidates) {
      const bool plural_ok = (traits->number == Number::Plural) == c.plural;
      if (!plural_ok) {
        rejected_number = true;
        continue;
      }
      if (traits->animacy) {
        const bool animate = registry.is_animate(c.category);
        if (animate != (*traits->animacy == Animacy::Animate)) {
          rejected_animacy = true;
          continue;
        }
      }
      chosen = &c;
      break;
    }
    if (!chosen) continue;
    const auto& tok = tokens[m.token];
    links.push_back({tok.sentence_index, tok.token_index, m.category, chosen->category,
                     registry.lookup(chosen->category),
                     rejected_animacy ? LinkRule::Animacy
                                      : (rejected_number ? LinkRule::Number : LinkRule::Recency)});
  }
  return links;
}

parser::DoodlerGraph story_update(const parser::DoodlerGraph& graph, EntityRegistry& registry,
                                  const story::StoryFragment& new_fragment,
                                  std::span<const story::StoryFragment> prev_fragments, const ParseContext& ctx,
                                  UpdateOptions options) {
  parser::DoodlerGraph out = graph;
  const auto tokens = parser::tokenize_tag(new_fragment.text, ctx.lexicon);
  if (tokens.empty()) return out;
  const auto mentions = parser::extract_mentions(tokens);

  std::map<std::string, EntityId> local;  // per-fragment identity when coref is off
  std::vector<std::pair<std::size_t, EntityId>> sequence;  // (token position, entity)
  for (const auto& m : mentions) {
    if (m.pronoun) continue;
    const auto& tok = tokens[m.token];
    const MentionLocation where{new_fragment.index, tok.sentence_index, tok.token_index};
    std::optional<EntityId> id;
    if (options.coreference) {
      id = registry.lookup(m.category);
      if (id && !out.nodes.contains(*id)) id.reset();
    } else if (auto it = local.find(m.category); it != local.end()) {
      id = it->second;
    }
    if (!id) {
      parser::DoodlerNode node;
      node.id = out.allocate_id();
      node.category = m.category;
      node.attributes = m.attributes;
      node.first_mention = where;
      node = parser::assign_style(std::move(node), ctx.palette, ctx.seed);
      id = node.id;
      out.nodes.emplace(node.id, std::move(node));
      if (options.coreference) {
        registry.bind(m.category, *id);
      } else {
        local.emplace(m.category, *id);
      }
    } else {
      auto& attrs = out.nodes.at(*id).attributes;
      for (const auto& a : m.attributes)
        if (std::find(attrs.begin(), attrs.end(), a) == attrs.end()) attrs.push_back(a);
    }
    if (options.coreference) registry.record_mention(*id, where);
    sequence.emplace_back(m.token, *id);
  }

  if (options.coreference) {
    for (const auto& link : resolve_coreference(prev_fragments, new_fragment, registry, ctx.lexicon)) {
      if (!link.antecedent || !out.nodes.contains(*link.antecedent)) continue;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].sentence_index == link.sentence && tokens[i].token_index == link.token) {
          sequence.emplace_back(i, *link.antecedent);
          registry.record_mention(*link.antecedent, {new_fragment.index, link.sentence, link.token});
          break;
        }
      }
    }
    std::sort(sequence.begin(), sequence.end());
  }

  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    const auto [ta, a] = sequence[i];
    const auto [tb, b] = sequence[i + 1];
    if (tokens[ta].sentence_index != tokens[tb].sentence_index) continue;
    auto rel = parser::relation_between(tokens, ta, tb);
    if (rel.empty()) continue;
    out.add_edge({a, b, rel, new_fragment.index});
  }
  return out;
}

std::string spatial_relation(const Rect& from, const Rect& to) {
  const double dx = from.cx() - to.cx();
  const double dy = from.cy() - to.cy();
  if (dx == 0.0 && dy == 0.0) return "near";
  const double deg = std::atan2(-dy, dx) * 180.0 / 3.14159265358979323846;
  int octant = static_cast<int>(std::floor((deg + 22.5) / 45.0));
  octant = ((octant % 8) + 8) % 8;
  switch (octant) {
    case 0: return "right of";
    case 2: return "above";
    case 4: return "left of";
    case 6: return "below";
    default: return "near";
  }
}

CharacterUpdate character_update(const parser::DoodlerGraph& graph, EntityRegistry& registry,
                                 const CharacterOp& op, const std::map<EntityId, Rect>& positions,
                                 MentionLocation where) {
  CharacterUpdate result{graph, {}, false, std::nullopt};
  auto& out = result.graph;

  if (const auto* rm = std::get_if<RemoveCharacter>(&op)) {
    if (!out.nodes.contains(rm->id))
      throw Error(Errc::UnknownEntity, "no entity with id " + std::to_string(rm->id.value));
    out.remove_node(rm->id);
    registry.unbind(rm->id);
    result.entity = rm->id;
    return result;
  }

  const auto& add = std::get<AddCharacter>(op);
  if (add.category.empty()) throw Error(Errc::InvalidArgument, "character category is empty");
  auto id = registry.lookup(add.category);
  if (id && out.nodes.contains(*id)) {
    result.reused = true;
  } else {
    parser::DoodlerNode node;
    node.id = out.allocate_id();
    node.category = add.category;
    node.color = parser::is_hex_color(add.color) ? add.color : "#000000";
    node.first_mention = where;
    id = node.id;
    out.nodes.emplace(node.id, std::move(node));
    registry.bind(add.category, *id);
  }
  registry.record_mention(*id, where);
  result.entity = *id;

  std::optional<std::pair<double, EntityId>> nearest;
  for (const auto& [other, box] : positions) {
    if (other == *id || !out.nodes.contains(other)) continue;
    const double d = std::hypot(box.cx() - add.position.cx(), box.cy() - add.position.cy());
    if (!nearest || d < nearest->first) nearest = {d, other};
  }
  if (nearest) {
    parser::DoodlerEdge edge{*id, nearest->second, spatial_relation(add.position, positions.at(nearest->second)),
                             where.fragment};
    if (out.add_edge(edge)) result.position_edge = edge;
  }
  return result;
}

std::size_t cross_fragment_edges(const parser::DoodlerGraph& graph) {
  std::size_t n = 0;
  for (const auto& e : graph.edges) {
    const auto* a = graph.find(e.src);
    const auto* b = graph.find(e.dst);
    if (!a || !b) continue;
    if (a->first_mention.fragment != e.fragment || b->first_mention.fragment != e.fragment) ++n;
  }
  return n;
}

std::size_t duplicate_category_nodes(const parser::DoodlerGraph& graph) {
  std::map<std::string, std::size_t> count;
  for (const auto& [id, node] : graph.nodes) ++count[node.category];
  std::size_t dup = 0;
  for (const auto& [cat, c] : count) dup += c - 1;
  return dup;
}

}  // namespace taletorium::coref
