#include "taletorium/concept_mapper.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "taletorium/error.hpp"
#include "taletorium/seeding.hpp"
#include "taletorium/text.hpp"

namespace taletorium::concepts {

WordVectorProvider::WordVectorProvider(std::size_t dimension, std::unordered_map<std::string, Vector> vectors)
    : dimension_(dimension), vectors_(std::move(vectors)) {
  for (const auto& [w, v] : vectors_) {
    if (v.size() != dimension_) throw Error(Errc::InvalidArgument, "vector for '" + w + "' has wrong dimension");
  }
}

WordVectorProvider WordVectorProvider::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open word vectors " + path);
  std::size_t dim = 0;
  if (!(in >> dim) || dim == 0) throw Error(Errc::Parse, "word vector file must declare D on line 1");
  std::unordered_map<std::string, Vector> vectors;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    Vector v;
    v.reserve(dim);
    double x;
    while (ls >> x) v.push_back(x);
    if (v.size() != dim) throw Error(Errc::Parse, "vector for '" + word + "' has wrong dimension");
    vectors.emplace(text::to_lower(word), std::move(v));
  }
  return WordVectorProvider(dim, std::move(vectors));
}

bool WordVectorProvider::contains(std::string_view word) const { return vectors_.contains(std::string(word)); }

const Vector* WordVectorProvider::vector(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

Vector WordVectorProvider::embed(std::string_view input) const {
  Vector sum(dimension_, 0.0);
  std::size_t hits = 0;
  for (const auto& w : text::words(input)) {
    const Vector* v = vector(w);
    if (!v) v = vector(parser::singularize(w));
    if (!v) continue;
    for (std::size_t i = 0; i < dimension_; ++i) sum[i] += (*v)[i];
    ++hits;
  }
  if (hits == 0) throw Error(Errc::EmbeddingUnavailable, "no known words in '" + std::string(input) + "'");
  double norm = 0.0;
  for (double x : sum) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw Error(Errc::EmbeddingUnavailable, "zero embedding for '" + std::string(input) + "'");
  for (double& x : sum) x /= norm;
  return sum;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string_view size_class_name(SizeClass c) {
  switch (c) {
    case SizeClass::Scene: return "scene";
    case SizeClass::Character: return "character";
    case SizeClass::Prop: return "prop";
  }
  return "prop";
}

std::optional<SizeClass> size_class_from_name(std::string_view name) {
  if (name == "scene") return SizeClass::Scene;
  if (name == "character") return SizeClass::Character;
  if (name == "prop") return SizeClass::Prop;
  return std::nullopt;
}

CanonicalVocab CanonicalVocab::load(const std::string& path) {
  CanonicalVocab vocab;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, "vocab " + path + ": " + e.what());
  }
  for (const auto& e : doc.at("entities")) {
    auto name = text::to_lower(e.at("name").get<std::string>());
    auto cls = size_class_from_name(e.at("size_class").get<std::string>());
    if (!cls) throw Error(Errc::Parse, "bad size class for entity " + name);
    if (vocab.size_class.contains(name)) throw Error(Errc::Parse, "duplicate entity " + name);
    vocab.entities.push_back(name);
    vocab.size_class.emplace(name, *cls);
  }
  for (const auto& r : doc.at("relations")) vocab.relations.push_back(text::to_lower(r.get<std::string>()));
  if (doc.contains("relation_kinds")) {
    for (const auto& [rel, kind] : doc.at("relation_kinds").items())
      vocab.relation_kinds.emplace(text::to_lower(rel), kind.get<std::string>());
  }
  return vocab;
}

bool CanonicalVocab::has_entity(std::string_view e) const { return size_class.find(e) != size_class.end(); }

SizeClass CanonicalVocab::size_of(std::string_view entity) const {
  auto it = size_class.find(entity);
  return it == size_class.end() ? SizeClass::Prop : it->second;
}

std::optional<std::string> substitute(std::string_view fragment, std::string_view phrase,
                                      std::string_view replacement) {
  auto hay = text::words(fragment);
  auto needle = text::words(phrase);
  if (needle.empty()) return std::nullopt;
  std::vector<std::string> out;
  bool found = false;
  for (std::size_t i = 0; i < hay.size();) {
    bool match = i + needle.size() <= hay.size();
    for (std::size_t k = 0; match && k < needle.size(); ++k) {
      const auto& w = hay[i + k];
      match = w == needle[k] || parser::singularize(w) == needle[k];
    }
    if (match) {
      for (auto& r : text::words(replacement)) out.push_back(std::move(r));
      i += needle.size();
      found = true;
    } else {
      out.push_back(hay[i]);
      ++i;
    }
  }
  if (!found) return std::nullopt;
  return text::join(out, " ");
}

namespace {

double score_one(const EmbeddingProvider& provider, const Vector& original, const std::string& substituted) {
  try {
    return cosine(original, provider.embed(substituted));
  } catch (const Error&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::vector<double> score_candidates_serial(const EmbeddingProvider& provider, const Vector& original,
                                            std::span<const std::string> substituted_texts) {
  std::vector<double> scores(substituted_texts.size());
  for (std::size_t i = 0; i < substituted_texts.size(); ++i)
    scores[i] = score_one(provider, original, substituted_texts[i]);
  return scores;
}

std::vector<double> score_candidates(const EmbeddingProvider& provider, const Vector& original,
                                     std::span<const std::string> substituted_texts) {
  const auto n = static_cast<std::ptrdiff_t>(substituted_texts.size());
  std::vector<double> scores(substituted_texts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    scores[static_cast<std::size_t>(i)] =
        score_one(provider, original, substituted_texts[static_cast<std::size_t>(i)]);
  }
  return scores;
}

MappingResult map_label(std::string_view label, std::string_view fragment_text,
                        std::span<const std::string> candidates, const EmbeddingProvider& provider) {
  if (candidates.empty()) throw Error(Errc::VocabMissing, "no candidates to map '" + std::string(label) + "'");
  // Contexts that never mention the label fall back to the label alone.
  std::string original;
  std::string context(fragment_text);
  if (auto same = substitute(context, label, label)) {
    original = *same;
  } else {
    context = std::string(label);
    original = text::join(text::words(label), " ");
  }
  const Vector base = provider.embed(original);

  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const auto& c : candidates) texts.push_back(*substitute(context, label, c));
  auto scores = score_candidates(provider, base, texts);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i] == original) scores[i] = 1.0;
  }

  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!std::isfinite(scores[i])) continue;
    if (best == candidates.size() || scores[i] > scores[best] ||
        (scores[i] == scores[best] && candidates[i] < candidates[best])) {
      best = i;
    }
  }
  if (best == candidates.size())
    throw Error(Errc::EmbeddingUnavailable, "no candidate for '" + std::string(label) + "' could be encoded");
  return {std::string(label), candidates[best], scores[best]};
}

MappingResult map_entity(std::string_view entity, std::string_view fragment_text, const CanonicalVocab& vocab,
                         const EmbeddingProvider& provider) {
  return map_label(entity, fragment_text, vocab.entities, provider);
}

MappingResult map_relation(std::string_view relation, std::string_view fragment_text,
                           const CanonicalVocab& vocab, const EmbeddingProvider& provider) {
  return map_label(relation, fragment_text, vocab.relations, provider);
}

const SceneNode* CanonicalSceneGraph::find(EntityId id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

MappingResult ConceptMapper::cached(std::string_view kind, std::string_view label, std::string_view fragment,
                                    std::span<const std::string> candidates) const {
  std::uint64_t cand_hash = 0;
  for (const auto& c : candidates) cand_hash = combine(cand_hash, fnv1a(c));
  std::string key;
  key.append(kind).append("\x1f").append(label).append("\x1f").append(fragment).append("\x1f");
  key.append(std::to_string(cand_hash));
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto result = map_label(label, fragment, candidates, provider_);
  std::unique_lock lock(mutex_);
  cache_.emplace(std::move(key), result);
  return result;
}

MappingResult ConceptMapper::map_entity(std::string_view entity, std::string_view fragment_text) const {
  return cached("entity", entity, fragment_text, vocab_.entities);
}

MappingResult ConceptMapper::map_relation(std::string_view relation, std::string_view fragment_text) const {
  return cached("relation", relation, fragment_text, vocab_.relations);
}

MappingResult ConceptMapper::map_to(std::string_view label, std::string_view fragment_text,
                                    std::span<const std::string> candidates) const {
  return cached("custom", label, fragment_text, candidates);
}

std::size_t ConceptMapper::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

CanonicalSceneGraph ConceptMapper::map_graph(const parser::DoodlerGraph& graph,
                                             std::string_view fragment_text) const {
  std::map<EntityId, std::string> nodes;
  std::map<int, std::string> edges;
  for (const auto& [id, n] : graph.nodes) nodes.emplace(id, std::string(fragment_text));
  for (const auto& e : graph.edges) edges.emplace(e.fragment, std::string(fragment_text));
  return map_graph(graph, nodes, edges);
}

CanonicalSceneGraph ConceptMapper::map_graph(const parser::DoodlerGraph& graph,
                                             const std::map<EntityId, std::string>& node_context,
                                             const std::map<int, std::string>& edge_context) const {
  CanonicalSceneGraph out;
  for (const auto& [id, n] : graph.nodes) {
    auto ctx = node_context.find(id);
    auto m = map_entity(n.category, ctx == node_context.end() ? std::string_view(n.category) : ctx->second);
    out.nodes.push_back({id, m.target, n.category, n.color, n.stroke_weight, vocab_.size_of(m.target),
                         n.first_mention});
  }
  for (const auto& e : graph.edges) {
    auto ctx = edge_context.find(e.fragment);
    auto m = map_relation(e.relation, ctx == edge_context.end() ? std::string_view(e.relation) : ctx->second);
    out.edges.push_back({e.src, e.dst, m.target, e.relation});
  }
  return out;
}

CanonicalSceneGraph map_graph(const parser::DoodlerGraph& graph, std::string_view fragment_text,
                              const CanonicalVocab& vocab, const EmbeddingProvider& provider) {
  return ConceptMapper(provider, vocab).map_graph(graph, fragment_text);
}

}  // namespace taletorium::concepts
