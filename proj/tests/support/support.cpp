#include "support.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "taletorium/text.hpp"

namespace support {

std::filesystem::path data_dir() { return TALETORIUM_DATA_DIR; }

std::shared_ptr<const tt::session::Resources> shared_resources() {
  static const auto res = tt::session::Resources::load(tt::session::DataPaths::from_root(data_dir()));
  return res;
}

const tt::session::Resources& resources() { return *shared_resources(); }

std::vector<tt::story::StoryFragment> story_fragments(const std::string& corpus_file) {
  const auto story = tt::story::read_corpus_story(data_dir() / "corpus" / corpus_file);
  std::vector<tt::story::StoryFragment> out{{0, story.title, {}}};
  for (const auto& p : story.paragraphs) out.push_back({static_cast<int>(out.size()), p, {}});
  return out;
}

CorefRun run_story(const std::vector<tt::story::StoryFragment>& fragments, bool coreference) {
  const auto& res = resources();
  CorefRun run{{}, tt::coref::EntityRegistry(res.animacy)};
  const tt::coref::ParseContext ctx{res.lexicon, res.palette, 0};
  for (std::size_t i = 1; i < fragments.size(); ++i) {
    std::span<const tt::story::StoryFragment> prev(fragments.data(), i);
    run.graph = tt::coref::story_update(run.graph, run.registry, fragments[i], prev, ctx, {coreference});
  }
  return run;
}

// ---------------------------------------------------------------- RAKE

namespace {

std::vector<std::string> oracle_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?') {
      if (!tt::text::trim(cur).empty()) out.push_back(tt::text::trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!tt::text::trim(cur).empty()) out.push_back(tt::text::trim(cur));
  return out;
}

// Phrases of one sentence: maximal runs of non-stopwords between punctuation.
std::vector<std::vector<std::string>> oracle_phrases(const std::string& sentence, const tt::story::Stoplist& stop) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  std::string word;
  auto flush_word = [&] {
    if (word.empty()) return;
    std::string w;
    for (char c : word) w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    word.clear();
    if (stop.contains(w)) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(w);
    }
  };
  for (char c : sentence) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      word += c;
    } else if (c == ' ') {
      flush_word();
    } else {
      flush_word();
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    }
  }
  flush_word();
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

tt::story::Stoplist small_stoplist() {
  return {"the", "a", "in", "of", "and", "to", "saw", "on", "with", "he", "it", "was"};
}

std::string random_text(tt::SeededRng& rng, std::size_t max_words) {
  static const std::vector<std::string> content = {"fox",  "cock",  "tree",  "tall", "crowed", "grapes", "sour",
                                                   "wolf", "red",   "hood",  "old",  "forest", "river",  "stone",
                                                   "king", "frog",  "well",  "gold", "ball",   "night"};
  static const std::vector<std::string> stops = {"the", "a", "in", "of", "and", "to", "saw", "on", "with", "he"};
  static const std::vector<std::string> punct = {".", ",", ";", ":", "!", "?"};
  const std::size_t n = 1 + rng.below(max_words);
  std::string out;
  bool any_content = false;
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = rng.uniform() < 0.6 ? content[rng.below(content.size())] : stops[rng.below(stops.size())];
    any_content |= std::find(content.begin(), content.end(), w) != content.end();
    if (!out.empty() && out.back() != ' ') out += ' ';
    out += w;
    if (rng.uniform() < 0.15) out += punct[rng.below(punct.size())];
  }
  if (!any_content) out += " fox";
  return out + ".";
}

std::vector<std::vector<tt::story::ScoredKeyword>> rake_oracle(const std::string& text, std::size_t fragment_count,
                                                               const tt::story::Stoplist& stoplist) {
  const auto sentences = oracle_sentences(text);
  // contiguous groups; the first (count % k) groups get one extra sentence
  std::vector<std::size_t> group_of(sentences.size());
  {
    const std::size_t base = sentences.size() / fragment_count, extra = sentences.size() % fragment_count;
    std::size_t s = 0;
    for (std::size_t g = 0; g < fragment_count; ++g)
      for (std::size_t k = 0; k < base + (g < extra ? 1 : 0); ++k) group_of[s++] = g;
  }

  std::vector<std::pair<std::vector<std::string>, std::size_t>> phrases;  // (words, group) in order
  for (std::size_t i = 0; i < sentences.size(); ++i)
    for (auto& p : oracle_phrases(sentences[i], stoplist)) phrases.emplace_back(std::move(p), group_of[i]);

  std::vector<std::string> vocab;
  for (const auto& [p, g] : phrases)
    for (const auto& w : p)
      if (std::find(vocab.begin(), vocab.end(), w) == vocab.end()) vocab.push_back(w);
  const std::size_t V = vocab.size();
  auto idx = [&](const std::string& w) {
    return static_cast<std::size_t>(std::find(vocab.begin(), vocab.end(), w) - vocab.begin());
  };
  std::vector<std::vector<long>> m(V, std::vector<long>(V, 0));
  std::vector<long> freq(V, 0);
  for (const auto& [p, g] : phrases)
    for (const auto& a : p) {
      ++freq[idx(a)];
      for (const auto& b : p) ++m[idx(a)][idx(b)];
    }

  std::vector<std::vector<tt::story::ScoredKeyword>> out(fragment_count);
  std::vector<std::string> seen;
  for (const auto& [p, g] : phrases) {
    std::string phrase;
    for (const auto& w : p) phrase += (phrase.empty() ? "" : " ") + w;
    if (std::find(seen.begin(), seen.end(), phrase) != seen.end()) continue;
    seen.push_back(phrase);
    double score = 0;
    for (const auto& w : p) {
      const auto i = idx(w);
      long deg = 0;
      for (std::size_t j = 0; j < V; ++j) deg += m[i][j];
      score += static_cast<double>(deg) / static_cast<double>(freq[i]);
    }
    out[g].push_back({phrase, score});
  }
  for (auto& list : out) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return a.score != b.score ? a.score > b.score : a.phrase < b.phrase;
    });
    if (list.size() > 5) list.resize(5);
  }
  return out;
}

// ---------------------------------------------------------------- mapping

MappingOracle::MappingOracle(const std::filesystem::path& vectors_file) {
  std::ifstream in(vectors_file);
  std::size_t dim = 0;
  in >> dim;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<double> v(dim);
    for (auto& x : v) ls >> x;
    vectors_[word] = std::move(v);
  }
}

std::vector<double> MappingOracle::embed(const std::vector<std::string>& words) const {
  std::vector<double> sum;
  for (const auto& w : words) {
    auto it = vectors_.find(w);
    if (it == vectors_.end()) continue;
    if (sum.empty()) sum.assign(it->second.size(), 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += it->second[i];
  }
  double n = 0;
  for (double x : sum) n += x * x;
  n = std::sqrt(n);
  for (double& x : sum) x /= n;
  return sum;
}

std::string MappingOracle::argmax(const std::string& label, const std::string& fragment,
                                  const std::vector<std::string>& candidates) const {
  auto split_words = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + " ") {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '\'') {
        cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    }
    return out;
  };
  const auto words = split_words(fragment);
  const auto lw = split_words(label);
  auto replaced = [&](const std::string& cand) {
    const auto cw = split_words(cand);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < words.size();) {
      if (i + lw.size() <= words.size() && std::equal(lw.begin(), lw.end(), words.begin() + static_cast<long>(i))) {
        out.insert(out.end(), cw.begin(), cw.end());
        i += lw.size();
      } else {
        out.push_back(words[i++]);
      }
    }
    return out;
  };
  const auto t0 = embed(words);
  std::string best;
  double best_sim = -2;
  for (const auto& c : candidates) {
    const auto t = embed(replaced(c));
    double dot = 0;
    for (std::size_t i = 0; i < t.size(); ++i) dot += t[i] * t0[i];
    if (dot > best_sim + 1e-12 || (std::abs(dot - best_sim) <= 1e-12 && c < best)) {
      best_sim = dot;
      best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------- layout

std::size_t hard_violations(const tt::layout::SceneLayout& layout,
                            const std::vector<tt::layout::RelationConstraint>& constraints) {
  using K = tt::layout::RelationKind;
  constexpr double margin = 0.02, eps = 0.01, tol = 1e-9;
  std::size_t bad = 0;
  for (const auto& c : constraints) {
    if (!c.hard) continue;
    const auto* a = layout.find(c.src);
    const auto* b = layout.find(c.dst);
    if (!a || !b) {
      ++bad;
      continue;
    }
    const double acx = a->x + a->w / 2, acy = a->y + a->h / 2;
    const double bcx = b->x + b->w / 2, bcy = b->y + b->h / 2;
    bool ok = true;
    switch (c.kind) {
      case K::Below: ok = acy > bcy + margin; break;
      case K::Above: ok = acy < bcy - margin; break;
      case K::LeftOf: ok = acx < bcx - margin; break;
      case K::RightOf: ok = acx > bcx + margin; break;
      case K::On: {
        const double bottom = a->y + a->h;
        const double overlap = std::min(a->x + a->w, b->x + b->w) - std::max(a->x, b->x);
        ok = bottom >= b->y - eps - tol && bottom <= b->y + 0.25 * b->h + tol &&
             overlap >= 0.5 * std::min(a->w, b->w) - tol;
        break;
      }
      case K::In:
        ok = a->x >= b->x - tol && a->y >= b->y - tol && a->x + a->w <= b->x + b->w + tol &&
             a->y + a->h <= b->y + b->h + tol;
        break;
      case K::Near: break;
    }
    if (!ok) ++bad;
  }
  return bad;
}

namespace {

bool reaches(const std::vector<std::vector<std::size_t>>& adj, std::size_t from, std::size_t to) {
  std::vector<std::size_t> stack{from};
  std::vector<bool> seen(adj.size(), false);
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = true;
    for (auto w : adj[v]) stack.push_back(w);
  }
  return false;
}

}  // namespace

RandomScene random_scene(std::uint64_t seed, const tt::concepts::CanonicalVocab& vocab, bool acyclic) {
  using K = tt::layout::RelationKind;
  tt::SeededRng rng(tt::combine(seed, 0x5CE7E));
  RandomScene out;
  const std::size_t n = 1 + rng.below(8);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cat = vocab.entities[rng.below(vocab.entities.size())];
    out.graph.nodes.push_back({tt::EntityId{i + 1}, cat, cat, "#000000", 2.0, vocab.size_of(cat),
                               {0, 0, static_cast<int>(i)}});
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  for (std::size_t k = pairs.size(); k > 1; --k) std::swap(pairs[k - 1], pairs[rng.below(k)]);
  const std::size_t m = std::min<std::size_t>(pairs.size(), rng.below(11));
  static const K kinds[] = {K::LeftOf, K::RightOf, K::Above, K::Below, K::On, K::In, K::Near};

  // precedence per axis: x (left to right) and y (top to bottom)
  std::vector<std::vector<std::size_t>> px(n), py(n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto [i, j] = pairs[k];
    for (int attempt = 0; attempt < 8; ++attempt) {
      const K kind = kinds[rng.below(7)];
      std::vector<std::vector<std::size_t>>* axis = nullptr;
      std::size_t from = i, to = j;
      switch (kind) {
        case K::LeftOf: axis = &px; break;
        case K::RightOf: axis = &px, std::swap(from, to); break;
        case K::Above: case K::On: axis = &py; break;
        case K::Below: axis = &py, std::swap(from, to); break;
        case K::In: case K::Near: break;
      }
      if (acyclic && axis && reaches(*axis, to, from)) continue;
      if (axis) (*axis)[from].push_back(to);
      out.constraints.push_back({kind, out.graph.nodes[i].id, out.graph.nodes[j].id, tt::layout::is_hard_kind(kind)});
      break;
    }
  }
  return out;
}

bool xml_well_formed(const std::string& document) {
  try {
    std::istringstream in(document);
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
    return tree.count("svg") == 1;
  } catch (const std::exception&) {
    return false;
  }
}

tt::concepts::CanonicalSceneGraph story0_scene() {
  const auto& res = resources();
  const auto text = story_fragments("owl_and_penguin.txt").at(1).text;
  const auto graph = tt::parser::parse_fragment(text, res.lexicon, res.palette, 0, 1);
  return res.mapper->map_graph(graph, text);
}

// ---------------------------------------------------------------- doodles

double gaussian(tt::SeededRng& rng) {
  const double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

tt::sketch::StrokeSet scribble(std::uint64_t seed) {
  tt::SeededRng rng(tt::combine(seed, 0x5C41BB1E));
  tt::sketch::TimedStroke s;
  for (int i = 0; i < 256; ++i) s.push_back({rng.uniform(0, 500), rng.uniform(0, 500), i * 8.0});
  return {{s}};
}

tt::sketch::StrokeSet transformed(const tt::render::StrokeTemplate& t, double dx, double dy, double scale,
                                  double degrees) {
  const double r = degrees * std::numbers::pi / 180, cs = std::cos(r), sn = std::sin(r);
  const double cx = (t.bbox.x0 + t.bbox.x1) / 2, cy = (t.bbox.y0 + t.bbox.y1) / 2;
  tt::sketch::StrokeSet out;
  double time = 0;
  for (const auto& st : t.strokes) {
    tt::sketch::TimedStroke s;
    for (const auto& p : st) {
      const double x = p.x - cx, y = p.y - cy;
      s.push_back({(x * cs - y * sn) * scale + cx + dx, (x * sn + y * cs) * scale + cy + dy, time += 10});
    }
    out.strokes.push_back(std::move(s));
  }
  return out;
}

tt::sketch::StrokeSet perturbed(const tt::render::StrokeTemplate& t, std::uint64_t seed) {
  tt::SeededRng rng(tt::combine(seed, tt::fnv1a(t.category)));
  const double degrees = rng.uniform(-20, 20);
  const double scale = rng.uniform(0.5, 2.0);
  auto out = transformed(t, rng.uniform(-100, 100), rng.uniform(-100, 100), scale, degrees);
  const double sigma = 0.02 * std::hypot(t.bbox.w(), t.bbox.h()) * scale;
  for (auto& s : out.strokes)
    for (auto& p : s) {
      p.x += sigma * gaussian(rng);
      p.y += sigma * gaussian(rng);
    }
  return out;
}

std::vector<std::string> sample_categories(std::size_t n) {
  const auto& cats = resources().bank.categories();
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n && i < cats.size(); ++i) out.push_back(cats[i * cats.size() / n]);
  return out;
}

}  // namespace support
