#include "taletorium/story_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "taletorium/error.hpp"
#include "taletorium/seeding.hpp"
#include "taletorium/text.hpp"

namespace taletorium::story {
namespace {

bool better_keyword(const ScoredKeyword& a, const ScoredKeyword& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.phrase < b.phrase;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
}

}  // namespace

Stoplist load_stoplist(const std::string& path) {
  Stoplist out;
  for (const auto& line : text::read_data_lines(path)) out.insert(text::to_lower(text::trim(line)));
  return out;
}

std::vector<std::string> split_sentences(std::string_view input) {
  std::vector<std::string> out;
  for (auto& piece : text::split(input, ".!?")) {
    auto t = text::trim(piece);
    if (!text::words(t).empty()) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::vector<std::string>> group_sentences(const std::vector<std::string>& sentences,
                                                      std::size_t fragment_count) {
  if (fragment_count == 0) throw Error(Errc::InvalidArgument, "fragment_count must be >= 1");
  std::vector<std::vector<std::string>> groups(fragment_count);
  const std::size_t base = sentences.size() / fragment_count;
  const std::size_t extra = sentences.size() % fragment_count;
  std::size_t next = 0;
  for (std::size_t g = 0; g < fragment_count; ++g) {
    const std::size_t take = base + (g < extra ? 1 : 0);
    for (std::size_t k = 0; k < take; ++k) groups[g].push_back(sentences[next++]);
  }
  return groups;
}

std::vector<std::vector<std::string>> candidate_phrases(std::string_view sentence, const Stoplist& stoplist) {
  std::vector<std::vector<std::string>> phrases;
  std::vector<std::string> current;
  std::string word;
  auto end_word = [&] {
    if (word.empty()) return;
    auto ws = text::words(word);
    word.clear();
    for (auto& w : ws) {
      if (stoplist.contains(w)) {
        if (!current.empty()) phrases.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(std::move(w));
      }
    }
  };
  auto end_phrase = [&] {
    end_word();
    if (!current.empty()) phrases.push_back(std::move(current));
    current.clear();
  };
  for (char c : sentence) {
    if (text::is_word_char(c)) {
      word.push_back(c);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      end_word();
    } else {
      end_phrase();
    }
  }
  end_phrase();
  return phrases;
}

std::vector<std::vector<ScoredKeyword>> extract_keywords(std::string_view story_text, std::size_t fragment_count,
                                                         const Stoplist& stoplist) {
  auto groups = group_sentences(split_sentences(story_text), fragment_count);

  std::map<std::string, double> freq;
  std::map<std::string, double> degree;
  std::map<std::string, std::vector<std::string>> phrase_words;
  std::map<std::string, std::size_t> first_fragment;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& sentence : groups[g]) {
      for (auto& words : candidate_phrases(sentence, stoplist)) {
        for (const auto& w : words) {
          freq[w] += 1.0;
          degree[w] += static_cast<double>(words.size());
        }
        auto phrase = text::join(words, " ");
        first_fragment.try_emplace(phrase, g);
        phrase_words.try_emplace(phrase, std::move(words));
      }
    }
  }
  if (phrase_words.empty()) throw Error(Errc::NoKeywords, "no candidate keywords after stopword removal");

  std::vector<std::vector<ScoredKeyword>> out(fragment_count);
  for (const auto& [phrase, words] : phrase_words) {
    double score = 0.0;
    for (const auto& w : words) score += degree[w] / freq[w];
    out[first_fragment[phrase]].push_back({phrase, score});
  }
  for (auto& list : out) {
    std::sort(list.begin(), list.end(), better_keyword);
    if (list.size() > kKeywordsPerFragment) list.resize(kKeywordsPerFragment);
  }
  return out;
}

long PlannerModel::affinity_of(const std::string& character, const std::string& keyword) const {
  auto it = affinity.find({character, keyword});
  return it == affinity.end() ? 0 : it->second;
}

void PlannerModel::rank() {
  for (auto& [k, list] : successions) {
    std::sort(list.begin(), list.end(), [](const Succession& a, const Succession& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.keyword < b.keyword;
    });
  }
}

std::string PlannerModel::to_json() const {
  nlohmann::json doc;
  doc["format"] = "taletorium-planner/1";
  doc["keyword_scores"] = keyword_scores;
  nlohmann::json succ = nlohmann::json::object();
  for (const auto& [k, list] : successions) {
    auto& arr = succ[k] = nlohmann::json::array();
    for (const auto& s : list) arr.push_back({s.keyword, s.count});
  }
  doc["successions"] = std::move(succ);
  auto aff = nlohmann::json::array();
  for (const auto& [key, count] : affinity) aff.push_back({key.first, key.second, count});
  doc["affinity"] = std::move(aff);
  return doc.dump(1);
}

PlannerModel PlannerModel::from_json(std::string_view json) {
  PlannerModel m;
  try {
    auto doc = nlohmann::json::parse(json);
    m.keyword_scores = doc.at("keyword_scores").get<std::map<std::string, double>>();
    for (const auto& [k, arr] : doc.at("successions").items()) {
      auto& list = m.successions[k];
      for (const auto& s : arr) list.push_back({s.at(0).get<std::string>(), s.at(1).get<long>()});
    }
    for (const auto& a : doc.at("affinity"))
      m.affinity[{a.at(0).get<std::string>(), a.at(1).get<std::string>()}] = a.at(2).get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("planner model: ") + e.what());
  }
  for (const auto& [k, v] : m.keyword_scores) {
    if (!std::isfinite(v) || v < 0) throw Error(Errc::Parse, "planner model: bad score for " + k);
  }
  m.rank();
  return m;
}

void PlannerModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << to_json();
}

PlannerModel PlannerModel::load(const std::string& path) {
  return from_json(text::read_file(path));
}

std::vector<std::string> select_cast_names(const std::vector<std::vector<ScoredKeyword>>& per_fragment,
                                           std::size_t max_cast, const parser::Lexicon& lexicon) {
  std::map<std::string, double> best;
  for (const auto& list : per_fragment) {
    for (const auto& kw : list) {
      auto& s = best[kw.phrase];
      s = std::max(s, kw.score);
    }
  }
  std::vector<ScoredKeyword> pooled;
  for (const auto& [p, s] : best) pooled.push_back({p, s});
  std::sort(pooled.begin(), pooled.end(), better_keyword);

  std::vector<std::string> names;
  for (const auto& kw : pooled) {
    if (names.size() >= max_cast) break;
    auto words = text::words(kw.phrase);
    if (words.empty()) continue;
    auto head = parser::noun_lemma(words.back(), lexicon);
    if (!lexicon.is_noun(head)) continue;
    if (std::find(names.begin(), names.end(), head) == names.end()) names.push_back(head);
  }
  return names;
}

Character make_character(EntityId id, std::string name, const concepts::EmbeddingProvider& provider) {
  auto features = provider.embed(name);
  return {id, std::move(name), std::move(features)};
}

std::vector<Character> select_cast(const std::vector<std::vector<ScoredKeyword>>& per_fragment,
                                   std::size_t max_cast, const parser::Lexicon& lexicon,
                                   const concepts::EmbeddingProvider& provider) {
  auto names = select_cast_names(per_fragment, max_cast, lexicon);
  if (names.empty()) throw Error(Errc::NoCharacters, "no keyword has a noun head");
  std::vector<Character> cast;
  for (std::size_t i = 0; i < names.size(); ++i)
    cast.push_back(make_character(EntityId{i + 1}, names[i], provider));
  return cast;
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& corpus_dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (ec) throw Error(Errc::Io, "cannot list corpus " + corpus_dir.string());
  std::sort(files.begin(), files.end());
  return files;
}

CorpusStory read_corpus_story(const std::filesystem::path& file) {
  std::istringstream in(text::read_file(file.string()));
  CorpusStory story;
  std::string line;
  if (std::getline(in, line)) story.title = text::trim(line);
  std::vector<std::string> body_lines;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty()) continue;
    story.paragraphs.push_back(t);
  }
  story.body = text::join(story.paragraphs, "\n");
  return story;
}

PlannerModel train_planner(const std::filesystem::path& corpus_dir, std::size_t fragment_count,
                           const Stoplist& stoplist, const parser::Lexicon& lexicon) {
  auto files = corpus_files(corpus_dir);
  if (files.empty()) throw Error(Errc::EmptyCorpus, "no story files in " + corpus_dir.string());

  PlannerModel model;
  std::map<std::string, std::map<std::string, long>> succ;
  for (const auto& file : files) {
    auto st = read_corpus_story(file);
    std::vector<std::vector<ScoredKeyword>> keywords;
    try {
      keywords = extract_keywords(st.body, fragment_count, stoplist);
    } catch (const Error& e) {
      if (e.code() == Errc::NoKeywords) continue;
      throw;
    }
    for (const auto& list : keywords)
      for (const auto& kw : list) model.keyword_scores[kw.phrase] += kw.score;
    for (std::size_t j = 0; j + 1 < keywords.size(); ++j)
      for (const auto& a : keywords[j])
        for (const auto& b : keywords[j + 1]) ++succ[a.phrase][b.phrase];

    auto cast = select_cast_names(keywords, kDefaultMaxCast, lexicon);
    auto groups = group_sentences(split_sentences(st.body), fragment_count);
    for (std::size_t j = 0; j < groups.size(); ++j) {
      std::set<std::string> present;
      for (const auto& sentence : groups[j])
        for (const auto& w : text::words(sentence)) present.insert(parser::noun_lemma(w, lexicon));
      for (const auto& name : cast) {
        if (!present.contains(name)) continue;
        for (const auto& kw : keywords[j]) ++model.affinity[{name, kw.phrase}];
      }
    }
  }
  if (model.keyword_scores.empty()) throw Error(Errc::EmptyCorpus, "corpus yielded no keywords");
  for (const auto& [k, targets] : succ) {
    auto& list = model.successions[k];
    for (const auto& [t, c] : targets) list.push_back({t, c});
  }
  model.rank();
  return model;
}

StorylinePlan plan_keywords(const StoryFragment& prev_fragment, const std::vector<Character>& cast,
                            const PlannerModel& model, std::uint64_t seed,
                            const std::set<EntityId>& must_participate) {
  if (!model.trained()) throw Error(Errc::ModelMissing, "planner model is not trained");
  if (cast.empty()) throw Error(Errc::InvalidArgument, "cast is empty");

  StorylinePlan plan;
  plan.step = prev_fragment.index + 1;

  // successor counts of every model keyword found in the previous fragment
  std::map<std::string, long> candidates;
  for (const auto& [kw, list] : model.successions) {
    if (!text::contains_phrase(prev_fragment.text, kw)) continue;
    for (const auto& s : list) candidates[s.keyword] += s.count;
  }

  auto top_by_count = [&]() -> std::optional<std::string> {
    std::optional<std::pair<std::string, long>> best;
    for (const auto& [k, c] : candidates)
      if (!best || c > best->second) best = {k, c};  // map order gives lexicographic ties
    if (best) return best->first;
    return std::nullopt;
  };
  auto top_global = [&]() {
    std::pair<std::string, double> best{"", -1.0};
    for (const auto& [k, s] : model.keyword_scores)
      if (s > best.second) best = {k, s};
    return best.first;
  };

  bool any = false;
  for (const auto& ch : cast) {
    std::optional<std::string> chosen;
    long best_aff = 0, best_count = 0;
    for (const auto& [k, c] : candidates) {
      long aff = model.affinity_of(ch.name, k);
      if (aff <= 0) continue;
      if (!chosen || aff > best_aff || (aff == best_aff && c > best_count)) {
        chosen = k;
        best_aff = aff;
        best_count = c;
      }
    }
    if (!chosen && must_participate.contains(ch.id)) chosen = top_by_count().value_or(top_global());
    any = any || chosen.has_value();
    plan.entries[ch.id] = std::move(chosen);
  }
  if (!any) {
    const auto pick = combine(seed, static_cast<std::uint64_t>(plan.step)) % cast.size();
    plan.entries[cast[pick].id] = top_by_count().value_or(top_global());
  }
  return plan;
}

SentenceTemplates SentenceTemplates::load(const std::string& path) {
  SentenceTemplates t;
  for (const auto& line : text::read_data_lines(path)) t.lines.push_back(text::trim(line));
  return t;
}

StoryFragment realize_fragment(const StorylinePlan& plan, const std::vector<Character>& cast,
                               const SentenceTemplates& templates, std::uint64_t seed) {
  if (templates.lines.empty()) throw Error(Errc::TemplatesMissing, "sentence template bank is empty");
  std::vector<std::string> plain;
  for (const auto& t : templates.lines)
    if (t.find("{obj}") == std::string::npos) plain.push_back(t);

  auto keyword_of = [&](const Character& ch) -> const std::optional<std::string>* {
    auto it = plan.entries.find(ch.id);
    return it == plan.entries.end() ? nullptr : &it->second;
  };

  StoryFragment frag;
  frag.index = plan.step;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < cast.size(); ++i) {
    const auto* kw = keyword_of(cast[i]);
    if (!kw || !kw->has_value()) continue;
    // object slot: the next other character (in cast order) that has a keyword
    std::optional<std::string> obj;
    for (std::size_t k = 1; k < cast.size() && !obj; ++k) {
      const auto* other = keyword_of(cast[(i + k) % cast.size()]);
      if (other && other->has_value()) obj = **other;
    }
    const auto& pool = obj || plain.empty() ? templates.lines : plain;
    const auto h = combine(combine(seed, static_cast<std::uint64_t>(plan.step)), cast[i].id.value);
    std::string sentence = pool[h % pool.size()];
    replace_all(sentence, "{char}", cast[i].name);
    replace_all(sentence, "{kw}", **kw);
    replace_all(sentence, "{obj}", obj.value_or(cast[i].name));
    frag.sentences.emplace_back(cast[i].id, sentence);
    parts.push_back(std::move(sentence));
  }
  if (parts.empty()) throw Error(Errc::InvalidArgument, "plan has no keywords");
  frag.text = text::join(parts, " ");
  return frag;
}

Story generate_story(const std::string& title, const std::vector<Character>& cast, int length,
                     const PlannerModel& model, const SentenceTemplates& templates, std::uint64_t seed) {
  if (length < 1) throw Error(Errc::InvalidArgument, "story length must be >= 1");
  if (cast.empty()) throw Error(Errc::InvalidArgument, "cast is empty");
  Story story{title, cast, {}, length, seed};
  story.fragments.push_back({0, title, {}});
  for (int j = 1; j < length; ++j) {
    auto plan = plan_keywords(story.fragments.back(), cast, model, seed);
    story.fragments.push_back(realize_fragment(plan, cast, templates, seed));
  }
  return story;
}

}  // namespace taletorium::story
