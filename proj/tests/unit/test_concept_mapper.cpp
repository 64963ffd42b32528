#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "support.hpp"
#include "taletorium/text.hpp"
#include "taletorium/concept_mapper.hpp"
#include "taletorium/error.hpp"

namespace tt = taletorium;
using namespace tt::concepts;

namespace {

const tt::session::Resources& res() { return support::resources(); }

WordVectorProvider scaled_vectors(double factor) {
  std::ifstream in(support::data_dir() / "vectors.txt");
  std::size_t dim = 0;
  in >> dim;
  std::unordered_map<std::string, Vector> vectors;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string w;
    if (!(ls >> w)) continue;
    Vector v(dim);
    for (auto& x : v) {
      ls >> x;
      x *= factor;
    }
    vectors.emplace(w, std::move(v));
  }
  return WordVectorProvider(dim, std::move(vectors));
}

// Provider whose embeddings are a positive multiple of another's.
class ScaledProvider final : public EmbeddingProvider {
 public:
  ScaledProvider(const EmbeddingProvider& base, double k) : base_(base), k_(k) {}
  std::size_t dimension() const override { return base_.dimension(); }
  Vector embed(std::string_view text) const override {
    auto v = base_.embed(text);
    for (auto& x : v) x *= k_;
    return v;
  }

 private:
  const EmbeddingProvider& base_;
  double k_;
};

std::vector<std::pair<tt::parser::DoodlerGraph, std::string>> corpus_graphs() {
  std::vector<std::pair<tt::parser::DoodlerGraph, std::string>> out;
  for (const auto& file : tt::story::corpus_files(support::data_dir() / "corpus")) {
    const auto story = tt::story::read_corpus_story(file);
    for (const auto& p : story.paragraphs)
      out.emplace_back(tt::parser::parse_fragment(p, res().lexicon, res().palette, 0), p);
  }
  return out;
}

}  // namespace

TEST_SUITE("concept_mapper") {
  TEST_CASE("embed is deterministic and self-similar") {
    const auto a = res().vectors.embed("the owl flew across the pool");
    const auto b = res().vectors.embed("the owl flew across the pool");
    CHECK(a == b);
    CHECK(a.size() == res().vectors.dimension());
    CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("unknown words cannot be embedded") {
    try {
      res().vectors.embed("qwxz zzkv");
      FAIL("expected EmbeddingUnavailable");
    } catch (const tt::Error& e) {
      CHECK(e.code() == tt::Errc::EmbeddingUnavailable);
    }
  }

  TEST_CASE("canonical labels map to themselves with similarity 1") {
    const auto r = map_entity("tree", "the unicorn trapped in the tree", res().vocab, res().vectors);
    CHECK(r.target == "tree");
    CHECK(r.similarity == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("unicorn maps to the oracle's nearest substitution") {
    const support::MappingOracle oracle(support::data_dir() / "vectors.txt");
    const std::string fragment = "the unicorn trapped in the tree";
    const auto want = oracle.argmax("unicorn", fragment, res().vocab.entities);
    const auto got = map_entity("unicorn", fragment, res().vocab, res().vectors);
    CHECK(got.target == want);
    CHECK(got.target == "horse");
    CHECK(got.source == "unicorn");
  }

  TEST_CASE("oracle agreement on corpus labels") {
    const support::MappingOracle oracle(support::data_dir() / "vectors.txt");
    int checked = 0;
    for (const auto& [g, text] : corpus_graphs()) {
      for (const auto& [id, n] : g.nodes) {
        // the oracle has no plural handling; stick to labels that appear verbatim
        bool plural_free = true;
        for (const auto& w : tt::text::words(text))
          plural_free &= res().vectors.contains(w) || !res().vectors.contains(tt::parser::singularize(w));
        if (!plural_free || !tt::text::contains_phrase(text, n.category)) continue;
        CAPTURE(text);
        CHECK(map_entity(n.category, text, res().vocab, res().vectors).target ==
              oracle.argmax(n.category, text, res().vocab.entities));
        ++checked;
      }
    }
    CHECK(checked > 10);
  }

  TEST_CASE("relations map through the same scheme") {
    const auto r = map_relation("trapped in", "the unicorn trapped in the tree", res().vocab, res().vectors);
    CHECK(r.target == "in");
    CHECK(map_relation("under", "a horse under a tree", res().vocab, res().vectors).target == "under");
  }

  TEST_CASE("empty vocabulary") {
    try {
      map_entity("fox", "the fox", CanonicalVocab{}, res().vectors);
      FAIL("expected VocabMissing");
    } catch (const tt::Error& e) {
      CHECK(e.code() == tt::Errc::VocabMissing);
    }
  }

  TEST_CASE("map_graph keeps structure and renames labels") {
    const std::string text = "The ferocious unicorn trapped in the tree.";
    const auto g = tt::parser::parse_fragment(text, res().lexicon, res().palette, 0);
    const auto s = map_graph(g, text, res().vocab, res().vectors);
    REQUIRE(s.nodes.size() == g.nodes.size());
    REQUIRE(s.edges.size() == g.edges.size());
    CHECK(s.find(g.find_category("unicorn")->id)->category == "horse");
    CHECK(s.find(g.find_category("unicorn")->id)->display == "unicorn");
    CHECK(s.edges[0].src == g.edges[0].src);
    CHECK(s.edges[0].dst == g.edges[0].dst);
    CHECK(s.edges[0].display == "trapped in");
  }

  TEST_CASE("canonical graphs are a fixpoint") {
    const std::string text = "A horse under a tree.";
    const auto g = tt::parser::parse_fragment(text, res().lexicon, res().palette, 0);
    const auto s = map_graph(g, text, res().vocab, res().vectors);
    for (const auto& n : s.nodes) CHECK(n.category == n.display);
    for (const auto& e : s.edges) CHECK(e.relation == e.display);
  }

  TEST_CASE("closure over every bundled paragraph") {
    const ConceptMapper mapper(res().vectors, res().vocab);
    for (const auto& [g, text] : corpus_graphs()) {
      const auto s = mapper.map_graph(g, text);
      CHECK(s.nodes.size() == g.nodes.size());
      CHECK(s.edges.size() == g.edges.size());
      for (const auto& n : s.nodes) CHECK(res().vocab.has_entity(n.category));
      for (const auto& e : s.edges)
        CHECK(std::find(res().vocab.relations.begin(), res().vocab.relations.end(), e.relation) !=
              res().vocab.relations.end());
    }
  }

  TEST_CASE("rare fairy-tale entities map without error") {
    const auto witch = map_entity("witch", "The witch lived in a house of cake.", res().vocab, res().vectors);
    const auto forester = map_entity("forester", "A forester heard the wolf.", res().vocab, res().vectors);
    CHECK(res().vocab.has_entity(witch.target));
    CHECK(res().vocab.has_entity(forester.target));
  }

  TEST_CASE("rescaling the vectors leaves every target unchanged") {
    const auto big = scaled_vectors(7.5);
    const ScaledProvider scaled(res().vectors, 0.013);
    for (const auto& [g, text] : corpus_graphs()) {
      for (const auto& [id, n] : g.nodes) {
        const auto base = map_entity(n.category, text, res().vocab, res().vectors).target;
        CHECK(map_entity(n.category, text, res().vocab, big).target == base);
        CHECK(map_entity(n.category, text, res().vocab, scaled).target == base);
      }
    }
  }

  TEST_CASE("cached and uncached results agree, also under concurrency") {
    const ConceptMapper mapper(res().vectors, res().vocab);
    const auto graphs = corpus_graphs();
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
      pool.emplace_back([&] {
        for (const auto& [g, text] : graphs)
          for (const auto& [id, n] : g.nodes) mapper.map_entity(n.category, text);
      });
    for (auto& th : pool) th.join();
    CHECK(mapper.cache_size() > 0);
    for (const auto& [g, text] : graphs)
      for (const auto& [id, n] : g.nodes) {
        const auto cached = mapper.map_entity(n.category, text);
        const auto direct = map_entity(n.category, text, res().vocab, res().vectors);
        CHECK(cached.target == direct.target);
        CHECK(cached.similarity == direct.similarity);
      }
  }

  TEST_CASE("parallel scoring kernel equals the serial reference") {
    const std::string fragment = "the unicorn trapped in the tree";
    const auto original = res().vectors.embed(fragment);
    std::vector<std::string> texts;
    for (const auto& c : res().vocab.entities) texts.push_back(*substitute(fragment, "unicorn", c));
    CHECK(score_candidates(res().vectors, original, texts) == score_candidates_serial(res().vectors, original, texts));
  }

  TEST_CASE("substitution matches plural forms word-wise") {
    CHECK(substitute("The kids played.", "kid", "child") == std::optional<std::string>("the child played"));
    CHECK(substitute("The cat sat.", "dog", "wolf") == std::nullopt);
    CHECK(substitute("It was trapped in the tree.", "trapped in", "in") == std::optional<std::string>("it was in the tree"));
  }

  TEST_CASE("vocabulary file is consistent") {
    const auto& v = res().vocab;
    CHECK(v.entities.size() == 81);
    CHECK(v.relations.size() == 20);
    std::set<std::string> unique(v.entities.begin(), v.entities.end());
    CHECK(unique.size() == v.entities.size());
    for (const auto& e : v.entities) {
      CHECK(v.size_class.contains(e));
      CHECK(tt::text::to_lower(e) == e);
    }
    for (const auto& r : v.relations) CHECK(v.relation_kinds.contains(r));
  }
}
