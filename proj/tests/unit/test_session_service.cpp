#include <doctest.h>

#include <thread>

#include "support.hpp"
#include "taletorium/text.hpp"
#include "taletorium/session_service.hpp"

namespace tt = taletorium;
using namespace tt::session;
using support::error_code;

namespace {

SessionManager manager() { return SessionManager(support::shared_resources()); }

const CreateArgs kFox{"The Fox", {"fox"}, 5, 7};

DoodleRequest cat_doodle(std::optional<tt::coref::Rect> where = {}) {
  DoodleRequest r;
  r.strokes = tt::sketch::from_template(*support::resources().bank.find("cat"));
  r.position = where;
  return r;
}

std::vector<std::string> categories(const tt::parser::DoodlerGraph& g) {
  std::vector<std::string> out;
  for (const auto& [id, n] : g.nodes) out.push_back(n.category);
  return out;
}

bool contains_word(const std::string& text, const std::string& word) {
  return tt::text::contains_phrase(tt::text::to_lower(text), word);
}

}  // namespace

TEST_SUITE("session_service") {
  TEST_CASE("create") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    const auto s = m.story(id);
    REQUIRE(s.fragments.size() == 1);
    CHECK(s.fragments[0].text == "The Fox");
    CHECK(categories(m.graph(id)) == std::vector<std::string>{"fox"});
    CHECK(m.revision(id) >= 1);
    CHECK(m.cast(id).size() == 1);
  }

  TEST_CASE("create rejects bad arguments") {
    auto m = manager();
    CHECK(error_code([&] { m.create_session({"T", {"fox", "cat", "dog", "owl", "hen"}, 5, 1}); }) ==
          tt::Errc::BadRequest);
    CHECK(error_code([&] { m.create_session({"", {"fox"}, 5, 1}); }) == tt::Errc::BadRequest);
    CHECK(error_code([&] { m.create_session({"T", {}, 5, 1}); }) == tt::Errc::BadRequest);
    CHECK(error_code([&] { m.create_session({"T", {"fox"}, 0, 1}); }) == tt::Errc::BadRequest);
    CHECK(m.size() == 0);
  }

  TEST_CASE("same arguments give different ids and the same state") {
    auto m = manager();
    const auto a = m.create_session(kFox), b = m.create_session(kFox);
    CHECK(a != b);
    CHECK(m.get_scene(a) == m.get_scene(b));
    CHECK(m.story(a).fragments == m.story(b).fragments);
    for (int i = 0; i < 4; ++i) CHECK(m.step(a).fragment == m.step(b).fragment);
    CHECK(m.get_scene(a) == m.get_scene(b));
  }

  TEST_CASE("step until finished") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    for (int i = 1; i < 5; ++i) {
      const auto r = m.step(id);
      CHECK(r.fragment.index == i);
      REQUIRE(r.events.size() == 2);
      CHECK(r.events[0].kind == EventKind::FragmentAdded);
      CHECK(r.events[1].kind == EventKind::LayoutUpdated);
      CHECK(r.revision == r.events.back().revision);
    }
    const long rev = m.revision(id);
    CHECK(error_code([&] { m.step(id); }) == tt::Errc::StoryFinished);
    CHECK(m.revision(id) == rev);
  }

  TEST_CASE("drawn cat joins the story") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    m.step(id);
    const auto fox = *m.layout(id).find(m.cast(id)[0].id);
    const auto r = m.submit_doodle(id, cat_doodle(tt::coref::Rect{std::max(0.0, fox.x - 0.3), fox.y, 0.2, 0.2}));
    REQUIRE(r.recognized.has_value());
    CHECK(r.recognized->category == "cat");
    REQUIRE(r.entity.has_value());
    CHECK(m.graph(id).find(*r.entity)->category == "cat");
    CHECK(m.cast(id).size() == 2);
    const auto next = m.step(id);
    CHECK(contains_word(next.fragment.text, "cat"));
  }

  TEST_CASE("interaction cycle across seeds and casts") {
    auto m = manager();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto id = m.create_session({"A Tale", seed % 2 ? std::vector<std::string>{"owl", "kid"}
                                                            : std::vector<std::string>{"fox"},
                                        5, seed});
      m.step(id);
      m.submit_doodle(id, cat_doodle());
      CHECK(contains_word(m.step(id).fragment.text, "cat"));
    }
  }

  TEST_CASE("scribbles are a no-op") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    const long rev = m.revision(id);
    const auto svg = m.get_scene(id);
    DoodleRequest r;
    r.strokes = support::scribble(11);
    const auto out = m.submit_doodle(id, r);
    CHECK_FALSE(out.recognized.has_value());
    CHECK(out.events.empty());
    CHECK(m.revision(id) == rev);
    CHECK(m.get_scene(id) == svg);
  }

  TEST_CASE("degenerate strokes") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    DoodleRequest one;
    one.strokes.strokes = {{{10, 10, 0}}};
    CHECK(error_code([&] { m.submit_doodle(id, one); }) == tt::Errc::BadRequest);
    DoodleRequest same;
    same.strokes.strokes = {{{10, 10, 0}, {10, 10, 5}}};
    CHECK(error_code([&] { m.submit_doodle(id, same); }) == tt::Errc::BadRequest);
  }

  TEST_CASE("remove a character") {
    auto m = manager();
    const auto id = m.create_session({"Friends", {"fox", "owl"}, 5, 2});
    const auto owl = m.cast(id)[1];
    CHECK(owl.name == "owl");
    const auto ev = m.remove_character(id, owl.id);
    REQUIRE_FALSE(ev.empty());
    CHECK(ev[0].kind == EventKind::NodeRemoved);
    CHECK(m.graph(id).find(owl.id) == nullptr);
    CHECK(m.cast(id).size() == 1);
    CHECK(error_code([&] { m.remove_character(id, owl.id); }) == tt::Errc::NotFound);
    for (int i = 0; i < 4; ++i) CHECK_FALSE(contains_word(m.step(id).fragment.text, "owl"));
  }

  TEST_CASE("scene before any step holds the cast only") {
    auto m = manager();
    const auto id = m.create_session({"Friends", {"fox", "owl"}, 5, 2});
    const auto svg = m.get_scene(id);
    CHECK(support::xml_well_formed(svg));
    CHECK(svg.find("data-category=\"fox\"") != std::string::npos);
    CHECK(svg.find("data-category=\"owl\"") != std::string::npos);
    std::size_t groups = 0;
    for (auto p = svg.find("<g id="); p != std::string::npos; p = svg.find("<g id=", p + 1)) ++groups;
    CHECK(groups == 2);
  }

  TEST_CASE("snapshot and restore reproduce the scene") {
    auto m = manager();
    const auto id = m.create_session({"Friends", {"fox", "owl"}, 5, 9});
    m.step(id);
    m.submit_doodle(id, cat_doodle());
    m.remove_character(id, m.cast(id)[1].id);
    m.step(id);
    const auto snap = m.snapshot(id);

    auto fresh = manager();
    const auto copy = fresh.restore(tt::io::parse(snap.dump()));
    CHECK(fresh.get_scene(copy) == m.get_scene(id));
    CHECK(fresh.revision(copy) == m.revision(id));
    CHECK(fresh.story(copy).fragments == m.story(id).fragments);
    CHECK(fresh.graph(copy) == m.graph(id));
    CHECK(fresh.snapshot(copy).dump() == snap.dump());
    // the restored session continues identically
    CHECK(fresh.step(copy).fragment == m.step(id).fragment);
  }

  TEST_CASE("tampered snapshots are rejected") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    m.step(id);
    auto snap = m.snapshot(id);
    snap["revision"] = snap["revision"].get<long>() + 5;
    CHECK(error_code([&] { m.restore(snap); }) == tt::Errc::Parse);
    CHECK(error_code([&] { m.restore(tt::io::Json::object()); }) == tt::Errc::Parse);
    CHECK(m.size() == 1);
  }

  TEST_CASE("unknown sessions") {
    auto m = manager();
    CHECK(error_code([&] { m.step("nope"); }) == tt::Errc::NotFound);
    CHECK(error_code([&] { m.get_scene("nope"); }) == tt::Errc::NotFound);
    CHECK(error_code([&] { m.snapshot("nope"); }) == tt::Errc::NotFound);
    CHECK(error_code([&] { m.submit_doodle("nope", cat_doodle()); }) == tt::Errc::NotFound);
  }

  TEST_CASE("event revisions increase strictly") {
    auto m = manager();
    const auto id = m.create_session({"Friends", {"fox", "owl"}, 5, 4});
    m.step(id);
    m.submit_doodle(id, cat_doodle());
    m.step(id);
    const auto events = m.events_since(id, 0);
    REQUIRE(events.size() >= 6);
    for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].revision > events[i - 1].revision);
    CHECK(events.back().revision == m.revision(id));
    const auto tail = m.events_since(id, events[2].revision);
    CHECK(tail.size() == events.size() - 3);
  }

  TEST_CASE("waiters wake on new events") {
    auto m = manager();
    const auto id = m.create_session(kFox);
    const long rev = m.revision(id);
    std::vector<EventRecord> got;
    std::thread waiter([&] { got = m.events_since(id, rev, std::chrono::seconds(10)); });
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    m.step(id);
    waiter.join();
    REQUIRE_FALSE(got.empty());
    CHECK(got[0].revision == rev + 1);
    m.shutdown();
    CHECK(m.events_since(id, m.revision(id), std::chrono::seconds(10)).empty());
  }

  TEST_CASE("cast is capped at four") {
    auto m = manager();
    const auto id = m.create_session({"Crowd", {"fox", "owl", "kid", "dog"}, 5, 1});
    CHECK(error_code([&] { m.submit_doodle(id, cat_doodle()); }) == tt::Errc::CastFull);
  }

  TEST_CASE("concurrent sessions are independent") {
    auto m = manager();
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) ids.push_back(m.create_session(kFox));
    std::vector<std::thread> pool;
    for (const auto& id : ids)
      pool.emplace_back([&, id] {
        m.step(id);
        m.submit_doodle(id, cat_doodle());
        m.step(id);
      });
    for (auto& t : pool) t.join();
    for (const auto& id : ids) CHECK(m.get_scene(id) == m.get_scene(ids[0]));
  }
}
