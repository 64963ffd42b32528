#include "taletorium/http_server.hpp"

#include <httplib.h>

#include <chrono>

namespace taletorium::http {
namespace {

using session::SessionManager;

void send_json(httplib::Response& res, const io::Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
  send_json(res, {{"error", errc_name(code)}, {"message", message}}, status_for(code));
}

// Runs a handler, mapping library errors onto HTTP status codes.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, Errc::BadRequest, e.what());
    } catch (const std::exception& e) {
      send_json(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
    }
  };
}

io::Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return io::Json::object();
  try {
    return io::Json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadRequest, std::string("invalid JSON body: ") + e.what());
  }
}

io::Json events_json(const std::vector<session::EventRecord>& events) {
  io::Json out = io::Json::array();
  for (const auto& e : events) out.push_back(session::to_json(e));
  return out;
}

io::Json story_json(const SessionManager& sessions, const std::string& id) {
  auto j = io::to_json(sessions.story(id));
  io::Json cast = io::Json::array();
  for (const auto& c : sessions.cast(id)) cast.push_back({{"id", c.id.value}, {"name", c.name}});
  j["cast"] = cast;
  j["revision"] = sessions.revision(id);
  return j;
}

std::string sse_frame(const session::EventRecord& e) {
  return "id: " + std::to_string(e.revision) + "\nevent: " + std::string(session::event_kind_name(e.kind)) +
         "\ndata: " + session::to_json(e).dump() + "\n\n";
}

long parse_long(const std::string& s, long fallback) {
  try {
    return s.empty() ? fallback : std::stol(s);
  } catch (const std::exception&) {
    throw Error(Errc::BadRequest, "not a number: " + s);
  }
}

}  // namespace

int status_for(Errc code) {
  switch (code) {
    case Errc::BadRequest:
    case Errc::InvalidArgument:
    case Errc::Parse:
    case Errc::DegenerateSketch:
    case Errc::DegenerateBox:
      return 400;
    case Errc::NotFound:
    case Errc::UnknownEntity:
      return 404;
    case Errc::StoryFinished:
    case Errc::CastFull:
    case Errc::NoCharacters:
      return 409;
    default:
      return 500;
  }
}

Server::Server(SessionManager& sessions) : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  routes();
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(Errc::Io, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Server::listen() { server_->listen_after_bind(); }

void Server::stop() {
  stopping_ = true;
  if (server_) server_->stop();
}

bool Server::running() const { return server_->is_running(); }

void Server::routes() {
  auto& svr = *server_;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
    res.status = 204;
  });

  svr.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto body = body_json(req);
             session::CreateArgs args;
             args.title = body.value("title", std::string());
             if (body.contains("characters")) {
               if (!body["characters"].is_array()) throw Error(Errc::BadRequest, "characters must be a list");
               args.characters = body["characters"].get<std::vector<std::string>>();
             }
             args.length = body.value("length", static_cast<int>(session::kFragmentsPerStory));
             args.seed = body.value("seed", std::uint64_t{0});
             const auto id = sessions_.create_session(args);
             send_json(res, {{"id", id}, {"revision", sessions_.revision(id)}, {"story", story_json(sessions_, id)}}, 201);
           }));

  svr.Post("/sessions/restore", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto id = sessions_.restore(body_json(req));
             send_json(res, {{"id", id}, {"revision", sessions_.revision(id)}}, 201);
           }));

  svr.Post(R"(/sessions/([^/]+)/step)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto r = sessions_.step(req.matches[1]);
             send_json(res, {{"fragment", io::to_json(r.fragment)}, {"revision", r.revision},
                             {"events", events_json(r.events)}});
           }));

  svr.Post(R"(/sessions/([^/]+)/doodle)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto body = body_json(req);
             session::DoodleRequest dr;
             dr.strokes = io::strokes_from_json(body);
             if (body.contains("position") && !body["position"].is_null()) {
               const auto& p = body["position"];
               dr.position = coref::Rect{p.at("x").get<double>(), p.at("y").get<double>(), p.at("w").get<double>(),
                                         p.at("h").get<double>()};
             }
             if (body.contains("canvas")) {
               dr.canvas_width = body["canvas"].value("width", 1000.0);
               dr.canvas_height = body["canvas"].value("height", 1000.0);
             }
             const auto r = sessions_.submit_doodle(req.matches[1], dr);
             io::Json out = {{"recognized", nullptr}, {"revision", r.revision}, {"events", events_json(r.events)}};
             if (r.recognized) out["recognized"] = {{"category", r.recognized->category}, {"score", r.recognized->score}};
             if (r.entity) out["entity"] = r.entity->value;
             send_json(res, out);
           }));

  svr.Delete(R"(/sessions/([^/]+)/characters/(\d+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const EntityId eid{std::stoull(req.matches[2])};
               const auto events = sessions_.remove_character(req.matches[1], eid);
               send_json(res, {{"removed", eid.value}, {"revision", events.back().revision},
                               {"events", events_json(events)}});
             }));

  svr.Get(R"(/sessions/([^/]+)/scene\.svg)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            res.set_content(sessions_.get_scene(req.matches[1]), "image/svg+xml");
          }));

  svr.Get(R"(/sessions/([^/]+)/story)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, story_json(sessions_, req.matches[1]));
          }));

  svr.Get(R"(/sessions/([^/]+)/snapshot)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, sessions_.snapshot(req.matches[1]));
          }));

  svr.Get(R"(/sessions/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            sessions_.revision(id);  // NotFound before the stream starts
            long since = parse_long(req.get_header_value("Last-Event-ID"), 0);
            if (req.has_param("since")) since = parse_long(req.get_param_value("since"), since);
            const bool follow = req.get_param_value("follow") != "0";
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream", [this, id, since, follow](std::size_t, httplib::DataSink& sink) mutable {
                  try {
                    const auto wait = follow ? std::chrono::milliseconds(500) : std::chrono::milliseconds(0);
                    const auto events = sessions_.events_since(id, since, wait);
                    for (const auto& e : events) {
                      const auto frame = sse_frame(e);
                      if (!sink.write(frame.data(), frame.size())) return false;
                      since = e.revision;
                    }
                    if (!follow || stopping_) {
                      sink.done();
                      return true;
                    }
                    if (events.empty()) {
                      static constexpr char keepalive[] = ": keepalive\n\n";
                      if (!sink.write(keepalive, sizeof keepalive - 1)) return false;
                    }
                    return true;
                  } catch (const std::exception&) {
                    sink.done();
                    return true;
                  }
                });
          }));
}

}  // namespace taletorium::http
