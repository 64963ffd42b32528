#pragma once

// HTTP front end of the session manager, with a server-sent event stream
// per session.

#include <atomic>
#include <memory>
#include <string>

#include "taletorium/error.hpp"
#include "taletorium/session_service.hpp"

namespace httplib {
class Server;
}

namespace taletorium::http {

int status_for(Errc code);

class Server {
 public:
  explicit Server(session::SessionManager& sessions);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws Io on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop().
  void listen();
  void stop();
  bool running() const;

 private:
  void routes();

  session::SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
};

}  // namespace taletorium::http
