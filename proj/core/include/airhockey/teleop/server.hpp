#pragma once

#include <memory>

#include "airhockey/teleop/session.hpp"

namespace airhockey::teleop {

// HTTP + WebSocket front end of a TeleopSession:
//   GET /          the UI bundle's index.html (placeholder page without one)
//   GET /<file>    other files of the UI bundle
//   GET /catalog   task catalog JSON
//   WS  /teleop    state broadcasts out, target/control messages in
// The first WebSocket client controls the session; later ones are read-only
// until the controller leaves. All simulation and I/O runs on one thread.
class TeleopServer {
 public:
  explicit TeleopServer(TeleopConfig config);
  ~TeleopServer();
  TeleopServer(const TeleopServer&) = delete;
  TeleopServer& operator=(const TeleopServer&) = delete;

  // Binds and starts the loop thread. Throws when the port is busy.
  void start();
  // Stops ticking, flushes an open recording, closes connections, joins.
  void stop();
  // Blocks until SIGINT or SIGTERM, then stops.
  void wait();

  unsigned short port() const;

  struct Impl;  // opaque; public so connection handlers can name it

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace airhockey::teleop
