#include "airhockey/teleop/server.hpp"

#include <algorithm>
#include <chrono>
#include <csignal>
#include <deque>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"

namespace airhockey::teleop {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

constexpr std::size_t kMaxQueuedFrames = 256;

constexpr const char* kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>airhockey teleop</title>"
    "</head><body><h1>airhockey teleop</h1><p>No UI bundle configured (static_dir). "
    "The session is live: connect a WebSocket client to <code>/teleop</code>; the task "
    "catalog is at <a href=\"/catalog\">/catalog</a>.</p></body></html>\n";

std::string content_type(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

class WsSession;

}  // namespace

struct TeleopServer::Impl {
  explicit Impl(TeleopConfig c) : config(std::move(c)), session(config) {}

  void do_accept();
  void schedule_tick();
  void on_tick();
  void join(const std::shared_ptr<WsSession>& s);
  void leave(WsSession* s);
  void on_message(WsSession& s, const std::string& text);
  void broadcast(const StateBroadcast& state);
  http::response<http::string_body> handle_http(const http::request<http::string_body>& req);

  TeleopConfig config;
  TeleopSession session;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::steady_timer timer{ioc};
  std::chrono::steady_clock::time_point next_tick;
  std::chrono::nanoseconds period{};
  std::vector<std::shared_ptr<WsSession>> clients;
  WsSession* controller = nullptr;
  std::thread thread;
  bool running = false;
  unsigned short bound_port = 0;
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, TeleopServer::Impl& hub)
      : ws_(std::move(socket)), hub_(hub) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void send(std::string frame) {
    if (closing_) return;
    // Slow reader: drop the most recent unsent frame.
    if (queue_.size() >= kMaxQueuedFrames) queue_.pop_back();
    queue_.push_back(std::move(frame));
    if (queue_.size() == 1) do_write();
  }

  // Sends what is queued, then closes.
  void close_after_flush() {
    closing_ = true;
    if (queue_.empty()) do_close();
  }

  void force_close() {
    closing_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    hub_.join(shared_from_this());
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      hub_.leave(this);
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    hub_.on_message(*this, text);
    if (!closing_) do_read();
  }

  void do_write() {
    ws_.async_write(net::buffer(queue_.front()),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      hub_.leave(this);
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) {
      do_write();
    } else if (closing_) {
      do_close();
    }
  }

  void do_close() {
    ws_.async_close(websocket::close_code::policy_error,
                    [self = shared_from_this()](beast::error_code) { self->hub_.leave(self.get()); });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  TeleopServer::Impl& hub_;
  bool closing_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, TeleopServer::Impl& hub)
      : stream_(std::move(socket)), hub_(hub) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (websocket::is_upgrade(req_) && req_.target() == "/teleop") {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), hub_)->run(std::move(req_));
      return;
    }
    auto res = std::make_shared<http::response<http::string_body>>(hub_.handle_http(req_));
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
                        if (wec) return;
                        if (res->need_eof()) {
                          beast::error_code sec;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, sec);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  TeleopServer::Impl& hub_;
};

}  // namespace

void TeleopServer::Impl::do_accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpSession>(std::move(socket), *this)->run();
    do_accept();
  });
}

void TeleopServer::Impl::schedule_tick() {
  timer.expires_at(next_tick);
  timer.async_wait([this](beast::error_code ec) {
    if (ec) return;
    on_tick();
  });
}

void TeleopServer::Impl::on_tick() {
  broadcast(session.tick());
  next_tick += period;
  // After a long stall, resume the cadence instead of bursting to catch up.
  const auto now = std::chrono::steady_clock::now();
  if (next_tick + std::chrono::seconds(1) < now) next_tick = now + period;
  schedule_tick();
}

void TeleopServer::Impl::join(const std::shared_ptr<WsSession>& s) {
  clients.push_back(s);
  const bool control = controller == nullptr;
  if (control) controller = s.get();
  s->send(to_json(Ack{true, control ? "controller" : "read-only"}).dump());
  s->send(to_json(session.snapshot()).dump());
}

void TeleopServer::Impl::leave(WsSession* s) {
  const auto it = std::find_if(clients.begin(), clients.end(),
                               [s](const auto& c) { return c.get() == s; });
  if (it == clients.end()) return;
  clients.erase(it);
  if (controller == s) {
    controller = clients.empty() ? nullptr : clients.front().get();
    if (controller) controller->send(to_json(Ack{true, "controller"}).dump());
  }
}

void TeleopServer::Impl::on_message(WsSession& s, const std::string& text) {
  ClientMessage msg;
  try {
    msg = parse_client_message(text);
  } catch (const Error& e) {
    s.send(to_json(Ack{false, e.what()}).dump());
    s.close_after_flush();
    return;
  }
  if (&s != controller) {
    s.send(to_json(Ack{false, "read-only"}).dump());
    return;
  }
  if (const auto* t = std::get_if<TargetCommand>(&msg)) {
    const Ack ack = session.set_target(*t);
    if (!ack.ok) s.send(to_json(ack).dump());
    return;
  }
  s.send(to_json(session.apply(std::get<ControlCommand>(msg))).dump());
  broadcast(session.snapshot());
}

void TeleopServer::Impl::broadcast(const StateBroadcast& state) {
  const std::string frame = to_json(state).dump();
  for (const auto& c : clients) c->send(frame);
}

http::response<http::string_body> TeleopServer::Impl::handle_http(
    const http::request<http::string_body>& req) {
  http::response<http::string_body> res{http::status::ok, req.version()};
  res.keep_alive(req.keep_alive());
  auto fail = [&](http::status st, const std::string& why) {
    res.result(st);
    res.set(http::field::content_type, "text/plain");
    res.body() = why + "\n";
    res.prepare_payload();
    return res;
  };
  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    return fail(http::status::method_not_allowed, "GET only");
  }
  std::string target(req.target());
  if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
  if (target == "/catalog") {
    res.set(http::field::content_type, "application/json");
    res.body() = env::task_catalog(config.physics).dump();
  } else if (target == "/" && (config.static_dir.empty() ||
                               !std::filesystem::exists(config.static_dir / "index.html"))) {
    res.set(http::field::content_type, "text/html; charset=utf-8");
    res.body() = kPlaceholderPage;
  } else {
    if (config.static_dir.empty() || target.find("..") != std::string::npos) {
      return fail(http::status::not_found, "not found");
    }
    const std::filesystem::path file =
        config.static_dir / (target == "/" ? std::string("index.html") : target.substr(1));
    if (!std::filesystem::is_regular_file(file)) return fail(http::status::not_found, "not found");
    res.set(http::field::content_type, content_type(file));
    res.body() = read_file(file);
  }
  res.prepare_payload();
  if (req.method() == http::verb::head) res.body().clear();
  return res;
}

TeleopServer::TeleopServer(TeleopConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

TeleopServer::~TeleopServer() { stop(); }

void TeleopServer::start() {
  Impl& m = *impl_;
  if (m.running) throw Error("teleop server already started");
  beast::error_code ec;
  const auto address = net::ip::make_address(m.config.address, ec);
  if (ec) throw Error("bad listen address '" + m.config.address + "': " + ec.message());
  const tcp::endpoint endpoint(address, m.config.port);
  m.acceptor.open(endpoint.protocol(), ec);
  if (!ec) m.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) m.acceptor.bind(endpoint, ec);
  if (!ec) m.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    m.acceptor.close();
    throw Error("cannot listen on " + m.config.address + ":" + std::to_string(m.config.port) +
                ": " + ec.message());
  }
  m.bound_port = m.acceptor.local_endpoint().port();
  m.period = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::duration<double>(m.session.env().physics().control_dt));
  m.next_tick = std::chrono::steady_clock::now() + m.period;
  m.do_accept();
  m.schedule_tick();
  m.running = true;
  m.thread = std::thread([&m] { m.ioc.run(); });
}

void TeleopServer::stop() {
  Impl& m = *impl_;
  if (!m.running) return;
  net::post(m.ioc, [&m] {
    m.timer.cancel();
    beast::error_code ec;
    m.acceptor.close(ec);
    m.session.close();
    for (const auto& c : m.clients) c->force_close();
    m.clients.clear();
    m.controller = nullptr;
    m.ioc.stop();
  });
  m.thread.join();
  m.running = false;
}

void TeleopServer::wait() {
  net::io_context signals_ctx;
  net::signal_set signals(signals_ctx, SIGINT, SIGTERM);
  signals.async_wait([](beast::error_code, int) {});
  signals_ctx.run();
  stop();
}

unsigned short TeleopServer::port() const { return impl_->bound_port; }

}  // namespace airhockey::teleop
