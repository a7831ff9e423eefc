#include "server.hpp"

#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "error.hpp"
#include "harness.hpp"
#include "layout_io.hpp"

namespace fbt {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using json::Json;

Json layoutMessage(const LayoutSpec& layout) {
  Json m = Json::object();
  m["type"] = "Layout";
  m["layout"] = layoutToJson(layout);
  return m;
}

Json stateMessage(const EntryState& state) {
  Json m = Json::object();
  m["type"] = "State";
  m["mode"] = entryModeName(state.mode);
  m["buffer"] = state.buffer;
  if (state.pending) {
    Json p = Json::object();
    p["region"] = regionName(state.pending->region);
    p["digit"] = state.pending->selected;
    p["press_count"] = state.pending->pressCount;
    m["pending"] = p;
  } else {
    m["pending"] = nullptr;
  }
  m["terminated"] = state.terminated;
  m["keystrokes"] = state.keystrokeLog.size();
  return m;
}

Json feedbackMessage(const FeedbackEvent& event) {
  Json m = Json::object();
  m["type"] = "Feedback";
  m["kind"] = feedbackKindName(event.kind);
  if (event.digit >= 0) m["digit"] = event.digit;
  m["detail"] = event.detail;
  m["utterance"] = event.utterance;
  return m;
}

Json errorMessage(std::string_view code, std::string_view message) {
  Json m = Json::object();
  m["type"] = "Error";
  m["code"] = code;
  m["message"] = message;
  return m;
}

namespace {

Json trialResultMessage(const TrialRecord& r) {
  Json m = Json::object();
  m["type"] = "TrialResult";
  m["participant"] = r.participantId;
  m["technique"] = entryModeName(r.technique);
  m["trial"] = r.trialIndex;
  m["presented"] = r.presented;
  m["transcribed"] = r.transcribed;
  m["seconds"] = r.result.durationSeconds;
  m["wpm"] = r.result.wpm;
  m["errors"] = r.result.errorCount;
  m["corrections"] = r.result.correctionCount;
  m["complete"] = r.result.complete;
  return m;
}

}  // namespace

LiveSession::LiveSession(LayoutSpec layout)
    : layout_(std::move(layout)), state_(EntryState::initial(layout_.mode())) {}

std::vector<Json> LiveSession::open() const { return {layoutMessage(layout_), stateMessage(state_)}; }

std::vector<Json> LiveSession::handle(std::string_view line) {
  try {
    const Json message = json::parse(line, "message");
    json::requireObject(message, "message");
    const std::string type = json::string(json::field(message, "type", "message"), "message.type");
    if (type == "Tap") return handleTap(message);
    if (type == "Reset") return handleReset(message);
    if (type == "Trace") return handleTrace(message);
    return {errorMessage("ParseError", "message.type: unknown message type '" + type + "'")};
  } catch (const Error& e) {
    return {errorMessage(errorCodeName(e.code()), e.what())};
  }
}

std::vector<Json> LiveSession::handleTap(const Json& message) {
  TapEvent tap;
  tap.point = json::point(message, "message");
  tap.timestampMs = json::number(json::field(message, "t", "message"), "message.t");
  auto result = step(state_, layout_, tap);
  state_ = std::move(result.state);
  std::vector<Json> out;
  for (const auto& event : result.feedback) out.push_back(feedbackMessage(event));
  out.push_back(stateMessage(state_));
  return out;
}

std::vector<Json> LiveSession::handleReset(const Json& message) {
  if (auto it = message.find("mode"); it != message.end()) {
    const auto mode = parseEntryMode(json::string(*it, "message.mode"));
    if (!mode) throw Error(ErrorCode::kParseError, "message.mode: expected \"single\" or \"double\"");
    if (*mode != layout_.mode()) layout_ = withMode(layout_, *mode);
  }
  state_ = EntryState::initial(layout_.mode());
  return open();
}

std::vector<Json> LiveSession::handleTrace(const Json& message) {
  const Json& trace = json::field(message, "trace", "message");
  json::requireObject(trace, "message.trace");
  // A string layout reference cannot be resolved remotely; the live layout
  // stands in for it.
  std::optional<LayoutSpec> override;
  if (auto it = trace.find("layout"); it == trace.end() || !it->is_object()) override = layout_;
  const Session session = sessionFromJson(trace, "message.trace", override, ".", 0);
  std::vector<Json> out;
  for (const auto& record : replay(session)) out.push_back(trialResultMessage(record));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string mimeType(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

// Open connections, so stop() can close them. Touched on the io thread only.
class Closable {
 public:
  virtual ~Closable() = default;
  virtual void close() = 0;
};

using Registry = std::vector<std::weak_ptr<Closable>>;

void track(Registry& registry, const std::shared_ptr<Closable>& connection) {
  std::erase_if(registry, [](const std::weak_ptr<Closable>& w) { return w.expired(); });
  registry.push_back(connection);
}

class WsConnection : public Closable, public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, LayoutSpec layout)
      : ws_(std::move(socket)), session_(std::move(layout)) {}

  void close() override {
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).shutdown(tcp::socket::shutdown_both, ignored);
    beast::get_lowest_layer(ws_).close(ignored);
  }

  void start(http::request<http::string_body> request) {
    ws_.text(true);
    ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      for (const auto& m : self->session_.open()) self->send(m);
      self->read();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        for (const auto& m : self->session_.handle(line)) self->send(m);
      }
      self->read();
    });
  }

  void send(const Json& message) {
    queue_.push_back(message.dump() + "\n");
    if (queue_.size() == 1) write();
  }

  void write() {
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) return;
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) self->write();
                    });
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  LiveSession session_;
};

class HttpConnection : public Closable, public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket socket, const LayoutSpec& layout, const std::string& staticDir, Registry& registry)
      : socket_(std::move(socket)), layout_(layout), staticDir_(staticDir), registry_(registry) {}

  void close() override {
    beast::error_code ignored;
    socket_.close(ignored);
  }

  void start() {
    http::async_read(socket_, buffer_, request_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->dispatch();
    });
  }

 private:
  void dispatch() {
    if (websocket::is_upgrade(request_)) {
      auto ws = std::make_shared<WsConnection>(std::move(socket_), layout_);
      track(registry_, ws);
      ws->start(std::move(request_));
      return;
    }
    auto response = std::make_shared<http::response<http::string_body>>(staticResponse());
    http::async_write(socket_, *response, [self = shared_from_this(), response](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->socket_.shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  http::response<http::string_body> staticResponse() const {
    http::response<http::string_body> res;
    res.version(request_.version());
    res.keep_alive(false);
    auto fail = [&](http::status status, std::string body) {
      res.result(status);
      res.set(http::field::content_type, "text/plain");
      res.body() = std::move(body);
      res.prepare_payload();
      return res;
    };
    if (request_.method() != http::verb::get) return fail(http::status::method_not_allowed, "GET only\n");
    std::string target(request_.target());
    target = target.substr(0, target.find('?'));
    if (staticDir_.empty() || !std::filesystem::is_directory(staticDir_) ||
        target.find("..") != std::string::npos || target.empty() || target.front() != '/') {
      return fail(http::status::not_found, "not found\n");
    }
    std::filesystem::path path = std::filesystem::path(staticDir_) / target.substr(1);
    if (std::filesystem::is_directory(path)) path /= "index.html";
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(http::status::not_found, "not found\n");
    std::ostringstream body;
    body << in.rdbuf();
    res.result(http::status::ok);
    res.set(http::field::content_type, mimeType(path));
    res.body() = body.str();
    res.prepare_payload();
    return res;
  }

  tcp::socket socket_;
  const LayoutSpec& layout_;
  const std::string& staticDir_;
  Registry& registry_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

}  // namespace

struct Server::Impl {
  Impl(LayoutSpec l, ServerConfig c) : layout(std::move(l)), config(std::move(c)), acceptor(ioc) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      auto connection = std::make_shared<HttpConnection>(std::move(socket), layout, config.staticDir, connections);
      track(connections, connection);
      connection->start();
      accept();
    });
  }

  LayoutSpec layout;
  ServerConfig config;
  asio::io_context ioc;
  tcp::acceptor acceptor;
  std::thread thread;
  std::uint16_t boundPort = 0;
  Registry connections;
};

Server::Server(LayoutSpec layout, ServerConfig config)
    : impl_(std::make_unique<Impl>(std::move(layout), std::move(config))) {}

Server::~Server() { stop(); }

void Server::start() {
  if (impl_->thread.joinable()) throw Error(ErrorCode::kNetwork, "server already running");
  beast::error_code ec;
  const auto address = asio::ip::make_address(impl_->config.address, ec);
  if (ec) throw Error(ErrorCode::kNetwork, "invalid address '" + impl_->config.address + "'");
  const tcp::endpoint endpoint(address, impl_->config.port);
  auto& acceptor = impl_->acceptor;
  auto check = [&](const char* what) {
    if (ec) {
      beast::error_code ignored;
      acceptor.close(ignored);
      throw Error(ErrorCode::kNetwork, std::string(what) + " " + impl_->config.address + ":" +
                                           std::to_string(impl_->config.port) + ": " + ec.message());
    }
  };
  acceptor.open(endpoint.protocol(), ec);
  check("cannot open");
  acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  check("cannot configure");
  acceptor.bind(endpoint, ec);
  check("cannot bind");
  acceptor.listen(asio::socket_base::max_listen_connections, ec);
  check("cannot listen on");
  impl_->boundPort = acceptor.local_endpoint().port();
  impl_->accept();
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

std::uint16_t Server::port() const { return impl_->boundPort; }

void Server::stop() {
  if (!impl_->thread.joinable()) return;
  asio::post(impl_->ioc, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
    for (const auto& weak : impl_->connections) {
      if (auto connection = weak.lock()) connection->close();
    }
    impl_->connections.clear();
    impl_->ioc.stop();
  });
  impl_->thread.join();
}

}  // namespace fbt
