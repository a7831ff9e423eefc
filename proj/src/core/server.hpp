#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "entry.hpp"
#include "json_util.hpp"
#include "layout.hpp"

namespace fbt {

// One live dialing session: the protocol logic of a websocket connection,
// independent of any transport.
//
// Client -> server
//   {"type":"Tap","x":..,"y":..,"t":..}
//   {"type":"Reset"} or {"type":"Reset","mode":"single"|"double"}
//   {"type":"Trace","trace":{...trace document...}}
// Server -> client
//   Layout{layout}                       on open and after every Reset
//   Feedback{kind, digit?, detail, utterance}
//   State{mode, buffer, pending, terminated, keystrokes}
//   TrialResult{participant, technique, trial, presented, transcribed,
//               seconds, wpm, errors, corrections, complete}
//   Error{code, message}
class LiveSession {
 public:
  explicit LiveSession(LayoutSpec layout);

  std::vector<json::Json> open() const;

  // Handles one newline-delimited message; a malformed message yields a
  // single Error reply and leaves the session untouched.
  std::vector<json::Json> handle(std::string_view line);

  const EntryState& state() const { return state_; }
  const LayoutSpec& layout() const { return layout_; }

 private:
  std::vector<json::Json> handleTap(const json::Json& message);
  std::vector<json::Json> handleReset(const json::Json& message);
  std::vector<json::Json> handleTrace(const json::Json& message);

  LayoutSpec layout_;
  EntryState state_;
};

json::Json layoutMessage(const LayoutSpec& layout);
json::Json stateMessage(const EntryState& state);
json::Json feedbackMessage(const FeedbackEvent& event);
json::Json errorMessage(std::string_view code, std::string_view message);

struct ServerConfig {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  std::string staticDir;   // served over plain HTTP when it exists
};

// Websocket endpoint; every connection gets its own LiveSession.
class Server {
 public:
  Server(LayoutSpec layout, ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving on a background thread. Throws kNetwork when
  // the address cannot be bound (e.g. the port is in use).
  void start();
  std::uint16_t port() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fbt
