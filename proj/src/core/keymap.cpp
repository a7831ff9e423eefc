#include "keymap.hpp"

#include <charconv>

#include "error.hpp"

namespace fbt {

namespace {

// Indexed by RegionId.
constexpr Keymap kSingleDigitKeymap = {
    KeyAction::of(ActionKind::kBackspace),  // AboveIndex
    KeyAction::digit(4),                    // Index
    KeyAction::digit(5),                    // Middle
    KeyAction::digit(6),                    // Ring
    KeyAction::digit(7),                    // Little
    KeyAction::digit(8),                    // BelowLittle
    KeyAction::digit(1),                    // AboveThumb
    KeyAction::digit(2),                    // Thumb
    KeyAction::digit(3),                    // BelowThumb
    KeyAction::digit(0),                    // BetweenThumbAndMiddle
    KeyAction::of(ActionKind::kCall),       // BottomCentre
    KeyAction::digit(9),                    // ScreenCentre
};

constexpr Keymap kDoubleDigitKeymap = {
    KeyAction::of(ActionKind::kBackspace),   // AboveIndex
    KeyAction::pair(1, 2),                   // Index
    KeyAction::pair(3, 4),                   // Middle
    KeyAction::pair(5, 6),                   // Ring
    KeyAction::pair(7, 8),                   // Little
    KeyAction::pair(9, 0),                   // BelowLittle ("nine and ten")
    KeyAction::of(ActionKind::kUnassigned),  // AboveThumb
    KeyAction::of(ActionKind::kEnter),       // Thumb
    KeyAction::of(ActionKind::kContacts),    // BelowThumb
    KeyAction::of(ActionKind::kUnassigned),  // BetweenThumbAndMiddle
    KeyAction::of(ActionKind::kCall),        // BottomCentre
    KeyAction::of(ActionKind::kUnassigned),  // ScreenCentre
};

int parseDigit(std::string_view text, std::string_view whole) {
  int value = -1;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0 || value > 9) {
    throw Error(ErrorCode::kParseError, "bad digit in key action '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string KeyAction::toString() const {
  switch (kind) {
    case ActionKind::kDigit: return "digit:" + std::to_string(first);
    case ActionKind::kDoubleDigitKey:
      return "pair:" + std::to_string(first) + "/" + std::to_string(second);
    case ActionKind::kBackspace: return "backspace";
    case ActionKind::kEnter: return "enter";
    case ActionKind::kCall: return "call";
    case ActionKind::kContacts: return "contacts";
    case ActionKind::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

KeyAction KeyAction::parse(std::string_view text) {
  if (text == "backspace") return of(ActionKind::kBackspace);
  if (text == "enter") return of(ActionKind::kEnter);
  if (text == "call") return of(ActionKind::kCall);
  if (text == "contacts") return of(ActionKind::kContacts);
  if (text == "unassigned") return of(ActionKind::kUnassigned);
  if (text.starts_with("digit:")) return digit(parseDigit(text.substr(6), text));
  if (text.starts_with("pair:")) {
    auto body = text.substr(5);
    auto slash = body.find('/');
    if (slash == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "pair action needs 'a/b': '" + std::string(text) + "'");
    }
    return pair(parseDigit(body.substr(0, slash), text), parseDigit(body.substr(slash + 1), text));
  }
  throw Error(ErrorCode::kParseError, "unknown key action '" + std::string(text) + "'");
}

const Keymap& canonicalKeymap(EntryMode mode) {
  return mode == EntryMode::kSingleDigit ? kSingleDigitKeymap : kDoubleDigitKeymap;
}

}  // namespace fbt
