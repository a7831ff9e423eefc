#pragma once

#include <array>
#include <string>
#include <string_view>

#include "types.hpp"

namespace fbt {

enum class ActionKind {
  kDigit,
  kDoubleDigitKey,
  kBackspace,
  kEnter,
  kCall,
  kContacts,
  kUnassigned,
};

// What a region does when tapped. `first` carries the digit for kDigit and
// the first digit of a pair for kDoubleDigitKey; `second` is only meaningful
// for pairs.
struct KeyAction {
  ActionKind kind = ActionKind::kUnassigned;
  int first = -1;
  int second = -1;

  static constexpr KeyAction digit(int d) { return {ActionKind::kDigit, d, -1}; }
  static constexpr KeyAction pair(int a, int b) {
    return {ActionKind::kDoubleDigitKey, a, b};
  }
  static constexpr KeyAction of(ActionKind kind) { return {kind, -1, -1}; }

  friend bool operator==(const KeyAction&, const KeyAction&) = default;

  // Compact textual form used in layout files: "digit:4", "pair:1/2",
  // "backspace", "enter", "call", "contacts", "unassigned".
  std::string toString() const;
  static KeyAction parse(std::string_view text);  // throws kParseError
};

using Keymap = std::array<KeyAction, kRegionCount>;

// Widget assignment of the dialer for each entry mode.
const Keymap& canonicalKeymap(EntryMode mode);

}  // namespace fbt
