#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keymap.hpp"
#include "layout.hpp"
#include "types.hpp"

namespace fbt {

struct TapEvent {
  Point point;
  double timestampMs = 0.0;

  friend bool operator==(const TapEvent&, const TapEvent&) = default;
};

enum class FeedbackKind {
  kAnnounceDigit,
  kAnnouncePending,
  kAnnounceAction,
  kAnnounceError,
  kAnnounceUnassigned,
};

std::string_view feedbackKindName(FeedbackKind kind);

struct FeedbackEvent {
  FeedbackKind kind = FeedbackKind::kAnnounceUnassigned;
  int digit = -1;      // AnnounceDigit / AnnouncePending
  std::string detail;  // action name or error reason
  std::string utterance;

  friend bool operator==(const FeedbackEvent&, const FeedbackEvent&) = default;
};

struct PendingDigit {
  RegionId region = RegionId::kIndex;
  int selected = 0;
  int pressCount = 1;

  friend bool operator==(const PendingDigit&, const PendingDigit&) = default;
};

// What a logged keystroke did to the dialing buffer.
enum class KeystrokeEffect {
  kNone,
  kCommitted,       // one digit appended
  kRemoved,         // one committed digit deleted (a correction)
  kPendingSet,      // pending digit selected, cycled or replaced
  kPendingCleared,  // backspace dropped the pending digit
  kTerminated,
};

struct Keystroke {
  TapEvent tap;
  std::optional<RegionId> region;  // nullopt: tap landed in no region
  KeyAction action;
  KeystrokeEffect effect = KeystrokeEffect::kNone;

  friend bool operator==(const Keystroke&, const Keystroke&) = default;
};

struct EntryState {
  EntryMode mode = EntryMode::kSingleDigit;
  std::string buffer;
  std::optional<PendingDigit> pending;
  std::vector<Keystroke> keystrokeLog;
  bool terminated = false;

  static EntryState initial(EntryMode mode) {
    EntryState state;
    state.mode = mode;
    return state;
  }

  friend bool operator==(const EntryState&, const EntryState&) = default;
};

struct StepResult {
  EntryState state;
  std::vector<FeedbackEvent> feedback;
};

// Pure transition: resolves the tap through hitTest and applies the mode's
// transition table. Every accepted tap yields at least one feedback event.
// Throws kSessionTerminated, kModeMismatch, kNonMonotoneTimestamp, or
// kOutOfBounds (from hitTest).
StepResult step(const EntryState& state, const LayoutSpec& layout, const TapEvent& tap);

// Minimal region sequence that dials `number` with the mode's canonical
// keymap (no trailing Call). Throws kInvalidArgument on a non-digit or empty
// number and kUnmappableDigit if a digit has no key.
std::vector<RegionId> canonicalPressSequence(std::string_view number, EntryMode mode);

// Spoken word for a digit ("zero" .. "nine").
std::string_view digitWord(int digit);

}  // namespace fbt
