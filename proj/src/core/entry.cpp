#include "entry.hpp"

#include <array>
#include <cmath>

#include "error.hpp"

namespace fbt {

namespace {

constexpr std::array<std::string_view, 10> kDigitWords = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
};

FeedbackEvent announceDigit(int d) {
  return {FeedbackKind::kAnnounceDigit, d, "", std::string(digitWord(d))};
}

FeedbackEvent announcePending(int d) {
  return {FeedbackKind::kAnnouncePending, d, "", std::string(digitWord(d)) + " pressed"};
}

FeedbackEvent announceAction(std::string_view name) {
  std::string utterance;
  if (name == "backspace") {
    utterance = "deleted";
  } else if (name == "call") {
    utterance = "calling";
  } else if (name == "pending cleared") {
    utterance = "selection cleared";
  } else {
    utterance = std::string(name);
  }
  return {FeedbackKind::kAnnounceAction, -1, std::string(name), std::move(utterance)};
}

FeedbackEvent announceError(std::string_view reason) {
  std::string utterance;
  if (reason == "empty") {
    utterance = "nothing to delete";
  } else if (reason == "pending replaced") {
    utterance = "selection replaced";
  } else {
    utterance = std::string(reason);
  }
  return {FeedbackKind::kAnnounceError, -1, std::string(reason), std::move(utterance)};
}

FeedbackEvent announceUnassigned() {
  return {FeedbackKind::kAnnounceUnassigned, -1, "", "no key here"};
}

}  // namespace

std::string_view digitWord(int digit) { return kDigitWords.at(static_cast<std::size_t>(digit)); }

std::string_view feedbackKindName(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::kAnnounceDigit: return "AnnounceDigit";
    case FeedbackKind::kAnnouncePending: return "AnnouncePending";
    case FeedbackKind::kAnnounceAction: return "AnnounceAction";
    case FeedbackKind::kAnnounceError: return "AnnounceError";
    case FeedbackKind::kAnnounceUnassigned: return "AnnounceUnassigned";
  }
  return "AnnounceUnassigned";
}

StepResult step(const EntryState& state, const LayoutSpec& layout, const TapEvent& tap) {
  if (state.terminated) {
    throw Error(ErrorCode::kSessionTerminated, "session already terminated by Call");
  }
  if (layout.mode() != state.mode) {
    throw Error(ErrorCode::kModeMismatch, "layout mode '" + std::string(entryModeName(layout.mode())) +
                                              "' does not match session mode '" +
                                              std::string(entryModeName(state.mode)) + "'");
  }
  if (!std::isfinite(tap.timestampMs) || tap.timestampMs < 0.0) {
    throw Error(ErrorCode::kNonMonotoneTimestamp, "tap timestamp must be finite and >= 0");
  }
  if (!state.keystrokeLog.empty() && tap.timestampMs < state.keystrokeLog.back().tap.timestampMs) {
    throw Error(ErrorCode::kNonMonotoneTimestamp, "tap timestamp goes backwards");
  }

  const std::optional<RegionId> region = hitTest(layout, tap.point);
  const KeyAction action = region ? layout.action(*region) : KeyAction::of(ActionKind::kUnassigned);

  StepResult out{state, {}};
  EntryState& next = out.state;
  auto& feedback = out.feedback;
  KeystrokeEffect effect = KeystrokeEffect::kNone;

  switch (action.kind) {
    case ActionKind::kDigit:
      next.buffer.push_back(static_cast<char>('0' + action.first));
      feedback.push_back(announceDigit(action.first));
      effect = KeystrokeEffect::kCommitted;
      break;

    case ActionKind::kDoubleDigitKey:
      if (!next.pending) {
        next.pending = PendingDigit{*region, action.first, 1};
      } else if (next.pending->region == *region) {
        PendingDigit& p = *next.pending;
        ++p.pressCount;
        p.selected = (p.pressCount % 2 == 1) ? action.first : action.second;
      } else {
        next.pending = PendingDigit{*region, action.first, 1};
        feedback.push_back(announceError("pending replaced"));
      }
      feedback.push_back(announcePending(next.pending->selected));
      effect = KeystrokeEffect::kPendingSet;
      break;

    case ActionKind::kEnter:
      if (next.pending) {
        const int d = next.pending->selected;
        next.buffer.push_back(static_cast<char>('0' + d));
        next.pending.reset();
        feedback.push_back(announceDigit(d));
        effect = KeystrokeEffect::kCommitted;
      } else {
        feedback.push_back(announceError("nothing to enter"));
      }
      break;

    case ActionKind::kBackspace:
      if (next.pending) {
        next.pending.reset();
        feedback.push_back(announceAction("pending cleared"));
        effect = KeystrokeEffect::kPendingCleared;
      } else if (!next.buffer.empty()) {
        next.buffer.pop_back();
        feedback.push_back(announceAction("backspace"));
        effect = KeystrokeEffect::kRemoved;
      } else {
        feedback.push_back(announceError("empty"));
      }
      break;

    case ActionKind::kContacts:
      feedback.push_back(announceAction("contacts"));
      break;

    case ActionKind::kCall:
      next.terminated = true;
      next.pending.reset();
      feedback.push_back(announceAction("call"));
      effect = KeystrokeEffect::kTerminated;
      break;

    case ActionKind::kUnassigned:
      feedback.push_back(announceUnassigned());
      break;
  }

  next.keystrokeLog.push_back(Keystroke{tap, region, action, effect});
  return out;
}

std::vector<RegionId> canonicalPressSequence(std::string_view number, EntryMode mode) {
  if (number.empty()) throw Error(ErrorCode::kInvalidArgument, "number must not be empty");
  const Keymap& keymap = canonicalKeymap(mode);
  std::optional<RegionId> enter;
  for (RegionId id : kAllRegions) {
    if (keymap[regionIndex(id)].kind == ActionKind::kEnter) enter = id;
  }

  std::vector<RegionId> presses;
  for (char c : number) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kInvalidArgument, "number must contain digits only");
    }
    const int d = c - '0';
    bool mapped = false;
    for (RegionId id : kAllRegions) {
      const KeyAction& a = keymap[regionIndex(id)];
      if (a.kind == ActionKind::kDigit && a.first == d) {
        presses.push_back(id);
        mapped = true;
      } else if (a.kind == ActionKind::kDoubleDigitKey && enter && (a.first == d || a.second == d)) {
        presses.push_back(id);
        if (a.first != d) presses.push_back(id);
        presses.push_back(*enter);
        mapped = true;
      }
      if (mapped) break;
    }
    if (!mapped) {
      throw Error(ErrorCode::kUnmappableDigit,
                  std::string("digit ") + c + " has no key in " + std::string(entryModeName(mode)) +
                      " mode");
    }
  }
  return presses;
}

}  // namespace fbt
