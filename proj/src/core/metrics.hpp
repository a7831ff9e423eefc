#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entry.hpp"

namespace fbt {

// Words per minute for a transcription of `transcribedLength` characters
// entered in `seconds`: ((|T| - 1) / S) * 60 / 5. A "word" is five
// characters, digits included.
double wpm(std::size_t transcribedLength, double seconds);

// Minimal string distance (unit-cost Levenshtein) between the presented and
// transcribed strings; the uncorrected error count.
std::size_t errorCount(std::string_view presented, std::string_view transcribed);

// Backspaces that removed a committed digit. Backspaces that only dropped a
// pending double-digit selection are not corrections.
std::size_t correctionCount(std::span<const Keystroke> keystrokeLog);

struct Trial {
  std::string presented;
  std::string transcribed;
  double startTimeMs = 0.0;
  double endTimeMs = 0.0;
  std::vector<Keystroke> keystrokeLog;
};

struct TrialResult {
  double wpm = 0.0;
  double durationSeconds = 0.0;
  std::size_t errorCount = 0;
  std::size_t correctionCount = 0;
  bool complete = false;
};

// Scores a finished (or abandoned) trial. Duration runs from the first tap to
// the Call tap, or to the last tap when Call was never pressed. A trial is
// complete when it ended with Call and |T| = |P|. WPM is 0 when |T| < 1 or the
// duration is zero.
TrialResult scoreTrial(const Trial& trial);

}  // namespace fbt
