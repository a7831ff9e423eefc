#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "error.hpp"

namespace fbt {

double wpm(std::size_t transcribedLength, double seconds) {
  if (transcribedLength < 1) {
    throw Error(ErrorCode::kEmptyTranscription, "WPM needs at least one transcribed character");
  }
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    throw Error(ErrorCode::kNonPositiveDuration, "WPM needs a positive, finite duration");
  }
  return (static_cast<double>(transcribedLength - 1) / seconds) * 60.0 * (1.0 / 5.0);
}

std::size_t errorCount(std::string_view presented, std::string_view transcribed) {
  // Two-row dynamic program over prefixes.
  std::vector<std::size_t> previous(transcribed.size() + 1);
  std::vector<std::size_t> current(transcribed.size() + 1);
  std::iota(previous.begin(), previous.end(), std::size_t{0});
  for (std::size_t i = 1; i <= presented.size(); ++i) {
    current[0] = i;
    for (std::size_t j = 1; j <= transcribed.size(); ++j) {
      const std::size_t substitution =
          previous[j - 1] + (presented[i - 1] == transcribed[j - 1] ? 0 : 1);
      current[j] = std::min({previous[j] + 1, current[j - 1] + 1, substitution});
    }
    std::swap(previous, current);
  }
  return previous[transcribed.size()];
}

std::size_t correctionCount(std::span<const Keystroke> keystrokeLog) {
  return static_cast<std::size_t>(
      std::count_if(keystrokeLog.begin(), keystrokeLog.end(),
                    [](const Keystroke& k) { return k.effect == KeystrokeEffect::kRemoved; }));
}

TrialResult scoreTrial(const Trial& trial) {
  TrialResult result;
  result.durationSeconds = std::max(0.0, (trial.endTimeMs - trial.startTimeMs) / 1000.0);
  result.errorCount = errorCount(trial.presented, trial.transcribed);
  result.correctionCount = correctionCount(trial.keystrokeLog);
  const bool called = !trial.keystrokeLog.empty() &&
                      trial.keystrokeLog.back().effect == KeystrokeEffect::kTerminated;
  result.complete = called && trial.transcribed.size() == trial.presented.size();
  if (!trial.transcribed.empty() && result.durationSeconds > 0.0) {
    result.wpm = wpm(trial.transcribed.size(), result.durationSeconds);
  }
  return result;
}

}  // namespace fbt
