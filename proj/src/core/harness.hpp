#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entry.hpp"
#include "json_util.hpp"
#include "layout.hpp"
#include "metrics.hpp"
#include "stats.hpp"

namespace fbt {

inline constexpr std::string_view kTraceFormat = "fbt-trace";
inline constexpr int kTraceFormatVersion = 1;
inline constexpr std::size_t kPresentedDigits = 10;

struct TrialTrace {
  std::string presented;
  std::vector<TapEvent> taps;
};

struct Session {
  std::string participantId;
  EntryMode technique = EntryMode::kSingleDigit;
  LayoutSpec layout;
  std::string layoutRef;  // as written in the trace file; empty when inline
  std::vector<TrialTrace> trials;
  std::optional<std::string> preference;
};

// Checks the session invariants: technique matches the layout mode,
// presented numbers are digit strings of `presentedDigits` characters
// (0 accepts any non-empty length) and taps are time-ordered.
// Throws kInvariantViolation.
void validateSession(const Session& session, std::size_t presentedDigits = kPresentedDigits);

// --- trace files -----------------------------------------------------------

json::Json sessionToJson(const Session& session, bool inlineLayout = false);
std::string serializeSession(const Session& session, bool inlineLayout = false);

// `layoutOverride` replaces whatever layout the document references. Without
// it, a string reference is resolved against `baseDir`.
Session sessionFromJson(const json::Json& document, std::string_view source,
                        const std::optional<LayoutSpec>& layoutOverride, const std::string& baseDir,
                        std::size_t presentedDigits = kPresentedDigits);
Session loadSession(const std::string& path,
                    const std::optional<LayoutSpec>& layoutOverride = std::nullopt,
                    std::size_t presentedDigits = kPresentedDigits);
void saveSession(const Session& session, const std::string& path, bool inlineLayout = false);

// Expands directories into the trace documents (format "fbt-trace") they
// contain directly, in file name order. Other paths pass through unchanged.
std::vector<std::string> collectTraceFiles(std::span<const std::string> paths);

// --- replay ------------------------------------------------------------------

struct TrialRecord {
  std::string participantId;
  EntryMode technique = EntryMode::kSingleDigit;
  std::size_t trialIndex = 0;  // 1-based
  std::string presented;
  std::string transcribed;
  TrialResult result;
};

// Feeds one trace tap by tap through the entry engine and scores it.
TrialRecord replayTrial(const Session& session, std::size_t trialIndex);

// Engine errors are rethrown with their code, prefixed by trial and tap index.
std::vector<TrialRecord> replay(const Session& session);

// Replays independent sessions on up to `workers` threads; output order is
// (participantId, session order, trial index) regardless of scheduling.
std::vector<TrialRecord> replayAll(std::span<const Session> sessions, unsigned workers = 1);

std::string resultsCsvHeader();
std::string resultsCsvRow(const TrialRecord& record);
std::string resultsCsv(std::span<const TrialRecord> records);

// --- simulation --------------------------------------------------------------

struct LogNormal {
  double mu = 0.0;     // mean of log(ms)
  double sigma = 0.0;  // sd of log(ms)
};

struct NoiseModel {
  double tapSigma = 8.0;  // screen units, isotropic Gaussian around the intended center
  LogNormal tapLatency{7.3132203870903, 0.3};        // median 1500 ms
  LogNormal decisionLatency{6.5510803350434, 0.4};   // median 700 ms, before Enter / repeat presses
  std::uint64_t seed = 1;
};

struct SimulationConfig {
  std::size_t participants = 7;
  std::size_t trialsPerParticipant = 8;
  NoiseModel noise;
  std::vector<std::string> numbers;  // empty: ten-digit numbers drawn from the seed
};

// Throws kConfig for invalid counts, negative sigmas or non-digit numbers.
void validateSimulationConfig(const SimulationConfig& config);

// Numbers used when the config gives none; shared by every participant and
// technique for a given seed.
std::vector<std::string> simulatedNumbers(const SimulationConfig& config);

// One session per participant, ids "P01", "P02", ...; a pure function of
// (config, layout).
std::vector<Session> simulate(const SimulationConfig& config, const LayoutSpec& layout,
                              const std::string& layoutRef = "");

// --- evaluation --------------------------------------------------------------

struct ParticipantMeasures {
  std::vector<std::string> participants;
  std::vector<double> wpm;          // mean over scored trials
  std::vector<double> duration;     // mean seconds over scored trials
  std::vector<double> errors;       // total uncorrected errors
  std::vector<double> corrections;  // total corrections
};

struct TechniqueSummary {
  EntryMode technique = EntryMode::kSingleDigit;
  std::size_t sessions = 0;
  std::size_t trials = 0;
  std::size_t trialsScored = 0;
  ParticipantMeasures measures;
};

struct TestRecord {
  std::string test;      // "shapiro_wilk", "anova_oneway", "mann_whitney_u"
  std::string variable;  // "wpm", "duration", "errors"
  std::optional<EntryMode> technique;  // per-technique tests only
  std::vector<std::vector<double>> inputs;
  std::optional<TestResult> result;
  std::string error;  // set instead of result when the test is undefined
};

struct EvaluationOptions {
  bool includeIncomplete = false;
};

struct EvaluationReport {
  EvaluationOptions options;
  TechniqueSummary single;
  TechniqueSummary doubleDigit;
  std::vector<TestRecord> tests;
  std::map<std::string, std::size_t> preferences;
};

ParticipantMeasures aggregateByParticipant(std::span<const TrialRecord> records,
                                           bool includeIncomplete);

// Runs the statistical pipeline on per-participant measures.
std::vector<TestRecord> analyse(const ParticipantMeasures& single,
                                const ParticipantMeasures& doubleDigit);

// Throws kInsufficientData unless each technique has at least two sessions.
EvaluationReport evaluate(std::span<const Session> sessions, const EvaluationOptions& options = {},
                          unsigned workers = 1);

const TestRecord* findTest(const EvaluationReport& report, std::string_view test,
                           std::string_view variable,
                           std::optional<EntryMode> technique = std::nullopt);

json::Json reportToJson(const EvaluationReport& report);

}  // namespace fbt
