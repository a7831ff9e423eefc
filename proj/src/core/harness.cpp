#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <random>

#include <fmt/format.h>

#include "error.hpp"
#include "layout_io.hpp"

namespace fbt {

namespace {

using json::Json;

std::string trialContext(std::size_t trial, std::optional<std::size_t> tap = std::nullopt) {
  std::string out = "trial " + std::to_string(trial);
  if (tap) out += " tap " + std::to_string(*tap);
  return out;
}

bool isDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string csvField(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t streamSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

constexpr std::uint64_t kNumberStream = 0x6e756d62657273ULL;  // "numbers"

double drawLatency(std::mt19937_64& rng, const LogNormal& dist) {
  std::normal_distribution<double> standard(0.0, 1.0);
  const double z = standard(rng);
  return std::round(std::exp(dist.mu + dist.sigma * z));
}

Json summaryJson(const std::vector<double>& values) {
  Json out = Json::object();
  out["values"] = values;
  if (values.size() >= 2) {
    auto ms = meanSd(values);
    out["mean"] = ms.mean;
    out["sd"] = ms.sd;
  } else {
    out["mean"] = values.empty() ? Json(nullptr) : Json(values.front());
    out["sd"] = nullptr;
  }
  return out;
}

Json techniqueJson(const TechniqueSummary& t) {
  Json out = Json::object();
  out["technique"] = entryModeName(t.technique);
  out["sessions"] = t.sessions;
  out["trials"] = t.trials;
  out["trials_scored"] = t.trialsScored;
  out["participants"] = t.measures.participants;
  out["wpm"] = summaryJson(t.measures.wpm);
  out["duration"] = summaryJson(t.measures.duration);
  out["errors"] = summaryJson(t.measures.errors);
  out["corrections"] = summaryJson(t.measures.corrections);
  return out;
}

template <typename Fn>
TestRecord runTest(std::string test, std::string variable, std::optional<EntryMode> technique,
                   std::vector<std::vector<double>> inputs, Fn&& fn) {
  TestRecord record{std::move(test), std::move(variable), technique, std::move(inputs), std::nullopt, ""};
  try {
    record.result = fn(record.inputs);
  } catch (const Error& e) {
    record.error = std::string(errorCodeName(e.code())) + ": " + e.what();
  }
  return record;
}

}  // namespace

void validateSession(const Session& session, std::size_t presentedDigits) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvariantViolation, what); };
  if (session.layout.mode() != session.technique) {
    fail("session technique '" + std::string(entryModeName(session.technique)) +
         "' does not match layout mode '" + std::string(entryModeName(session.layout.mode())) + "'");
  }
  for (std::size_t i = 0; i < session.trials.size(); ++i) {
    const auto& trial = session.trials[i];
    if (!isDigits(trial.presented)) fail(trialContext(i + 1) + ": presented number must be digits only");
    if (presentedDigits != 0 && trial.presented.size() != presentedDigits) {
      fail(trialContext(i + 1) + ": presented number must have " + std::to_string(presentedDigits) +
           " digits");
    }
    for (std::size_t k = 0; k < trial.taps.size(); ++k) {
      const double t = trial.taps[k].timestampMs;
      if (!std::isfinite(t) || t < 0.0) fail(trialContext(i + 1, k + 1) + ": timestamp must be >= 0");
      if (k > 0 && t < trial.taps[k - 1].timestampMs) {
        fail(trialContext(i + 1, k + 1) + ": taps are not time-ordered");
      }
    }
  }
}

// ---------------------------------------------------------------------------

Json sessionToJson(const Session& session, bool inlineLayout) {
  Json doc = Json::object();
  doc["format"] = kTraceFormat;
  doc["version"] = kTraceFormatVersion;
  doc["participant"] = session.participantId;
  doc["technique"] = entryModeName(session.technique);
  if (inlineLayout || session.layoutRef.empty()) {
    doc["layout"] = layoutToJson(session.layout);
  } else {
    doc["layout"] = session.layoutRef;
  }
  if (session.preference) doc["preference"] = *session.preference;
  doc["trials"] = Json::array();
  for (const auto& trial : session.trials) {
    Json t = Json::object();
    t["presented"] = trial.presented;
    t["taps"] = Json::array();
    for (const auto& tap : trial.taps) {
      Json tj = Json::object();
      tj["x"] = tap.point.x;
      tj["y"] = tap.point.y;
      tj["t"] = tap.timestampMs;
      t["taps"].push_back(std::move(tj));
    }
    doc["trials"].push_back(std::move(t));
  }
  return doc;
}

std::string serializeSession(const Session& session, bool inlineLayout) {
  return sessionToJson(session, inlineLayout).dump(2) + "\n";
}

Session sessionFromJson(const Json& doc, std::string_view source,
                        const std::optional<LayoutSpec>& layoutOverride, const std::string& baseDir,
                        std::size_t presentedDigits) {
  const std::string root(source);
  json::requireObject(doc, root);
  for (const auto& [key, value] : doc.items()) {
    static constexpr std::array<std::string_view, 7> kKnown = {
        "format", "version", "participant", "technique", "layout", "preference", "trials"};
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw Error(ErrorCode::kParseError, root + ": unknown field '" + key + "'");
    }
  }
  if (json::string(json::field(doc, "format", root), root + ".format") != kTraceFormat) {
    throw Error(ErrorCode::kParseError, root + ".format: expected \"fbt-trace\"");
  }
  if (json::number(json::field(doc, "version", root), root + ".version") != kTraceFormatVersion) {
    throw Error(ErrorCode::kParseError, root + ".version: unsupported trace version");
  }
  const std::string participant = json::string(json::field(doc, "participant", root), root + ".participant");
  const std::string techniqueText = json::string(json::field(doc, "technique", root), root + ".technique");
  auto technique = parseEntryMode(techniqueText);
  if (!technique) throw Error(ErrorCode::kParseError, root + ".technique: expected \"single\" or \"double\"");

  std::optional<LayoutSpec> layout = layoutOverride;
  std::string layoutRef;
  const Json& lj = json::field(doc, "layout", root);
  if (lj.is_string()) {
    layoutRef = lj.get<std::string>();
    if (!layout) {
      const auto path = std::filesystem::path(layoutRef).is_absolute()
                            ? std::filesystem::path(layoutRef)
                            : std::filesystem::path(baseDir) / layoutRef;
      layout = loadLayout(path.string());
    }
  } else if (lj.is_object()) {
    if (!layout) layout = layoutFromJson(lj, root + ".layout");
  } else {
    throw Error(ErrorCode::kParseError, root + ".layout: expected a file reference or a layout object");
  }

  std::optional<std::string> preference;
  if (auto it = doc.find("preference"); it != doc.end()) {
    preference = json::string(*it, root + ".preference");
  }

  std::vector<TrialTrace> trials;
  const std::string tp = root + ".trials";
  const Json& tj = json::field(doc, "trials", root);
  json::requireArray(tj, tp);
  for (std::size_t i = 0; i < tj.size(); ++i) {
    const std::string ep = tp + "[" + std::to_string(i) + "]";
    TrialTrace trial;
    trial.presented = json::string(json::field(tj[i], "presented", ep), ep + ".presented");
    const Json& taps = json::field(tj[i], "taps", ep);
    json::requireArray(taps, ep + ".taps");
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const std::string kp = ep + ".taps[" + std::to_string(k) + "]";
      TapEvent tap;
      tap.point = json::point(taps[k], kp);
      tap.timestampMs = json::number(json::field(taps[k], "t", kp), kp + ".t");
      trial.taps.push_back(tap);
    }
    trials.push_back(std::move(trial));
  }

  Session session{participant, *technique, *layout, layoutRef, std::move(trials), preference};
  validateSession(session, presentedDigits);
  return session;
}

Session loadSession(const std::string& path, const std::optional<LayoutSpec>& layoutOverride,
                    std::size_t presentedDigits) {
  const auto text = json::readFile(path);
  const auto baseDir = std::filesystem::path(path).parent_path().string();
  return sessionFromJson(json::parse(text, path), path, layoutOverride, baseDir, presentedDigits);
}

void saveSession(const Session& session, const std::string& path, bool inlineLayout) {
  json::writeFile(path, serializeSession(session, inlineLayout));
}

std::vector<std::string> collectTraceFiles(std::span<const std::string> paths) {
  std::vector<std::string> out;
  for (const auto& path : paths) {
    if (!std::filesystem::is_directory(path)) {
      out.push_back(path);
      continue;
    }
    std::vector<std::string> found;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
      const auto file = entry.path().string();
      const Json doc = json::parse(json::readFile(file), file);
      if (doc.is_object() && doc.value("format", "") == kTraceFormat) found.push_back(file);
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

TrialRecord replayTrial(const Session& session, std::size_t trialIndex) {
  const TrialTrace& trace = session.trials.at(trialIndex);
  EntryState state = EntryState::initial(session.technique);
  for (std::size_t k = 0; k < trace.taps.size(); ++k) {
    try {
      state = step(state, session.layout, trace.taps[k]).state;
    } catch (const Error& e) {
      throw Error(e.code(), trialContext(trialIndex + 1, k + 1) + ": " + e.what());
    }
  }

  Trial trial;
  trial.presented = trace.presented;
  trial.transcribed = state.buffer;
  if (!trace.taps.empty()) {
    trial.startTimeMs = trace.taps.front().timestampMs;
    trial.endTimeMs = trace.taps.back().timestampMs;
  }
  trial.keystrokeLog = std::move(state.keystrokeLog);

  return TrialRecord{session.participantId, session.technique, trialIndex + 1, trial.presented,
                     trial.transcribed, scoreTrial(trial)};
}

std::vector<TrialRecord> replay(const Session& session) {
  std::vector<TrialRecord> out;
  out.reserve(session.trials.size());
  for (std::size_t i = 0; i < session.trials.size(); ++i) out.push_back(replayTrial(session, i));
  return out;
}

std::vector<TrialRecord> replayAll(std::span<const Session> sessions, unsigned workers) {
  std::vector<std::vector<TrialRecord>> perSession(sessions.size());
  if (workers <= 1 || sessions.size() <= 1) {
    for (std::size_t i = 0; i < sessions.size(); ++i) perSession[i] = replay(sessions[i]);
  } else {
    std::size_t next = 0;
    while (next < sessions.size()) {
      std::vector<std::future<std::vector<TrialRecord>>> batch;
      const std::size_t end = std::min(sessions.size(), next + workers);
      for (std::size_t i = next; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, [&sessions, i] { return replay(sessions[i]); }));
      }
      for (std::size_t i = next; i < end; ++i) perSession[i] = batch[i - next].get();
      next = end;
    }
  }

  std::vector<std::size_t> order(sessions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sessions[a].participantId < sessions[b].participantId;
  });
  std::vector<TrialRecord> out;
  for (std::size_t i : order) {
    out.insert(out.end(), perSession[i].begin(), perSession[i].end());
  }
  return out;
}

std::string resultsCsvHeader() {
  return "participant,technique,trial,presented,transcribed,seconds,wpm,errors,corrections,complete\n";
}

std::string resultsCsvRow(const TrialRecord& r) {
  return fmt::format("{},{},{},{},{},{:.3f},{:.4f},{},{},{}\n", csvField(r.participantId),
                     entryModeName(r.technique), r.trialIndex, r.presented, r.transcribed,
                     r.result.durationSeconds, r.result.wpm, r.result.errorCount,
                     r.result.correctionCount, r.result.complete ? "true" : "false");
}

std::string resultsCsv(std::span<const TrialRecord> records) {
  std::string out = resultsCsvHeader();
  for (const auto& r : records) out += resultsCsvRow(r);
  return out;
}

// ---------------------------------------------------------------------------

void validateSimulationConfig(const SimulationConfig& config) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfig, what); };
  if (config.participants < 1) fail("participants must be >= 1");
  if (config.trialsPerParticipant < 1) fail("trials per participant must be >= 1");
  const auto& n = config.noise;
  if (!(n.tapSigma >= 0.0) || !std::isfinite(n.tapSigma)) fail("tap sigma must be finite and >= 0");
  for (const LogNormal* l : {&n.tapLatency, &n.decisionLatency}) {
    if (!(l->sigma >= 0.0) || !std::isfinite(l->sigma) || !std::isfinite(l->mu)) {
      fail("latency parameters must be finite with sigma >= 0");
    }
  }
  for (const auto& number : config.numbers) {
    if (!isDigits(number)) fail("number '" + number + "' must be a non-empty digit string");
  }
}

std::vector<std::string> simulatedNumbers(const SimulationConfig& config) {
  if (!config.numbers.empty()) return config.numbers;
  std::mt19937_64 rng(streamSeed(config.noise.seed, kNumberStream, 0));
  std::uniform_int_distribution<int> digit(0, 9);
  std::vector<std::string> numbers(config.trialsPerParticipant);
  for (auto& number : numbers) {
    for (std::size_t i = 0; i < kPresentedDigits; ++i) number.push_back(static_cast<char>('0' + digit(rng)));
  }
  return numbers;
}

std::vector<Session> simulate(const SimulationConfig& config, const LayoutSpec& layout,
                              const std::string& layoutRef) {
  validateSimulationConfig(config);
  const auto numbers = simulatedNumbers(config);
  const auto call = layout.regionFor(ActionKind::kCall);
  if (!call) throw Error(ErrorCode::kConfig, "layout has no Call key");
  const auto& geometry = layout.geometry();
  const std::uint64_t techniqueTag = layout.mode() == EntryMode::kSingleDigit ? 1 : 2;

  std::vector<Session> sessions;
  for (std::size_t p = 0; p < config.participants; ++p) {
    std::mt19937_64 rng(streamSeed(config.noise.seed, techniqueTag, p + 1));
    std::normal_distribution<double> standard(0.0, 1.0);
    Session session{fmt::format("P{:02}", p + 1), layout.mode(), layout, layoutRef, {}, std::nullopt};
    for (std::size_t t = 0; t < config.trialsPerParticipant; ++t) {
      TrialTrace trial;
      trial.presented = numbers[t % numbers.size()];
      auto presses = canonicalPressSequence(trial.presented, layout.mode());
      presses.push_back(*call);
      double clock = 0.0;
      for (std::size_t k = 0; k < presses.size(); ++k) {
        const RegionId target = presses[k];
        if (k > 0) {
          clock += drawLatency(rng, config.noise.tapLatency);
          const bool repeat = presses[k - 1] == target;
          const bool enter = layout.action(target).kind == ActionKind::kEnter;
          if (repeat || enter) clock += drawLatency(rng, config.noise.decisionLatency);
        }
        const Point c = layout.center(target);
        const double dx = config.noise.tapSigma * standard(rng);
        const double dy = config.noise.tapSigma * standard(rng);
        const Point p{std::clamp(c.x + dx, 0.0, geometry.width), std::clamp(c.y + dy, 0.0, geometry.height)};
        trial.taps.push_back(TapEvent{p, clock});
      }
      session.trials.push_back(std::move(trial));
    }
    sessions.push_back(std::move(session));
  }
  return sessions;
}

// ---------------------------------------------------------------------------

ParticipantMeasures aggregateByParticipant(std::span<const TrialRecord> records,
                                           bool includeIncomplete) {
  struct Accumulator {
    double wpm = 0.0;
    double duration = 0.0;
    std::size_t scored = 0;
    double errors = 0.0;
    double corrections = 0.0;
  };
  std::map<std::string, Accumulator> byParticipant;
  for (const auto& r : records) {
    auto& acc = byParticipant[r.participantId];
    acc.errors += static_cast<double>(r.result.errorCount);
    acc.corrections += static_cast<double>(r.result.correctionCount);
    if (r.result.complete || includeIncomplete) {
      acc.wpm += r.result.wpm;
      acc.duration += r.result.durationSeconds;
      ++acc.scored;
    }
  }
  ParticipantMeasures out;
  for (const auto& [id, acc] : byParticipant) {
    if (acc.scored == 0) continue;
    out.participants.push_back(id);
    out.wpm.push_back(acc.wpm / static_cast<double>(acc.scored));
    out.duration.push_back(acc.duration / static_cast<double>(acc.scored));
    out.errors.push_back(acc.errors);
    out.corrections.push_back(acc.corrections);
  }
  return out;
}

std::vector<TestRecord> analyse(const ParticipantMeasures& single,
                                const ParticipantMeasures& doubleDigit) {
  std::vector<TestRecord> tests;
  auto shapiro = [](const std::vector<std::vector<double>>& in) { return shapiroWilk(in[0]); };
  auto anova = [](const std::vector<std::vector<double>>& in) { return anovaOneWay(in); };
  auto mannWhitney = [](const std::vector<std::vector<double>>& in) { return mannWhitneyU(in[0], in[1]); };

  const std::array<std::pair<const char*, std::vector<double> ParticipantMeasures::*>, 3> variables = {{
      {"wpm", &ParticipantMeasures::wpm},
      {"duration", &ParticipantMeasures::duration},
      {"errors", &ParticipantMeasures::errors},
  }};
  for (const auto& [name, member] : variables) {
    tests.push_back(runTest("shapiro_wilk", name, EntryMode::kSingleDigit, {single.*member}, shapiro));
    tests.push_back(runTest("shapiro_wilk", name, EntryMode::kDoubleDigit, {doubleDigit.*member}, shapiro));
  }
  tests.push_back(runTest("anova_oneway", "wpm", std::nullopt, {single.wpm, doubleDigit.wpm}, anova));
  tests.push_back(runTest("anova_oneway", "duration", std::nullopt, {single.duration, doubleDigit.duration}, anova));
  tests.push_back(runTest("mann_whitney_u", "errors", std::nullopt, {single.errors, doubleDigit.errors}, mannWhitney));
  return tests;
}

EvaluationReport evaluate(std::span<const Session> sessions, const EvaluationOptions& options,
                          unsigned workers) {
  std::vector<Session> single;
  std::vector<Session> doubleDigit;
  for (const auto& s : sessions) (s.technique == EntryMode::kSingleDigit ? single : doubleDigit).push_back(s);
  if (single.size() < 2 || doubleDigit.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "evaluation needs at least 2 sessions per technique (single: " +
                    std::to_string(single.size()) + ", double: " + std::to_string(doubleDigit.size()) + ")");
  }

  EvaluationReport report;
  report.options = options;
  auto summarise = [&](std::span<const Session> group, EntryMode mode) {
    TechniqueSummary summary;
    summary.technique = mode;
    summary.sessions = group.size();
    const auto records = replayAll(group, workers);
    summary.trials = records.size();
    summary.trialsScored = static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(),
        [&](const TrialRecord& r) { return r.result.complete || options.includeIncomplete; }));
    summary.measures = aggregateByParticipant(records, options.includeIncomplete);
    return summary;
  };
  report.single = summarise(single, EntryMode::kSingleDigit);
  report.doubleDigit = summarise(doubleDigit, EntryMode::kDoubleDigit);
  report.tests = analyse(report.single.measures, report.doubleDigit.measures);

  std::map<std::string, std::string> preferenceByParticipant;
  for (const auto& s : sessions) {
    if (s.preference) preferenceByParticipant[s.participantId] = *s.preference;
  }
  for (const auto& [participant, label] : preferenceByParticipant) ++report.preferences[label];
  return report;
}

const TestRecord* findTest(const EvaluationReport& report, std::string_view test,
                           std::string_view variable, std::optional<EntryMode> technique) {
  for (const auto& t : report.tests) {
    if (t.test == test && t.variable == variable && t.technique == technique) return &t;
  }
  return nullptr;
}

Json reportToJson(const EvaluationReport& report) {
  Json doc = Json::object();
  doc["format"] = "fbt-report";
  doc["version"] = 1;
  doc["options"] = Json::object();
  doc["options"]["include_incomplete"] = report.options.includeIncomplete;
  doc["techniques"] = Json::array({techniqueJson(report.single), techniqueJson(report.doubleDigit)});
  doc["tests"] = Json::array();
  for (const auto& t : report.tests) {
    Json tj = Json::object();
    tj["test"] = t.test;
    tj["variable"] = t.variable;
    tj["technique"] = t.technique ? Json(entryModeName(*t.technique)) : Json(nullptr);
    tj["inputs"] = t.inputs;
    if (t.result) {
      tj["statistic"] = t.result->statistic;
      Json df = Json::array();
      if (t.result->df1) df.push_back(*t.result->df1);
      if (t.result->df2) df.push_back(*t.result->df2);
      tj["df"] = df;
      tj["p_value"] = t.result->pValue;
      tj["reject_at_05"] = t.result->rejectAt05;
    } else {
      tj["error"] = t.error;
    }
    doc["tests"].push_back(std::move(tj));
  }
  doc["preferences"] = Json::object();
  for (const auto& [label, count] : report.preferences) doc["preferences"][label] = count;
  return doc;
}

}  // namespace fbt
