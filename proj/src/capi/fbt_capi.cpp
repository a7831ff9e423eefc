#include "fbt/fbt.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "error.hpp"
#include "harness.hpp"
#include "layout_io.hpp"
#include "server.hpp"

struct fbt_layout {
  fbt::LayoutSpec spec;
};

struct fbt_session {
  fbt::LayoutSpec layout;
  fbt::EntryState state;
};

struct fbt_server {
  fbt::Server server;
};

namespace {

thread_local std::string lastError;

fbt_status toStatus(fbt::ErrorCode code) { return static_cast<fbt_status>(static_cast<int>(code)); }

template <typename Fn>
fbt_status guarded(Fn&& fn) {
  try {
    fn();
    lastError.clear();
    return FBT_OK;
  } catch (const fbt::Error& e) {
    lastError = e.what();
    return toStatus(e.code());
  } catch (const std::bad_alloc&) {
    lastError = "out of memory";
    return FBT_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    lastError = e.what();
    return FBT_INTERNAL_ERROR;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw fbt::Error(fbt::ErrorCode::kInvalidArgument, what);
}

char* duplicate(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

fbt::EntryMode toMode(fbt_mode mode) {
  require(mode == FBT_MODE_SINGLE || mode == FBT_MODE_DOUBLE, "unknown mode");
  return mode == FBT_MODE_SINGLE ? fbt::EntryMode::kSingleDigit : fbt::EntryMode::kDoubleDigit;
}

fbt_mode fromMode(fbt::EntryMode mode) {
  return mode == fbt::EntryMode::kSingleDigit ? FBT_MODE_SINGLE : FBT_MODE_DOUBLE;
}

fbt::RegionId toRegion(int region) {
  require(region >= 0 && region < FBT_REGION_COUNT, "region id out of range");
  return fbt::kAllRegions[static_cast<std::size_t>(region)];
}

fbt::Point toPoint(fbt_point p) { return {p.x, p.y}; }

void fill(const fbt::TestResult& r, fbt_test_result* out) {
  out->statistic = r.statistic;
  out->df1 = r.df1.value_or(-1);
  out->df2 = r.df2.value_or(-1);
  out->p_value = r.pValue;
  out->reject_at_05 = r.rejectAt05 ? 1 : 0;
}

}  // namespace

static_assert(FBT_REGION_COUNT == fbt::kRegionCount);
static_assert(FBT_NETWORK_ERROR == static_cast<int>(fbt::ErrorCode::kNetwork));

extern "C" {

const char* fbt_version(void) { return "1.0.0"; }

const char* fbt_status_name(fbt_status status) {
  if (status == FBT_OK) return "Ok";
  if (status == FBT_INTERNAL_ERROR) return "InternalError";
  if (status < FBT_INVALID_ARGUMENT || status > FBT_NETWORK_ERROR) return "Unknown";
  return fbt::errorCodeName(static_cast<fbt::ErrorCode>(status));
}

const char* fbt_last_error(void) { return lastError.c_str(); }

void fbt_string_free(char* text) { delete[] text; }

// ---- layout ----------------------------------------------------------------

void fbt_layout_options_init(fbt_layout_options* options) {
  if (!options) return;
  *options = fbt_layout_options{};
  options->width = 480.0;
  options->height = 800.0;
  options->handedness = FBT_LEFT_HOLD;
  options->mode = FBT_MODE_SINGLE;
  options->has_anchors = 0;
  options->inset = -1.0;
  options->edge_margin = -1.0;
  options->bottom_margin = -1.0;
  options->activation_radius = -1.0;
}

fbt_status fbt_layout_create(const fbt_layout_options* options, fbt_layout** out) {
  return guarded([&] {
    require(options && out, "null argument");
    fbt::ScreenGeometry geometry{options->width, options->height,
                                 options->handedness == FBT_RIGHT_HOLD ? fbt::Handedness::kRightHold
                                                                       : fbt::Handedness::kLeftHold};
    require(geometry.width > 0.0 && geometry.height > 0.0, "screen width and height must be > 0");
    const fbt::AnchorSet anchors =
        options->has_anchors ? fbt::AnchorSet{toPoint(options->index), toPoint(options->middle),
                                              toPoint(options->ring), toPoint(options->little),
                                              toPoint(options->thumb)}
                             : fbt::defaultAnchors(geometry);
    fbt::LayoutOptions lo;
    auto opt = [](double v) { return v < 0.0 ? std::nullopt : std::optional<double>(v); };
    lo.inset = opt(options->inset);
    lo.edgeMargin = opt(options->edge_margin);
    lo.bottomMargin = opt(options->bottom_margin);
    lo.activationRadius = opt(options->activation_radius);
    *out = new fbt_layout{fbt::LayoutSpec::derive(geometry, anchors, toMode(options->mode), lo)};
  });
}

fbt_status fbt_layout_load(const char* path, fbt_layout** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new fbt_layout{fbt::loadLayout(path)};
  });
}

fbt_status fbt_layout_from_json(const char* text, fbt_layout** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new fbt_layout{fbt::parseLayout(text)};
  });
}

fbt_status fbt_layout_save(const fbt_layout* layout, const char* path) {
  return guarded([&] {
    require(layout && path, "null argument");
    fbt::saveLayout(layout->spec, path);
  });
}

fbt_status fbt_layout_to_json(const fbt_layout* layout, char** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    *out = duplicate(fbt::serializeLayout(layout->spec));
  });
}

fbt_status fbt_layout_mirror(const fbt_layout* layout, fbt_layout** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    *out = new fbt_layout{fbt::mirror(layout->spec)};
  });
}

fbt_status fbt_layout_with_mode(const fbt_layout* layout, fbt_mode mode, fbt_layout** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    *out = new fbt_layout{fbt::withMode(layout->spec, toMode(mode))};
  });
}

fbt_mode fbt_layout_mode(const fbt_layout* layout) { return fromMode(layout->spec.mode()); }

fbt_status fbt_layout_region_center(const fbt_layout* layout, int region, fbt_point* out) {
  return guarded([&] {
    require(layout && out, "null argument");
    const auto c = layout->spec.center(toRegion(region));
    *out = fbt_point{c.x, c.y};
  });
}

fbt_status fbt_layout_region_action(const fbt_layout* layout, int region, char** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    *out = duplicate(layout->spec.action(toRegion(region)).toString());
  });
}

double fbt_layout_activation_radius(const fbt_layout* layout) {
  return layout->spec.parameters().activationRadius;
}

fbt_status fbt_layout_hit_test(const fbt_layout* layout, double x, double y, int* out_region) {
  return guarded([&] {
    require(layout && out_region, "null argument");
    const auto hit = fbt::hitTest(layout->spec, {x, y});
    *out_region = hit ? static_cast<int>(fbt::regionIndex(*hit)) : FBT_NO_REGION;
  });
}

void fbt_layout_free(fbt_layout* layout) { delete layout; }

// ---- live entry ------------------------------------------------------------

fbt_status fbt_session_create(const fbt_layout* layout, fbt_session** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    *out = new fbt_session{layout->spec, fbt::EntryState::initial(layout->spec.mode())};
  });
}

fbt_status fbt_session_tap(fbt_session* session, double x, double y, double t_ms, fbt_feedback_fn callback,
                           void* user) {
  return guarded([&] {
    require(session != nullptr, "null argument");
    auto result = fbt::step(session->state, session->layout, fbt::TapEvent{{x, y}, t_ms});
    session->state = std::move(result.state);
    if (!callback) return;
    for (const auto& event : result.feedback) {
      const fbt_feedback fb{static_cast<fbt_feedback_kind>(static_cast<int>(event.kind)), event.digit,
                            event.detail.c_str(), event.utterance.c_str()};
      callback(&fb, user);
    }
  });
}

const char* fbt_session_buffer(const fbt_session* session) { return session->state.buffer.c_str(); }

int fbt_session_pending(const fbt_session* session) {
  return session->state.pending ? session->state.pending->selected : -1;
}

int fbt_session_terminated(const fbt_session* session) { return session->state.terminated ? 1 : 0; }

size_t fbt_session_keystrokes(const fbt_session* session) { return session->state.keystrokeLog.size(); }

size_t fbt_session_corrections(const fbt_session* session) {
  return fbt::correctionCount(session->state.keystrokeLog);
}

void fbt_session_free(fbt_session* session) { delete session; }

fbt_status fbt_canonical_sequence(const char* number, fbt_mode mode, int* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(number && count, "null argument");
    const auto presses = fbt::canonicalPressSequence(number, toMode(mode));
    *count = presses.size();
    if (!out) return;
    require(capacity >= presses.size(), "output buffer too small");
    for (std::size_t i = 0; i < presses.size(); ++i) out[i] = static_cast<int>(fbt::regionIndex(presses[i]));
  });
}

// ---- metrics ---------------------------------------------------------------

fbt_status fbt_wpm(size_t transcribed_length, double seconds, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = fbt::wpm(transcribed_length, seconds);
  });
}

fbt_status fbt_error_count(const char* presented, const char* transcribed, size_t* out) {
  return guarded([&] {
    require(presented && transcribed && out, "null argument");
    *out = fbt::errorCount(presented, transcribed);
  });
}

// ---- statistics ------------------------------------------------------------

fbt_status fbt_mean_sd(const double* values, size_t n, double* mean, double* sd) {
  return guarded([&] {
    require((values || n == 0) && mean && sd, "null argument");
    const auto r = fbt::meanSd({values, n});
    *mean = r.mean;
    *sd = r.sd;
  });
}

fbt_status fbt_shapiro_wilk(const double* values, size_t n, fbt_test_result* out) {
  return guarded([&] {
    require((values || n == 0) && out, "null argument");
    fill(fbt::shapiroWilk({values, n}), out);
  });
}

fbt_status fbt_anova_oneway(const double* const* groups, const size_t* sizes, size_t k, fbt_test_result* out) {
  return guarded([&] {
    require((k == 0 || (groups && sizes)) && out, "null argument");
    std::vector<std::vector<double>> data(k);
    for (size_t i = 0; i < k; ++i) {
      require(groups[i] || sizes[i] == 0, "null group");
      data[i].assign(groups[i], groups[i] + sizes[i]);
    }
    fill(fbt::anovaOneWay(data), out);
  });
}

fbt_status fbt_mann_whitney_u(const double* a, size_t na, const double* b, size_t nb, fbt_mw_method method,
                              fbt_test_result* out) {
  return guarded([&] {
    require((a || na == 0) && (b || nb == 0) && out, "null argument");
    require(method >= FBT_MW_AUTO && method <= FBT_MW_ASYMPTOTIC, "unknown method");
    fill(fbt::mannWhitneyU({a, na}, {b, nb}, static_cast<fbt::MannWhitneyMethod>(method)), out);
  });
}

// ---- harness ---------------------------------------------------------------

fbt_status fbt_replay_file(const char* trace_path, const char* layout_path, char** csv_out) {
  return guarded([&] {
    require(trace_path && csv_out, "null argument");
    std::optional<fbt::LayoutSpec> layout;
    if (layout_path) layout = fbt::loadLayout(layout_path);
    const auto session = fbt::loadSession(trace_path, layout);
    *csv_out = duplicate(fbt::resultsCsv(fbt::replay(session)));
  });
}

void fbt_simulation_options_init(fbt_simulation_options* options) {
  if (!options) return;
  const fbt::SimulationConfig defaults;
  *options = fbt_simulation_options{};
  options->seed = defaults.noise.seed;
  options->participants = defaults.participants;
  options->trials = defaults.trialsPerParticipant;
  options->tap_sigma = defaults.noise.tapSigma;
  options->tap_latency_mu = defaults.noise.tapLatency.mu;
  options->tap_latency_sigma = defaults.noise.tapLatency.sigma;
  options->decision_latency_mu = defaults.noise.decisionLatency.mu;
  options->decision_latency_sigma = defaults.noise.decisionLatency.sigma;
}

fbt_status fbt_simulate(const fbt_simulation_options* options, const fbt_layout* layout, const char* out_dir) {
  return guarded([&] {
    require(options && layout && out_dir, "null argument");
    require(options->numbers || options->number_count == 0, "null numbers");
    fbt::SimulationConfig config;
    config.participants = options->participants;
    config.trialsPerParticipant = options->trials;
    config.noise.seed = options->seed;
    config.noise.tapSigma = options->tap_sigma;
    config.noise.tapLatency = {options->tap_latency_mu, options->tap_latency_sigma};
    config.noise.decisionLatency = {options->decision_latency_mu, options->decision_latency_sigma};
    for (size_t i = 0; i < options->number_count; ++i) {
      require(options->numbers[i] != nullptr, "null number");
      config.numbers.emplace_back(options->numbers[i]);
    }
    fbt::validateSimulationConfig(config);

    const std::string mode(fbt::entryModeName(layout->spec.mode()));
    const std::string layoutFile = "layout-" + mode + ".json";
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw fbt::Error(fbt::ErrorCode::kIo, std::string("cannot create ") + out_dir + ": " + ec.message());
    const std::filesystem::path dir(out_dir);
    fbt::saveLayout(layout->spec, (dir / layoutFile).string());
    for (const auto& session : fbt::simulate(config, layout->spec, layoutFile)) {
      fbt::saveSession(session, (dir / (session.participantId + "-" + mode + ".json")).string());
    }
  });
}

fbt_status fbt_evaluate_files(const char* const* trace_paths, size_t count, int include_incomplete,
                              unsigned workers, char** report_json, char** csv) {
  return guarded([&] {
    require(trace_paths || count == 0, "null argument");
    std::vector<std::string> paths;
    for (size_t i = 0; i < count; ++i) {
      require(trace_paths[i] != nullptr, "null path");
      paths.emplace_back(trace_paths[i]);
    }
    std::vector<fbt::Session> sessions;
    for (const auto& path : fbt::collectTraceFiles(paths)) sessions.push_back(fbt::loadSession(path));
    const fbt::EvaluationOptions options{include_incomplete != 0};
    const auto report = fbt::evaluate(sessions, options, workers);
    std::string csvText;
    if (csv) csvText = fbt::resultsCsv(fbt::replayAll(sessions, workers));
    if (report_json) *report_json = duplicate(fbt::reportToJson(report).dump(2) + "\n");
    if (csv) *csv = duplicate(csvText);
  });
}

// ---- live service ----------------------------------------------------------

fbt_status fbt_server_start(const fbt_layout* layout, const char* address, uint16_t port, const char* static_dir,
                            fbt_server** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    fbt::ServerConfig config;
    if (address) config.address = address;
    config.port = port;
    if (static_dir) config.staticDir = static_dir;
    std::unique_ptr<fbt_server> server(new fbt_server{fbt::Server(layout->spec, config)});
    server->server.start();
    *out = server.release();
  });
}

uint16_t fbt_server_port(const fbt_server* server) { return server->server.port(); }

void fbt_server_stop(fbt_server* server) {
  if (!server) return;
  server->server.stop();
  delete server;
}

}  // extern "C"
