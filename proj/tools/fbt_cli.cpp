// fbt: layout generation, trace replay, simulation, evaluation and the live
// dialing service, all through the C interface.

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pthread.h>

#include <CLI11.hpp>

#include "fbt/fbt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct Failure {
  fbt_status status;
  std::string message;
};

int exitCodeFor(fbt_status status) {
  switch (status) {
    case FBT_INVALID_ARGUMENT:
    case FBT_INVALID_ANCHORS:
    case FBT_INVARIANT_VIOLATION:
    case FBT_CONFIG_ERROR:
      return kExitUsage;
    default:
      return kExitData;
  }
}

void check(fbt_status status) {
  if (status != FBT_OK) throw Failure{status, fbt_last_error()};
}

struct LayoutDeleter {
  void operator()(fbt_layout* l) const { fbt_layout_free(l); }
};
using LayoutPtr = std::unique_ptr<fbt_layout, LayoutDeleter>;

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { fbt_string_free(text); }
  std::string str() const { return text ? text : ""; }
};

void writeOutput(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << contents)) throw Failure{FBT_IO_ERROR, "cannot write " + path};
}

// "X,Y"
fbt_point parsePoint(const std::string& text, const std::string& flag) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const double x = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("");
    const std::string rest = text.substr(comma + 1);
    const double y = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
    return {x, y};
  } catch (const std::logic_error&) {
    throw Failure{FBT_INVALID_ARGUMENT, flag + ": expected X,Y but got '" + text + "'"};
  }
}

struct GeometryFlags {
  double width = 480.0;
  double height = 800.0;
  std::string handedness = "left-hold";
  std::string mode = "single";
  std::string index, middle, ring, little, thumb;
  double inset = -1.0;
  double edgeMargin = -1.0;
  double bottomMargin = -1.0;
  double radius = -1.0;

  void add(CLI::App* app, bool withMode) {
    app->add_option("--width", width, "Screen width in layout units")->capture_default_str();
    app->add_option("--height", height, "Screen height in layout units")->capture_default_str();
    app->add_option("--handedness", handedness, "Grip")
        ->check(CLI::IsMember({"left-hold", "right-hold"}))
        ->capture_default_str();
    if (withMode) {
      app->add_option("--mode", mode, "Entry mode")->check(CLI::IsMember({"single", "double"}))->capture_default_str();
    }
    auto* anchors = app->add_option_group("anchors", "Fingertip anchors as X,Y (all five or none)");
    anchors->add_option("--index", index);
    anchors->add_option("--middle", middle);
    anchors->add_option("--ring", ring);
    anchors->add_option("--little", little);
    anchors->add_option("--thumb", thumb);
    app->add_option("--inset", inset, "Anchor to region center distance (default 8% of width)");
    app->add_option("--edge-margin", edgeMargin, "Anchor edge band (default 8% of width)");
    app->add_option("--bottom-margin", bottomMargin, "Call region distance from the bottom (default 8% of width)");
    app->add_option("--radius", radius, "Activation radius (default derived from region spacing)");
  }

  LayoutPtr build(std::optional<fbt_mode> forcedMode = std::nullopt) const {
    fbt_layout_options options;
    fbt_layout_options_init(&options);
    options.width = width;
    options.height = height;
    options.handedness = handedness == "right-hold" ? FBT_RIGHT_HOLD : FBT_LEFT_HOLD;
    options.mode = forcedMode.value_or(mode == "double" ? FBT_MODE_DOUBLE : FBT_MODE_SINGLE);
    const std::vector<const std::string*> given = {&index, &middle, &ring, &little, &thumb};
    const auto count = std::count_if(given.begin(), given.end(), [](const std::string* s) { return !s->empty(); });
    if (count != 0 && count != 5) {
      throw Failure{FBT_INVALID_ARGUMENT, "anchors: give all of --index --middle --ring --little --thumb or none"};
    }
    if (count == 5) {
      options.has_anchors = 1;
      options.index = parsePoint(index, "--index");
      options.middle = parsePoint(middle, "--middle");
      options.ring = parsePoint(ring, "--ring");
      options.little = parsePoint(little, "--little");
      options.thumb = parsePoint(thumb, "--thumb");
    }
    options.inset = inset;
    options.edge_margin = edgeMargin;
    options.bottom_margin = bottomMargin;
    options.activation_radius = radius;
    fbt_layout* layout = nullptr;
    check(fbt_layout_create(&options, &layout));
    return LayoutPtr(layout);
  }
};

LayoutPtr loadLayout(const std::string& path) {
  fbt_layout* layout = nullptr;
  check(fbt_layout_load(path.c_str(), &layout));
  return LayoutPtr(layout);
}

LayoutPtr withMode(const fbt_layout* layout, fbt_mode mode) {
  fbt_layout* out = nullptr;
  check(fbt_layout_with_mode(layout, mode, &out));
  return LayoutPtr(out);
}

// ---- layout ----------------------------------------------------------------

struct LayoutCommand {
  GeometryFlags geometry;
  bool mirror = false;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("layout", "Derive a region layout and write it as JSON");
    geometry.add(app, true);
    app->add_flag("--mirror", mirror, "Mirror the layout for the other hand");
    app->add_option("--out,-o", out, "Output file (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    LayoutPtr layout = geometry.build();
    if (mirror) {
      fbt_layout* mirrored = nullptr;
      check(fbt_layout_mirror(layout.get(), &mirrored));
      layout.reset(mirrored);
    }
    OwnedString text;
    check(fbt_layout_to_json(layout.get(), &text.text));
    writeOutput(out, text.str());
  }
};

// ---- replay ----------------------------------------------------------------

struct ReplayCommand {
  std::string trace;
  std::string layout;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("replay", "Replay a trace file and write per-trial results as CSV");
    app->add_option("trace", trace, "Trace file")->required();
    app->add_option("--layout", layout, "Layout file overriding the one the trace references");
    app->add_option("--out,-o", out, "Output CSV (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    OwnedString csv;
    check(fbt_replay_file(trace.c_str(), layout.empty() ? nullptr : layout.c_str(), &csv.text));
    writeOutput(out, csv.str());
  }
};

// ---- simulate --------------------------------------------------------------

struct SimulateCommand {
  GeometryFlags geometry;
  std::string layout;
  std::string technique = "both";
  std::uint64_t seed = 1;
  std::size_t participants = 0;
  std::size_t trials = 0;
  std::optional<double> sigma;
  std::optional<double> tapMedian;
  std::optional<double> tapLogSigma;
  std::optional<double> decisionMedian;
  std::optional<double> decisionLogSigma;
  std::vector<std::string> numbers;
  std::string out;

  void add(CLI::App& root) {
    fbt_simulation_options defaults;
    fbt_simulation_options_init(&defaults);
    participants = defaults.participants;
    trials = defaults.trials;
    auto* app = root.add_subcommand("simulate", "Generate noisy tap traces from canonical press sequences");
    geometry.add(app, false);
    app->add_option("--layout", layout, "Base layout file (replaces the geometry flags)");
    app->add_option("--technique", technique, "Which entry modes to simulate")
        ->check(CLI::IsMember({"single", "double", "both"}))
        ->capture_default_str();
    app->add_option("--seed", seed, "Seed for every random draw")->capture_default_str();
    app->add_option("--participants", participants, "Simulated participants")->capture_default_str();
    app->add_option("--trials", trials, "Trials per participant")->capture_default_str();
    app->add_option("--sigma", sigma, "Tap scatter, sd in layout units (default 8)");
    app->add_option("--tap-median-ms", tapMedian, "Median inter-tap latency (default 1500)");
    app->add_option("--tap-log-sigma", tapLogSigma, "Log-sd of the inter-tap latency (default 0.3)");
    app->add_option("--decision-median-ms", decisionMedian, "Median extra pause before Enter and repeats (default 700)");
    app->add_option("--decision-log-sigma", decisionLogSigma, "Log-sd of that pause (default 0.4)");
    app->add_option("--numbers", numbers, "Numbers to dial, comma separated (default: drawn from the seed)")
        ->delimiter(',');
    app->add_option("--out,-o", out, "Output directory")->required();
    app->callback([this] { run(); });
  }

  void run() const {
    fbt_simulation_options options;
    fbt_simulation_options_init(&options);
    options.seed = seed;
    options.participants = participants;
    options.trials = trials;
    if (sigma) options.tap_sigma = *sigma;
    auto logMedian = [](double ms, const char* flag) {
      if (!(ms > 0.0)) throw Failure{FBT_CONFIG_ERROR, std::string(flag) + " must be > 0"};
      return std::log(ms);
    };
    if (tapMedian) options.tap_latency_mu = logMedian(*tapMedian, "--tap-median-ms");
    if (tapLogSigma) options.tap_latency_sigma = *tapLogSigma;
    if (decisionMedian) options.decision_latency_mu = logMedian(*decisionMedian, "--decision-median-ms");
    if (decisionLogSigma) options.decision_latency_sigma = *decisionLogSigma;
    std::vector<const char*> numberPtrs;
    for (const auto& n : numbers) numberPtrs.push_back(n.c_str());
    options.numbers = numberPtrs.empty() ? nullptr : numberPtrs.data();
    options.number_count = numberPtrs.size();

    const LayoutPtr base = layout.empty() ? geometry.build() : loadLayout(layout);
    std::vector<fbt_mode> modes;
    if (technique != "double") modes.push_back(FBT_MODE_SINGLE);
    if (technique != "single") modes.push_back(FBT_MODE_DOUBLE);
    for (fbt_mode mode : modes) {
      const LayoutPtr l = withMode(base.get(), mode);
      check(fbt_simulate(&options, l.get(), out.c_str()));
    }
  }
};

// ---- evaluate --------------------------------------------------------------

struct EvaluateCommand {
  std::vector<std::string> inputs;
  bool includeIncomplete = false;
  unsigned workers = 1;
  std::string report;
  std::string csv;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("evaluate", "Score trace files and run the statistical comparison");
    app->add_option("traces", inputs, "Trace files or directories holding them")->required();
    app->add_flag("--include-incomplete", includeIncomplete, "Score trials that never reached Call");
    app->add_option("--workers", workers, "Parallel replay workers")->check(CLI::Range(1u, 256u))->capture_default_str();
    app->add_option("--report", report, "Report JSON (default stdout)");
    app->add_option("--csv", csv, "Also write per-trial results as CSV");
    app->callback([this] { run(); });
  }

  void run() const {
    std::vector<const char*> paths;
    for (const auto& p : inputs) paths.push_back(p.c_str());
    OwnedString reportText;
    OwnedString csvText;
    check(fbt_evaluate_files(paths.data(), paths.size(), includeIncomplete ? 1 : 0, workers, &reportText.text,
                             csv.empty() ? nullptr : &csvText.text));
    writeOutput(report, reportText.str());
    if (!csv.empty()) writeOutput(csv, csvText.str());
  }
};

// ---- serve -----------------------------------------------------------------

struct ServeCommand {
  GeometryFlags geometry;
  std::string layout;
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;
  std::string staticDir;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("serve", "Run the live dialing websocket service");
    geometry.add(app, true);
    app->add_option("--layout", layout, "Layout file (replaces the geometry flags)");
    app->add_option("--address", address, "Listen address")->capture_default_str();
    app->add_option("--port", port, "Listen port, 0 picks a free one")->capture_default_str();
    app->add_option("--static", staticDir, "Directory with the UI bundle to serve over HTTP");
    app->callback([this] { run(); });
  }

  void run() const {
    const LayoutPtr l = layout.empty() ? geometry.build() : loadLayout(layout);

    // Block the stop signals before the server thread exists so only
    // sigwait below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    fbt_server* server = nullptr;
    check(fbt_server_start(l.get(), address.c_str(), port, staticDir.empty() ? nullptr : staticDir.c_str(), &server));
    std::cout << "listening on ws://" << address << ":" << fbt_server_port(server) << "/" << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    fbt_server_stop(server);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finger Based Technique eyes-free dialer"};
  app.set_version_flag("--version", fbt_version());
  app.set_config("--config", "", "TOML/INI file with option defaults; command line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  LayoutCommand layout;
  ReplayCommand replay;
  SimulateCommand simulate;
  EvaluateCommand evaluate;
  ServeCommand serve;
  layout.add(app);
  replay.add(app);
  simulate.add(app);
  evaluate.add(app);
  serve.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "fbt: " << fbt_status_name(f.status) << ": " << f.message << "\n";
    return exitCodeFor(f.status);
  }
  return kExitOk;
}
