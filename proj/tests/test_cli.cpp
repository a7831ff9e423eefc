#include <gtest/gtest.h>
#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

extern char** environ;

namespace {

namespace fs = std::filesystem;

const std::string kCli = FBT_CLI_PATH;
const std::string kData = FBT_TEST_DATA_DIR;

struct Run {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

Run run(const std::string& args) {
  Run r;
  const std::string command = "'" + kCli + "' " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char chunk[4096];
  std::size_t n = 0;
  while ((n = fread(chunk, 1, sizeof chunk, pipe)) > 0) r.output.append(chunk, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string readText(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fbt_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, HelpAndVersion) {
  const auto help = run("--help");
  EXPECT_EQ(help.status, 0);
  for (const char* sub : {"layout", "replay", "simulate", "evaluate", "serve"}) {
    EXPECT_NE(help.output.find(sub), std::string::npos) << sub;
  }
  EXPECT_EQ(run("simulate --help").status, 0);
  const auto version = run("--version");
  EXPECT_EQ(version.status, 0);
  EXPECT_NE(version.output.find("1.0.0"), std::string::npos);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("dance").status, 2);
}

TEST(Cli, LayoutWritesALoadableDocument) {
  const auto dir = scratch("layout");
  const auto r = run("layout --width 600 --height 1000 --out " + (dir / "l.json").string());
  ASSERT_EQ(r.status, 0) << r.output;
  const std::string text = readText(dir / "l.json");
  EXPECT_NE(text.find("\"format\": \"fbt-layout\""), std::string::npos);
  EXPECT_NE(text.find("\"width\": 600"), std::string::npos);

  const auto dbl = run("layout --mode double");
  ASSERT_EQ(dbl.status, 0);
  EXPECT_NE(dbl.output.find("\"Index\": \"pair:1/2\""), std::string::npos);
  EXPECT_NE(dbl.output.find("\"BelowLittle\": \"pair:9/0\""), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, LayoutMatchesTheGoldenLayouts) {
  EXPECT_EQ(run("layout").output, readText(kData + "/golden_layout_single.json"));
  EXPECT_EQ(run("layout --mode double").output, readText(kData + "/golden_layout_double.json"));
}

TEST(Cli, InvalidAnchorsExitTwoNamingTheRule) {
  const auto r = run("layout --index 470,500 --middle 470,400 --ring 470,600 --little 470,700 --thumb 10,400");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("finger-order"), std::string::npos) << r.output;
  const auto partial = run("layout --index 470,500");
  EXPECT_EQ(partial.status, 2) << partial.output;
  EXPECT_EQ(run("layout --width -3").status, 2);
}

TEST(Cli, ReplayIsByteIdenticalToTheGoldenCsv) {
  for (const char* mode : {"single", "double"}) {
    const auto r = run("replay " + kData + "/golden_trace_" + mode + ".json");
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(r.output, readText(kData + "/golden_" + mode + ".csv")) << mode;
  }
}

TEST(Cli, ReplayEdgeCases) {
  const auto dir = scratch("replay");
  ASSERT_EQ(run("layout --out " + (dir / "layout.json").string()).status, 0);
  {
    std::ofstream(dir / "empty.json") << R"({"format":"fbt-trace","version":1,"participant":"P1",)"
                                      << R"("technique":"single","layout":"layout.json","trials":[]})";
  }
  const auto empty = run("replay " + (dir / "empty.json").string());
  EXPECT_EQ(empty.status, 0);
  EXPECT_EQ(empty.output, "participant,technique,trial,presented,transcribed,seconds,wpm,errors,corrections,complete\n");

  { std::ofstream(dir / "bad.json") << "{\"format\": "; }
  const auto bad = run("replay " + (dir / "bad.json").string());
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.output.find("ParseError"), std::string::npos) << bad.output;

  const auto missing = run("replay " + (dir / "nope.json").string());
  EXPECT_EQ(missing.status, 1);

  // --layout overrides the referenced file
  const auto over = run("replay " + (dir / "empty.json").string() + " --layout " + kData + "/golden_layout_single.json");
  EXPECT_EQ(over.status, 0);
  fs::remove_all(dir);
}

TEST(Cli, SimulateIsDeterministicPerSeed) {
  const auto a = scratch("sim_a");
  const auto b = scratch("sim_b");
  ASSERT_EQ(run("simulate --seed 7 --participants 3 --trials 2 --out " + a.string()).status, 0);
  ASSERT_EQ(run("simulate --seed 7 --participants 3 --trials 2 --out " + b.string()).status, 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(readText(entry.path()), readText(b / entry.path().filename())) << entry.path();
  }
  EXPECT_EQ(files, 2u + 6u);
  EXPECT_TRUE(fs::exists(a / "P03-double.json"));
  const auto c = scratch("sim_c");
  ASSERT_EQ(run("simulate --seed 8 --participants 3 --trials 2 --out " + c.string()).status, 0);
  EXPECT_NE(readText(a / "P01-single.json"), readText(c / "P01-single.json"));
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST(Cli, SimulateOptions) {
  const auto dir = scratch("sim_opts");
  ASSERT_EQ(run("simulate --technique double --participants 2 --trials 2 --numbers 123,4567 --out " + dir.string())
                .status,
            0);
  EXPECT_FALSE(fs::exists(dir / "P01-single.json"));
  const std::string trace = readText(dir / "P02-double.json");
  EXPECT_NE(trace.find("\"presented\": \"4567\""), std::string::npos);
  EXPECT_EQ(run("simulate --participants 0 --out " + dir.string()).status, 2);
  EXPECT_EQ(run("simulate --numbers 12a --out " + dir.string()).status, 2);
  EXPECT_EQ(run("simulate --technique triple --out " + dir.string()).status, 2);
  fs::remove_all(dir);
}

TEST(Cli, EvaluateReportsTheAnovaDegreesOfFreedom) {
  const auto dir = scratch("eval");
  ASSERT_EQ(run("simulate --seed 3 --participants 5 --trials 4 --out " + dir.string()).status, 0);
  const auto csv = dir / "results.csv";
  const auto r = run("evaluate " + dir.string() + " --workers 3 --csv " + csv.string());
  ASSERT_EQ(r.status, 0) << r.output;
  const std::regex df(R"("test": "anova_oneway",[^}]*"df": \[\s*1,\s*8\s*\])");
  EXPECT_TRUE(std::regex_search(r.output, df)) << r.output.substr(0, 4000);
  EXPECT_NE(r.output.find("\"mann_whitney_u\""), std::string::npos);
  const std::string rows = readText(csv);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 1 + 2 * 5 * 4);

  const auto single = run("evaluate " + (dir / "P01-single.json").string() + " " + (dir / "P02-single.json").string());
  EXPECT_EQ(single.status, 1);
  EXPECT_NE(single.output.find("InsufficientData"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsWin) {
  const auto dir = scratch("config");
  { std::ofstream(dir / "fbt.toml") << "[simulate]\nseed = 7\nparticipants = 2\ntrials = 1\n"; }
  const auto fromConfig = dir / "a";
  const auto fromFlags = dir / "b";
  const auto plain = dir / "c";
  ASSERT_EQ(run("--config " + (dir / "fbt.toml").string() + " simulate --out " + fromConfig.string()).status, 0);
  ASSERT_EQ(run("--config " + (dir / "fbt.toml").string() + " simulate --seed 9 --out " + fromFlags.string()).status, 0);
  ASSERT_EQ(run("simulate --seed 7 --participants 2 --trials 1 --out " + plain.string()).status, 0);
  EXPECT_FALSE(fs::exists(fromConfig / "P03-single.json"));
  EXPECT_EQ(readText(fromConfig / "P02-single.json"), readText(plain / "P02-single.json"));
  EXPECT_NE(readText(fromFlags / "P02-single.json"), readText(plain / "P02-single.json"));

  { std::ofstream(dir / "bad.toml") << "[simulate]\nsed = 7\n"; }
  const auto bad = run("--config " + (dir / "bad.toml").string() + " simulate --out " + plain.string());
  EXPECT_EQ(bad.status, 2) << bad.output;
  fs::remove_all(dir);
}

TEST(Cli, InputsAreNotModified) {
  const auto dir = scratch("inputs");
  fs::copy(kData + "/golden_trace_single.json", dir / "t.json");
  fs::copy(kData + "/golden_layout_single.json", dir / "golden_layout_single.json");
  const auto before = readText(dir / "t.json");
  const auto time = fs::last_write_time(dir / "t.json");
  ASSERT_EQ(run("replay " + (dir / "t.json").string()).status, 0);
  EXPECT_EQ(readText(dir / "t.json"), before);
  EXPECT_EQ(fs::last_write_time(dir / "t.json"), time);
  fs::remove_all(dir);
}

TEST(Cli, ServePrintsItsPortAndRefusesABusyOne) {
  const auto dir = scratch("serve");
  const auto log = dir / "serve.log";
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);
  std::vector<std::string> args{kCli, "serve", "--port", "0"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  ASSERT_EQ(posix_spawn(&pid, kCli.c_str(), &actions, nullptr, argv.data(), environ), 0);
  posix_spawn_file_actions_destroy(&actions);

  std::smatch m;
  std::string text;
  const std::regex listening(R"(listening on ws://127\.0\.0\.1:(\d+)/)");
  for (int i = 0; i < 100 && !std::regex_search(text, m, listening); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    text = readText(log);
  }
  ASSERT_TRUE(std::regex_search(text, m, listening)) << text;
  const std::string port = m[1];
  EXPECT_NE(port, "0");

  const auto busy = run("serve --port " + port);
  EXPECT_EQ(busy.status, 1);
  EXPECT_NE(busy.output.find("NetworkError"), std::string::npos) << busy.output;

  kill(pid, SIGTERM);
  int status = 0;
  ASSERT_EQ(waitpid(pid, &status, 0), pid);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  fs::remove_all(dir);
}

}  // namespace
