#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using onsager::cli::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "onsager_flux");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = onsager::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("onsager_cli_" + std::to_string(std::rand()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("synth writes a reproducible field and echoes its config") {
  TempDir tmp;
  for (const char* dir : {"a", "b"}) {
    const Result r = run({"synth", "--out", tmp / dir, "--seed", "5", "--set", "synth.dims=[16,16,16]"});
    REQUIRE(r.code == 0);
  }
  CHECK(fs::exists(tmp / "a/field.ofx1"));
  CHECK(slurp(tmp / "a/field.ofx1") == slurp(tmp / "b/field.ofx1"));
  const Json cfg = read_json(tmp / "a/config.json");
  CHECK(cfg["seed"] == 5);
  CHECK(cfg["command"] == "synth");
  CHECK(cfg["synth"]["dims"] == Json::array({16, 16, 16}));
  CHECK(read_json(tmp / "a/synth.json").contains("alpha"));
}

TEST_CASE("flux sweep output is deterministic and carries the theoretical exponent") {
  TempDir tmp;
  REQUIRE(run({"synth", "--out", tmp / "s", "--set", "synth.dims=[16,16,16]"}).code == 0);
  const std::string field = tmp / "s/field.ofx1";
  REQUIRE(run({"flux-sweep", field, "--out", tmp / "f1", "--threads", "1"}).code == 0);
  REQUIRE(run({"flux-sweep", field, "--out", tmp / "f2", "--threads", "2"}).code == 0);
  CHECK(slurp(tmp / "f1/flux.csv") == slurp(tmp / "f2/flux.csv"));
  const Json j = read_json(tmp / "f1/flux.json");
  CHECK(j["gamma_theory"].get<double>() == doctest::Approx(0.5));
  CHECK(j["verdict"].contains("floor_rel"));
  CHECK(j["rows"].size() == 5);
}

TEST_CASE("mollify-check, simulate, budget and channel-check produce their files") {
  TempDir tmp;
  REQUIRE(run({"synth", "--out", tmp / "s", "--set", "synth.dims=[16,16,16]"}).code == 0);
  REQUIRE(run({"mollify-check", tmp / "s/field.ofx1", "--out", tmp / "m"}).code == 0);
  CHECK(fs::exists(tmp / "m/conv.csv"));
  CHECK(fs::exists(tmp / "m/conv.json"));

  REQUIRE(run({"simulate", "--out", tmp / "sim", "--set", "solver.dims=[16,16,16]", "--set", "solver.dt=0.05",
               "--set", "solver.t_end=0.5", "--set", "solver.snapshot_stride=5"})
              .code == 0);
  CHECK(fs::exists(tmp / "sim/log.csv"));
  CHECK(fs::exists(tmp / "sim/snapshots/snap_00002.ofx1"));
  REQUIRE(run({"budget", tmp / "sim", "--out", tmp / "b", "--set", "budget.s=[0.2,0.1]", "--set", "budget.t=0.5"})
              .code == 0);
  const Json b = read_json(tmp / "b/budget.json");
  CHECK(b.contains("initial_time"));
  CHECK(fs::exists(tmp / "b/budget.csv"));

  REQUIRE(run({"channel-check", "--out", tmp / "c", "--set", "channel.dims=[16,16,9]"}).code == 0);
  for (const char* f : {"lemma.csv", "channel_flux.csv", "channel_ratios.csv", "channel.json"}) {
    CHECK(fs::exists(tmp / (std::string("c/") + f)));
  }
  CHECK(read_json(tmp / "c/channel.json")["lemma_ok"] == true);
}

TEST_CASE("report sorts runs by exponent") {
  TempDir tmp;
  for (const char* a : {"0.7", "0.3", "0.5"}) {
    REQUIRE(run({"synth", "--out", tmp / (std::string("r") + a), "--set", "synth.dims=[16,16,16]", "--set",
                 std::string("synth.alpha=") + a})
                .code == 0);
  }
  REQUIRE(run({"report", tmp / "r0.7", tmp / "r0.3", tmp / "r0.5", "--out", tmp / "rep"}).code == 0);
  const Json s = read_json(tmp / "rep/summary.json");
  REQUIRE(s["entries"].size() == 3);
  CHECK(s["entries"][0]["alpha"].get<double>() == 0.3);
  CHECK(s["entries"][1]["alpha"].get<double>() == 0.5);
  CHECK(s["entries"][2]["alpha"].get<double>() == 0.7);
  CHECK(run({"report", "--out", tmp / "empty"}).code == 2);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"synth", "--out", tmp / "x", "--set", "synth.alpha=\"high\""}).code == 2);
  CHECK(run({"synth", "--out", tmp / "x", "--set", "synth.colour=3"}).code == 2);
  CHECK(run({"flux-sweep", tmp / "missing.ofx1", "--out", tmp / "x"}).code == 2);

  std::ofstream(tmp / "bad.json") << "{\n  \"seed\": 1,\n  \"synth\": {\n";
  const Result syntax = run({"synth", "--config", tmp / "bad.json", "--out", tmp / "x"});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("line") != std::string::npos);

  std::ofstream(tmp / "good.json") << R"({"synth": {"dims": [16, 16, 16], "alpha": 0.4}})";
  CHECK(run({"synth", "--config", tmp / "good.json", "--out", tmp / "g"}).code == 0);
  CHECK(read_json(tmp / "g/config.json")["synth"]["alpha"] == 0.4);

  // a fast initial state that violates the CFL limit at the first step
  const Result cfl = run({"simulate", "--out", tmp / "x", "--set", "solver.dims=[16,16,16]", "--set", "solver.dt=0.5",
                          "--set", "solver.t_end=1.0"});
  CHECK(cfl.code == 3);
  CHECK(cfl.err.find("step 1") != std::string::npos);

  REQUIRE(run({"synth", "--out", tmp / "s", "--set", "synth.dims=[16,16,16]"}).code == 0);
  const Result eta = run({"flux-sweep", tmp / "s/field.ofx1", "--out", tmp / "x", "--set", "flux.eta=5.0"});
  CHECK(eta.code == 2);
  CHECK(eta.err.find("eta") != std::string::npos);
}

TEST_CASE("thread count from the environment") {
  TempDir tmp;
  setenv("ONSAGER_FLUX_THREADS", "2", 1);
  REQUIRE(run({"synth", "--out", tmp / "e", "--set", "synth.dims=[16,16,16]"}).code == 0);
  CHECK(read_json(tmp / "e/config.json")["threads"] == 2);
  REQUIRE(run({"synth", "--out", tmp / "f", "--threads", "1", "--set", "synth.dims=[16,16,16]"}).code == 0);
  CHECK(read_json(tmp / "f/config.json")["threads"] == 1);
  setenv("ONSAGER_FLUX_THREADS", "many", 1);
  CHECK(run({"synth", "--out", tmp / "g", "--set", "synth.dims=[16,16,16]"}).code == 2);
  unsetenv("ONSAGER_FLUX_THREADS");
}
