#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef DDCHAIN_BIN
#error "DDCHAIN_BIN must point at the ddchain executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string(DDCHAIN_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ddc_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string p = (path / name).string();
    std::ofstream(p) << content;
    return p;
  }
  std::string sub(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("configuration errors exit with code 2") {
  TempDir tmp("config");
  const std::string bad = tmp.file("bad.json", R"({"L": 4, "bogus": 1})");
  CHECK(run("ground-state --params " + bad + " --out " + tmp.sub("o1")) == 2);
  const std::string notjson = tmp.file("nj.json", "not json at all");
  CHECK(run("ground-state --params " + notjson + " --out " + tmp.sub("o2")) ==
        2);
  CHECK(run("ground-state --no-such-flag") == 2);
  CHECK(run("") != 0);  // a subcommand is required
}

TEST_CASE("ground state: two decoupled rungs reproduce the exact energy") {
  TempDir tmp("gs");
  // J_s = 0, h_s = 1, h_d = 2: each rung contributes -(h_s + h_d)/2
  const std::string p = tmp.file(
      "p.json", R"({"L": 2, "J_s": 0, "h_s": 1, "h_d": 2})");
  CHECK(run("ground-state --params " + p + " --out " + tmp.sub("out") +
            " --chi 16") == 0);
  json j = json::parse(slurp(tmp.sub("out") + "/ground_state.json"));
  CHECK(j["converged"].get<bool>());
  CHECK(j["energy"].get<double>() == doctest::Approx(-3.0).epsilon(1e-7));
  CHECK(j["seed"].get<int>() == 1);
  CHECK(j["params"]["L"].get<int>() == 2);
  // per-site CSV present with embedded metadata
  const std::string csv = slurp(tmp.sub("out") + "/profiles.csv");
  CHECK(csv.rfind("# ddchain", 0) == 0);
  CHECK(csv.find("site,sx,sz,dx,dz") != std::string::npos);
}

TEST_CASE("identical manifests produce byte-identical outputs") {
  TempDir tmp("repro");
  const std::string p = tmp.file(
      "p.json",
      R"({"L": 4, "J_s": 1, "J_d": 10, "h_s": 1, "h_d": -20,
          "quench": {"h_d_to": 20, "stride": 5}})");
  const std::string args = "global-quench --params " + p +
                           " --chi 32 --dt 0.002 --t-end 0.05 --seed 7 --out ";
  CHECK(run(args + tmp.sub("a")) == 0);
  CHECK(run(args + tmp.sub("b")) == 0);
  CHECK(slurp(tmp.sub("a") + "/series.csv") ==
        slurp(tmp.sub("b") + "/series.csv"));
  CHECK(slurp(tmp.sub("a") + "/dx_profile.csv") ==
        slurp(tmp.sub("b") + "/dx_profile.csv"));
  CHECK(slurp(tmp.sub("a") + "/fit.json") == slurp(tmp.sub("b") + "/fit.json"));
  // small chain: the exact-propagation cross-check is emitted and tight
  json dev = json::parse(slurp(tmp.sub("a") + "/ed_deviation.json"));
  CHECK(dev["max_abs_deviation"]["dx"].get<double>() < 1e-3);
  // spectral report carries the two-flip gap
  json spec = json::parse(slurp(tmp.sub("a") + "/spectral.json"));
  CHECK(spec["gap_two_adjacent_flips"].get<double>() ==
        doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("no quench: fit reports the constant as unidentifiable") {
  TempDir tmp("noq");
  const std::string p = tmp.file(
      "p.json",
      R"({"L": 4, "J_s": 1, "J_d": 10, "h_s": 1, "h_d": -20,
          "quench": {"h_d_to": -20, "stride": 1}})");
  CHECK(run("global-quench --params " + p + " --out " + tmp.sub("out") +
            " --chi 32 --dt 0.002 --t-end 0.05") == 0);
  json fit = json::parse(slurp(tmp.sub("out") + "/fit.json"));
  CHECK(fit["status"].get<std::string>() == "unidentifiable");
}

TEST_CASE("re-fit and re-track consume emitted CSVs") {
  TempDir tmp("refit");
  const std::string p = tmp.file(
      "p.json",
      R"({"L": 4, "J_s": 1, "J_d": 10, "h_s": 1, "h_d": -20,
          "quench": {"h_d_to": 20, "stride": 5}})");
  REQUIRE(run("global-quench --params " + p + " --out " + tmp.sub("run") +
              " --chi 32 --dt 0.002 --t-end 0.1") == 0);
  CHECK(run("fit " + tmp.sub("run") + "/series.csv --out " + tmp.sub("fit") +
            " --window 0,0.1") == 0);
  json fit = json::parse(slurp(tmp.sub("fit") + "/fit.json"));
  CHECK(fit["status"].get<std::string>() == "ok");
  // oscillation at the two-flip gap, 2 h_d + J_d = 50
  CHECK(fit["omega"].get<double>() == doctest::Approx(50.0).epsilon(0.05));

  // velocity on the emitted profile runs and reports a status either way
  CHECK(run("velocity " + tmp.sub("run") + "/dx_profile.csv --origin 2 --out " +
            tmp.sub("vel")) == 0);
  json vel = json::parse(slurp(tmp.sub("vel") + "/velocity_right.json"));
  CHECK(vel.contains("status"));

  CHECK(run("fit " + tmp.sub("run") + "/series.csv --out " + tmp.sub("f2") +
            " --column no_such_column") == 2);
}

TEST_CASE("sweep store: fresh run, guarded rerun, resume") {
  TempDir tmp("sweep");
  const std::string p = tmp.file(
      "p.json",
      R"({"L": 6, "J_s": 1, "J_d": 10, "h_s": 1, "h_d": 0,
          "sweep": {"kind": "ground-state", "axes": {"h_d": [2, 30]},
                    "h_pin": 0.01}})");
  const std::string out = tmp.sub("store");
  CHECK(run("sweep --params " + p + " --out " + out + " --chi 24") == 0);
  CHECK(fs::exists(out + "/manifest.json"));
  CHECK(fs::exists(out + "/phase_table.csv"));
  const std::string table = slurp(out + "/phase_table.csv");
  CHECK(table.find(",F\n") != std::string::npos);  // ordered at h_d = 2
  CHECK(table.find(",P\n") != std::string::npos);  // polarized at h_d = 30

  // refusing to clobber without --resume; resuming is a fast no-op
  CHECK(run("sweep --params " + p + " --out " + out + " --chi 24") == 2);
  CHECK(run("sweep --params " + p + " --out " + out + " --chi 24 --resume") ==
        0);
}
