#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memdomain/cli.hpp"
#include "memdomain/io.hpp"

using namespace memdomain;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "memdomain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("memdomain_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

std::string slurp(const std::string& p) { return io::read_file(p); }

}  // namespace

TEST_CASE("bessel prints one value per line") {
  TempDir d("bessel");
  const Result r = run({"bessel", "--kind", "j", "--order", "1", "--z", "0.5", "--z", "1", "--manifest", d / "m.json"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.16253703063606656\n0.30116867893975674\n");
  const auto m = io::Json::parse(slurp(d / "m.json"));
  CHECK(m["command"] == "bessel");
  CHECK(m["config"]["kind"] == "j");
  CHECK(m.contains("created_at"));
}

TEST_CASE("validation errors exit with 2") {
  TempDir d("validation");
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"bessel", "--kind", "y", "--order", "0", "--z", "0", "--manifest", d / "m.json"}).code == 2);
  CHECK(run({"bessel", "--kind", "q", "--z", "1"}).code == 2);
  const Result nr = run({"lifetimes", "--L", "1", "--omega0", "0.4", "--n", "1", "--k", "0.4", "--manifest", d / "m.json"});
  CHECK(nr.code == 2);
  CHECK(nr.err.find("NeverRecordable") != std::string::npos);
  CHECK(run({"lifetimes", "--omega0", "2", "--k", "3", "--out", d / "x.csv"}).code == 2);
  CHECK(run({"evolve", "--k", "2", "--n", "-1", "--out", d / "x.csv"}).code == 2);
  CHECK(run({"evolve", "--k", "2", "--L", "0", "--out", d / "x.csv"}).code == 2);
  CHECK(run({"squeeze", "--gamma", "0.5", "--t", "2", "--cutoff", "10", "--manifest", d / "m.json"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("figures write curve tables, sidecars and a manifest") {
  TempDir d("figures");
  const Result r = run({"figures", "--which", "fig1", "--out", d / "out", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(d / "out/fig1.csv");
  CHECK(csv.rfind("curve_id,t,lambda\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  std::set<std::string> ids;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) ids.insert(line.substr(0, line.find(',')));
  CHECK(ids.size() == 4);
  const auto side = io::Json::parse(slurp(d / "out/fig1.json"));
  CHECK(side["figure"] == "fig1");
  CHECK(side["curves"].size() == 4);
  const auto m = io::Json::parse(slurp(d / "out/manifest.json"));
  CHECK(m["version"] == "0.1.0");
  CHECK_FALSE(m.contains("created_at"));
  CHECK(m["outputs"].size() == 2);
}

TEST_CASE("identical configurations give identical bytes") {
  TempDir d("determinism");
  for (const std::string& tag : {"a", "b"}) {
    REQUIRE(run({"figures", "--which", "all", "--samples", "300", "--out", d / tag, "--no-timestamp"}).code == 0);
    REQUIRE(run({"evolve", "--k", "2", "--n", "2", "--method", "both", "--points", "401", "--out", d / (tag + "/ev.csv"),
                 "--no-timestamp", "--manifest", d / (tag + "/ev_manifest.json")})
                .code == 0);
  }
  for (const char* f : {"fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv", "fig4.json", "ev.csv", "ev.ode.csv"}) {
    CHECK(slurp(d / (std::string("a/") + f)) == slurp(d / (std::string("b/") + f)));
  }
  auto ma = io::Json::parse(slurp(d / "a/manifest.json"));
  auto mb = io::Json::parse(slurp(d / "b/manifest.json"));
  ma["config"].erase("out");
  mb["config"].erase("out");
  CHECK(ma["config"] == mb["config"]);
  CHECK(ma["inputs"] == mb["inputs"]);
  // Rerunning into the same directory reproduces the manifest byte for byte.
  const std::string before = slurp(d / "a/manifest.json");
  REQUIRE(run({"figures", "--which", "all", "--samples", "300", "--out", d / "a", "--no-timestamp"}).code == 0);
  CHECK(slurp(d / "a/manifest.json") == before);
}

TEST_CASE("evolve columns") {
  TempDir d("evolve");
  const Result r = run({"evolve", "--omega0", "2", "--n", "1", "--t-max", "3", "--points", "11", "--out", d / "e.csv",
                        "--manifest", d / "m.json"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(d / "e.csv");
  CHECK(csv.rfind("t,u,v,r,omega,Omega\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(csv.find("\n0,") != std::string::npos);
}

TEST_CASE("configuration file with command-line overrides") {
  TempDir d("config");
  const std::string cfg = d / "run.ini";
  io::write_file_atomic(cfg, "[lifetimes]\nk = 2\nn = 3\nsamples = 50\nL = 1\n");
  Result r = run({"--config", cfg, "lifetimes", "--out", d / "a.csv", "--manifest", d / "m.json"});
  REQUIRE(r.code == 0);
  auto m = io::Json::parse(slurp(d / "m.json"));
  CHECK(m["config"]["samples"] == "50");
  CHECK(m["inputs"].contains(cfg));
  const std::string a = slurp(d / "a.csv");
  CHECK(a.find("k=2:n=3") != std::string::npos);

  r = run({"--config", cfg, "lifetimes", "--n", "4", "--out", d / "b.csv", "--manifest", d / "m.json"});
  REQUIRE(r.code == 0);
  CHECK(slurp(d / "b.csv").find("k=2:n=4") != std::string::npos);

  r = run({"lifetimes", "--config", cfg, "--out", d / "late.csv", "--manifest", d / "m.json"});
  REQUIRE(r.code == 0);
  CHECK(slurp(d / "late.csv") == a);

  io::write_file_atomic(cfg, "[lifetimes]\nk = 2\nbogus = 1\n");
  r = run({"--config", cfg, "lifetimes", "--out", d / "c.csv", "--manifest", d / "m.json"});
  CHECK(r.code == 2);
}

TEST_CASE("record, recall and forget-sweep round trip") {
  TempDir d("memory");
  const std::string reg = d / "registry.json";
  io::write_file_atomic(d / "s.json", R"({"components":[{"k":0.6,"n":1,"intensity":1},{"k":6,"n":1,"intensity":1}]})");
  io::write_file_atomic(d / "low.json", R"({"components":[{"k":0.4,"n":1,"intensity":1}]})");

  Result r = run({"record", "--registry", reg, "--spectrum", d / "s.json", "--t", "0", "--no-timestamp"});
  REQUIRE(r.code == 0);
  CHECK(io::Json::parse(r.out)["code_id"] == "code-0001");
  const auto m = io::Json::parse(slurp(d / "manifest.json"));
  CHECK(m["inputs"][d / "s.json"].get<std::string>().rfind("sha256:", 0) == 0);

  r = run({"record", "--registry", reg, "--spectrum", d / "low.json", "--t", "0"});
  REQUIRE(r.code == 0);
  const auto refusal = io::Json::parse(r.out);
  CHECK(refusal["code_id"].is_null());
  CHECK(refusal["rejected"][0]["reason"] == "BelowThreshold");

  r = run({"recall", "--registry", reg, "--signal", d / "s.json", "--energy", "100", "--t", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(io::Json::parse(r.out)["outcome"] == "Recalled");
  // Recall does not persist the decay.
  CHECK(io::parse_registry(slurp(reg)).clock == 0.0);

  const std::string before = slurp(reg);
  CHECK(io::dump_registry(io::parse_registry(before)) == before);

  r = run({"forget-sweep", "--registry", reg, "--t", "1"});
  REQUIRE(r.code == 0);
  const auto swept = io::parse_registry(slurp(reg));
  CHECK(swept.clock == 1.0);
  CHECK(swept.codes[0].status == memory::CodeStatus::Degraded);

  r = run({"forget-sweep", "--registry", reg, "--t", "0.5"});
  CHECK(r.code == 2);
}

TEST_CASE("squeeze emits coefficients and an oracle deviation") {
  TempDir d("squeeze");
  const Result r = run({"squeeze", "--gamma", "0.5", "--t", "2", "--oracle", "--out", d / "sq.json"});
  REQUIRE(r.code == 0);
  const auto j = io::Json::parse(slurp(d / "sq.json"));
  CHECK(j["coefficients"].size() == static_cast<std::size_t>(j["cutoff"].get<int>() + 1));
  CHECK(std::abs(j["normalization"].get<double>() - 1.0) <= 1e-12);
  CHECK(j["oracle"]["max_deviation"].get<double>() <= 1e-8);
}
