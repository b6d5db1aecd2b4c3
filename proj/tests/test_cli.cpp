#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace lcdlab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lcdlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lcdlab_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--bogus"}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--format", "xml"}).code == kExitInvalid);
  CHECK(cli({"frobnicate"}).code == kExitInvalid);
}

TEST_CASE("dist run") {
  const auto r = cli({"dist", "run", "--n", "16", "--d", "1,2", "--t-grid", "0.1,0.5", "--trials", "2000", "--seed", "4"});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "n,d,t,trials,hits,phat,stderr,seed,flags");
  CHECK(rows[1].rfind("16,1,0.1,2000,", 0) == 0);
  CHECK(rows[4].rfind("16,2,0.5,2000,", 0) == 0);
  CHECK(r.err.find("d=1") != std::string::npos);

  SUBCASE("same seed, same bytes") {
    const auto again = cli({"dist", "run", "--n", "16", "--d", "1,2", "--t-grid", "0.1,0.5", "--trials", "2000", "--seed", "4"});
    CHECK(again.out == r.out);
  }
  SUBCASE("files and plots") {
    const auto dir = scratch("dist");
    const auto w = cli({"dist", "run", "--n", "16", "--d", "1", "--t-grid", "0.1,0.2,0.3,0.5,0.8", "--trials", "4000",
                        "--seed", "4", "--out", dir.string(), "--format", "csv+plot"});
    CHECK(w.code == kExitOk);
    CHECK(fs::exists(dir / "dist.csv"));
    CHECK(fs::exists(dir / "dist_n16_d1.svg"));
  }
  SUBCASE("config file with flag overrides") {
    const auto dir = scratch("config");
    const auto cfg = write_file(dir / "c.json", R"({"n": 12, "d": [1], "t_grid": [0.3], "trials": 1500,
      "x_model": {"law": {"kind": "rademacher"}}, "a_model": {"law": {"kind": "rademacher"}}})");
    const auto w = cli({"dist", "run", "--config", cfg, "--trials", "1000"});
    REQUIRE(w.code == kExitOk);
    CHECK(lines(w.out)[1].rfind("12,1,0.3,1000,", 0) == 0);
  }
}

TEST_CASE("invalid configuration exits with 2") {
  const auto dir = scratch("bad");
  CHECK(cli({"dist", "run", "--n", "16", "--d", "16"}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--trials", "0"}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--t-grid", "-1"}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--config", (dir / "missing.json").string()}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--config", write_file(dir / "broken.json", "{\"n\": ")}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--config", write_file(dir / "typo.json", R"({"trails": 10})")}).code == kExitInvalid);
  CHECK(cli({"dist", "run", "--config", write_file(dir / "law.json", R"({"x_model": {"law": {"kind": "cauchy"}}})")})
            .code == kExitInvalid);
  CHECK(cli({"lcd", "compute", "--kind", "nonsense"}).code == kExitInvalid);
  CHECK(cli({"lcd", "compute", "--L", "-1"}).code == kExitInvalid);
}

TEST_CASE("lcd compute") {
  const auto dir = scratch("lcd");
  const auto r = cli({"lcd", "compute", "--kind", "essential", "--v", "1", "--L", "1", "--u", "0.5", "--law",
                      "rademacher", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("kind=essential") != std::string::npos);
  CHECK(r.out.find("censored=0") != std::string::npos);
  CHECK(fs::exists(dir / "lcd.txt"));
}

TEST_CASE("property violations exit with 1") {
  const auto dir = scratch("tensor");
  const auto cfg = write_file(dir / "t.json", R"({"law": {"kind": "finite", "atoms": [[0, 0.5], [1, 0.5]]}})");
  const auto r = cli({"probe", "tensorize", "--config", cfg, "--trials", "2000"});
  CHECK(r.code == kExitViolation);
  CHECK(r.out.find("failed") != std::string::npos);
}

TEST_CASE("probes and audits run cleanly") {
  CHECK(cli({"probe", "tensorize", "--d", "2", "--trials", "5000"}).code == kExitOk);
  CHECK(cli({"probe", "compressible", "--n", "12", "--trials", "10"}).code == kExitOk);
  CHECK(cli({"probe", "unstructured", "--n", "6", "--trials", "50"}).code == kExitOk);
  CHECK(cli({"net", "audit", "--trials", "200", "--n", "8"}).code == kExitOk);
  const auto props = cli({"props", "check", "--seed", "1"});
  CHECK(props.code == kExitOk);
  CHECK(props.out.find("summary: 21 passed, 0 failed") != std::string::npos);
}
