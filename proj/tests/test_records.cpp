#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lcdlab/records.hpp"

using namespace lcdlab;

namespace {

std::vector<ExperimentRecord> sample_rows() {
  std::vector<ExperimentRecord> rows;
  for (std::size_t d : {1, 2})
    for (double t : {0.05, 0.1, 0.2, 0.4, 0.8}) {
      ExperimentRecord r;
      r.n = 24;
      r.d = d;
      r.t = t;
      r.trials = 5000;
      r.hits = static_cast<std::uint64_t>(5000 * std::pow(t, static_cast<double>(d)));
      r.phat = static_cast<double>(r.hits) / 5000.0;
      r.stderr = std::sqrt(r.phat * (1 - r.phat) / 5000.0);
      r.seed = 77;
      r.flags = d == 2 ? "out-of-theorem-range|hs-budget>K*N*n" : "ok";
      rows.push_back(r);
    }
  return rows;
}

}  // namespace

TEST_CASE("csv text") {
  CHECK(to_csv({}) == std::string(kCsvHeader) + "\n");
  const auto rows = sample_rows();
  const std::string text = to_csv(rows);
  std::istringstream lines(text);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(first == "n,d,t,trials,hits,phat,stderr,seed,flags");
  CHECK(second.rfind("24,1,0.05,5000,250,0.05,", 0) == 0);
  CHECK(second.substr(second.size() - 6) == ",77,ok");

  std::istringstream in(text);
  CHECK(parse_csv(in) == rows);
}

TEST_CASE("number formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, 0.0, 2.5e-7}) {
    const std::string s = format_number(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(3.0) == "3");
}

TEST_CASE("malformed csv") {
  std::istringstream bad_header("n,d,t\n");
  CHECK_THROWS_AS(parse_csv(bad_header), std::runtime_error);
  std::istringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  CHECK_THROWS_AS(parse_csv(short_row), std::runtime_error);
  std::istringstream junk(std::string(kCsvHeader) + "\n1,2,x,4,5,6,7,8,ok\n");
  CHECK_THROWS_AS(parse_csv(junk), std::runtime_error);
}

TEST_CASE("emit files") {
  const auto dir = std::filesystem::temp_directory_path() / "lcdlab_records_test";
  std::filesystem::remove_all(dir);
  const auto rows = sample_rows();

  const auto plain = emit(rows, dir, "run", false);
  CHECK(plain.plots.empty());
  CHECK(std::filesystem::exists(dir / "run.csv"));
  std::ifstream f(plain.csv);
  CHECK(parse_csv(f) == rows);

  const auto plotted = emit(rows, dir, "run", true);
  REQUIRE(plotted.plots.size() == 2);
  CHECK(plotted.plots[0].filename() == "run_n24_d1.svg");
  CHECK(plotted.plots[1].filename() == "run_n24_d2.svg");
  std::ifstream svg(plotted.plots[0]);
  std::stringstream body;
  body << svg.rdbuf();
  CHECK(body.str().find("<svg") != std::string::npos);
  CHECK(body.str().find("</svg>") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg without a fit") {
  auto rows = sample_rows();
  rows.resize(2);
  const std::string svg = render_svg(rows, std::nullopt);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("#d62728") == std::string::npos);
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  CHECK(circles == 2);
}

TEST_CASE("svg with a fit draws the line") {
  const auto rows = sample_rows();
  const std::vector<ExperimentRecord> d1(rows.begin(), rows.begin() + 5);
  FitResult fit;
  fit.slope = 1.0;
  fit.t_min = 0.05;
  fit.t_max = 0.8;
  CHECK(render_svg(d1, fit).find("#d62728") != std::string::npos);
}
