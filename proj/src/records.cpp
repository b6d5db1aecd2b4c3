#include "lcdlab/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lcdlab {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.n << ',' << r.d << ',' << format_number(r.t) << ',' << r.trials << ',' << r.hits << ','
       << format_number(r.phat) << ',' << format_number(r.stderr) << ',' << r.seed << ',' << r.flags << '\n';
  }
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  write_csv(os, records);
  return os.str();
}

namespace {

template <typename T>
T parse_field(const std::string& s, const char* name) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error(std::string("csv: bad ") + name + " field '" + s + "'");
  return value;
}

}  // namespace

std::vector<ExperimentRecord> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  std::vector<ExperimentRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("csv: expected 9 fields in '" + line + "'");
    ExperimentRecord r;
    r.n = parse_field<std::size_t>(f[0], "n");
    r.d = parse_field<std::size_t>(f[1], "d");
    r.t = parse_field<double>(f[2], "t");
    r.trials = parse_field<std::uint64_t>(f[3], "trials");
    r.hits = parse_field<std::uint64_t>(f[4], "hits");
    r.phat = parse_field<double>(f[5], "phat");
    r.stderr = parse_field<double>(f[6], "stderr");
    r.seed = parse_field<std::uint64_t>(f[7], "seed");
    r.flags = f[8];
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_svg(const std::vector<ExperimentRecord>& group, const std::optional<FitResult>& fit) {
  constexpr double W = 480, H = 360, left = 60, right = 20, top = 30, bottom = 50;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : group)
    if (r.t > 0.0 && r.phat > 0.0) pts.emplace_back(std::log10(r.t), std::log10(r.phat));

  double x0 = -2, x1 = 0, y0 = -5, y1 = 0;
  if (!pts.empty()) {
    x0 = x1 = pts.front().first;
    y0 = y1 = pts.front().second;
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    x0 = std::floor(x0 * 4) / 4;
    x1 = std::ceil(x1 * 4) / 4;
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
    if (x1 <= x0) x1 = x0 + 0.25;
    if (y1 <= y0) y1 = y0 + 1;
  }
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto sy = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!group.empty())
    os << "<text x=\"" << left << "\" y=\"20\" font-size=\"13\">n=" << group.front().n << ", d=" << group.front().d
       << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  for (int k = static_cast<int>(y0); k <= static_cast<int>(y1); ++k)
    os << "<text x=\"8\" y=\"" << sy(k) + 4 << "\" font-size=\"11\">1e" << k << "</text>\n";
  os << "<text x=\"" << left << "\" y=\"" << H - bottom + 18 << "\" font-size=\"11\">t=" << format_number(std::pow(10.0, x0))
     << "</text>\n";
  os << "<text x=\"" << W - right - 60 << "\" y=\"" << H - bottom + 18 << "\" font-size=\"11\">t="
     << format_number(std::pow(10.0, x1)) << "</text>\n";
  os << "<text x=\"" << W / 2 - 40 << "\" y=\"" << H - 10 << "\" font-size=\"12\">log t vs log phat</text>\n";
  for (auto [x, y] : pts)
    os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  if (fit) {
    const double lx0 = std::log10(fit->t_min), lx1 = std::log10(fit->t_max);
    auto line_y = [&](double lx) { return (fit->intercept + fit->slope * lx * std::log(10.0)) / std::log(10.0); };
    os << "<line x1=\"" << sx(lx0) << "\" y1=\"" << sy(line_y(lx0)) << "\" x2=\"" << sx(lx1) << "\" y2=\""
       << sy(line_y(lx1)) << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - right - 150 << "\" y=\"" << top + 10 << "\" font-size=\"11\">slope "
       << format_number(std::round(fit->slope * 1000) / 1000) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

EmitResult emit(const std::vector<ExperimentRecord>& records, const std::filesystem::path& dir, const std::string& stem,
                bool plots) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("emit: cannot create " + dir.string() + ": " + ec.message());
  EmitResult res;
  res.csv = dir / (stem + ".csv");
  {
    std::ofstream os(res.csv, std::ios::binary);
    if (!os) throw std::runtime_error("emit: cannot write " + res.csv.string());
    write_csv(os, records);
    if (!os) throw std::runtime_error("emit: write failed for " + res.csv.string());
  }
  if (!plots) return res;

  std::map<std::pair<std::size_t, std::size_t>, std::vector<ExperimentRecord>> groups;
  for (const auto& r : records) groups[{r.n, r.d}].push_back(r);
  for (const auto& [key, group] : groups) {
    std::optional<FitResult> fit;
    try {
      fit = fit_power_law(group);
    } catch (const FitError&) {
    }
    const auto path = dir / (stem + "_n" + std::to_string(key.first) + "_d" + std::to_string(key.second) + ".svg");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit: cannot write " + path.string());
    os << render_svg(group, fit);
    res.plots.push_back(path);
  }
  return res;
}

}  // namespace lcdlab
