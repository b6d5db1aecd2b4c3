#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lcdlab/experiments.hpp"

namespace lcdlab {

inline constexpr const char* kCsvHeader = "n,d,t,trials,hits,phat,stderr,seed,flags";

// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
std::string to_csv(const std::vector<ExperimentRecord>& records);
// Throws std::runtime_error on a malformed header or row.
std::vector<ExperimentRecord> parse_csv(std::istream& is);

// Log-log plot of phat against t for one (n, d) group, with the fitted line when available.
std::string render_svg(const std::vector<ExperimentRecord>& group, const std::optional<FitResult>& fit);

struct EmitResult {
  std::filesystem::path csv;
  std::vector<std::filesystem::path> plots;
};

// Writes <dir>/<stem>.csv and, with plots enabled, one <stem>_n<n>_d<d>.svg per (n, d) group.
EmitResult emit(const std::vector<ExperimentRecord>& records, const std::filesystem::path& dir,
                const std::string& stem, bool plots);

}  // namespace lcdlab
