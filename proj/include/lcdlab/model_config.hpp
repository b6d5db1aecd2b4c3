#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "lcdlab/models.hpp"

namespace lcdlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"kind": "finite", "atoms": [[value, prob], ...]}
// {"kind": "gaussian", "sigma": s}
// {"kind": "rademacher"} | {"kind": "bernoulli", "p": p} | {"kind": "point", "value": v}
// Any kind accepts an optional "mean_shift" (alias "mean-shift").
EntryDistribution parse_distribution(const nlohmann::json& j);
nlohmann::json to_json(const EntryDistribution& d);

// Shape-free description of an entry-law layout; experiments instantiate it
// once the dimensions are known.
//   {"law": D}                                     every entry ~ D
//   {"laws": [D, ...]}                             entry i ~ laws[i mod k]
//   {"law": D, "variance_range": [lo, hi]}         entry i ~ D scaled so its variance is
//                                                  multiplied by lo + (hi - lo) i / (n - 1)
// Matrix specs use "col_laws"/"row_laws" and "col_variance_range" in the same way, plus
//   {"entry_laws": [D, ...]}                       entry (i, j) ~ laws[(i + j rows) mod k]
class VectorModelSpec {
 public:
  static VectorModelSpec parse(const nlohmann::json& j);
  static VectorModelSpec iid(EntryDistribution law);
  static VectorModelSpec variance_range(EntryDistribution law, double lo, double hi);

  RandomVectorModel build(std::size_t n) const;
  nlohmann::json to_json() const;

 private:
  std::vector<EntryDistribution> laws_;
  std::optional<std::pair<double, double>> range_;
};

class MatrixModelSpec {
 public:
  enum class Layout { single, cols, rows, entries };

  static MatrixModelSpec parse(const nlohmann::json& j);
  static MatrixModelSpec iid(EntryDistribution law);
  static MatrixModelSpec column_variance_range(EntryDistribution law, double lo, double hi);
  static MatrixModelSpec entry_cycle(std::vector<EntryDistribution> laws);

  RandomMatrixModel build(std::size_t rows, std::size_t cols) const;
  nlohmann::json to_json() const;

 private:
  Layout layout_ = Layout::single;
  std::vector<EntryDistribution> laws_;
  std::optional<std::pair<double, double>> range_;
};

}  // namespace lcdlab
