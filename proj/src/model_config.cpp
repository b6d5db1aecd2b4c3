#include "lcdlab/model_config.hpp"

#include <cmath>

namespace lcdlab {

using nlohmann::json;

namespace {

double shift_of(const json& j) {
  if (j.contains("mean_shift")) return j.at("mean_shift").get<double>();
  if (j.contains("mean-shift")) return j.at("mean-shift").get<double>();
  return 0.0;
}

std::vector<EntryDistribution> parse_law_list(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("law list must be a non-empty array");
  std::vector<EntryDistribution> out;
  for (const auto& item : j) out.push_back(parse_distribution(item));
  return out;
}

std::pair<double, double> parse_range(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("variance range must be [lo, hi]");
  const double lo = j[0].get<double>(), hi = j[1].get<double>();
  if (!(lo > 0.0 && hi >= lo)) throw ConfigError("variance range needs 0 < lo <= hi");
  return {lo, hi};
}

EntryDistribution scaled_to_factor(const EntryDistribution& law, double lo, double hi, std::size_t i, std::size_t n) {
  const double f = n <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return law.scaled(std::sqrt(f));
}

}  // namespace

EntryDistribution parse_distribution(const json& j) {
  try {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("distribution needs a \"kind\" field");
    const auto kind = j.at("kind").get<std::string>();
    EntryDistribution d = EntryDistribution::point_mass(0.0);
    if (kind == "finite") {
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2) throw ConfigError("atoms must be [value, prob] pairs");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      d = EntryDistribution::finite(std::move(atoms));
    } else if (kind == "gaussian") {
      d = EntryDistribution::gaussian(0.0, j.value("sigma", 1.0));
    } else if (kind == "rademacher") {
      d = EntryDistribution::rademacher().scaled(j.value("scale", 1.0));
    } else if (kind == "bernoulli") {
      d = EntryDistribution::bernoulli(j.at("p").get<double>());
    } else if (kind == "point") {
      d = EntryDistribution::point_mass(j.at("value").get<double>());
    } else {
      throw ConfigError("unknown distribution kind '" + kind + "'");
    }
    const double shift = shift_of(j);
    return shift == 0.0 ? d : d.shifted(shift);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  } catch (const BudgetError& e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  }
}

json to_json(const EntryDistribution& d) {
  if (d.kind() == LawKind::gaussian) return {{"kind", "gaussian"}, {"sigma", d.sigma()}, {"mean_shift", d.mean()}};
  json atoms = json::array();
  for (const Atom& a : d.atoms()) atoms.push_back({a.value, a.prob});
  return {{"kind", "finite"}, {"atoms", atoms}};
}

VectorModelSpec VectorModelSpec::parse(const json& j) {
  VectorModelSpec s;
  try {
    if (j.contains("laws")) {
      s.laws_ = parse_law_list(j.at("laws"));
    } else if (j.contains("law")) {
      s.laws_ = {parse_distribution(j.at("law"))};
    } else {
      s.laws_ = {parse_distribution(j)};
    }
    if (j.contains("variance_range")) {
      if (s.laws_.size() != 1) throw ConfigError("variance_range needs a single base law");
      s.range_ = parse_range(j.at("variance_range"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("vector model: ") + e.what());
  }
  return s;
}

VectorModelSpec VectorModelSpec::iid(EntryDistribution law) {
  VectorModelSpec s;
  s.laws_ = {std::move(law)};
  return s;
}

VectorModelSpec VectorModelSpec::variance_range(EntryDistribution law, double lo, double hi) {
  VectorModelSpec s = iid(std::move(law));
  s.range_ = {lo, hi};
  return s;
}

RandomVectorModel VectorModelSpec::build(std::size_t n) const {
  std::vector<EntryDistribution> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (range_)
      entries.push_back(scaled_to_factor(laws_[0], range_->first, range_->second, i, n));
    else
      entries.push_back(laws_[i % laws_.size()]);
  }
  return RandomVectorModel(std::move(entries));
}

json VectorModelSpec::to_json() const {
  json j;
  if (laws_.size() == 1) {
    j["law"] = lcdlab::to_json(laws_[0]);
  } else {
    j["laws"] = json::array();
    for (const auto& l : laws_) j["laws"].push_back(lcdlab::to_json(l));
  }
  if (range_) j["variance_range"] = {range_->first, range_->second};
  return j;
}

MatrixModelSpec MatrixModelSpec::parse(const json& j) {
  MatrixModelSpec s;
  try {
    if (j.contains("col_laws")) {
      s.layout_ = Layout::cols;
      s.laws_ = parse_law_list(j.at("col_laws"));
    } else if (j.contains("row_laws")) {
      s.layout_ = Layout::rows;
      s.laws_ = parse_law_list(j.at("row_laws"));
    } else if (j.contains("entry_laws")) {
      s.layout_ = Layout::entries;
      s.laws_ = parse_law_list(j.at("entry_laws"));
    } else if (j.contains("law")) {
      s.laws_ = {parse_distribution(j.at("law"))};
    } else {
      s.laws_ = {parse_distribution(j)};
    }
    if (j.contains("col_variance_range")) {
      if (s.laws_.size() != 1 || s.layout_ != Layout::single)
        throw ConfigError("col_variance_range needs a single base law");
      s.layout_ = Layout::cols;
      s.range_ = parse_range(j.at("col_variance_range"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("matrix model: ") + e.what());
  }
  return s;
}

MatrixModelSpec MatrixModelSpec::iid(EntryDistribution law) {
  MatrixModelSpec s;
  s.laws_ = {std::move(law)};
  return s;
}

MatrixModelSpec MatrixModelSpec::column_variance_range(EntryDistribution law, double lo, double hi) {
  MatrixModelSpec s = iid(std::move(law));
  s.layout_ = Layout::cols;
  s.range_ = {lo, hi};
  return s;
}

MatrixModelSpec MatrixModelSpec::entry_cycle(std::vector<EntryDistribution> laws) {
  if (laws.empty()) throw ConfigError("entry_laws must not be empty");
  MatrixModelSpec s;
  s.layout_ = Layout::entries;
  s.laws_ = std::move(laws);
  return s;
}

RandomMatrixModel MatrixModelSpec::build(std::size_t rows, std::size_t cols) const {
  if (layout_ == Layout::single) return RandomMatrixModel(rows, cols, Broadcast::single, laws_);
  if (layout_ == Layout::entries) {
    std::vector<EntryDistribution> laws;
    laws.reserve(rows * cols);
    for (std::size_t k = 0; k < rows * cols; ++k) laws.push_back(laws_[k % laws_.size()]);
    return RandomMatrixModel(rows, cols, Broadcast::grid, std::move(laws));
  }
  const std::size_t count = layout_ == Layout::cols ? cols : rows;
  std::vector<EntryDistribution> laws;
  laws.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (range_)
      laws.push_back(scaled_to_factor(laws_[0], range_->first, range_->second, k, count));
    else
      laws.push_back(laws_[k % laws_.size()]);
  }
  return RandomMatrixModel(rows, cols, layout_ == Layout::cols ? Broadcast::per_column : Broadcast::per_row,
                           std::move(laws));
}

json MatrixModelSpec::to_json() const {
  json j;
  if (layout_ == Layout::single || range_) {
    j["law"] = lcdlab::to_json(laws_[0]);
    if (range_) j["col_variance_range"] = {range_->first, range_->second};
    return j;
  }
  json list = json::array();
  for (const auto& l : laws_) list.push_back(lcdlab::to_json(l));
  j[layout_ == Layout::cols ? "col_laws" : layout_ == Layout::rows ? "row_laws" : "entry_laws"] = list;
  return j;
}

}  // namespace lcdlab
