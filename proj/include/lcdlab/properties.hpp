#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcdlab/rng.hpp"

namespace lcdlab {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;  // instances where the property was actually tested
  std::size_t violated = 0;
  std::size_t vacuous = 0;  // instances whose hypothesis did not apply
  double worst_margin = 0.0;  // smallest slack seen; negative only on violation
  std::string note;

  bool ok() const { return violated == 0; }
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::vector<PropertyResult> results;

  std::size_t violations() const;
  bool ok() const { return violations() == 0; }
  nlohmann::json to_json() const;
};

// Each property draws its instances from its own child of `seed`; `count` is the number of
// instances (or draws) the property consumes.
PropertyResult prop_lcd_trivial_lower_bound(const SeedSpec& seed, std::size_t count);
PropertyResult prop_lcd_scaling(const SeedSpec& seed, std::size_t count);
// `count` non-vacuous instances; vacuous draws are counted but do not use up the budget.
PropertyResult prop_lcd_stability(const SeedSpec& seed, std::size_t count);
PropertyResult prop_lcd_monotone_in_L(const SeedSpec& seed, std::size_t count);
PropertyResult prop_lcd_comparison(const SeedSpec& seed, std::size_t count);
// A constant c is fitted on one ensemble (half the smallest normalized LCD) and then checked on a
// fresh ensemble. The fitted constants appear in the note.
PropertyResult prop_lcd_lower_bound(const SeedSpec& seed, std::size_t count);
PropertyResult prop_lcd_grid_lower_bound(const SeedSpec& seed, std::size_t count);
PropertyResult prop_subspace_matches_matrix(const SeedSpec& seed, std::size_t count);

PropertyResult prop_weight_net_domination(const SeedSpec& seed, std::size_t count);
PropertyResult prop_regularized_hs_bounds(const SeedSpec& seed, std::size_t count);
// Fraction of square gaussian A with B_kappa(A) >= 2 E|A|_HS^2 against (kappa / sqrt 2)^{-2n}.
PropertyResult prop_hs_concentration(const SeedSpec& seed, std::size_t draws, std::size_t n);
PropertyResult prop_level_sets(const SeedSpec& seed, std::size_t count);
PropertyResult prop_net_certificates(const SeedSpec& seed, std::size_t count, std::size_t max_n = 32);

PropertyResult prop_colspan_invariance(const SeedSpec& seed, std::size_t count);
PropertyResult prop_lattice_shift(const SeedSpec& seed, std::size_t count);
PropertyResult prop_levy_monotone(const SeedSpec& seed, std::size_t count);
PropertyResult prop_levy_isometry(const SeedSpec& seed, std::size_t count);
PropertyResult prop_esseen_dominates();
PropertyResult prop_sbp_monotone(const SeedSpec& seed, std::size_t count);
PropertyResult prop_sampling_determinism(const SeedSpec& seed, std::size_t count);

// Every property above at its default budget.
SuiteReport run_property_suite(const SeedSpec& seed);

}  // namespace lcdlab
