#pragma once

// Generators and brute-force oracles shared by the unit tests. Everything
// here is written against plain loops over {0..n}^Λ so it does not lean on
// the library code it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "monodual/antichain.hpp"
#include "monodual/configuration.hpp"
#include "monodual/localmap.hpp"
#include "monodual/rng.hpp"

namespace monodual::testing {

inline Rng test_rng(std::uint64_t salt) { return Rng(SeedProvenance{20240611, salt, purpose_tag("unit-tests")}); }

// Every configuration on `n` sites with states {0..levels}, in digit order.
inline std::vector<Configuration> all_configs(std::size_t n, Level levels) {
  std::vector<Configuration> out;
  std::vector<Level> digits(n, 0);
  while (true) {
    out.push_back(Configuration::from_levels(digits, levels));
    std::size_t k = 0;
    while (k < n && digits[k] == levels) digits[k++] = 0;
    if (k == n) break;
    ++digits[k];
  }
  return out;
}

inline bool below(const Configuration& a, const Configuration& b) {
  for (Site i = 0; i < a.num_sites(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool in_upset(const Configuration& x, const std::vector<Configuration>& gens) {
  for (const auto& y : gens)
    if (below(y, x)) return true;
  return false;
}

// Indicator of Y↑ over all of {0,1}^n, one bit per configuration.
inline std::vector<bool> upset_indicator(const Antichain& Y) {
  std::vector<Configuration> gens(Y.elements().begin(), Y.elements().end());
  std::vector<bool> out;
  for (const auto& x : all_configs(Y.num_sites(), Y.levels())) out.push_back(in_upset(x, gens));
  return out;
}

// Number of antichains of nonzero {0,1}-configurations on n sites, by
// trying every subset of the 2^n − 1 nonzero configurations.
inline std::uint64_t brute_antichain_count(std::size_t n) {
  auto configs = all_configs(n, 1);
  configs.erase(configs.begin());
  const std::size_t m = configs.size();
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < m && ok; ++a)
      for (std::size_t b = 0; b < m && ok; ++b)
        if (a != b && ((mask >> a) & 1) && ((mask >> b) & 1) && below(configs[a], configs[b])) ok = false;
    count += ok;
  }
  return count;
}

inline Configuration random_config(std::size_t n, Level levels, Rng& rng, double density = 0.5) {
  Configuration x(n, levels);
  for (Site i = 0; i < n; ++i)
    if (rng.bernoulli(density)) x.set(i, static_cast<Level>(1 + rng.below(levels)));
  return x;
}

inline Antichain random_small_antichain(std::size_t n, Rng& rng, std::size_t max_elements = 4) {
  std::vector<Configuration> c;
  const auto k = rng.below(max_elements + 1);
  for (std::uint64_t e = 0; e < k; ++e) {
    auto y = random_config(n, 1, rng, 0.4);
    if (y.is_zero()) y.set(static_cast<Site>(rng.below(n)), 1);
    c.push_back(std::move(y));
  }
  return Antichain::minimalize(n, 1, std::move(c));
}

// A random monotone {0,1} table on a window of w sites with m(0) = 0: the
// output of each site is an upset indicator generated by a few random
// window states (or left alone).
inline LocalMap random_eligible_map(std::vector<Site> window, Rng& rng) {
  const std::size_t w = window.size();
  const std::uint32_t rows = 1u << w;
  std::vector<std::uint32_t> table(rows, 0);
  for (std::size_t out = 0; out < w; ++out) {
    const std::uint32_t bit = 1u << (w - 1 - out);
    if (rng.bernoulli(0.3)) {
      for (std::uint32_t code = 0; code < rows; ++code) table[code] |= code & bit;
      continue;
    }
    std::vector<std::uint32_t> gens;
    const auto k = 1 + rng.below(3);
    for (std::uint64_t g = 0; g < k; ++g) gens.push_back(1 + static_cast<std::uint32_t>(rng.below(rows - 1)));
    for (std::uint32_t code = 0; code < rows; ++code)
      for (auto g : gens)
        if ((g & ~code) == 0) {
          table[code] |= bit;
          break;
        }
  }
  return LocalMap::custom(std::move(window), std::move(table), 1);
}

// |a − b| / sqrt(se_a² + se_b²), with 0/0 read as 0.
inline double joint_z(double a, double se_a, double b, double se_b) {
  const double se = std::sqrt(se_a * se_a + se_b * se_b);
  if (se == 0.0) return a == b ? 0.0 : INFINITY;
  return std::abs(a - b) / se;
}

}  // namespace monodual::testing
