#pragma once

// Configurations x : Λ → {0, ..., n} on a finite site set, ordered pointwise.
//
// `Configuration` is the general sparse form: only nonzero entries are stored,
// sorted by site. `SiteBits` is the dense n = 1 fast path used by the
// Monte Carlo kernels; it packs one site per bit.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monodual/types.hpp"

namespace monodual {

struct Entry {
  Site site;
  Level level;
  friend bool operator==(const Entry&, const Entry&) = default;
};

class Configuration {
 public:
  // The all-zero configuration on `num_sites` sites with states {0..levels}.
  Configuration(std::size_t num_sites, Level levels);

  static Configuration basis(std::size_t num_sites, Level levels, Site i, Level a = 1);
  static Configuration full(std::size_t num_sites, Level levels);
  // Entries may come in any order; zero entries are dropped.
  static Configuration from_entries(std::size_t num_sites, Level levels, std::vector<Entry> entries);
  // Dense form, one level per site.
  static Configuration from_levels(std::span<const Level> levels_per_site, Level levels);

  std::size_t num_sites() const noexcept { return num_sites_; }
  Level levels() const noexcept { return levels_; }

  Level operator[](Site i) const noexcept;
  void set(Site i, Level a);

  std::span<const Entry> entries() const noexcept { return entries_; }
  // |x|: number of sites in a nonzero state.
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }
  std::vector<Site> support() const;

  friend bool operator==(const Configuration& a, const Configuration& b) noexcept {
    return a.num_sites_ == b.num_sites_ && a.levels_ == b.levels_ && a.entries_ == b.entries_;
  }
  // Canonical order: lexicographic by sorted support, then by states.
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) noexcept;

  std::string to_string() const;

 private:
  std::size_t num_sites_;
  Level levels_;
  std::vector<Entry> entries_;
};

void require_compatible(const Configuration& x, const Configuration& y);

// Product order.
bool leq(const Configuration& x, const Configuration& y);
Configuration join(const Configuration& x, const Configuration& y);
Configuration meet(const Configuration& x, const Configuration& y);
// x with site i reset to 0 (the "y − e_j" of the explicit dual maps).
Configuration without(const Configuration& x, Site i);

// d(x, y) = Σ_i 3^{-γ(i)} 1{x(i) ≠ y(i)} with γ(i) = i + 1.
//
// Every base-3 digit of d is 0 or 1, so the value is represented exactly by
// the sorted set of γ-positions where the digit is 1. Comparison is
// lexicographic on the digit string, no rounding anywhere.
class TernaryDistance {
 public:
  TernaryDistance() = default;
  explicit TernaryDistance(std::vector<std::uint32_t> positions);

  std::span<const std::uint32_t> positions() const noexcept { return positions_; }
  bool is_zero() const noexcept { return positions_.empty(); }
  // d < 3^{-n}
  bool less_than_pow3(std::uint32_t n) const noexcept;
  // Numerator over 3^{num_sites}; requires num_sites ≤ 40.
  std::uint64_t numerator(std::size_t num_sites) const;
  double to_double() const noexcept;

  friend bool operator==(const TernaryDistance&, const TernaryDistance&) = default;
  friend std::strong_ordering operator<=>(const TernaryDistance& a, const TernaryDistance& b) noexcept;

 private:
  std::vector<std::uint32_t> positions_;
};

TernaryDistance config_distance(const Configuration& x, const Configuration& y);

// Dense {0,1}-configuration.
class SiteBits {
 public:
  SiteBits() = default;
  explicit SiteBits(std::size_t num_sites);

  static SiteBits full(std::size_t num_sites);
  static SiteBits from_config(const Configuration& x);  // requires levels() == 1
  Configuration to_config() const;

  std::size_t num_sites() const noexcept { return num_sites_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  bool test(Site i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(Site i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(Site i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(Site i, bool v) noexcept { v ? set(i) : reset(i); }

  bool none() const noexcept;
  std::size_t count() const noexcept;
  bool subset_of(const SiteBits& other) const noexcept;

  friend bool operator==(const SiteBits& a, const SiteBits& b) noexcept;

 private:
  std::size_t num_sites_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace monodual
