#pragma once

// Antichains of nonzero configurations: the dual state space.
//
// An antichain Y stands for the increasing set Y↑ = {x : ∃ y ∈ Y, y ≤ x};
// equivalently for the monotone indicator x ↦ ψ_mon(x, Y). Elements are kept
// in the canonical configuration order so equal sets compare and print equal.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "monodual/configuration.hpp"

namespace monodual {

class Antichain {
 public:
  // The empty antichain ∅ (least element of the dual order).
  Antichain(std::size_t num_sites, Level levels);

  // A° : the minimal elements of `candidates`. Throws ConfigError if a
  // candidate is 0̲ (the result would be {0̲}).
  static Antichain minimalize(std::size_t num_sites, Level levels, std::vector<Configuration> candidates);
  // Elements must already be pairwise incomparable and nonzero.
  static Antichain from_elements(std::size_t num_sites, Level levels, std::vector<Configuration> elements);
  // As from_elements, but incomparability is the caller's promise (checked
  // only in debug builds). For engines that maintain it themselves.
  static Antichain assume_minimal(std::size_t num_sites, Level levels, std::vector<Configuration> elements);

  std::size_t num_sites() const noexcept { return num_sites_; }
  Level levels() const noexcept { return levels_; }
  std::span<const Configuration> elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(const Configuration& y) const;

  friend bool operator==(const Antichain& a, const Antichain& b) noexcept {
    return a.num_sites_ == b.num_sites_ && a.levels_ == b.levels_ && a.elements_ == b.elements_;
  }
  friend std::strong_ordering operator<=>(const Antichain& a, const Antichain& b) noexcept;

  std::string to_string() const;

 private:
  std::size_t num_sites_;
  Level levels_;
  std::vector<Configuration> elements_;
};

// 1 iff some y ∈ Y satisfies y ≤ x.
bool psi_mon(const Configuration& x, const Antichain& Y);

// Y ≤ Z in the dual order (Y↑ ⊆ Z↑): every y ∈ Y dominates some z ∈ Z.
bool order_leq(const Antichain& Y, const Antichain& Z);

// {e^1_i : i ∈ Λ}; its upset is every nonzero configuration.
Antichain make_y_top(std::size_t num_sites, Level levels);

// Agreement of ψ_mon(·, Y) and ψ_mon(·, Z) on configurations supported on
// the first n sites of the enumeration γ.
struct WindowDistance {
  bool equal;          // agree everywhere
  std::uint32_t level; // largest n with agreement on {γ ≤ n}; num_sites when equal
  double distance() const noexcept;  // 3^{-level}, or 0 when equal
};

WindowDistance antichain_window_distance(const Antichain& Y, const Antichain& Z);

// Every element has exactly one occupied site.
bool is_additive_state(const Antichain& Y);

void require_compatible(const Antichain& Y, const Antichain& Z);

}  // namespace monodual
