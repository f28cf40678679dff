#pragma once

// Mutable antichain engine for S = {0,1}, used by the Monte Carlo dual
// estimators and the pathwise checks.
//
// Up to 64 sites every element is one word and a dual map is a batch
// update over a flat mask array. Larger lattices store sorted site lists
// with a per-site index, so a dual map only touches elements that meet its
// target.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "monodual/antichain.hpp"
#include "monodual/configuration.hpp"
#include "monodual/localmap.hpp"

namespace monodual {

class SparseDualState {
 public:
  explicit SparseDualState(std::size_t num_sites);

  static SparseDualState y_top(std::size_t num_sites);
  static SparseDualState from_antichain(const Antichain& Y);  // requires levels() == 1
  Antichain to_antichain() const;

  std::size_t num_sites() const noexcept { return num_sites_; }
  std::size_t size() const noexcept { return word_mode_ ? masks_.size() : count_; }
  bool empty() const noexcept { return size() == 0; }
  // Single-word representation in use.
  bool word_mode() const noexcept { return word_mode_; }

  // Add z and keep only minimal elements. `z` sorted, nonempty.
  void insert(std::span<const Site> z);

  void apply_death(Site j);
  void apply_branch(Site i, Site j);
  void apply_coop(Site i, Site i2, Site j);
  // Any eligible map; built-in kinds go to the closed forms above.
  void apply(const LocalMap& m);

  bool contains_singleton(Site i) const;
  // ψ_mon(x, Y) for x = 1_{support}, `support` sorted.
  bool psi(std::span<const Site> support) const;

 private:
  static std::uint64_t mask_of(std::span<const Site> z);
  void insert_mask(std::uint64_t z);
  // Y ← min(Y ∪ {(y − e_j) ∨ `add` : y ∋ j}).
  void substitute_masks(std::uint64_t add, Site j);

  bool dominated(std::span<const Site> z) const;
  void remove_slot(std::uint32_t slot);
  // Copies of the elements that contain j, in slot order.
  std::vector<std::vector<Site>> elements_containing(Site j) const;

  std::size_t num_sites_;
  bool word_mode_;
  std::vector<std::uint64_t> masks_;

  std::size_t count_ = 0;
  std::vector<std::vector<Site>> slots_;
  std::vector<char> live_;
  std::vector<std::uint32_t> free_;
  std::vector<std::vector<std::uint32_t>> by_site_;
};

}  // namespace monodual
