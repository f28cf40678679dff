#pragma once

// Local maps m : S^Λ → S^Λ that change finitely many sites, each new value
// depending on finitely many old values.
//
// Built-in kinds are the three maps of the cooperative contact process:
//   Death(j):        x(j) := 0
//   Branch(i, j):    x(j) := x(i) ∨ x(j)
//   Coop(i, i', j):  x(j) := (x(i) ∧ x(i')) ∨ x(j)
// Custom maps are given extensionally as a table over a window of at most
// six sites; sites outside the window are left unchanged.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monodual/configuration.hpp"
#include "monodual/types.hpp"

namespace monodual {

enum class MapKind : std::uint8_t { Death, Branch, Coop, Custom };

const char* kind_name(MapKind k) noexcept;

inline constexpr std::size_t kMaxCustomWindow = 6;

// D(m) and R(m) restricted to the map's window W. Off the window the map is
// the identity, so the full R(m) adds the diagonal {(k,k) : k ∉ W}.
struct DependenceSets {
  std::vector<Site> changed;                       // D(m), sorted
  std::vector<std::pair<Site, Site>> window_pairs;  // R(m) ∩ W², sorted

  // R↓_j(m) = {i : (i, j) ∈ R(m)}
  std::vector<Site> sources(Site j) const;
  // The full R(m) on a grid of `num_sites` sites, sorted.
  std::vector<std::pair<Site, Site>> relevance(std::size_t num_sites) const;

  friend bool operator==(const DependenceSets&, const DependenceSets&) = default;
};

class LocalMap {
 public:
  static LocalMap death(Site j);
  static LocalMap branch(Site i, Site j);
  static LocalMap coop(Site i, Site i2, Site j);
  // `table[code]` is the output window code for input window code `code`,
  // where a code lists window states as base-(levels+1) digits, first window
  // site most significant. Table size must be (levels+1)^|window|.
  static LocalMap custom(std::vector<Site> window, std::vector<std::uint32_t> table, Level levels);
  // The identity on a window (a Custom map whose table is the identity).
  static LocalMap identity(std::vector<Site> window, Level levels);

  MapKind kind() const noexcept { return kind_; }
  // Built-ins: i = sites()[0], i' = sites()[1], j = target().
  Site target() const noexcept { return sites_[2]; }
  Site source() const noexcept { return sites_[0]; }
  Site source2() const noexcept { return sites_[1]; }

  // Ordered window: Death {j}, Branch {i, j}, Coop {i, i', j}, Custom as given.
  std::vector<Site> window() const;
  Site max_site() const noexcept;
  // Custom maps carry their own state space; built-ins work on any {0..n}.
  Level custom_levels() const noexcept;
  std::span<const std::uint32_t> custom_table() const noexcept;

  Configuration apply(const Configuration& x) const;
  // Dense {0,1} fast path. Custom maps must have custom_levels() == 1.
  void apply_in_place(SiteBits& x) const noexcept;

  // Cached D(m), R(m); closed forms for built-ins, enumeration for Custom.
  const DependenceSets& dependence() const noexcept { return *dependence_; }
  // Enumeration over all window states and single-site perturbations.
  DependenceSets dependence_by_enumeration(Level levels) const;

  bool is_monotone(Level levels) const;
  bool is_additive(Level levels) const;
  bool fixes_zero() const;
  // Standing assumption for simulation families: monotone with m(0̲) = 0̲.
  bool is_eligible(Level levels) const { return fixes_zero() && is_monotone(levels); }

  // Image of a window state tuple (one level per window site).
  std::vector<Level> apply_window(std::span<const Level> window_state) const;

  // m ↦ T_i m: the same map with every site k replaced by translate(k).
  template <class F>
  LocalMap relabeled(F&& translate) const;

  std::string to_string() const;

  friend bool operator==(const LocalMap& a, const LocalMap& b) noexcept;
  friend bool operator<(const LocalMap& a, const LocalMap& b) noexcept;

 private:
  struct CustomData {
    std::vector<Site> window;
    std::vector<std::uint32_t> table;
    Level levels;
  };

  LocalMap() = default;
  void finalize();

  MapKind kind_ = MapKind::Death;
  std::array<Site, 3> sites_{};  // (i, i', j); unused slots repeat j
  std::shared_ptr<const CustomData> custom_;
  std::shared_ptr<const DependenceSets> dependence_;
};

template <class F>
LocalMap LocalMap::relabeled(F&& translate) const {
  switch (kind_) {
    case MapKind::Death:
      return death(translate(target()));
    case MapKind::Branch:
      return branch(translate(source()), translate(target()));
    case MapKind::Coop:
      return coop(translate(source()), translate(source2()), translate(target()));
    case MapKind::Custom: {
      std::vector<Site> w = custom_->window;
      for (auto& s : w) s = translate(s);
      return custom(std::move(w), custom_->table, custom_->levels);
    }
  }
  return *this;
}

}  // namespace monodual
