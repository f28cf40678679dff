#pragma once

// Finite grids with a group structure: tori (ℤ/Lℤ)^d and general Cayley graphs.
//
// Sites are indexed 0..|Λ|-1 and the identity element of the group is site 0.
// Edges follow the Cayley construction E = {{j, jk} : j ∈ Λ, k ∈ Δ}, so the
// neighbours of j are {jk : k ∈ Δ}, listed in generator order. The site
// enumeration γ(i) = i + 1 is the row-major index plus one.

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monodual/configuration.hpp"
#include "monodual/types.hpp"

namespace monodual {

class Grid {
 public:
  // (ℤ/Lℤ)^d with generators ±e_0, ±e_1, ... in that order.
  static Grid torus(int dim, int side);
  // table[a][b] = a·b. Site 0 must be the identity. Generators must be
  // symmetric, exclude the identity, and generate the group.
  static Grid cayley(std::vector<std::vector<Site>> table, std::vector<Site> generators);

  std::size_t size() const noexcept { return size_; }
  std::size_t degree() const noexcept { return generators_.size(); }

  std::span<const Site> neighbors(Site j) const noexcept {
    return {neighbors_.data() + std::size_t{j} * degree(), degree()};
  }
  // N_j^(2): ordered pairs of distinct neighbours of j.
  std::vector<std::pair<Site, Site>> pair_neighbors(Site j) const;
  bool adjacent(Site a, Site b) const noexcept;
  // Undirected edge list, each edge once as (min, max), sorted.
  std::vector<std::pair<Site, Site>> edges() const;

  Site identity() const noexcept { return 0; }
  Site mul(Site a, Site b) const noexcept;
  Site inverse(Site a) const noexcept;
  std::span<const Site> generators() const noexcept { return generators_; }

  std::uint32_t enumeration(Site i) const noexcept { return i + 1; }
  Site site_of_rank(std::uint32_t gamma) const noexcept { return gamma - 1; }

  bool is_torus() const noexcept { return torus_dim_ > 0; }
  int torus_dim() const noexcept { return torus_dim_; }
  int torus_side() const noexcept { return torus_side_; }
  std::vector<int> coordinates(Site i) const;  // torus only
  Site site_at(std::span<const int> coords) const;  // torus only, coordinates taken mod L

  // "torus(d,L)" or "cayley(n)".
  std::string descriptor() const;

 private:
  Grid() = default;
  void build_neighbors();

  std::size_t size_ = 0;
  int torus_dim_ = 0;
  int torus_side_ = 0;
  std::vector<Site> table_;     // size_ × size_, empty for tori
  std::vector<Site> inverses_;  // empty for tori
  std::vector<Site> generators_;
  std::vector<Site> neighbors_;  // size_ × degree
};

// (S_i x)(j) = x(i⁻¹ j): the entry at site k moves to site i·k.
Configuration translate_config(const Grid& grid, Site i, const Configuration& x);

// CSV multiplication table: row a, column b holds a·b; sites are integer
// indices. Blank lines and lines starting with '#' are ignored.
std::vector<std::vector<Site>> read_cayley_table(std::istream& in);

}  // namespace monodual
