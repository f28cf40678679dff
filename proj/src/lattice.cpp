#include "monodual/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace monodual {

Grid Grid::torus(int dim, int side) {
  if (dim < 1) throw ConfigError("torus dimension must be at least 1");
  if (side < 3) throw ConfigError("torus side length must be at least 3");
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) {
    n *= static_cast<std::size_t>(side);
    if (n > (std::size_t{1} << 31)) throw ConfigError("torus too large");
  }
  Grid g;
  g.size_ = n;
  g.torus_dim_ = dim;
  g.torus_side_ = side;
  std::vector<int> coords(dim, 0);
  for (int k = 0; k < dim; ++k) {
    coords.assign(dim, 0);
    coords[k] = 1;
    g.generators_.push_back(g.site_at(coords));
    coords[k] = -1;
    g.generators_.push_back(g.site_at(coords));
  }
  g.build_neighbors();
  return g;
}

Grid Grid::cayley(std::vector<std::vector<Site>> table, std::vector<Site> generators) {
  const std::size_t n = table.size();
  if (n == 0) throw ConfigError("empty multiplication table");
  for (const auto& row : table) {
    if (row.size() != n) throw ConfigError("multiplication table is not square");
    for (Site v : row)
      if (v >= n) throw ConfigError("multiplication table entry out of range");
  }
  // Latin square: each row and column is a permutation.
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<char> seen_row(n, 0), seen_col(n, 0);
    for (std::size_t b = 0; b < n; ++b) {
      if (seen_row[table[a][b]]++ || seen_col[table[b][a]]++)
        throw ConfigError("multiplication table is not a group table (not a Latin square)");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    if (table[0][a] != a || table[a][0] != a) throw ConfigError("site 0 must be the group identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw ConfigError("multiplication table is not associative");

  Grid g;
  g.size_ = n;
  g.table_.resize(n * n);
  g.inverses_.resize(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      g.table_[a * n + b] = table[a][b];
      if (table[a][b] == 0) g.inverses_[a] = static_cast<Site>(b);
    }

  std::vector<Site> gens = generators;
  std::sort(gens.begin(), gens.end());
  if (std::adjacent_find(gens.begin(), gens.end()) != gens.end()) throw ConfigError("duplicate generator");
  for (Site k : generators) {
    if (k >= n) throw ConfigError("generator out of range");
    if (k == 0) throw ConfigError("generators must exclude the identity");
    if (!std::binary_search(gens.begin(), gens.end(), g.inverses_[k]))
      throw ConfigError("generator set is not symmetric");
  }
  if (generators.size() < 2) throw ConfigError("need at least two generators (every site needs degree >= 2)");

  // Generated subgroup by breadth-first search from the identity.
  std::vector<char> reached(n, 0);
  std::vector<Site> frontier{0};
  reached[0] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    Site a = frontier.back();
    frontier.pop_back();
    for (Site k : generators) {
      Site b = g.table_[std::size_t{a} * n + k];
      if (!reached[b]) {
        reached[b] = 1;
        ++count;
        frontier.push_back(b);
      }
    }
  }
  if (count != n) throw ConfigError("generators do not generate the group");

  g.generators_ = std::move(generators);
  g.build_neighbors();
  return g;
}

void Grid::build_neighbors() {
  neighbors_.resize(size_ * generators_.size());
  for (Site j = 0; j < size_; ++j)
    for (std::size_t k = 0; k < generators_.size(); ++k) neighbors_[std::size_t{j} * degree() + k] = mul(j, generators_[k]);
}

std::vector<std::pair<Site, Site>> Grid::pair_neighbors(Site j) const {
  std::vector<std::pair<Site, Site>> out;
  auto nb = neighbors(j);
  out.reserve(nb.size() * (nb.size() - 1));
  for (Site a : nb)
    for (Site b : nb)
      if (a != b) out.emplace_back(a, b);
  return out;
}

bool Grid::adjacent(Site a, Site b) const noexcept {
  auto nb = neighbors(a);
  return std::find(nb.begin(), nb.end(), b) != nb.end();
}

std::vector<std::pair<Site, Site>> Grid::edges() const {
  std::vector<std::pair<Site, Site>> out;
  for (Site j = 0; j < size_; ++j)
    for (Site k : neighbors(j)) out.emplace_back(std::min(j, k), std::max(j, k));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Site Grid::mul(Site a, Site b) const noexcept {
  if (!is_torus()) return table_[std::size_t{a} * size_ + b];
  // Coordinate-wise addition mod L, row-major with the last coordinate fastest.
  const auto L = static_cast<Site>(torus_side_);
  Site result = 0, scale = 1;
  for (int k = 0; k < torus_dim_; ++k) {
    const Site ca = a % L, cb = b % L;
    result += ((ca + cb) % L) * scale;
    a /= L;
    b /= L;
    scale *= L;
  }
  return result;
}

Site Grid::inverse(Site a) const noexcept {
  if (!is_torus()) return inverses_[a];
  const auto L = static_cast<Site>(torus_side_);
  Site result = 0, scale = 1;
  for (int k = 0; k < torus_dim_; ++k) {
    result += ((L - a % L) % L) * scale;
    a /= L;
    scale *= L;
  }
  return result;
}

std::vector<int> Grid::coordinates(Site i) const {
  if (!is_torus()) throw ConfigError("coordinates are defined for tori only");
  std::vector<int> c(torus_dim_);
  for (int k = torus_dim_ - 1; k >= 0; --k) {
    c[k] = static_cast<int>(i % torus_side_);
    i /= torus_side_;
  }
  return c;
}

Site Grid::site_at(std::span<const int> coords) const {
  if (!is_torus()) throw ConfigError("coordinates are defined for tori only");
  if (coords.size() != static_cast<std::size_t>(torus_dim_)) throw ConfigError("coordinate arity mismatch");
  Site s = 0;
  for (int c : coords) {
    const int r = ((c % torus_side_) + torus_side_) % torus_side_;
    s = s * static_cast<Site>(torus_side_) + static_cast<Site>(r);
  }
  return s;
}

std::string Grid::descriptor() const {
  std::ostringstream os;
  if (is_torus())
    os << "torus(" << torus_dim_ << ',' << torus_side_ << ')';
  else
    os << "cayley(" << size_ << ')';
  return os.str();
}

Configuration translate_config(const Grid& grid, Site i, const Configuration& x) {
  if (x.num_sites() != grid.size()) throw ConfigError("configuration does not live on this grid");
  if (i >= grid.size()) throw ConfigError("translation site off the grid");
  std::vector<Entry> moved;
  moved.reserve(x.support_size());
  for (const auto& e : x.entries()) moved.push_back({grid.mul(i, e.site), e.level});
  return Configuration::from_entries(x.num_sites(), x.levels(), std::move(moved));
}

std::vector<std::vector<Site>> read_cayley_table(std::istream& in) {
  std::vector<std::vector<Site>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<Site> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      long v = -1;
      try {
        v = std::stol(cell);
      } catch (const std::exception&) {
        throw ConfigError("malformed multiplication table cell: '" + cell + "'");
      }
      if (v < 0) throw ConfigError("negative site index in multiplication table");
      row.push_back(static_cast<Site>(v));
    }
    table.push_back(std::move(row));
  }
  for (const auto& row : table)
    if (row.size() != table.size()) throw ConfigError("multiplication table must be square");
  return table;
}

}  // namespace monodual
