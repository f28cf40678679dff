#include "monodual/localmap.hpp"

#include <algorithm>
#include <sstream>

namespace monodual {

const char* kind_name(MapKind k) noexcept {
  switch (k) {
    case MapKind::Death:
      return "dth";
    case MapKind::Branch:
      return "bra";
    case MapKind::Coop:
      return "coop";
    case MapKind::Custom:
      return "custom";
  }
  return "?";
}

std::vector<Site> DependenceSets::sources(Site j) const {
  std::vector<Site> out;
  if (!std::binary_search(changed.begin(), changed.end(), j)) {
    out.push_back(j);
    return out;
  }
  for (const auto& [a, b] : window_pairs)
    if (b == j) out.push_back(a);
  return out;
}

std::vector<std::pair<Site, Site>> DependenceSets::relevance(std::size_t num_sites) const {
  std::vector<std::pair<Site, Site>> out = window_pairs;
  for (Site k = 0; k < num_sites; ++k)
    if (!std::binary_search(changed.begin(), changed.end(), k)) out.emplace_back(k, k);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

void decode(std::uint32_t code, std::size_t base, std::span<Level> out) {
  for (std::size_t k = out.size(); k-- > 0;) {
    out[k] = static_cast<Level>(code % base);
    code /= static_cast<std::uint32_t>(base);
  }
}

std::uint32_t encode(std::span<const Level> digits, std::size_t base) {
  std::uint32_t code = 0;
  for (Level d : digits) code = code * static_cast<std::uint32_t>(base) + d;
  return code;
}

}  // namespace

LocalMap LocalMap::death(Site j) {
  LocalMap m;
  m.kind_ = MapKind::Death;
  m.sites_ = {j, j, j};
  m.finalize();
  return m;
}

LocalMap LocalMap::branch(Site i, Site j) {
  if (i == j) throw ConfigError("branching map needs distinct source and target");
  LocalMap m;
  m.kind_ = MapKind::Branch;
  m.sites_ = {i, j, j};
  m.finalize();
  return m;
}

LocalMap LocalMap::coop(Site i, Site i2, Site j) {
  if (i == i2 || i == j || i2 == j) throw ConfigError("cooperative branching map needs three distinct sites");
  LocalMap m;
  m.kind_ = MapKind::Coop;
  m.sites_ = {i, i2, j};
  m.finalize();
  return m;
}

LocalMap LocalMap::custom(std::vector<Site> window, std::vector<std::uint32_t> table, Level levels) {
  if (window.empty()) throw ConfigError("custom map needs a nonempty window");
  if (window.size() > kMaxCustomWindow)
    throw ConfigError("custom map window exceeds " + std::to_string(kMaxCustomWindow) + " sites");
  if (levels == 0) throw ConfigError("custom map needs at least two local states");
  auto sorted = window;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("custom map window has repeated sites");
  const std::size_t rows = ipow(std::size_t{levels} + 1, window.size());
  if (table.size() != rows)
    throw ConfigError("custom map table has " + std::to_string(table.size()) + " rows, expected " +
                      std::to_string(rows));
  for (auto v : table)
    if (v >= rows) throw ConfigError("custom map table output out of range");
  LocalMap m;
  m.kind_ = MapKind::Custom;
  m.custom_ = std::make_shared<const CustomData>(CustomData{std::move(window), std::move(table), levels});
  m.sites_ = {m.custom_->window.front(), m.custom_->window.front(), m.custom_->window.back()};
  m.finalize();
  return m;
}

LocalMap LocalMap::identity(std::vector<Site> window, Level levels) {
  const std::size_t rows = ipow(std::size_t{levels} + 1, window.size());
  std::vector<std::uint32_t> table(rows);
  for (std::size_t k = 0; k < rows; ++k) table[k] = static_cast<std::uint32_t>(k);
  return custom(std::move(window), std::move(table), levels);
}

void LocalMap::finalize() {
  DependenceSets d;
  const Site i = sites_[0], i2 = sites_[1], j = sites_[2];
  switch (kind_) {
    case MapKind::Death:
      d.changed = {j};
      break;
    case MapKind::Branch:
      d.changed = {j};
      d.window_pairs = {{i, i}, {i, j}, {j, j}};
      break;
    case MapKind::Coop:
      d.changed = {j};
      d.window_pairs = {{i, i}, {i, j}, {i2, i2}, {i2, j}, {j, j}};
      break;
    case MapKind::Custom:
      d = dependence_by_enumeration(custom_->levels);
      break;
  }
  std::sort(d.window_pairs.begin(), d.window_pairs.end());
  dependence_ = std::make_shared<const DependenceSets>(std::move(d));
}

std::vector<Site> LocalMap::window() const {
  switch (kind_) {
    case MapKind::Death:
      return {sites_[2]};
    case MapKind::Branch:
      return {sites_[0], sites_[2]};
    case MapKind::Coop:
      return {sites_[0], sites_[1], sites_[2]};
    case MapKind::Custom:
      return custom_->window;
  }
  return {};
}

Site LocalMap::max_site() const noexcept {
  if (kind_ == MapKind::Custom) return *std::max_element(custom_->window.begin(), custom_->window.end());
  return std::max({sites_[0], sites_[1], sites_[2]});
}

Level LocalMap::custom_levels() const noexcept { return custom_ ? custom_->levels : Level{0}; }

std::span<const std::uint32_t> LocalMap::custom_table() const noexcept {
  if (!custom_) return {};
  return custom_->table;
}

std::vector<Level> LocalMap::apply_window(std::span<const Level> s) const {
  std::vector<Level> out(s.begin(), s.end());
  switch (kind_) {
    case MapKind::Death:
      out[0] = 0;
      break;
    case MapKind::Branch:
      out[1] = std::max(s[0], s[1]);
      break;
    case MapKind::Coop:
      out[2] = std::max(std::min(s[0], s[1]), s[2]);
      break;
    case MapKind::Custom: {
      const std::size_t base = std::size_t{custom_->levels} + 1;
      decode(custom_->table[encode(s, base)], base, out);
      break;
    }
  }
  return out;
}

Configuration LocalMap::apply(const Configuration& x) const {
  if (max_site() >= x.num_sites()) throw ConfigError("map " + to_string() + " refers to sites off the grid");
  Configuration y = x;
  const Site i = sites_[0], i2 = sites_[1], j = sites_[2];
  switch (kind_) {
    case MapKind::Death:
      y.set(j, 0);
      break;
    case MapKind::Branch:
      y.set(j, std::max(x[i], x[j]));
      break;
    case MapKind::Coop:
      y.set(j, std::max(std::min(x[i], x[i2]), x[j]));
      break;
    case MapKind::Custom: {
      if (x.levels() != custom_->levels) throw ConfigError("custom map state space differs from configuration");
      const auto& w = custom_->window;
      std::vector<Level> s(w.size());
      for (std::size_t k = 0; k < w.size(); ++k) s[k] = x[w[k]];
      const auto out = apply_window(s);
      for (std::size_t k = 0; k < w.size(); ++k) y.set(w[k], out[k]);
      break;
    }
  }
  return y;
}

void LocalMap::apply_in_place(SiteBits& x) const noexcept {
  const Site i = sites_[0], i2 = sites_[1], j = sites_[2];
  switch (kind_) {
    case MapKind::Death:
      x.reset(j);
      break;
    case MapKind::Branch:
      if (x.test(i)) x.set(j);
      break;
    case MapKind::Coop:
      if (x.test(i) && x.test(i2)) x.set(j);
      break;
    case MapKind::Custom: {
      const auto& w = custom_->window;
      std::uint32_t code = 0;
      for (Site s : w) code = (code << 1) | static_cast<std::uint32_t>(x.test(s));
      std::uint32_t out = custom_->table[code];
      for (std::size_t k = w.size(); k-- > 0;) {
        x.assign(w[k], out & 1u);
        out >>= 1;
      }
      break;
    }
  }
}

DependenceSets LocalMap::dependence_by_enumeration(Level levels) const {
  if (kind_ == MapKind::Custom) levels = custom_->levels;
  const auto w = window();
  const std::size_t base = std::size_t{levels} + 1;
  const std::size_t rows = ipow(base, w.size());
  std::vector<char> changed(w.size(), 0);
  std::vector<char> pair(w.size() * w.size(), 0);
  std::vector<Level> x(w.size()), y(w.size());
  for (std::uint32_t code = 0; code < rows; ++code) {
    decode(code, base, x);
    const auto mx = apply_window(x);
    for (std::size_t q = 0; q < w.size(); ++q)
      if (mx[q] != x[q]) changed[q] = 1;
    for (std::size_t p = 0; p < w.size(); ++p) {
      for (Level a = 0; a <= levels; ++a) {
        if (a == x[p]) continue;
        y = x;
        y[p] = a;
        const auto my = apply_window(y);
        for (std::size_t q = 0; q < w.size(); ++q)
          if (mx[q] != my[q]) pair[p * w.size() + q] = 1;
      }
    }
  }
  DependenceSets d;
  for (std::size_t q = 0; q < w.size(); ++q)
    if (changed[q]) d.changed.push_back(w[q]);
  for (std::size_t p = 0; p < w.size(); ++p)
    for (std::size_t q = 0; q < w.size(); ++q)
      if (pair[p * w.size() + q]) d.window_pairs.emplace_back(w[p], w[q]);
  std::sort(d.changed.begin(), d.changed.end());
  std::sort(d.window_pairs.begin(), d.window_pairs.end());
  return d;
}

bool LocalMap::fixes_zero() const {
  const std::vector<Level> zero(window().size(), 0);
  const auto out = apply_window(zero);
  return std::all_of(out.begin(), out.end(), [](Level v) { return v == 0; });
}

bool LocalMap::is_monotone(Level levels) const {
  if (kind_ == MapKind::Custom) levels = custom_->levels;
  // On a product of chains every comparable pair is linked by single-site
  // increments, so checking covering pairs is enough.
  const std::size_t n = window().size();
  const std::size_t base = std::size_t{levels} + 1;
  const std::size_t rows = ipow(base, n);
  std::vector<Level> x(n), y(n);
  for (std::uint32_t code = 0; code < rows; ++code) {
    decode(code, base, x);
    const auto mx = apply_window(x);
    for (std::size_t p = 0; p < n; ++p) {
      if (x[p] == levels) continue;
      y = x;
      ++y[p];
      const auto my = apply_window(y);
      for (std::size_t q = 0; q < n; ++q)
        if (mx[q] > my[q]) return false;
    }
  }
  return true;
}

bool LocalMap::is_additive(Level levels) const {
  if (kind_ == MapKind::Custom) levels = custom_->levels;
  if (!fixes_zero()) return false;
  const std::size_t n = window().size();
  const std::size_t base = std::size_t{levels} + 1;
  const std::size_t rows = ipow(base, n);
  std::vector<Level> x(n), y(n), xy(n), joined(n);
  for (std::uint32_t a = 0; a < rows; ++a) {
    decode(a, base, x);
    const auto mx = apply_window(x);
    for (std::uint32_t b = a + 1; b < rows; ++b) {
      decode(b, base, y);
      for (std::size_t k = 0; k < n; ++k) xy[k] = std::max(x[k], y[k]);
      const auto my = apply_window(y);
      const auto mxy = apply_window(xy);
      for (std::size_t k = 0; k < n; ++k)
        if (mxy[k] != std::max(mx[k], my[k])) return false;
    }
  }
  return true;
}

std::string LocalMap::to_string() const {
  std::ostringstream os;
  os << kind_name(kind_) << '(';
  const auto w = window();
  for (std::size_t k = 0; k < w.size(); ++k) os << (k ? "," : "") << w[k];
  os << ')';
  return os.str();
}

bool operator==(const LocalMap& a, const LocalMap& b) noexcept {
  if (a.kind_ != b.kind_ || a.sites_ != b.sites_) return false;
  if (a.kind_ != MapKind::Custom) return true;
  return a.custom_ == b.custom_ ||
         (a.custom_->window == b.custom_->window && a.custom_->table == b.custom_->table &&
          a.custom_->levels == b.custom_->levels);
}

bool operator<(const LocalMap& a, const LocalMap& b) noexcept {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.sites_ != b.sites_) return a.sites_ < b.sites_;
  if (a.kind_ != MapKind::Custom || a.custom_ == b.custom_) return false;
  if (a.custom_->window != b.custom_->window) return a.custom_->window < b.custom_->window;
  if (a.custom_->levels != b.custom_->levels) return a.custom_->levels < b.custom_->levels;
  return a.custom_->table < b.custom_->table;
}

}  // namespace monodual
