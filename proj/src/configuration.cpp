#include "monodual/configuration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "monodual/kernels.hpp"

namespace monodual {

Configuration::Configuration(std::size_t num_sites, Level levels) : num_sites_(num_sites), levels_(levels) {
  if (levels == 0) throw ConfigError("local state space needs at least two states");
}

Configuration Configuration::basis(std::size_t num_sites, Level levels, Site i, Level a) {
  if (a == 0) throw ConfigError("basis configuration needs a nonzero state");
  Configuration x(num_sites, levels);
  x.set(i, a);
  return x;
}

Configuration Configuration::full(std::size_t num_sites, Level levels) {
  Configuration x(num_sites, levels);
  x.entries_.reserve(num_sites);
  for (Site i = 0; i < num_sites; ++i) x.entries_.push_back({i, levels});
  return x;
}

Configuration Configuration::from_entries(std::size_t num_sites, Level levels, std::vector<Entry> entries) {
  Configuration x(num_sites, levels);
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.site < b.site; });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Entry& e = entries[k];
    if (e.site >= num_sites) throw ConfigError("site " + std::to_string(e.site) + " is off the grid");
    if (e.level > levels) throw ConfigError("state " + std::to_string(e.level) + " exceeds the top level");
    if (k > 0 && entries[k - 1].site == e.site) throw ConfigError("duplicate site in configuration entries");
    if (e.level != 0) x.entries_.push_back(e);
  }
  return x;
}

Configuration Configuration::from_levels(std::span<const Level> levels_per_site, Level levels) {
  Configuration x(levels_per_site.size(), levels);
  for (Site i = 0; i < levels_per_site.size(); ++i) {
    if (levels_per_site[i] > levels) throw ConfigError("state exceeds the top level");
    if (levels_per_site[i] != 0) x.entries_.push_back({i, levels_per_site[i]});
  }
  return x;
}

Level Configuration::operator[](Site i) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Site s) { return e.site < s; });
  return (it != entries_.end() && it->site == i) ? it->level : Level{0};
}

void Configuration::set(Site i, Level a) {
  if (i >= num_sites_) throw ConfigError("site " + std::to_string(i) + " is off the grid");
  if (a > levels_) throw ConfigError("state " + std::to_string(a) + " exceeds the top level");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Site s) { return e.site < s; });
  const bool present = it != entries_.end() && it->site == i;
  if (a == 0) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->level = a;
  } else {
    entries_.insert(it, Entry{i, a});
  }
}

std::vector<Site> Configuration::support() const {
  std::vector<Site> s;
  s.reserve(entries_.size());
  for (const auto& e : entries_) s.push_back(e.site);
  return s;
}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) noexcept {
  const auto& ea = a.entries_;
  const auto& eb = b.entries_;
  const std::size_t n = std::min(ea.size(), eb.size());
  for (std::size_t k = 0; k < n; ++k)
    if (ea[k].site != eb[k].site) return ea[k].site <=> eb[k].site;
  if (ea.size() != eb.size()) return ea.size() <=> eb.size();
  for (std::size_t k = 0; k < n; ++k)
    if (ea[k].level != eb[k].level) return ea[k].level <=> eb[k].level;
  if (a.num_sites_ != b.num_sites_) return a.num_sites_ <=> b.num_sites_;
  return a.levels_ <=> b.levels_;
}

std::string Configuration::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (k) os << ',';
    os << entries_[k].site;
    if (levels_ > 1) os << ':' << int(entries_[k].level);
  }
  os << '}';
  return os.str();
}

void require_compatible(const Configuration& x, const Configuration& y) {
  if (x.num_sites() != y.num_sites() || x.levels() != y.levels())
    throw ConfigError("configurations live on different grids or state spaces");
}

bool leq(const Configuration& x, const Configuration& y) {
  require_compatible(x, y);
  auto ex = x.entries();
  auto ey = y.entries();
  std::size_t k = 0;
  for (const auto& e : ex) {
    while (k < ey.size() && ey[k].site < e.site) ++k;
    if (k == ey.size() || ey[k].site != e.site || ey[k].level < e.level) return false;
  }
  return true;
}

namespace {

template <class Pick>
Configuration merge(const Configuration& x, const Configuration& y, bool keep_unmatched, Pick pick) {
  require_compatible(x, y);
  std::vector<Entry> out;
  auto ex = x.entries();
  auto ey = y.entries();
  std::size_t a = 0, b = 0;
  while (a < ex.size() || b < ey.size()) {
    if (b == ey.size() || (a < ex.size() && ex[a].site < ey[b].site)) {
      if (keep_unmatched) out.push_back(ex[a]);
      ++a;
    } else if (a == ex.size() || ey[b].site < ex[a].site) {
      if (keep_unmatched) out.push_back(ey[b]);
      ++b;
    } else {
      out.push_back({ex[a].site, pick(ex[a].level, ey[b].level)});
      ++a;
      ++b;
    }
  }
  return Configuration::from_entries(x.num_sites(), x.levels(), std::move(out));
}

}  // namespace

Configuration join(const Configuration& x, const Configuration& y) {
  return merge(x, y, true, [](Level p, Level q) { return std::max(p, q); });
}

Configuration meet(const Configuration& x, const Configuration& y) {
  return merge(x, y, false, [](Level p, Level q) { return std::min(p, q); });
}

Configuration without(const Configuration& x, Site i) {
  Configuration r = x;
  r.set(i, 0);
  return r;
}

TernaryDistance::TernaryDistance(std::vector<std::uint32_t> positions) : positions_(std::move(positions)) {
  std::sort(positions_.begin(), positions_.end());
  positions_.erase(std::unique(positions_.begin(), positions_.end()), positions_.end());
}

bool TernaryDistance::less_than_pow3(std::uint32_t n) const noexcept {
  // A digit at position k ≤ n alone contributes ≥ 3^{-n}; without one the
  // tail sum stays ≤ ½·3^{-n}.
  return positions_.empty() || positions_.front() > n;
}

std::uint64_t TernaryDistance::numerator(std::size_t num_sites) const {
  if (num_sites > 40) throw BudgetError("exact numerator over 3^|Λ| only for |Λ| ≤ 40");
  std::uint64_t num = 0;
  for (auto k : positions_) {
    std::uint64_t p = 1;
    for (std::size_t e = k; e < num_sites; ++e) p *= 3;
    num += p;
  }
  return num;
}

double TernaryDistance::to_double() const noexcept {
  double d = 0.0;
  for (auto it = positions_.rbegin(); it != positions_.rend(); ++it) d += std::pow(3.0, -double(*it));
  return d;
}

std::strong_ordering operator<=>(const TernaryDistance& a, const TernaryDistance& b) noexcept {
  // Digit strings compared from the most significant (smallest position).
  const std::size_t n = std::min(a.positions_.size(), b.positions_.size());
  for (std::size_t k = 0; k < n; ++k)
    if (a.positions_[k] != b.positions_[k]) return b.positions_[k] <=> a.positions_[k];
  return a.positions_.size() <=> b.positions_.size();
}

TernaryDistance config_distance(const Configuration& x, const Configuration& y) {
  require_compatible(x, y);
  std::vector<std::uint32_t> pos;
  auto ex = x.entries();
  auto ey = y.entries();
  std::size_t a = 0, b = 0;
  while (a < ex.size() || b < ey.size()) {
    if (b == ey.size() || (a < ex.size() && ex[a].site < ey[b].site)) {
      pos.push_back(ex[a++].site + 1);
    } else if (a == ex.size() || ey[b].site < ex[a].site) {
      pos.push_back(ey[b++].site + 1);
    } else {
      if (ex[a].level != ey[b].level) pos.push_back(ex[a].site + 1);
      ++a;
      ++b;
    }
  }
  return TernaryDistance(std::move(pos));
}

SiteBits::SiteBits(std::size_t num_sites) : num_sites_(num_sites), words_((num_sites + 63) / 64, 0) {}

SiteBits SiteBits::full(std::size_t num_sites) {
  SiteBits b(num_sites);
  for (auto& w : b.words_) w = ~std::uint64_t{0};
  if (num_sites % 64) b.words_.back() = (std::uint64_t{1} << (num_sites % 64)) - 1;
  return b;
}

SiteBits SiteBits::from_config(const Configuration& x) {
  if (x.levels() != 1) throw ConfigError("dense bit configurations require states {0,1}");
  SiteBits b(x.num_sites());
  for (const auto& e : x.entries()) b.set(e.site);
  return b;
}

Configuration SiteBits::to_config() const {
  std::vector<Entry> entries;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const int k = std::countr_zero(bits);
      entries.push_back({static_cast<Site>(w * 64 + k), 1});
      bits &= bits - 1;
    }
  }
  return Configuration::from_entries(num_sites_, 1, std::move(entries));
}

bool SiteBits::none() const noexcept { return kernels::is_zero(words_); }
std::size_t SiteBits::count() const noexcept { return kernels::popcount(words_); }
bool SiteBits::subset_of(const SiteBits& other) const noexcept { return kernels::is_subset(words_, other.words_); }

bool operator==(const SiteBits& a, const SiteBits& b) noexcept {
  return a.num_sites_ == b.num_sites_ && kernels::equal(a.words_, b.words_);
}

}  // namespace monodual
