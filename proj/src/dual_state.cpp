#include "monodual/dual_state.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "monodual/dual.hpp"
#include "monodual/kernels.hpp"

namespace monodual {

namespace {

constexpr std::uint64_t bit(Site i) { return std::uint64_t{1} << i; }

}  // namespace

SparseDualState::SparseDualState(std::size_t num_sites)
    : num_sites_(num_sites), word_mode_(num_sites <= 64), by_site_(word_mode_ ? 0 : num_sites) {}

std::uint64_t SparseDualState::mask_of(std::span<const Site> z) {
  std::uint64_t m = 0;
  for (Site s : z) m |= bit(s);
  return m;
}

SparseDualState SparseDualState::y_top(std::size_t num_sites) {
  SparseDualState s(num_sites);
  if (s.word_mode_) {
    for (Site i = 0; i < num_sites; ++i) s.masks_.push_back(bit(i));
    return s;
  }
  s.slots_.reserve(num_sites);
  for (Site i = 0; i < num_sites; ++i) {
    s.slots_.push_back({i});
    s.live_.push_back(1);
    s.by_site_[i].push_back(i);
  }
  s.count_ = num_sites;
  return s;
}

SparseDualState SparseDualState::from_antichain(const Antichain& Y) {
  if (Y.levels() != 1) throw ConfigError("the sparse dual engine handles S = {0,1} only");
  SparseDualState s(Y.num_sites());
  for (const auto& y : Y.elements()) {
    const auto sup = y.support();
    s.insert(sup);
  }
  return s;
}

Antichain SparseDualState::to_antichain() const {
  std::vector<Configuration> elems;
  elems.reserve(size());
  if (word_mode_) {
    for (auto m : masks_) {
      Configuration y(num_sites_, 1);
      for (; m; m &= m - 1) y.set(static_cast<Site>(std::countr_zero(m)), 1);
      elems.push_back(std::move(y));
    }
    return Antichain::assume_minimal(num_sites_, 1, std::move(elems));
  }
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (!live_[k]) continue;
    Configuration y(num_sites_, 1);
    for (Site i : slots_[k]) y.set(i, 1);
    elems.push_back(std::move(y));
  }
  return Antichain::assume_minimal(num_sites_, 1, std::move(elems));
}

bool SparseDualState::dominated(std::span<const Site> z) const {
  if (word_mode_) return kernels::find_subset_of(masks_, mask_of(z)) != masks_.size();
  for (Site s : z)
    for (auto slot : by_site_[s]) {
      const auto& e = slots_[slot];
      if (e.size() <= z.size() && std::includes(z.begin(), z.end(), e.begin(), e.end())) return true;
    }
  return false;
}

void SparseDualState::remove_slot(std::uint32_t slot) {
  for (Site s : slots_[slot]) {
    auto& list = by_site_[s];
    auto it = std::find(list.begin(), list.end(), slot);
    *it = list.back();
    list.pop_back();
  }
  slots_[slot].clear();
  live_[slot] = 0;
  free_.push_back(slot);
  --count_;
}

void SparseDualState::insert_mask(std::uint64_t z) {
  if (kernels::find_subset_of(masks_, z) != masks_.size()) return;
  std::erase_if(masks_, [z](std::uint64_t m) { return (z & ~m) == 0; });
  masks_.push_back(z);
}

void SparseDualState::insert(std::span<const Site> z) {
  if (z.empty()) throw ConfigError("dual states cannot contain the zero configuration");
  if (word_mode_) return insert_mask(mask_of(z));
  if (dominated(z)) return;
  // Drop the elements strictly above z; they all contain z's rarest site.
  Site rare = z[0];
  for (Site s : z)
    if (by_site_[s].size() < by_site_[rare].size()) rare = s;
  std::vector<std::uint32_t> above;
  for (auto slot : by_site_[rare]) {
    const auto& e = slots_[slot];
    if (std::includes(e.begin(), e.end(), z.begin(), z.end())) above.push_back(slot);
  }
  for (auto slot : above) remove_slot(slot);

  std::uint32_t slot;
  if (!free_.empty()) {
    slot = free_.back();
    free_.pop_back();
    slots_[slot].assign(z.begin(), z.end());
    live_[slot] = 1;
  } else {
    slot = static_cast<std::uint32_t>(slots_.size());
    slots_.emplace_back(z.begin(), z.end());
    live_.push_back(1);
  }
  for (Site s : z) by_site_[s].push_back(slot);
  ++count_;
}

std::vector<std::vector<Site>> SparseDualState::elements_containing(Site j) const {
  std::vector<std::uint32_t> ids(by_site_[j].begin(), by_site_[j].end());
  std::sort(ids.begin(), ids.end());
  std::vector<std::vector<Site>> out;
  out.reserve(ids.size());
  for (auto slot : ids) out.push_back(slots_[slot]);
  return out;
}

void SparseDualState::apply_death(Site j) {
  if (word_mode_) {
    std::erase_if(masks_, [b = bit(j)](std::uint64_t m) { return (m & b) != 0; });
    return;
  }
  while (!by_site_[j].empty()) remove_slot(by_site_[j].back());
}

namespace {

// (y − e_j) ∨ e_a ∨ e_b, kept sorted.
void substitute(std::vector<Site>& y, Site j, Site a, Site b) {
  y.erase(std::lower_bound(y.begin(), y.end(), j));
  for (Site s : {a, b}) {
    auto it = std::lower_bound(y.begin(), y.end(), s);
    if (it == y.end() || *it != s) y.insert(it, s);
  }
}

}  // namespace

namespace {

// Masks bucketed by their trace on a strided set of up to 12 sites. A mask
// below z can only sit in a bucket whose key is a submask of z's key.
class SubsetIndex {
 public:
  static constexpr unsigned kKeyBits = 12;

  void reset(std::size_t num_sites) {
    for (auto k : touched_) buckets_[k].clear();
    touched_.clear();
    if (buckets_.empty()) buckets_.resize(std::size_t{1} << kKeyBits);
    unsigned stride = static_cast<unsigned>((num_sites + kKeyBits - 1) / kKeyBits);
    if (stride == 0) stride = 1;
    if (stride != stride_) build_tables(stride);
  }

  void add(std::uint64_t m) {
    const auto k = key(m);
    auto& b = buckets_[k];
    if (b.empty()) touched_.push_back(k);
    b.push_back(m);
  }

  bool has_subset_of(std::uint64_t z) const {
    const auto kz = key(z);
    for (unsigned sub = kz;; sub = (sub - 1) & kz) {
      const auto& b = buckets_[sub];
      if (b.size() < 8) {
        for (auto m : b)
          if ((m & ~z) == 0) return true;
      } else if (kernels::find_subset_of(b, z) != b.size()) {
        return true;
      }
      if (sub == 0) return false;
    }
  }

 private:
  // Key bit b is site b·stride; one table per byte of the mask.
  void build_tables(unsigned stride) {
    stride_ = stride;
    for (unsigned byte = 0; byte < 8; ++byte)
      for (unsigned v = 0; v < 256; ++v) {
        std::uint16_t k = 0;
        for (unsigned b = 0; b < kKeyBits; ++b) {
          const unsigned site = b * stride;
          if (site / 8 == byte && ((v >> (site % 8)) & 1u)) k |= static_cast<std::uint16_t>(1u << b);
        }
        tables_[byte][v] = k;
      }
  }

  unsigned key(std::uint64_t m) const {
    unsigned k = 0;
    for (unsigned byte = 0; byte < 8; ++byte) k |= tables_[byte][(m >> (8 * byte)) & 0xFFu];
    return k;
  }

  unsigned stride_ = 0;
  std::uint16_t tables_[8][256] = {};
  std::vector<std::vector<std::uint64_t>> buckets_;
  std::vector<unsigned> touched_;
};

// Below this many element pairs a flat scan beats building the index.
constexpr std::size_t kIndexThreshold = 1 << 16;

}  // namespace

void SparseDualState::substitute_masks(std::uint64_t add, Site j) {
  const std::uint64_t bj = bit(j);
  std::vector<std::uint64_t> cands, meets;
  for (auto m : masks_) {
    if (m & bj) cands.push_back((m & ~bj) | add);
    if (m & add) meets.push_back(m);
  }
  if (cands.empty()) return;
  // Ascending size, so a candidate is only ever dominated by earlier ones.
  // Repeats need no removal: the subset test below rejects them.
  std::array<std::uint32_t, 66> start{};
  for (auto c : cands) ++start[std::popcount(c) + 1];
  for (std::size_t k = 1; k < start.size(); ++k) start[k] += start[k - 1];
  std::vector<std::uint64_t> keyed(cands.size());
  for (auto c : cands) keyed[start[std::popcount(c)]++] = c;

  // A current element below a candidate must meet `add` (otherwise it would
  // sit strictly below the element the candidate came from).
  std::vector<std::uint64_t> fresh;
  if (keyed.size() * meets.size() < kIndexThreshold) {
    for (auto c : keyed)
      if (kernels::find_subset_of(fresh, c) == fresh.size() && kernels::find_subset_of(meets, c) == meets.size())
        fresh.push_back(c);
  } else {
    thread_local SubsetIndex index;
    index.reset(num_sites_);
    for (auto m : meets) index.add(m);
    for (auto c : keyed)
      if (!index.has_subset_of(c)) {
        index.add(c);
        fresh.push_back(c);
      }
  }
  if (fresh.empty()) return;

  // Elements strictly above a new one contain all of `add`.
  auto above_fresh = [&](auto&& has_subset) {
    std::erase_if(masks_, [&](std::uint64_t m) { return (m & add) == add && has_subset(m); });
  };
  if (fresh.size() * meets.size() < kIndexThreshold) {
    above_fresh([&](std::uint64_t m) { return kernels::find_subset_of(fresh, m) != fresh.size(); });
  } else {
    thread_local SubsetIndex index;
    index.reset(num_sites_);
    for (auto c : fresh) index.add(c);
    above_fresh([&](std::uint64_t m) { return index.has_subset_of(m); });
  }
  masks_.insert(masks_.end(), fresh.begin(), fresh.end());
}

void SparseDualState::apply_branch(Site i, Site j) {
  if (word_mode_) return substitute_masks(bit(i), j);
  if (by_site_[j].empty()) return;
  auto cands = elements_containing(j);
  for (auto& y : cands) {
    substitute(y, j, i, i);
    insert(y);
  }
}

void SparseDualState::apply_coop(Site i, Site i2, Site j) {
  if (word_mode_) return substitute_masks(bit(i) | bit(i2), j);
  if (by_site_[j].empty()) return;
  auto cands = elements_containing(j);
  for (auto& y : cands) {
    substitute(y, j, i, i2);
    insert(y);
  }
}

void SparseDualState::apply(const LocalMap& m) {
  switch (m.kind()) {
    case MapKind::Death:
      return apply_death(m.target());
    case MapKind::Branch:
      return apply_branch(m.source(), m.target());
    case MapKind::Coop:
      return apply_coop(m.source(), m.source2(), m.target());
    case MapKind::Custom:
      break;
  }
  if (m.custom_levels() != 1) throw ConfigError("the sparse dual engine handles S = {0,1} only");
  if (word_mode_) {
    const auto changed = mask_of(m.dependence().changed);
    std::vector<std::uint64_t> old;
    std::erase_if(masks_, [&](std::uint64_t y) {
      if (!(y & changed)) return false;
      old.push_back(y);
      return true;
    });
    for (auto y : old) {
      Configuration cy(num_sites_, 1);
      for (; y; y &= y - 1) cy.set(static_cast<Site>(std::countr_zero(y)), 1);
      for (const auto& x : preimage_minima(m, cy)) insert_mask(mask_of(x.support()));
    }
    return;
  }
  std::vector<std::uint32_t> touched;
  for (Site j : m.dependence().changed)
    touched.insert(touched.end(), by_site_[j].begin(), by_site_[j].end());
  if (touched.empty()) return;
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::vector<std::vector<Site>> old;
  for (auto slot : touched) old.push_back(slots_[slot]);
  for (auto slot : touched) remove_slot(slot);
  for (const auto& y : old) {
    Configuration cy(num_sites_, 1);
    for (Site s : y) cy.set(s, 1);
    for (const auto& x : preimage_minima(m, cy)) {
      const auto sup = x.support();
      insert(sup);
    }
  }
}

bool SparseDualState::contains_singleton(Site i) const {
  if (word_mode_) return std::find(masks_.begin(), masks_.end(), bit(i)) != masks_.end();
  for (auto slot : by_site_[i])
    if (slots_[slot].size() == 1) return true;
  return false;
}

bool SparseDualState::psi(std::span<const Site> support) const { return dominated(support); }

}  // namespace monodual
