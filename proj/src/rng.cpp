#include "monodual/rng.hpp"

#include <bit>

namespace monodual {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t purpose_tag(std::string_view purpose) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix_tag(std::uint64_t tag, std::uint64_t value) noexcept { return mix64(tag ^ mix64(value)); }

std::uint64_t mix_tag(std::uint64_t tag, double value) noexcept {
  return mix_tag(tag, std::bit_cast<std::uint64_t>(value));
}

std::uint64_t derive_seed(const SeedProvenance& p) noexcept {
  return mix64(mix64(mix64(p.master) ^ p.replica) ^ p.tag);
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  for (double w : weights) total_ += w;
  if (n == 0 || total_ <= 0.0) return;

  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t k = 0; k < n; ++k) {
    scaled[k] = weights[k] * static_cast<double>(n) / total_;
    (scaled[k] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto l : large) {
    prob_[l] = 1.0;
    alias_[l] = l;
  }
  // Leftovers from rounding drift carry (almost exactly) full mass.
  for (auto s : small) {
    prob_[s] = 1.0;
    alias_[s] = s;
  }
}

std::uint32_t AliasTable::sample(Rng& rng) const {
  const auto column = static_cast<std::uint32_t>(rng.below(prob_.size()));
  return rng.uniform() < prob_[column] ? column : alias_[column];
}

}  // namespace monodual
