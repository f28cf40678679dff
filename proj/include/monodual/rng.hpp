#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace monodual {

// Where a random stream came from. Two streams with equal provenance
// produce identical draws.
struct SeedProvenance {
  std::uint64_t master = 0;
  std::uint64_t replica = 0;
  std::uint64_t tag = 0;
};

// Stable 64-bit hash of a purpose string (FNV-1a); independent of the
// standard library's std::hash.
std::uint64_t purpose_tag(std::string_view purpose) noexcept;
// Combine a purpose tag with extra numeric context (e.g. a parameter point).
std::uint64_t mix_tag(std::uint64_t tag, std::uint64_t value) noexcept;
std::uint64_t mix_tag(std::uint64_t tag, double value) noexcept;

std::uint64_t derive_seed(const SeedProvenance& p) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(const SeedProvenance& p) : engine_(derive_seed(p)), provenance_(p) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  bool bernoulli(double p) { return uniform() < p; }

  const SeedProvenance& provenance() const noexcept { return provenance_; }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  SeedProvenance provenance_{};
};

// Walker/Vose alias table: O(1) draws from a fixed discrete distribution
// given by nonnegative weights.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  double total() const noexcept { return total_; }
  std::uint32_t sample(Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  double total_ = 0.0;
};

}  // namespace monodual
