#include "monodual/kernels.hpp"

#include <bit>

namespace monodual::kernels::scalar {

bool is_zero(Words a) noexcept {
  std::uint64_t acc = 0;
  for (auto w : a) acc |= w;
  return acc == 0;
}

bool is_subset(Words a, Words b) noexcept {
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc |= a[k] & ~b[k];
  return acc == 0;
}

bool equal(Words a, Words b) noexcept {
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc |= a[k] ^ b[k];
  return acc == 0;
}

std::size_t popcount(Words a) noexcept {
  std::size_t n = 0;
  for (auto w : a) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void or_into(MutWords dst, Words src) noexcept {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] |= src[k];
}

void and_into(MutWords dst, Words src) noexcept {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] &= src[k];
}

std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept {
  for (std::size_t k = 0; k < masks.size(); ++k)
    if ((masks[k] & ~z) == 0) return k;
  return masks.size();
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double p = a * x[k];
    y[k] = y[k] + p;
  }
}

void scale_by(std::span<double> y, std::span<const double> s) noexcept {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = y[k] * s[k];
}

}  // namespace monodual::kernels::scalar
