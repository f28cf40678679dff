#include "monodual/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace monodual::kernels::avx2 {

namespace {

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store(std::uint64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

// Nibble-table popcount (Mula); sums per-byte counts into four 64-bit lanes.
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

}  // namespace

bool is_zero(Words a) noexcept {
  const std::size_t n = a.size();
  std::size_t k = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; k + 4 <= n; k += 4) acc = _mm256_or_si256(acc, load(a.data() + k));
  std::uint64_t tail = 0;
  for (; k < n; ++k) tail |= a[k];
  return _mm256_testz_si256(acc, acc) && tail == 0;
}

bool is_subset(Words a, Words b) noexcept {
  const std::size_t n = a.size();
  std::size_t k = 0;
  __m256i acc = _mm256_setzero_si256();
  // andnot(b, a) = a & ~b
  for (; k + 4 <= n; k += 4)
    acc = _mm256_or_si256(acc, _mm256_andnot_si256(load(b.data() + k), load(a.data() + k)));
  std::uint64_t tail = 0;
  for (; k < n; ++k) tail |= a[k] & ~b[k];
  return _mm256_testz_si256(acc, acc) && tail == 0;
}

bool equal(Words a, Words b) noexcept {
  const std::size_t n = a.size();
  std::size_t k = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; k + 4 <= n; k += 4)
    acc = _mm256_or_si256(acc, _mm256_xor_si256(load(a.data() + k), load(b.data() + k)));
  std::uint64_t tail = 0;
  for (; k < n; ++k) tail |= a[k] ^ b[k];
  return _mm256_testz_si256(acc, acc) && tail == 0;
}

std::size_t popcount(Words a) noexcept {
  const std::size_t n = a.size();
  std::size_t k = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; k + 4 <= n; k += 4) acc = _mm256_add_epi64(acc, popcount_lanes(load(a.data() + k)));
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; k < n; ++k) total += static_cast<std::size_t>(std::popcount(a[k]));
  return total;
}

void or_into(MutWords dst, Words src) noexcept {
  const std::size_t n = dst.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    store(dst.data() + k, _mm256_or_si256(load(dst.data() + k), load(src.data() + k)));
  for (; k < n; ++k) dst[k] |= src[k];
}

void and_into(MutWords dst, Words src) noexcept {
  const std::size_t n = dst.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    store(dst.data() + k, _mm256_and_si256(load(dst.data() + k), load(src.data() + k)));
  for (; k < n; ++k) dst[k] &= src[k];
}

std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept {
  const std::size_t n = masks.size();
  const __m256i nz = _mm256_set1_epi64x(static_cast<long long>(~z));
  const __m256i zero = _mm256_setzero_si256();
  std::size_t k = 0;
  // Two vectors per round; the hit position is recovered from the lane mask.
  for (; k + 8 <= n; k += 8) {
    const __m256i a = _mm256_cmpeq_epi64(_mm256_and_si256(load(masks.data() + k), nz), zero);
    const __m256i b = _mm256_cmpeq_epi64(_mm256_and_si256(load(masks.data() + k + 4), nz), zero);
    const int bits = _mm256_movemask_pd(_mm256_castsi256_pd(a)) | (_mm256_movemask_pd(_mm256_castsi256_pd(b)) << 4);
    if (bits) return k + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(bits)));
  }
  for (; k < n; ++k)
    if ((masks[k] & ~z) == 0) return k;
  return n;
}

// Separate multiply and add: matches the scalar reference bit for bit.
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = y.size();
  std::size_t k = 0;
  const __m256d va = _mm256_set1_pd(a);
  for (; k + 4 <= n; k += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x.data() + k));
    _mm256_storeu_pd(y.data() + k, _mm256_add_pd(_mm256_loadu_pd(y.data() + k), p));
  }
  for (; k < n; ++k) {
    const double p = a * x[k];
    y[k] = y[k] + p;
  }
}

void scale_by(std::span<double> y, std::span<const double> s) noexcept {
  const std::size_t n = y.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y.data() + k,
                     _mm256_mul_pd(_mm256_loadu_pd(y.data() + k), _mm256_loadu_pd(s.data() + k)));
  for (; k < n; ++k) y[k] = y[k] * s[k];
}

}  // namespace monodual::kernels::avx2
