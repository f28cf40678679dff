#include "monodual/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace monodual::kernels {

namespace {

bool detect_avx2() noexcept {
#if defined(MONODUAL_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  // MONODUAL_ISA=scalar pins the reference path for a whole process.
  if (const char* env = std::getenv("MONODUAL_ISA"); env && std::strcmp(env, "scalar") == 0)
    return Isa::Scalar;
  return detect_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& isa_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

inline bool use_avx2() noexcept { return isa_slot().load(std::memory_order_relaxed) == Isa::Avx2; }

}  // namespace

bool avx2_available() noexcept {
  static const bool available = detect_avx2();
  return available;
}

Isa active_isa() noexcept { return isa_slot().load(std::memory_order_relaxed); }

void force_isa(Isa isa) noexcept {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  isa_slot().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool is_zero(Words a) noexcept { return use_avx2() ? avx2::is_zero(a) : scalar::is_zero(a); }

bool is_subset(Words a, Words b) noexcept {
  return use_avx2() ? avx2::is_subset(a, b) : scalar::is_subset(a, b);
}

bool equal(Words a, Words b) noexcept { return use_avx2() ? avx2::equal(a, b) : scalar::equal(a, b); }

std::size_t popcount(Words a) noexcept { return use_avx2() ? avx2::popcount(a) : scalar::popcount(a); }

void or_into(MutWords dst, Words src) noexcept {
  use_avx2() ? avx2::or_into(dst, src) : scalar::or_into(dst, src);
}

void and_into(MutWords dst, Words src) noexcept {
  use_avx2() ? avx2::and_into(dst, src) : scalar::and_into(dst, src);
}

std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept {
  return use_avx2() ? avx2::find_subset_of(masks, z) : scalar::find_subset_of(masks, z);
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  use_avx2() ? avx2::axpy(a, x, y) : scalar::axpy(a, x, y);
}

void scale_by(std::span<double> y, std::span<const double> s) noexcept {
  use_avx2() ? avx2::scale_by(y, s) : scalar::scale_by(y, s);
}

#if !defined(MONODUAL_HAVE_AVX2_TU)
// Non-x86 builds: the avx2 namespace forwards to the reference so callers
// and equivalence tests link unchanged.
namespace avx2 {
bool is_zero(Words a) noexcept { return scalar::is_zero(a); }
bool is_subset(Words a, Words b) noexcept { return scalar::is_subset(a, b); }
bool equal(Words a, Words b) noexcept { return scalar::equal(a, b); }
std::size_t popcount(Words a) noexcept { return scalar::popcount(a); }
void or_into(MutWords dst, Words src) noexcept { scalar::or_into(dst, src); }
void and_into(MutWords dst, Words src) noexcept { scalar::and_into(dst, src); }
std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept { return scalar::find_subset_of(masks, z); }
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept { scalar::axpy(a, x, y); }
void scale_by(std::span<double> y, std::span<const double> s) noexcept { scalar::scale_by(y, s); }
}  // namespace avx2
#endif

}  // namespace monodual::kernels
