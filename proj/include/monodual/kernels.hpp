#pragma once

// Data-parallel inner loops used by the simulation and the exact solver.
//
// Every kernel has a portable scalar reference in `kernels::scalar` and, on
// x86-64, an AVX2 variant in `kernels::avx2`. The unqualified entry points
// dispatch at runtime to the best variant the CPU supports. Both variants
// are required to return bit-identical results (the floating-point kernels
// avoid FMA contraction and reassociation for that reason).

#include <cstddef>
#include <cstdint>
#include <span>

namespace monodual::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available() noexcept;
Isa active_isa() noexcept;
// Pin dispatch to a specific variant. Requesting Avx2 on a CPU without it
// falls back to Scalar. Used by equivalence tests and benchmarks.
void force_isa(Isa isa) noexcept;
const char* isa_name(Isa isa) noexcept;

using Words = std::span<const std::uint64_t>;
using MutWords = std::span<std::uint64_t>;

bool is_zero(Words a) noexcept;
// a ⊆ b as bitsets; spans must have equal length.
bool is_subset(Words a, Words b) noexcept;
bool equal(Words a, Words b) noexcept;
std::size_t popcount(Words a) noexcept;
void or_into(MutWords dst, Words src) noexcept;
void and_into(MutWords dst, Words src) noexcept;
// First k with masks[k] ⊆ z, or masks.size().
std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept;

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
// y[k] *= s[k]
void scale_by(std::span<double> y, std::span<const double> s) noexcept;

namespace scalar {
bool is_zero(Words a) noexcept;
bool is_subset(Words a, Words b) noexcept;
bool equal(Words a, Words b) noexcept;
std::size_t popcount(Words a) noexcept;
void or_into(MutWords dst, Words src) noexcept;
void and_into(MutWords dst, Words src) noexcept;
std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void scale_by(std::span<double> y, std::span<const double> s) noexcept;
}  // namespace scalar

namespace avx2 {
bool is_zero(Words a) noexcept;
bool is_subset(Words a, Words b) noexcept;
bool equal(Words a, Words b) noexcept;
std::size_t popcount(Words a) noexcept;
void or_into(MutWords dst, Words src) noexcept;
void and_into(MutWords dst, Words src) noexcept;
std::size_t find_subset_of(Words masks, std::uint64_t z) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void scale_by(std::span<double> y, std::span<const double> s) noexcept;
}  // namespace avx2

}  // namespace monodual::kernels
