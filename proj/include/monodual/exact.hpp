#pragma once

// Exact oracles for tiny systems: full state enumeration, generator
// matrices of the forward and dual chains, and transient laws by
// uniformization.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "monodual/antichain.hpp"
#include "monodual/configuration.hpp"
#include "monodual/graphical.hpp"

namespace monodual {

inline constexpr std::size_t kMaxEnumeratedStates = std::size_t{1} << 20;
inline constexpr std::size_t kMaxAntichainSites = 4;
inline constexpr std::uint64_t kUniformizationCap = 1'000'000;

// All of {0..levels}^num_sites; index of x is Σ_i x(i)·(levels+1)^i.
std::vector<Configuration> enumerate_states(std::size_t num_sites, Level levels);
std::size_t state_index(const Configuration& x);

// All antichains of nonzero {0,1}-configurations, ∅ included, in canonical order.
std::vector<Antichain> enumerate_antichains(std::size_t num_sites, Level levels = 1);

// Sparse generator: off-diagonal rates in CSR form plus the diagonal.
class GeneratorMatrix {
 public:
  GeneratorMatrix() = default;
  // (from, to, rate) triples, from ≠ to; duplicates are summed.
  GeneratorMatrix(std::size_t size, std::vector<std::tuple<std::size_t, std::size_t, double>> jumps);

  std::size_t size() const noexcept { return diag_.size(); }
  double rate(std::size_t from, std::size_t to) const;
  double diagonal(std::size_t s) const noexcept { return diag_[s]; }
  // Largest |Q_ss|.
  double max_exit_rate() const noexcept;
  bool is_absorbing(std::size_t s) const noexcept { return row_ptr_[s] == row_ptr_[s + 1]; }
  // v ↦ vQ
  void left_multiply(std::span<const double> v, std::span<double> out) const;
  // Matrix Market coordinate format, 1-based, diagonal included.
  void write_matrix_market(std::ostream& os) const;

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  std::vector<double> diag_;
};

struct ForwardChain {
  std::vector<Configuration> states;
  GeneratorMatrix generator;
  std::size_t index_of(const Configuration& x) const;
};

struct DualChain {
  std::vector<Antichain> states;
  GeneratorMatrix generator;
  std::map<Antichain, std::size_t> index;
  std::size_t index_of(const Antichain& Y) const;
};

ForwardChain build_forward_generator(const RatedFamily& family);
DualChain build_dual_generator(const RatedFamily& family);
DualChain build_dual_generator(const RatedFamily& family, const std::function<Antichain(const LocalMap&, const Antichain&)>& dual);

// Law at time t of the chain started from `initial` (a probability vector).
std::vector<double> transient_distribution(const GeneratorMatrix& Q, std::span<const double> initial, double t);

std::vector<double> point_mass(std::size_t size, std::size_t at);

// |E_x[ψ(X_t, Y)] − E_Y[ψ(x, Y_t)]|
double semigroup_duality_check(const ForwardChain& fwd, const DualChain& dual, const Configuration& x,
                               const Antichain& Y, double t);
double semigroup_duality_check(const RatedFamily& family, const Configuration& x, const Antichain& Y, double t);

// P[chain sits in `absorbing` at time T]; throws unless that state is absorbing.
double exact_extinction_probability(const GeneratorMatrix& Q, std::span<const double> initial, double T,
                                    std::size_t absorbing);

// The two-site stand-in for the cooperative process: death(j) at δ,
// branch(i,j) at 1−α, and at rate α the map x(j) := x(i) ∧ x(j), which is
// monotone, fixes 0̲, and is not additive.
FamilyPtr two_site_family(double alpha, double delta);

}  // namespace monodual
