#pragma once

// Monte Carlo estimators for survival probabilities and densities on a
// finite torus or Cayley graph, their dual counterparts, parameter sweeps,
// the ergodicity comparison and the coupling audit.
//
// On a finite grid with δ > 0 every quantity here is a finite-horizon,
// finite-volume proxy: survival to time T is an upper-biased stand-in for
// survival forever, and every result records (T, grid) next to the estimate.
//
// Replica r of an estimator draws from the stream (seed, r, tag) where the
// tag mixes the estimator name with (α, δ, T). Replicas are split over threads
// by index and only counts are reduced, so results do not depend on the
// thread count.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "monodual/configuration.hpp"
#include "monodual/graphical.hpp"
#include "monodual/lattice.hpp"

namespace monodual {

enum class Estimator : std::uint8_t { Theta, Rho, ThetaDual, RhoDual };

const char* estimator_name(Estimator e) noexcept;
Estimator parse_estimator(const std::string& name);

struct EstimateResult {
  Estimator estimator;
  double estimate;
  double std_error;
  std::uint64_t reps;
  std::uint64_t successes;
  double horizon;
  std::string grid;
  double alpha;
  double delta;
  std::uint64_t seed;
};

struct RunSpec {
  std::shared_ptr<const Grid> grid;
  double alpha = 0.0;
  double delta = 0.0;
  double horizon = 1.0;
  std::uint64_t reps = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0: hardware concurrency
};

// The per-replica random stream of an estimator.
SeedProvenance replica_stream(const std::string& purpose, const RunSpec& spec, std::uint64_t replica);

// Indicators of the four estimators evaluated on one shared log over (0, T]:
//   theta:      X_{0,T}(e_0) ≠ 0̲
//   rho:        X_{0,T}(1̲)(0) = 1
//   theta_dual: e_0 ∈ Y_{T,0}(Y_top)
//   rho_dual:   Y_{T,0}({e_0}) ≠ ∅
struct ReplicaIndicators {
  bool theta, rho, theta_dual, rho_dual;
};
ReplicaIndicators shared_log_indicators(const EventLog& log);

EstimateResult estimate(Estimator which, const RunSpec& spec);
EstimateResult estimate_theta(const RunSpec& spec);
EstimateResult estimate_rho(const RunSpec& spec);
EstimateResult estimate_theta_dual(const RunSpec& spec);
EstimateResult estimate_rho_dual(const RunSpec& spec);

// E[∏_k ψ_mon(x_k, Y_{T,0}(Y_top))] next to P[X_{0,T}(x_k) ≠ 0̲ ∀k], both
// on the same log per replica; `mismatches` counts replicas where the two
// indicators differ (always 0 unless there is a bug).
struct CorrelationResult {
  double dual_estimate;
  double forward_estimate;
  double std_error;
  std::uint64_t reps;
  std::uint64_t mismatches;
};
CorrelationResult estimate_dual_correlations(const RunSpec& spec, const std::vector<Configuration>& panel);

// A fixed set of small configurations near the origin used to compare dual
// laws through ψ_mon(x, ·).
std::vector<Configuration> default_psi_panel(const Grid& grid, std::size_t count = 10);

struct PanelComparison {
  std::vector<double> freq_top;    // start Y_top
  std::vector<double> freq_other;  // homogeneous Bernoulli start
  std::vector<double> joint_se;
  double max_z;                    // max |Δ| / joint SE (0/0 counts as 0)
  bool within(double sigmas) const noexcept { return max_z <= sigmas; }
};
// Y_0 = {e_i : z(i) = 1}, z i.i.d. Bernoulli(p) conditioned on z ≠ 0.
PanelComparison ergodicity_check(const RunSpec& spec, double p, const std::vector<Configuration>& panel);

struct SweepOptions {
  std::vector<double> alphas;
  std::vector<double> deltas;
  std::vector<Estimator> estimators{Estimator::Theta, Estimator::Rho, Estimator::ThetaDual, Estimator::RhoDual};
  double threshold = 0.01;
  double band_sigmas = 4.0;
};

// Level crossing of a curve est(δ) at `threshold` by linear interpolation
// between grid points; +inf if the curve stays at or above the threshold,
// the first δ if it starts below.
double level_crossing(const std::vector<double>& deltas, const std::vector<double>& values, double threshold);

struct Boundary {
  double alpha;
  double estimate;  // crossing of the point estimates
  double low;       // crossing of the lower band
  double high;      // crossing of the upper band
};

struct SweepResult {
  std::vector<EstimateResult> table;  // α-major, then δ, then estimator
  std::vector<Boundary> delta_c;      // from ρ (forward if present, else dual)
  std::vector<Boundary> delta_c_prime;  // from θ
  double threshold;
};

SweepResult sweep(const SweepOptions& options, const RunSpec& base);

struct CouplingReport {
  CoopParams low;
  CoopParams high;
  std::uint64_t reps;
  std::uint64_t survival_violations;  // X′(e_0) ≠ 0̲ but X(e_0) = 0̲
  std::uint64_t order_violations;     // X′(1̲) ≰ X(1̲)
  std::uint64_t dual_violations;      // ψ(x, Y′) > ψ(x, Y) on the panel
  double theta_low;
  double theta_high;
  bool ok() const noexcept { return survival_violations == 0 && order_violations == 0 && dual_violations == 0; }
};
CouplingReport monotone_coupling_audit(CoopParams low, CoopParams high, const RunSpec& spec);

}  // namespace monodual
