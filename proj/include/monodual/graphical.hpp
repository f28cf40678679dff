#pragma once

// Poisson graphical representations.
//
// A RatedFamily is a finite collection of local maps with rates. An EventLog
// is one realisation of the Poisson point set on (maps × (s, u]): a strictly
// time-ordered list of (time, map) pairs. Logs are materialised so that the
// forward flow and the backward dual flow can consume the same realisation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "monodual/configuration.hpp"
#include "monodual/lattice.hpp"
#include "monodual/localmap.hpp"
#include "monodual/rng.hpp"

namespace monodual {

// Event logs larger than this many expected events are refused.
inline constexpr double kEventBudget = 1e8;

struct RatedMap {
  LocalMap map;
  double rate;
};

struct CoopParams {
  double alpha;
  double delta;
};

struct SummabilityReport {
  double max_change_rate;    // sup_i Σ_m r_m 1{i ∈ D(m)}
  double max_inflow_rate;    // sup_j Σ_m r_m |R↓_j(m) \ {j}|
  double max_outflow_rate;   // sup_i Σ_m r_m |R↑_i(m) \ {i}|
  bool finite() const noexcept;
};

class RatedFamily {
 public:
  // Zero-rate maps are dropped. Every remaining map must be monotone with
  // m(0̲) = 0̲, fit on `num_sites` sites, and carry a finite rate ≥ 0.
  RatedFamily(std::size_t num_sites, Level levels, std::vector<RatedMap> maps,
              std::optional<CoopParams> params = std::nullopt, std::shared_ptr<const Grid> grid = nullptr);

  std::size_t num_sites() const noexcept { return num_sites_; }
  Level levels() const noexcept { return levels_; }
  std::span<const RatedMap> maps() const noexcept { return maps_; }
  std::size_t size() const noexcept { return maps_.size(); }
  const LocalMap& map(std::size_t k) const noexcept { return maps_[k].map; }
  double rate(std::size_t k) const noexcept { return maps_[k].rate; }
  double total_rate() const noexcept { return total_rate_; }
  const std::optional<CoopParams>& params() const noexcept { return params_; }
  const std::shared_ptr<const Grid>& grid() const noexcept { return grid_; }

  // Rate-proportional categorical draw (alias method, O(1)).
  std::uint32_t sample_index(Rng& rng) const;
  std::optional<std::uint32_t> find(const LocalMap& m) const;

  SummabilityReport summability() const;
  // For every site i and map m: T_i m belongs to the family with equal rate.
  bool is_translation_invariant(const Grid& grid) const;

 private:
  std::size_t num_sites_;
  Level levels_;
  std::vector<RatedMap> maps_;
  std::optional<CoopParams> params_;
  std::shared_ptr<const Grid> grid_;
  double total_rate_ = 0.0;
  AliasTable sampler_;
  std::map<LocalMap, std::uint32_t> index_;
};

using FamilyPtr = std::shared_ptr<const RatedFamily>;

// Branch(i,j) at (1−α)/|N_j| for i ∈ N_j, Coop(i,i',j) at α/|N_j^(2)| for
// (i,i') ∈ N_j^(2), Death(j) at δ.
FamilyPtr cooperative_family(std::shared_ptr<const Grid> grid, double alpha, double delta);

// Death(j) at rate δ on every site.
FamilyPtr death_family(std::shared_ptr<const Grid> grid, double delta);

struct Event {
  double time;
  std::uint32_t map;  // index into the family
};

class EventLog {
 public:
  EventLog(FamilyPtr family, double start, double end, std::vector<Event> events, SeedProvenance provenance = {});

  const RatedFamily& family() const noexcept { return *family_; }
  const FamilyPtr& family_ptr() const noexcept { return family_; }
  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  std::span<const Event> events() const noexcept { return events_; }
  const SeedProvenance& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return events_.size(); }

  // Events with s < time ≤ t; throws unless [s, t] ⊆ [start, end].
  std::span<const Event> between(double s, double t) const;

 private:
  FamilyPtr family_;
  double start_;
  double end_;
  std::vector<Event> events_;
  SeedProvenance provenance_;
};

// Streaming form of the dominating Poisson process: exponential gaps at the
// total rate, map chosen rate-proportionally. Collecting the stream gives
// exactly sample_event_log's output for the same Rng state.
class EventStream {
 public:
  EventStream(const RatedFamily& family, double start, double end, Rng& rng);
  std::optional<Event> next();

 private:
  const RatedFamily* family_;
  double time_;
  double end_;
  Rng* rng_;
};

// Throws BudgetError when the expected number of events exceeds kEventBudget.
void check_event_budget(const RatedFamily& family, double start, double end);

EventLog sample_event_log(FamilyPtr family, double start, double end, Rng& rng);

// X_{s,t}(x): fold the events of (s, t] in time order.
Configuration forward_flow(const EventLog& log, const Configuration& x, double s, double t);
void forward_flow_in_place(const EventLog& log, SiteBits& x, double s, double t);

struct CoupledLogs {
  EventLog low;   // parameters (α, δ)
  EventLog high;  // parameters (α′, δ′) with α ≤ α′, δ ≤ δ′
};

// Monotone coupling of two cooperative contact processes. Shared Poisson
// sets: deaths at δ and at δ′−δ, branchings at (1−α′)/R₁, cooperative
// branchings at α/R₂ and at (α′−α)/R₂. Each point coop(i,i',j) of the last set
// appears in the (α,δ) log as bra(i,j) at the same time.
CoupledLogs sample_coupled_logs(std::shared_ptr<const Grid> grid, CoopParams low, CoopParams high, double start,
                                double end, Rng& rng);

// ξ^{s,A}_t: the set of sites a perturbation on A can have reached by time t.
std::vector<Site> evolving_set(const EventLog& log, std::span<const Site> initial, double s, double t);

EventLog restrict_log(const EventLog& log, const std::function<bool(const LocalMap&)>& keep);

}  // namespace monodual
