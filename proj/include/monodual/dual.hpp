#pragma once

// Dual maps on antichains and the backward dual flow.
//
// For an eligible map m, the dual m̂ is the antichain map with
// ψ_mon(m(x), Y) = ψ_mon(x, m̂(Y)) for all x, i.e. m̂(Y)↑ = m⁻¹(Y↑).
// The backward flow folds the events of a log in reverse time order.

#include <functional>
#include <vector>

#include "monodual/antichain.hpp"
#include "monodual/configuration.hpp"
#include "monodual/graphical.hpp"
#include "monodual/localmap.hpp"

namespace monodual {

// Minimal x with m(x) ≥ y, found by enumerating the states of
// W = D(m) ∪ ⋃_{j∈D(m)} R↓_j(m); off W the requirement is x ≥ y.
std::vector<Configuration> preimage_minima(const LocalMap& m, const Configuration& y);

Antichain dual_apply_generic(const LocalMap& m, const Antichain& Y);

// Closed forms for S = {0,1}.
//   dth^_j(Y)    = {y ∈ Y : y(j) = 0}
//   bra^_ij(Y)   = (Y ∪ {(y − e_j) ∨ e_i : y ∈ Y, y(j) = 1})°
//   coop^_ii'j(Y) = (Y ∪ {(y − e_j) ∨ e_i ∨ e_i' : y ∈ Y, y(j) = 1})°
Antichain dual_apply_death(Site j, const Antichain& Y);
Antichain dual_apply_branch(Site i, Site j, const Antichain& Y);
Antichain dual_apply_coop(Site i, Site i2, Site j, const Antichain& Y);
// Built-in map on {0,1}: the matching closed form.
Antichain dual_apply_explicit(const LocalMap& m, const Antichain& Y);

// Closed form when it applies, generic otherwise.
Antichain dual_apply(const LocalMap& m, const Antichain& Y);

using DualApplier = std::function<Antichain(const LocalMap&, const Antichain&)>;

// Y_{u,s}(Y): events of (s, u] applied in reverse time order. Uses the
// sparse engine on {0,1}.
Antichain backward_flow(const EventLog& log, const Antichain& Y, double u, double s);
// Same fold, one Antichain per step, through the given dual applier.
Antichain backward_flow_with(const EventLog& log, const Antichain& Y, double u, double s, const DualApplier& dual);

// ψ_mon(X_{s,t}(x), Y) == ψ_mon(x, Y_{t,s}(Y)).
bool check_pathwise_duality(const EventLog& log, const Configuration& x, const Antichain& Y, double s, double t);

// Folds the whole log backwards from Y and reports whether every
// intermediate state has only singleton elements.
bool additive_closure_check(const EventLog& log, const Antichain& Y);

}  // namespace monodual
