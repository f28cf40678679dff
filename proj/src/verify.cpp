#include "monodual/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "monodual/dual_state.hpp"
#include "monodual/estimators.hpp"
#include "monodual/exact.hpp"
#include "monodual/io.hpp"

namespace monodual {

bool VerifyReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

Antichain faulty_dual_apply(const LocalMap& m, const Antichain& Y) {
  if (m.kind() != MapKind::Branch) return dual_apply(m, Y);
  std::vector<Configuration> cands(Y.elements().begin(), Y.elements().end());
  for (const auto& y : Y.elements())
    if (y[m.target()] == 1) {
      Configuration z = y;  // should be y − e_j
      z.set(m.source(), 1);
      cands.push_back(std::move(z));
    }
  return Antichain::minimalize(Y.num_sites(), 1, std::move(cands));
}

Configuration random_configuration(std::size_t num_sites, Level levels, double density, Rng& rng) {
  Configuration x(num_sites, levels);
  for (Site i = 0; i < num_sites; ++i)
    if (rng.bernoulli(density)) x.set(i, static_cast<Level>(1 + rng.below(levels)));
  return x;
}

Antichain random_antichain(std::size_t num_sites, std::size_t max_elements, std::size_t max_support, Rng& rng) {
  const auto kind = rng.below(10);
  if (kind == 0) return Antichain(num_sites, 1);
  if (kind == 1) return make_y_top(num_sites, 1);
  const auto count = 1 + rng.below(max_elements);
  std::vector<Configuration> elems;
  for (std::uint64_t k = 0; k < count; ++k) {
    Configuration y(num_sites, 1);
    const auto support = 1 + rng.below(max_support);
    for (std::uint64_t s = 0; s < support; ++s) y.set(static_cast<Site>(rng.below(num_sites)), 1);
    elems.push_back(std::move(y));
  }
  return Antichain::minimalize(num_sites, 1, std::move(elems));
}

namespace {

std::shared_ptr<const Grid> triple_grid() {
  static const auto grid = std::make_shared<const Grid>(Grid::torus(2, 6));
  return grid;
}

constexpr double kTripleHorizon = 5.0;
constexpr double kAlphas[] = {0.0, 0.5, 1.0};
constexpr double kDeltas[] = {0.0, 0.3, 1.0};

std::string triple_reproducer(std::uint64_t seed, std::uint64_t index, double alpha, double delta,
                              const DualityTriple& t) {
  std::ostringstream os;
  os << "seed=" << seed << " triple=" << index << " alpha=" << alpha << " delta=" << delta
     << " events=" << t.log.size() << " x=" << config_to_json(t.x).dump() << " Y=" << antichain_to_json(t.Y).dump();
  return os.str();
}

CheckOutcome check_pathwise(const VerifyOptions& opt, const DualApplier& dual) {
  CheckOutcome out{"pathwise-duality", true, 0, "", ""};
  std::uint64_t replayed = 0, engine_mismatch = 0;
  for (std::uint64_t k = 0; k < opt.triples; ++k) {
    const double alpha = kAlphas[k % 3], delta = kDeltas[(k / 3) % 3];
    const auto t = duality_triple(opt.seed, k, alpha, delta);
    std::size_t peak = 0;
    bool ok = triple_duality_holds(t, &peak);
    if (peak <= kReferenceFoldCap) {
      ++replayed;
      const auto ref = backward_flow_with(t.log, t.Y, kTripleHorizon, 0.0, dual);
      const bool lhs = psi_mon(forward_flow(t.log, t.x, 0.0, kTripleHorizon), t.Y);
      const bool same = ref == backward_flow(t.log, t.Y, kTripleHorizon, 0.0);
      if (!same) ++engine_mismatch;
      ok = ok && same && lhs == psi_mon(t.x, ref);
    }
    ++out.cases;
    if (!ok && out.passed) {
      out.passed = false;
      out.reproducer = triple_reproducer(opt.seed, k, alpha, delta, t);
    }
  }
  std::ostringstream os;
  os << out.cases << " triples on torus(2,6), horizon 5; " << replayed << " replayed through the reference fold, "
     << engine_mismatch << " engine/reference mismatches";
  out.detail = os.str();
  return out;
}

CheckOutcome check_flow_laws(const VerifyOptions& opt) {
  CheckOutcome out{"flow-composition", true, 0, "", ""};
  const std::uint64_t n = std::max<std::uint64_t>(opt.triples / 10, 9);
  for (std::uint64_t k = 0; k < n && out.passed; ++k) {
    const double alpha = kAlphas[k % 3], delta = kDeltas[(k / 3) % 3];
    const auto t = duality_triple(opt.seed ^ 0x5a5a5a5aULL, k, alpha, delta);
    const double mid = 1.7, u = kTripleHorizon;
    const auto direct = forward_flow(t.log, t.x, 0.0, u);
    const auto split = forward_flow(t.log, forward_flow(t.log, t.x, 0.0, mid), mid, u);
    const auto back_direct = backward_flow(t.log, t.Y, u, 0.0);
    const auto back_split = backward_flow(t.log, backward_flow(t.log, t.Y, u, mid), mid, 0.0);
    // Perturbation stays inside the evolving set of the disagreement.
    Rng rng(SeedProvenance{opt.seed, k, purpose_tag("perturbation")});
    const auto y = random_configuration(t.x.num_sites(), 1, 0.5, rng);
    std::vector<Site> diff;
    for (Site i = 0; i < t.x.num_sites(); ++i)
      if (t.x[i] != y[i]) diff.push_back(i);
    const auto xi = evolving_set(t.log, diff, 0.0, u);
    const auto fy = forward_flow(t.log, y, 0.0, u);
    bool contained = true;
    for (Site i = 0; i < t.x.num_sites(); ++i)
      if (direct[i] != fy[i] && !std::binary_search(xi.begin(), xi.end(), i)) contained = false;
    ++out.cases;
    if (!(direct == split) || !(back_direct == back_split) || !contained) {
      out.passed = false;
      out.reproducer = triple_reproducer(opt.seed ^ 0x5a5a5a5aULL, k, alpha, delta, t);
    }
  }
  out.detail = std::to_string(out.cases) + " logs: forward and backward flow composition, perturbation containment";
  return out;
}

CheckOutcome check_explicit_vs_generic(const DualApplier& dual) {
  CheckOutcome out{"explicit-vs-generic", true, 0, "", ""};
  for (std::size_t n : {3u, 4u}) {
    const auto antichains = enumerate_antichains(n);
    std::vector<LocalMap> maps;
    for (Site j = 0; j < n; ++j) {
      maps.push_back(LocalMap::death(j));
      for (Site i = 0; i < n; ++i) {
        if (i == j) continue;
        maps.push_back(LocalMap::branch(i, j));
        for (Site i2 = 0; i2 < n; ++i2)
          if (i2 != i && i2 != j) maps.push_back(LocalMap::coop(i, i2, j));
      }
    }
    for (const auto& m : maps)
      for (const auto& Y : antichains) {
        ++out.cases;
        if (out.passed && !(dual(m, Y) == dual_apply_generic(m, Y))) {
          out.passed = false;
          out.reproducer = "sites=" + std::to_string(n) + " map=" + m.to_string() + " Y=" + Y.to_string();
        }
      }
  }
  out.detail = std::to_string(out.cases) + " (map, antichain) pairs on 3 and 4 sites";
  return out;
}

CheckOutcome check_exact_semigroup(const DualApplier& dual) {
  CheckOutcome out{"exact-semigroup", true, 0, "", ""};
  double worst = 0.0;
  const auto ring = std::make_shared<const Grid>(Grid::torus(1, 3));
  for (double alpha : kAlphas)
    for (double delta : kDeltas)
      for (const auto& family : {two_site_family(alpha, delta), cooperative_family(ring, alpha, delta)}) {
        const auto fwd = build_forward_generator(*family);
        const auto dch = build_dual_generator(*family, dual);
        for (double t : {0.5, 1.0, 2.0})
          for (const auto& x : fwd.states)
            for (const auto& Y : dch.states) {
              const double d = semigroup_duality_check(fwd, dch, x, Y, t);
              worst = std::max(worst, d);
              ++out.cases;
              if (!(d < 1e-8) && out.passed) {
                out.passed = false;
                std::ostringstream os;
                os << "sites=" << family->num_sites() << " alpha=" << alpha << " delta=" << delta << " t=" << t
                   << " x=" << x.to_string() << " Y=" << Y.to_string() << " discrepancy=" << d;
                out.reproducer = os.str();
              }
            }
      }
  std::ostringstream os;
  os << out.cases << " (system, t, x, Y) cases on 2 and 3 sites; worst discrepancy " << worst;
  out.detail = os.str();
  return out;
}

CheckOutcome check_coupling(const VerifyOptions& opt) {
  CheckOutcome out{"monotone-coupling", true, 0, "", ""};
  RunSpec spec;
  spec.grid = std::make_shared<const Grid>(Grid::torus(2, 8));
  spec.horizon = 5.0;
  spec.reps = opt.coupling_reps;
  spec.seed = opt.seed;
  spec.threads = opt.threads;
  const std::pair<CoopParams, CoopParams> pairs[] = {
      {{0.0, 0.2}, {0.5, 0.4}}, {{0.3, 0.1}, {0.3, 0.6}}, {{0.2, 0.3}, {1.0, 0.3}}};
  std::ostringstream detail;
  for (const auto& [low, high] : pairs) {
    const auto rep = monotone_coupling_audit(low, high, spec);
    out.cases += rep.reps;
    if (!rep.ok() && out.passed) {
      out.passed = false;
      std::ostringstream os;
      os << "seed=" << opt.seed << " low=(" << low.alpha << "," << low.delta << ") high=(" << high.alpha << ","
         << high.delta << ") survival=" << rep.survival_violations << " order=" << rep.order_violations
         << " dual=" << rep.dual_violations;
      out.reproducer = os.str();
    }
  }
  detail << out.cases << " coupled replicas over 3 parameter pairs on torus(2,8)";
  out.detail = detail.str();
  return out;
}

CheckOutcome check_additive_closure(const VerifyOptions& opt) {
  CheckOutcome out{"additive-closure", true, 0, "", ""};
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto t = duality_triple(opt.seed ^ 0xadd, k, 0.0, kDeltas[k % 3]);
    Rng rng(SeedProvenance{opt.seed, k, purpose_tag("additive-start")});
    std::vector<Configuration> singles;
    for (Site i = 0; i < t.x.num_sites(); ++i)
      if (rng.bernoulli(0.2)) singles.push_back(Configuration::basis(t.x.num_sites(), 1, i));
    const auto Y = Antichain::from_elements(t.x.num_sites(), 1, std::move(singles));
    ++out.cases;
    if (!additive_closure_check(t.log, Y) && out.passed) {
      out.passed = false;
      out.reproducer = "seed=" + std::to_string(opt.seed ^ 0xadd) + " triple=" + std::to_string(k) +
                       " Y=" + Y.to_string();
    }
  }
  out.detail = std::to_string(out.cases) + " alpha=0 logs keep singleton dual states singleton";
  return out;
}

}  // namespace

DualityTriple duality_triple(std::uint64_t seed, std::uint64_t index, double alpha, double delta) {
  std::uint64_t tag = mix_tag(mix_tag(purpose_tag("duality-triple"), alpha), delta);
  Rng rng(SeedProvenance{seed, index, tag});
  const auto grid = triple_grid();
  auto log = sample_event_log(cooperative_family(grid, alpha, delta), 0.0, kTripleHorizon, rng);
  auto x = random_configuration(grid->size(), 1, rng.uniform(), rng);
  auto Y = random_antichain(grid->size(), 6, 4, rng);
  return {std::move(log), std::move(x), std::move(Y)};
}

bool triple_duality_holds(const DualityTriple& t, std::size_t* max_dual_size) {
  const bool lhs = psi_mon(forward_flow(t.log, t.x, 0.0, kTripleHorizon), t.Y);
  auto state = SparseDualState::from_antichain(t.Y);
  std::size_t peak = state.size();
  const auto events = t.log.between(0.0, kTripleHorizon);
  for (auto it = events.rbegin(); it != events.rend() && !state.empty(); ++it) {
    state.apply(t.log.family().map(it->map));
    peak = std::max(peak, state.size());
  }
  if (max_dual_size) *max_dual_size = peak;
  const auto sup = t.x.support();
  return lhs == state.psi(sup);
}

VerifyReport run_verification(const VerifyOptions& options) {
  const DualApplier dual = options.inject_fault ? DualApplier(faulty_dual_apply) : DualApplier(dual_apply);
  VerifyReport report;
  report.checks.push_back(check_exact_semigroup(dual));
  if (options.exact_only) return report;
  report.checks.push_back(check_explicit_vs_generic(dual));
  report.checks.push_back(check_pathwise(options, dual));
  report.checks.push_back(check_flow_laws(options));
  report.checks.push_back(check_additive_closure(options));
  report.checks.push_back(check_coupling(options));
  return report;
}

}  // namespace monodual
