#include "monodual/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "monodual/dual_state.hpp"

namespace monodual {

const char* estimator_name(Estimator e) noexcept {
  switch (e) {
    case Estimator::Theta:
      return "theta";
    case Estimator::Rho:
      return "rho";
    case Estimator::ThetaDual:
      return "theta_dual";
    case Estimator::RhoDual:
      return "rho_dual";
  }
  return "?";
}

Estimator parse_estimator(const std::string& name) {
  for (auto e : {Estimator::Theta, Estimator::Rho, Estimator::ThetaDual, Estimator::RhoDual})
    if (name == estimator_name(e)) return e;
  throw ConfigError("unknown estimator '" + name + "' (expected theta, rho, theta_dual or rho_dual)");
}

SeedProvenance replica_stream(const std::string& purpose, const RunSpec& spec, std::uint64_t replica) {
  std::uint64_t tag = purpose_tag(purpose);
  tag = mix_tag(tag, spec.alpha);
  tag = mix_tag(tag, spec.delta);
  tag = mix_tag(tag, spec.horizon);
  return {spec.seed, replica, tag};
}

namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(replica, acc) for every replica, replicas dealt round-robin to
// threads, each with its own accumulator; accumulators are merged in thread
// order. Merge must be commutative for thread-count independence.
template <class Acc, class Body, class Merge>
Acc parallel_replicas(std::uint64_t reps, unsigned threads, const Acc& zero, Body body, Merge merge) {
  threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(reps, 1)));
  std::vector<Acc> accs(threads, zero);
  if (threads == 1) {
    for (std::uint64_t r = 0; r < reps; ++r) body(r, accs[0]);
    return accs[0];
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t r = t; r < reps; r += threads) body(r, accs[t]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  Acc total = zero;
  for (const auto& a : accs) merge(total, a);
  return total;
}

std::uint64_t count_replicas(std::uint64_t reps, unsigned threads, const std::function<bool(std::uint64_t)>& hit) {
  return parallel_replicas<std::uint64_t>(
      reps, threads, 0, [&](std::uint64_t r, std::uint64_t& acc) { acc += hit(r) ? 1 : 0; },
      [](std::uint64_t& a, std::uint64_t b) { a += b; });
}

void validate(const RunSpec& spec) {
  if (!spec.grid) throw ConfigError("estimator needs a grid");
  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) throw ConfigError("horizon must be positive");
  if (spec.reps == 0) throw ConfigError("need at least one replica");
}

// Streams events over (0, T] into x; returns false as soon as x dies.
bool run_forward(const RatedFamily& family, SiteBits& x, double horizon, Rng& rng) {
  EventStream stream(family, 0.0, horizon, rng);
  while (auto e = stream.next()) {
    const auto& m = family.map(e->map);
    m.apply_in_place(x);
    if (m.kind() == MapKind::Death && x.none()) return false;
  }
  return !x.none();
}

void run_backward(const EventLog& log, SparseDualState& Y) {
  const auto events = log.events();
  for (auto it = events.rbegin(); it != events.rend() && !Y.empty(); ++it) Y.apply(log.family().map(it->map));
}

SparseDualState origin_state(std::size_t n) {
  SparseDualState Y(n);
  const Site origin[1] = {0};
  Y.insert(origin);
  return Y;
}

double binomial_se(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

EstimateResult make_result(Estimator which, const RunSpec& spec, std::uint64_t hits) {
  const double p = static_cast<double>(hits) / static_cast<double>(spec.reps);
  return {which,       p, binomial_se(p, spec.reps), spec.reps, hits, spec.horizon, spec.grid->descriptor(),
          spec.alpha, spec.delta, spec.seed};
}

}  // namespace

ReplicaIndicators shared_log_indicators(const EventLog& log) {
  const auto n = log.family().num_sites();
  ReplicaIndicators out{};
  SiteBits single(n);
  single.set(0);
  forward_flow_in_place(log, single, log.start(), log.end());
  out.theta = !single.none();
  SiteBits full = SiteBits::full(n);
  forward_flow_in_place(log, full, log.start(), log.end());
  out.rho = full.test(0);
  auto top = SparseDualState::y_top(n);
  run_backward(log, top);
  out.theta_dual = top.contains_singleton(0);
  auto origin = origin_state(n);
  run_backward(log, origin);
  out.rho_dual = !origin.empty();
  return out;
}

EstimateResult estimate(Estimator which, const RunSpec& spec) {
  validate(spec);
  const auto family = cooperative_family(spec.grid, spec.alpha, spec.delta);
  check_event_budget(*family, 0.0, spec.horizon);
  const std::size_t n = family->num_sites();
  const std::string purpose = estimator_name(which);
  std::function<bool(std::uint64_t)> hit;
  switch (which) {
    case Estimator::Theta:
      hit = [&](std::uint64_t r) {
        Rng rng(replica_stream(purpose, spec, r));
        SiteBits x(n);
        x.set(0);
        return run_forward(*family, x, spec.horizon, rng);
      };
      break;
    case Estimator::Rho:
      hit = [&](std::uint64_t r) {
        Rng rng(replica_stream(purpose, spec, r));
        SiteBits x = SiteBits::full(n);
        return run_forward(*family, x, spec.horizon, rng) && x.test(0);
      };
      break;
    case Estimator::ThetaDual:
      hit = [&](std::uint64_t r) {
        Rng rng(replica_stream(purpose, spec, r));
        const auto log = sample_event_log(family, 0.0, spec.horizon, rng);
        auto Y = SparseDualState::y_top(n);
        run_backward(log, Y);
        return Y.contains_singleton(0);
      };
      break;
    case Estimator::RhoDual:
      hit = [&](std::uint64_t r) {
        Rng rng(replica_stream(purpose, spec, r));
        const auto log = sample_event_log(family, 0.0, spec.horizon, rng);
        auto Y = origin_state(n);
        run_backward(log, Y);
        return !Y.empty();
      };
      break;
  }
  return make_result(which, spec, count_replicas(spec.reps, spec.threads, hit));
}

EstimateResult estimate_theta(const RunSpec& spec) { return estimate(Estimator::Theta, spec); }
EstimateResult estimate_rho(const RunSpec& spec) { return estimate(Estimator::Rho, spec); }
EstimateResult estimate_theta_dual(const RunSpec& spec) { return estimate(Estimator::ThetaDual, spec); }
EstimateResult estimate_rho_dual(const RunSpec& spec) { return estimate(Estimator::RhoDual, spec); }

CorrelationResult estimate_dual_correlations(const RunSpec& spec, const std::vector<Configuration>& panel) {
  validate(spec);
  if (panel.empty()) throw ConfigError("correlation panel is empty");
  const auto family = cooperative_family(spec.grid, spec.alpha, spec.delta);
  check_event_budget(*family, 0.0, spec.horizon);
  const std::size_t n = family->num_sites();
  std::vector<std::vector<Site>> supports;
  for (const auto& x : panel) {
    if (x.num_sites() != n || x.levels() != 1) throw ConfigError("panel configuration does not fit the grid");
    if (x.is_zero()) throw ConfigError("panel configurations must be nonzero");
    supports.push_back(x.support());
  }
  struct Acc {
    std::uint64_t dual = 0, forward = 0, mismatches = 0;
  };
  const auto acc = parallel_replicas<Acc>(
      spec.reps, spec.threads, Acc{},
      [&](std::uint64_t r, Acc& a) {
        Rng rng(replica_stream("correlation", spec, r));
        const auto log = sample_event_log(family, 0.0, spec.horizon, rng);
        bool fwd = true;
        for (const auto& x : panel) {
          SiteBits b = SiteBits::from_config(x);
          forward_flow_in_place(log, b, 0.0, spec.horizon);
          fwd = fwd && !b.none();
        }
        auto Y = SparseDualState::y_top(n);
        run_backward(log, Y);
        bool dual = true;
        for (const auto& s : supports) dual = dual && Y.psi(s);
        a.dual += dual;
        a.forward += fwd;
        a.mismatches += dual != fwd;
      },
      [](Acc& a, const Acc& b) {
        a.dual += b.dual;
        a.forward += b.forward;
        a.mismatches += b.mismatches;
      });
  const double reps = static_cast<double>(spec.reps);
  const double pd = static_cast<double>(acc.dual) / reps;
  return {pd, static_cast<double>(acc.forward) / reps, binomial_se(pd, spec.reps), spec.reps, acc.mismatches};
}

std::vector<Configuration> default_psi_panel(const Grid& grid, std::size_t count) {
  const std::size_t n = grid.size();
  const Site o = 0;
  const Site a = grid.neighbors(o)[0];
  const Site b = grid.neighbors(o)[1];
  Site far = grid.neighbors(a)[0];
  if (far == o) far = grid.neighbors(a)[1];
  const std::vector<std::vector<Site>> shapes = {{o}, {a}, {o, a}, {a, b}, {o, a, b}, {far}, {o, far}, {o, a, far},
                                                 {o, a, b, far}, {b, far}};
  std::vector<Configuration> out;
  auto add = [&](const std::vector<Site>& sites) {
    Configuration x(n, 1);
    for (Site s : sites) x.set(s, 1);
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  };
  for (const auto& s : shapes) {
    if (out.size() == count) break;
    add(s);
  }
  for (Site s = 0; s < n && out.size() < count; ++s) add({s});
  return out;
}

PanelComparison ergodicity_check(const RunSpec& spec, double p, const std::vector<Configuration>& panel) {
  validate(spec);
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("start density must lie in (0,1]");
  const auto family = cooperative_family(spec.grid, spec.alpha, spec.delta);
  check_event_budget(*family, 0.0, spec.horizon);
  const std::size_t n = family->num_sites();
  std::vector<std::vector<Site>> supports;
  for (const auto& x : panel) supports.push_back(x.support());
  const std::size_t k = panel.size();

  using Counts = std::vector<std::uint64_t>;
  auto run = [&](const std::string& purpose, bool bernoulli) {
    return parallel_replicas<Counts>(
        spec.reps, spec.threads, Counts(k, 0),
        [&](std::uint64_t r, Counts& c) {
          Rng rng(replica_stream(purpose, spec, r));
          SparseDualState Y(n);
          if (bernoulli) {
            std::vector<Site> start;
            while (start.empty())
              for (Site i = 0; i < n; ++i)
                if (rng.bernoulli(p)) start.push_back(i);
            for (Site i : start) {
              const Site one[1] = {i};
              Y.insert(one);
            }
          } else {
            Y = SparseDualState::y_top(n);
          }
          const auto log = sample_event_log(family, 0.0, spec.horizon, rng);
          run_backward(log, Y);
          for (std::size_t q = 0; q < k; ++q) c[q] += Y.psi(supports[q]);
        },
        [](Counts& a, const Counts& b) {
          for (std::size_t q = 0; q < a.size(); ++q) a[q] += b[q];
        });
  };
  const auto top = run("ergodicity-top", false);
  const auto other = run("ergodicity-bernoulli", true);
  PanelComparison out{};
  out.max_z = 0.0;
  const double reps = static_cast<double>(spec.reps);
  for (std::size_t q = 0; q < k; ++q) {
    const double a = static_cast<double>(top[q]) / reps, b = static_cast<double>(other[q]) / reps;
    const double se = std::sqrt(a * (1 - a) / reps + b * (1 - b) / reps);
    out.freq_top.push_back(a);
    out.freq_other.push_back(b);
    out.joint_se.push_back(se);
    const double diff = std::abs(a - b);
    const double z = diff == 0.0 ? 0.0 : (se == 0.0 ? std::numeric_limits<double>::infinity() : diff / se);
    out.max_z = std::max(out.max_z, z);
  }
  return out;
}

double level_crossing(const std::vector<double>& deltas, const std::vector<double>& values, double threshold) {
  if (deltas.size() != values.size() || deltas.empty()) throw ConfigError("crossing needs matching nonempty curves");
  if (values[0] < threshold) return deltas[0];
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] < threshold) {
      const double v0 = values[k - 1], v1 = values[k];
      return deltas[k - 1] + (v0 - threshold) / (v0 - v1) * (deltas[k] - deltas[k - 1]);
    }
  return std::numeric_limits<double>::infinity();
}

namespace {

Boundary boundary_from(double alpha, const std::vector<double>& deltas, const std::vector<EstimateResult>& curve,
                       const SweepOptions& opt) {
  std::vector<double> est, lo, hi;
  for (const auto& r : curve) {
    // Agresti–Coull centre and spread keep the band informative at 0 and 1.
    const double n = static_cast<double>(r.reps) + 4.0;
    const double pt = (static_cast<double>(r.successes) + 2.0) / n;
    const double se = std::sqrt(pt * (1.0 - pt) / n);
    est.push_back(r.estimate);
    lo.push_back(pt - opt.band_sigmas * se);
    hi.push_back(pt + opt.band_sigmas * se);
  }
  return {alpha, level_crossing(deltas, est, opt.threshold), level_crossing(deltas, lo, opt.threshold),
          level_crossing(deltas, hi, opt.threshold)};
}

}  // namespace

SweepResult sweep(const SweepOptions& options, const RunSpec& base) {
  if (options.alphas.empty() || options.deltas.empty() || options.estimators.empty())
    throw ConfigError("sweep needs nonempty alpha, delta and estimator lists");
  if (!std::is_sorted(options.deltas.begin(), options.deltas.end()))
    throw ConfigError("sweep deltas must be increasing");
  SweepResult out;
  out.threshold = options.threshold;
  auto has = [&](Estimator e) {
    return std::find(options.estimators.begin(), options.estimators.end(), e) != options.estimators.end();
  };
  const Estimator rho_src = has(Estimator::Rho) ? Estimator::Rho : Estimator::RhoDual;
  const Estimator theta_src = has(Estimator::Theta) ? Estimator::Theta : Estimator::ThetaDual;
  for (double alpha : options.alphas) {
    std::vector<EstimateResult> rho_curve, theta_curve;
    for (double delta : options.deltas) {
      RunSpec spec = base;
      spec.alpha = alpha;
      spec.delta = delta;
      for (Estimator e : options.estimators) {
        auto r = estimate(e, spec);
        if (e == rho_src) rho_curve.push_back(r);
        if (e == theta_src) theta_curve.push_back(r);
        out.table.push_back(std::move(r));
      }
    }
    if (!rho_curve.empty()) out.delta_c.push_back(boundary_from(alpha, options.deltas, rho_curve, options));
    if (!theta_curve.empty()) out.delta_c_prime.push_back(boundary_from(alpha, options.deltas, theta_curve, options));
  }
  return out;
}

CouplingReport monotone_coupling_audit(CoopParams low, CoopParams high, const RunSpec& spec) {
  validate(spec);
  const auto panel = default_psi_panel(*spec.grid);
  std::vector<std::vector<Site>> supports;
  for (const auto& x : panel) supports.push_back(x.support());
  const std::size_t n = spec.grid->size();
  std::uint64_t tag = purpose_tag("coupling");
  for (double v : {low.alpha, low.delta, high.alpha, high.delta, spec.horizon}) tag = mix_tag(tag, v);

  struct Acc {
    std::uint64_t surv = 0, order = 0, dual = 0, alive_low = 0, alive_high = 0;
  };
  const auto acc = parallel_replicas<Acc>(
      spec.reps, spec.threads, Acc{},
      [&](std::uint64_t r, Acc& a) {
        Rng rng(SeedProvenance{spec.seed, r, tag});
        const auto logs = sample_coupled_logs(spec.grid, low, high, 0.0, spec.horizon, rng);
        SiteBits sl(n), sh(n);
        sl.set(0);
        sh.set(0);
        forward_flow_in_place(logs.low, sl, 0.0, spec.horizon);
        forward_flow_in_place(logs.high, sh, 0.0, spec.horizon);
        const bool alive_low = !sl.none(), alive_high = !sh.none();
        a.alive_low += alive_low;
        a.alive_high += alive_high;
        a.surv += alive_high && !alive_low;

        SiteBits fl = SiteBits::full(n), fh = SiteBits::full(n);
        forward_flow_in_place(logs.low, fl, 0.0, spec.horizon);
        forward_flow_in_place(logs.high, fh, 0.0, spec.horizon);
        a.order += !fh.subset_of(fl);

        auto yl = SparseDualState::y_top(n), yh = SparseDualState::y_top(n);
        run_backward(logs.low, yl);
        run_backward(logs.high, yh);
        for (const auto& s : supports)
          if (yh.psi(s) && !yl.psi(s)) {
            ++a.dual;
            break;
          }
      },
      [](Acc& a, const Acc& b) {
        a.surv += b.surv;
        a.order += b.order;
        a.dual += b.dual;
        a.alive_low += b.alive_low;
        a.alive_high += b.alive_high;
      });
  const double reps = static_cast<double>(spec.reps);
  return {low,
          high,
          spec.reps,
          acc.surv,
          acc.order,
          acc.dual,
          static_cast<double>(acc.alive_low) / reps,
          static_cast<double>(acc.alive_high) / reps};
}

}  // namespace monodual
