#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "monodual/graphical.hpp"
#include "support.hpp"

using namespace monodual;

namespace {

std::shared_ptr<const Grid> torus(int d, int L) { return std::make_shared<const Grid>(Grid::torus(d, L)); }

// Σ (O − E)² / E over independent Poisson cells.
double poisson_chi_square(const std::vector<double>& observed, const std::vector<double>& expected) {
  double chi = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) chi += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
  return chi;
}

// Upper 10⁻³ quantile of χ² with df degrees of freedom (Wilson–Hilferty).
double chi_square_critical(double df) {
  const double z = 3.090232;
  const double c = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * c * c * c;
}

bool logs_identical(const EventLog& a, const EventLog& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto &ea = a.events()[k], &eb = b.events()[k];
    if (ea.time != eb.time || !(a.family().map(ea.map) == b.family().map(eb.map))) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("graphical") {

TEST_CASE("cooperative family rates") {
  for (double alpha : {0.0, 0.3, 1.0})
    for (double delta : {0.0, 0.7}) {
      const auto grid = torus(2, 4);
      const auto fam = cooperative_family(grid, alpha, delta);
      std::vector<double> bra(grid->size()), coop(grid->size()), dth(grid->size());
      for (const auto& rm : fam->maps()) {
        CHECK(rm.rate > 0.0);
        const Site j = rm.map.target();
        if (rm.map.kind() == MapKind::Branch) bra[j] += rm.rate;
        if (rm.map.kind() == MapKind::Coop) coop[j] += rm.rate;
        if (rm.map.kind() == MapKind::Death) dth[j] += rm.rate;
      }
      for (Site j = 0; j < grid->size(); ++j) {
        CHECK(bra[j] == doctest::Approx(1.0 - alpha));
        CHECK(coop[j] == doctest::Approx(alpha));
        CHECK(dth[j] == doctest::Approx(delta));
      }
      CHECK(fam->total_rate() == doctest::Approx(grid->size() * (1.0 + delta)));
      CHECK(fam->is_translation_invariant(*grid));
      CHECK(fam->summability().finite());
      const bool has_coop = std::any_of(fam->maps().begin(), fam->maps().end(),
                                        [](const RatedMap& r) { return r.map.kind() == MapKind::Coop; });
      CHECK(has_coop == (alpha > 0));
      if (alpha == 1.0 && delta == 0.0)
        for (const auto& rm : fam->maps()) CHECK(rm.map.kind() == MapKind::Coop);
    }
  CHECK_THROWS_AS(cooperative_family(torus(1, 5), 1.2, 0.1), ConfigError);
  CHECK_THROWS_AS(cooperative_family(torus(1, 5), 0.5, -0.1), ConfigError);
}

TEST_CASE("family validation") {
  const auto g = torus(1, 4);
  CHECK_FALSE(RatedFamily(4, 1, {{LocalMap::death(0), 1.0}}).is_translation_invariant(*g));
  CHECK_THROWS_AS(RatedFamily(4, 1, {{LocalMap::death(0), -1.0}}), ConfigError);
  CHECK_THROWS_AS(RatedFamily(4, 1, {{LocalMap::death(0), 1.0}, {LocalMap::death(0), 2.0}}), ConfigError);
  CHECK_THROWS_AS(RatedFamily(4, 1, {{LocalMap::death(9), 1.0}}), ConfigError);
  // Constant ⊤ and non-monotone maps are refused.
  CHECK_THROWS_AS(RatedFamily(4, 1, {{LocalMap::custom({0, 1}, {1, 1, 3, 3}, 1), 1.0}}), ConfigError);
  CHECK_THROWS_AS(RatedFamily(4, 1, {{LocalMap::custom({0, 1}, {0, 1, 2, 2}, 1), 1.0}}), ConfigError);
  // Zero-rate maps disappear.
  const RatedFamily f(4, 1, {{LocalMap::death(0), 0.0}, {LocalMap::death(1), 2.0}});
  CHECK(f.size() == 1);
  CHECK(f.find(LocalMap::death(1)).has_value());
  CHECK_FALSE(f.find(LocalMap::death(0)).has_value());
}

TEST_CASE("event counts are Poisson with the family's rates") {
  // Mean count R_tot·(u − s) = 10·1.5.
  const auto fam = cooperative_family(torus(1, 10), 0.0, 0.5);
  const int reps = 4000;
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    Rng rng(SeedProvenance{7, static_cast<std::uint64_t>(r), purpose_tag("count")});
    sum += static_cast<double>(sample_event_log(fam, 0.0, 1.0, rng).size());
  }
  CHECK(std::abs(sum / reps - 15.0) < 4.0 * std::sqrt(15.0 / reps));

  // Per-map counts over 10⁴ logs.
  const auto fam4 = cooperative_family(torus(1, 4), 0.5, 0.3);
  std::vector<double> observed(fam4->size(), 0.0), expected(fam4->size());
  const int logs = 10000;
  for (int r = 0; r < logs; ++r) {
    Rng rng(SeedProvenance{8, static_cast<std::uint64_t>(r), purpose_tag("chi")});
    const auto log = sample_event_log(fam4, 0.0, 1.0, rng);
    for (const auto& e : log.events()) observed[e.map] += 1;
  }
  for (std::size_t k = 0; k < fam4->size(); ++k) expected[k] = fam4->rate(k) * logs;
  CHECK(poisson_chi_square(observed, expected) < chi_square_critical(static_cast<double>(fam4->size())));

  const auto empty = std::make_shared<const RatedFamily>(3, Level{1}, std::vector<RatedMap>{});
  Rng rng(1);
  CHECK(sample_event_log(empty, 0.0, 10.0, rng).size() == 0);
}

TEST_CASE("event logs") {
  const auto fam = cooperative_family(torus(1, 6), 0.4, 0.2);
  Rng rng(SeedProvenance{3, 0, purpose_tag("log")});
  const auto log = sample_event_log(fam, 1.0, 9.0, rng);
  for (std::size_t k = 1; k < log.size(); ++k) CHECK(log.events()[k - 1].time < log.events()[k].time);
  CHECK(log.events().front().time > 1.0);
  CHECK(log.events().back().time <= 9.0);
  const auto mid = log.between(2.0, 5.0);
  for (const auto& e : mid) CHECK((e.time > 2.0 && e.time <= 5.0));
  CHECK_THROWS_AS(log.between(0.5, 2.0), ConfigError);
  CHECK_THROWS_AS(EventLog(fam, 0.0, 1.0, {{0.5, 0}, {0.5, 1}}), ConfigError);
  CHECK_THROWS_AS(EventLog(fam, 0.0, 1.0, {{1.5, 0}}), ConfigError);

  // Same provenance, same log; the stream gives the same events.
  Rng again(SeedProvenance{3, 0, purpose_tag("log")});
  CHECK(logs_identical(log, sample_event_log(fam, 1.0, 9.0, again)));
  Rng streamed(SeedProvenance{3, 0, purpose_tag("log")});
  EventStream stream(*fam, 1.0, 9.0, streamed);
  std::size_t k = 0;
  while (auto e = stream.next()) {
    REQUIRE(k < log.size());
    CHECK(e->time == log.events()[k].time);
    CHECK(e->map == log.events()[k].map);
    ++k;
  }
  CHECK(k == log.size());

  const auto huge = cooperative_family(torus(2, 100), 0.5, 1.0);
  CHECK_THROWS_AS(check_event_budget(*huge, 0.0, 1e5), BudgetError);
}

TEST_CASE("forward flow") {
  const std::size_t n = 5;
  const auto fam = std::make_shared<const RatedFamily>(n, Level{1}, std::vector<RatedMap>{{LocalMap::death(2), 1.0}});
  const EventLog one(fam, 0.0, 1.0, {{0.5, 0}});
  CHECK(forward_flow(one, Configuration::basis(n, 1, 2), 0.0, 1.0).is_zero());
  CHECK(forward_flow(one, Configuration::basis(n, 1, 2), 0.5, 1.0) == Configuration::basis(n, 1, 2));
  CHECK_THROWS_AS(forward_flow(one, Configuration::basis(n, 1, 2), 0.0, 2.0), ConfigError);

  auto rng = testing::test_rng(50);
  for (int t = 0; t < 200; ++t) {
    const auto grid = torus(2, 5);
    const double alpha = rng.uniform(), delta = rng.uniform();
    auto lr = Rng(SeedProvenance{50, static_cast<std::uint64_t>(t), purpose_tag("flow")});
    const auto log = sample_event_log(cooperative_family(grid, alpha, delta), 0.0, 3.0, lr);
    const auto x = testing::random_config(25, 1, rng), y = join(x, testing::random_config(25, 1, rng));
    const double s = 3.0 * rng.uniform(), u = s + (3.0 - s) * rng.uniform();
    CHECK(forward_flow(log, x, s, s) == x);
    CHECK(forward_flow(log, forward_flow(log, x, 0.0, s), s, 3.0) == forward_flow(log, x, 0.0, 3.0));
    CHECK(forward_flow(log, forward_flow(log, x, s, u), u, 3.0) == forward_flow(log, x, s, 3.0));
    CHECK(forward_flow(log, Configuration(25, 1), 0.0, 3.0).is_zero());
    CHECK(leq(forward_flow(log, x, 0.0, 3.0), forward_flow(log, y, 0.0, 3.0)));
    auto bits = SiteBits::from_config(x);
    forward_flow_in_place(log, bits, 0.0, 3.0);
    CHECK(bits.to_config() == forward_flow(log, x, 0.0, 3.0));

    // A perturbation never escapes the evolving set of where it started.
    std::vector<Site> diff;
    for (Site i = 0; i < 25; ++i)
      if (x[i] != y[i]) diff.push_back(i);
    const auto xi = evolving_set(log, diff, 0.0, 3.0);
    const auto fx = forward_flow(log, x, 0.0, 3.0), fy = forward_flow(log, y, 0.0, 3.0);
    for (Site i = 0; i < 25; ++i)
      if (fx[i] != fy[i]) CHECK(std::binary_search(xi.begin(), xi.end(), i));
  }
}

TEST_CASE("evolving set steps") {
  const std::size_t n = 4;
  const auto fam = std::make_shared<const RatedFamily>(
      n, Level{1}, std::vector<RatedMap>{{LocalMap::death(1), 1.0}, {LocalMap::branch(1, 2), 1.0}});
  const std::vector<Site> start{1};
  const EventLog dies(fam, 0.0, 1.0, {{0.5, 0}});
  CHECK(evolving_set(dies, start, 0.0, 1.0).empty());
  const EventLog spreads(fam, 0.0, 1.0, {{0.5, 1}});
  CHECK(evolving_set(spreads, start, 0.0, 1.0) == std::vector<Site>{1, 2});
  CHECK(evolving_set(spreads, std::vector<Site>{}, 0.0, 1.0).empty());
}

TEST_CASE("restricted logs") {
  const auto grid = torus(1, 20);
  auto rng = Rng(SeedProvenance{9, 0, purpose_tag("restrict")});
  const auto log = sample_event_log(cooperative_family(grid, 0.5, 0.4), 0.0, 2.0, rng);
  const auto x = Configuration::full(20, 1);
  CHECK(restrict_log(log, [](const LocalMap&) { return true; }).size() == log.size());
  CHECK(forward_flow(restrict_log(log, [](const LocalMap&) { return false; }), x, 0.0, 2.0) == x);
  // Boxes around site 10; the whole torus gives the full flow back.
  const auto full = forward_flow(log, x, 0.0, 2.0);
  for (int k = 0; k <= 10; ++k) {
    auto inside = [&](Site s) { return std::abs(static_cast<int>(s) - 10) <= k; };
    const auto sub = restrict_log(log, [&](const LocalMap& m) {
      return std::all_of(m.dependence().changed.begin(), m.dependence().changed.end(), inside);
    });
    const auto fx = forward_flow(sub, x, 0.0, 2.0);
    if (k == 10) CHECK(fx == full);
    // Outside the box nothing moves.
    for (Site s = 0; s < 20; ++s)
      if (!inside(s)) CHECK(fx[s] == 1);
  }
}

TEST_CASE("monotone coupling of logs") {
  const auto grid = torus(2, 4);
  Rng r0(SeedProvenance{11, 0, purpose_tag("couple")});
  const auto same = sample_coupled_logs(grid, {0.3, 0.2}, {0.3, 0.2}, 0.0, 4.0, r0);
  CHECK(logs_identical(same.low, same.high));
  CHECK_THROWS_AS(sample_coupled_logs(grid, {0.5, 0.2}, {0.3, 0.2}, 0.0, 1.0, r0), ConfigError);

  auto rng = testing::test_rng(60);
  for (int t = 0; t < 200; ++t) {
    const CoopParams lo{rng.uniform() * 0.6, rng.uniform() * 0.5};
    const CoopParams hi{lo.alpha + (1 - lo.alpha) * rng.uniform(), lo.delta + rng.uniform()};
    Rng lr(SeedProvenance{12, static_cast<std::uint64_t>(t), purpose_tag("couple")});
    const auto logs = sample_coupled_logs(grid, lo, hi, 0.0, 3.0, lr);
    const auto x = testing::random_config(16, 1, rng);
    const auto xp = meet(x, testing::random_config(16, 1, rng));
    CHECK(leq(forward_flow(logs.high, xp, 0.0, 3.0), forward_flow(logs.low, x, 0.0, 3.0)));
    const auto e0 = Configuration::basis(16, 1, 0);
    if (!forward_flow(logs.high, e0, 0.0, 3.0).is_zero()) CHECK_FALSE(forward_flow(logs.low, e0, 0.0, 3.0).is_zero());
  }

  // Each leg alone is a log of its own parameters.
  const CoopParams lo{0.2, 0.1}, hi{0.6, 0.5};
  const auto g4 = torus(1, 4);
  const auto fam_lo = cooperative_family(g4, lo.alpha, lo.delta), fam_hi = cooperative_family(g4, hi.alpha, hi.delta);
  std::vector<double> obs_lo(fam_lo->size()), obs_hi(fam_hi->size());
  const int logs = 10000;
  for (int r = 0; r < logs; ++r) {
    Rng lr(SeedProvenance{13, static_cast<std::uint64_t>(r), purpose_tag("legs")});
    const auto c = sample_coupled_logs(g4, lo, hi, 0.0, 1.0, lr);
    for (const auto& e : c.low.events()) obs_lo[*fam_lo->find(c.low.family().map(e.map))] += 1;
    for (const auto& e : c.high.events()) obs_hi[*fam_hi->find(c.high.family().map(e.map))] += 1;
  }
  std::vector<double> exp_lo(fam_lo->size()), exp_hi(fam_hi->size());
  for (std::size_t k = 0; k < fam_lo->size(); ++k) exp_lo[k] = fam_lo->rate(k) * logs;
  for (std::size_t k = 0; k < fam_hi->size(); ++k) exp_hi[k] = fam_hi->rate(k) * logs;
  CHECK(poisson_chi_square(obs_lo, exp_lo) < chi_square_critical(static_cast<double>(fam_lo->size())));
  CHECK(poisson_chi_square(obs_hi, exp_hi) < chi_square_critical(static_cast<double>(fam_hi->size())));
}

}
