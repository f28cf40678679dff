#include "doctest.h"

#include <set>

#include "monodual/localmap.hpp"
#include "support.hpp"

using namespace monodual;
using testing::all_configs;

namespace {

using Pairs = std::vector<std::pair<Site, Site>>;

// D(m) and R(m) on the whole grid straight from the definitions.
std::pair<std::vector<Site>, Pairs> brute_dependence(const LocalMap& m, std::size_t n, Level levels) {
  std::set<Site> D;
  std::set<std::pair<Site, Site>> R;
  const auto xs = all_configs(n, levels);
  for (const auto& x : xs) {
    const auto mx = m.apply(x);
    for (Site i = 0; i < n; ++i) {
      if (mx[i] != x[i]) D.insert(i);
      for (Level a = 0; a <= levels; ++a) {
        if (a == x[i]) continue;
        auto y = x;
        y.set(i, a);
        const auto my = m.apply(y);
        for (Site j = 0; j < n; ++j)
          if (mx[j] != my[j]) R.insert({i, j});
      }
    }
  }
  return {{D.begin(), D.end()}, {R.begin(), R.end()}};
}

bool brute_monotone(const LocalMap& m, std::size_t n, Level levels) {
  const auto xs = all_configs(n, levels);
  for (const auto& x : xs)
    for (const auto& y : xs)
      if (testing::below(x, y) && !testing::below(m.apply(x), m.apply(y))) return false;
  return true;
}

bool brute_additive(const LocalMap& m, std::size_t n, Level levels) {
  if (!m.apply(Configuration(n, levels)).is_zero()) return false;
  const auto xs = all_configs(n, levels);
  for (const auto& x : xs)
    for (const auto& y : xs)
      if (!(m.apply(join(x, y)) == join(m.apply(x), m.apply(y)))) return false;
  return true;
}

Configuration sites(std::size_t n, std::initializer_list<Site> s) {
  Configuration x(n, 1);
  for (Site i : s) x.set(i, 1);
  return x;
}

}  // namespace

TEST_SUITE("localmap") {

TEST_CASE("built-in maps act as defined") {
  const std::size_t n = 5;
  CHECK(LocalMap::death(2).apply(sites(n, {2, 3})) == sites(n, {3}));
  CHECK(LocalMap::branch(1, 2).apply(sites(n, {1})) == sites(n, {1, 2}));
  CHECK(LocalMap::coop(1, 3, 2).apply(sites(n, {1})) == sites(n, {1}));
  CHECK(LocalMap::coop(1, 3, 2).apply(sites(n, {1, 3})) == sites(n, {1, 2, 3}));
  // Multi-level states: branch takes the max, coop the min of the sources.
  const auto x = Configuration::from_entries(4, 3, {{0, 2}, {1, 3}, {2, 1}});
  CHECK(LocalMap::branch(0, 2).apply(x)[2] == 2);
  CHECK(LocalMap::coop(0, 1, 3).apply(x)[3] == 2);
  CHECK_THROWS_AS(LocalMap::branch(1, 1), ConfigError);
  CHECK_THROWS_AS(LocalMap::coop(1, 2, 1), ConfigError);
  CHECK_THROWS_AS(LocalMap::death(7).apply(sites(n, {})), ConfigError);
}

TEST_CASE("dependence sets match brute force") {
  const std::size_t n = 4;
  std::vector<LocalMap> maps{LocalMap::death(1), LocalMap::branch(0, 2), LocalMap::coop(3, 0, 1),
                             LocalMap::identity({0, 2}, 1)};
  auto rng = testing::test_rng(40);
  for (int t = 0; t < 30; ++t) {
    std::vector<Site> w{0, 1, 2, 3};
    for (std::size_t k = 3; k > 0; --k) std::swap(w[k], w[rng.below(k + 1)]);
    w.resize(1 + rng.below(4));
    maps.push_back(testing::random_eligible_map(w, rng));
  }
  for (const auto& m : maps)
    for (Level levels : {Level{1}, Level{2}}) {
      if (m.kind() == MapKind::Custom && levels != 1) continue;
      const auto [D, R] = brute_dependence(m, n, levels);
      CHECK(m.dependence().changed == D);
      CHECK(m.dependence().relevance(n) == R);
      CHECK(m.dependence_by_enumeration(levels) == m.dependence());
    }
  // The closed forms, written out.
  const auto br = LocalMap::branch(0, 2).dependence();
  CHECK(br.changed == std::vector<Site>{2});
  CHECK(br.relevance(4) == Pairs{{0, 0}, {0, 2}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(LocalMap::death(1).dependence().relevance(3) == Pairs{{0, 0}, {2, 2}});
  CHECK(LocalMap::coop(0, 1, 2).dependence().sources(2) == std::vector<Site>{0, 1, 2});
}

TEST_CASE("monotone and additive predicates") {
  CHECK(LocalMap::branch(0, 1).is_additive(1));
  CHECK(LocalMap::death(0).is_additive(1));
  CHECK(LocalMap::coop(0, 1, 2).is_monotone(1));
  CHECK_FALSE(LocalMap::coop(0, 1, 2).is_additive(1));
  // Constant ⊤ at site 1 of the window: monotone but moves 0̲.
  const auto top = LocalMap::custom({0, 1}, {1, 1, 3, 3}, 1);
  CHECK(top.is_monotone(1));
  CHECK_FALSE(top.fixes_zero());
  CHECK_FALSE(top.is_eligible(1));
  // x(1) := ¬x(0) ∧ x(1) is not monotone.
  const auto anti = LocalMap::custom({0, 1}, {0, 1, 2, 2}, 1);
  CHECK_FALSE(anti.is_monotone(1));

  auto rng = testing::test_rng(41);
  for (int t = 0; t < 300; ++t) {
    const std::size_t w = 1 + rng.below(3);
    std::vector<Site> window(w);
    for (std::size_t k = 0; k < w; ++k) window[k] = static_cast<Site>(k);
    std::vector<std::uint32_t> table(1u << w);
    for (auto& v : table) v = static_cast<std::uint32_t>(rng.below(1u << w));
    table[0] = rng.bernoulli(0.7) ? 0 : table[0];
    const auto m = LocalMap::custom(window, table, 1);
    const bool mono = brute_monotone(m, w, 1), add = brute_additive(m, w, 1);
    CHECK(m.is_monotone(1) == mono);
    CHECK(m.is_additive(1) == add);
    if (add) CHECK(mono);
  }
}

TEST_CASE("dense path agrees with the sparse one") {
  auto rng = testing::test_rng(42);
  const std::size_t n = 70;
  for (int t = 0; t < 500; ++t) {
    const Site i = static_cast<Site>(rng.below(n)), j = static_cast<Site>((i + 1 + rng.below(n - 2)) % n);
    Site i2 = static_cast<Site>(rng.below(n));
    while (i2 == i || i2 == j) i2 = static_cast<Site>(rng.below(n));
    std::vector<LocalMap> maps{LocalMap::death(j), LocalMap::branch(i, j), LocalMap::coop(i, i2, j),
                               testing::random_eligible_map({i, i2, j}, rng)};
    const auto x = testing::random_config(n, 1, rng);
    for (const auto& m : maps) {
      auto bits = SiteBits::from_config(x);
      m.apply_in_place(bits);
      CHECK(bits.to_config() == m.apply(x));
    }
  }
}

TEST_CASE("custom map validation and relabeling") {
  CHECK_THROWS_AS(LocalMap::custom({0, 0}, {0, 1, 2, 3}, 1), ConfigError);
  CHECK_THROWS_AS(LocalMap::custom({0, 1}, {0, 1, 2}, 1), ConfigError);
  CHECK_THROWS_AS(LocalMap::custom({0, 1}, {0, 1, 2, 4}, 1), ConfigError);
  CHECK_THROWS_AS(LocalMap::custom({0, 1, 2, 3, 4, 5, 6}, std::vector<std::uint32_t>(128, 0), 1), ConfigError);
  CHECK(LocalMap::coop(0, 1, 2).relabeled([](Site s) { return s + 3; }) == LocalMap::coop(3, 4, 5));
  const auto m = LocalMap::custom({0, 1}, {0, 0, 2, 3}, 1);
  const auto shifted = m.relabeled([](Site s) { return s + 1; });
  CHECK(shifted.window() == std::vector<Site>{1, 2});
  CHECK(shifted.apply(sites(3, {1})) == sites(3, {1}));
  CHECK(shifted.apply(sites(3, {1, 2})) == sites(3, {1, 2}));
  CHECK(shifted.apply(sites(3, {2})) == sites(3, {}));
}

}
