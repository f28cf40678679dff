#include "doctest.h"

#include <map>

#include "monodual/antichain.hpp"
#include "monodual/exact.hpp"
#include "support.hpp"

using namespace monodual;
using testing::all_configs;

namespace {

Configuration sites(std::size_t n, std::initializer_list<Site> s) {
  Configuration x(n, 1);
  for (Site i : s) x.set(i, 1);
  return x;
}

std::vector<Configuration> nonzero_configs(std::size_t n) {
  auto c = all_configs(n, 1);
  c.erase(c.begin());
  return c;
}

// Members of the upset, as a list of configurations.
std::vector<Configuration> upset_members(const std::vector<Configuration>& gens, std::size_t n) {
  std::vector<Configuration> out;
  for (const auto& x : all_configs(n, 1))
    if (testing::in_upset(x, gens)) out.push_back(x);
  return out;
}

std::uint32_t brute_agreement_level(const Antichain& Y, const Antichain& Z) {
  const std::size_t n = Y.num_sites();
  std::uint32_t level = 0;
  for (std::uint32_t w = 1; w <= n; ++w) {
    bool agree = true;
    for (const auto& x : all_configs(n, 1)) {
      bool inside = true;
      for (Site i = w; i < n; ++i) inside = inside && x[i] == 0;
      if (inside && psi_mon(x, Y) != psi_mon(x, Z)) agree = false;
    }
    if (!agree) break;
    level = w;
  }
  return level;
}

}  // namespace

TEST_SUITE("antichain") {

TEST_CASE("minimalize examples") {
  const std::size_t n = 4;
  const auto e1 = sites(n, {1}), e12 = sites(n, {1, 2}), e23 = sites(n, {2, 3}), e123 = sites(n, {1, 2, 3});
  CHECK(Antichain::minimalize(n, 1, {e1, e12}) == Antichain::from_elements(n, 1, {e1}));
  CHECK(Antichain::minimalize(n, 1, {e12, e23, e123}) == Antichain::from_elements(n, 1, {e12, e23}));
  const auto Y = Antichain::from_elements(n, 1, {e12, e23});
  CHECK(Antichain::minimalize(n, 1, {Y.elements().begin(), Y.elements().end()}) == Y);
  CHECK_THROWS_AS(Antichain::minimalize(n, 1, {Configuration(n, 1), e1}), ConfigError);
  CHECK_THROWS_AS(Antichain::from_elements(n, 1, {e1, e12}), ConfigError);
  CHECK(Antichain::minimalize(n, 1, {e23, e12, e23}).to_string() == Y.to_string());
}

TEST_CASE("psi_mon examples") {
  const std::size_t n = 4;
  const auto top = make_y_top(n, 1);
  const Antichain none(n, 1);
  CHECK(top.size() == n);
  CHECK(make_y_top(3, 1) == Antichain::from_elements(3, 1, {sites(3, {0}), sites(3, {1}), sites(3, {2})}));
  for (const auto& x : all_configs(n, 1)) {
    CHECK_FALSE(psi_mon(x, none));
    CHECK(psi_mon(x, top) == !x.is_zero());
  }
  auto rng = testing::test_rng(70);
  for (int t = 0; t < 100; ++t) CHECK_FALSE(psi_mon(Configuration(n, 1), testing::random_small_antichain(n, rng)));
  for (Site j = 0; j < n; ++j) CHECK(psi_mon(sites(n, {j}), top));
}

TEST_CASE("set identities, exhaustive over subsets on 3 sites") {
  const std::size_t n = 3;
  const auto pool = nonzero_configs(n);
  for (std::uint32_t mask = 1; mask < (1u << pool.size()); ++mask) {
    std::vector<Configuration> A;
    for (std::size_t k = 0; k < pool.size(); ++k)
      if ((mask >> k) & 1) A.push_back(pool[k]);
    const auto Ao = Antichain::minimalize(n, 1, A);
    const std::vector<Configuration> Ao_elems(Ao.elements().begin(), Ao.elements().end());
    CHECK(Antichain::minimalize(n, 1, Ao_elems) == Ao);  // (A°)° = A°
    const auto up = upset_members(A, n);
    CHECK(upset_members(up, n) == up);                   // (A↑)↑ = A↑
    CHECK(Antichain::minimalize(n, 1, up) == Ao);        // (A↑)° = A°
    CHECK(upset_members(Ao_elems, n) == up);
    // Every member of A° is in A and minimal there.
    for (const auto& y : Ao.elements()) {
      CHECK(std::find(A.begin(), A.end(), y) != A.end());
      for (const auto& z : A) CHECK((z == y || !testing::below(z, y)));
    }
  }
}

TEST_CASE("dual order on the 19 antichains of 3 sites") {
  const auto all = enumerate_antichains(3);
  REQUIRE(all.size() == 19);
  std::map<std::vector<bool>, std::size_t> encodings;
  for (const auto& Y : all) {
    const auto up = testing::upset_indicator(Y);
    encodings[up]++;
    // The upset determines Y.
    std::vector<Configuration> members;
    const auto xs = all_configs(3, 1);
    for (std::size_t k = 0; k < xs.size(); ++k)
      if (up[k]) members.push_back(xs[k]);
    CHECK(Antichain::minimalize(3, 1, members) == Y);
    CHECK(order_leq(Antichain(3, 1), Y));
    CHECK(order_leq(Y, make_y_top(3, 1)));
    CHECK(order_leq(Y, Y));
  }
  CHECK(encodings.size() == 19);
  for (const auto& Y : all)
    for (const auto& Z : all) {
      const auto uy = testing::upset_indicator(Y), uz = testing::upset_indicator(Z);
      bool inclusion = true;
      for (std::size_t k = 0; k < uy.size(); ++k) inclusion = inclusion && (!uy[k] || uz[k]);
      CHECK(order_leq(Y, Z) == inclusion);
      if (order_leq(Y, Z) && order_leq(Z, Y)) CHECK(Y == Z);
      if (order_leq(Y, Z))
        for (const auto& x : all_configs(3, 1)) CHECK(psi_mon(x, Y) <= psi_mon(x, Z));
      for (const auto& W : all)
        if (order_leq(Y, Z) && order_leq(Z, W)) CHECK(order_leq(Y, W));
    }
  // ψ is increasing in x.
  for (const auto& Y : all)
    for (const auto& x : all_configs(3, 1))
      for (const auto& y : all_configs(3, 1))
        if (leq(x, y)) CHECK(psi_mon(x, Y) <= psi_mon(y, Y));

  const std::size_t n = 4;
  CHECK(order_leq(Antichain::from_elements(n, 1, {sites(n, {1, 2})}), Antichain::from_elements(n, 1, {sites(n, {1})})));
  const auto a = Antichain::from_elements(n, 1, {sites(n, {1})}), b = Antichain::from_elements(n, 1, {sites(n, {2})});
  CHECK_FALSE(order_leq(a, b));
  CHECK_FALSE(order_leq(b, a));
}

TEST_CASE("window distance") {
  const auto all = enumerate_antichains(3);
  for (const auto& Y : all) {
    const auto self = antichain_window_distance(Y, Y);
    CHECK(self.equal);
    CHECK(self.distance() == 0.0);
  }
  const auto e0 = Antichain::from_elements(3, 1, {sites(3, {0})});
  const auto d = antichain_window_distance(e0, Antichain(3, 1));
  CHECK_FALSE(d.equal);
  CHECK(d.level == 0);
  CHECK(d.distance() == 1.0);

  for (const auto& Y : all)
    for (const auto& Z : all) {
      const auto dyz = antichain_window_distance(Y, Z);
      CHECK(dyz.equal == (Y == Z));
      CHECK(dyz.level == brute_agreement_level(Y, Z));
      CHECK(dyz.level == antichain_window_distance(Z, Y).level);
      for (const auto& W : all)
        CHECK(antichain_window_distance(Y, W).level >= std::min(dyz.level, antichain_window_distance(Z, W).level));
    }
}

TEST_CASE("additive states") {
  const std::size_t n = 4;
  CHECK(is_additive_state(make_y_top(n, 1)));
  CHECK(is_additive_state(Antichain(n, 1)));
  CHECK_FALSE(is_additive_state(Antichain::from_elements(n, 1, {sites(n, {1, 2})})));
}

TEST_CASE("antichain count against subset brute force") {
  CHECK(testing::brute_antichain_count(1) == 2);
  CHECK(testing::brute_antichain_count(2) == 5);
  CHECK(testing::brute_antichain_count(3) == 19);
  CHECK(enumerate_antichains(1).size() == 2);
  CHECK(enumerate_antichains(2).size() == 5);
}

}
