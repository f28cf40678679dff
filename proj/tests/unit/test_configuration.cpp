#include "doctest.h"

#include "monodual/configuration.hpp"
#include "support.hpp"

using namespace monodual;
using testing::all_configs;

namespace {

std::uint64_t pow3(std::size_t k) {
  std::uint64_t p = 1;
  while (k--) p *= 3;
  return p;
}

// Σ 3^{N−γ(i)} over disagreements, γ(i) = i + 1.
std::uint64_t distance_numerator(const Configuration& x, const Configuration& y) {
  const std::size_t N = x.num_sites();
  std::uint64_t num = 0;
  for (Site i = 0; i < N; ++i)
    if (x[i] != y[i]) num += pow3(N - (i + 1));
  return num;
}

bool no_stored_zero(const Configuration& x) {
  for (const auto& e : x.entries())
    if (e.level == 0) return false;
  return true;
}

}  // namespace

TEST_SUITE("configuration") {

TEST_CASE("order examples") {
  const std::size_t n = 4;
  const auto e1 = Configuration::basis(n, 1, 1), e2 = Configuration::basis(n, 1, 2);
  const Configuration zero(n, 1);
  CHECK(leq(zero, e1));
  CHECK(leq(e1, join(e1, e2)));
  CHECK_FALSE(leq(e1, e2));
  CHECK_FALSE(leq(e2, e1));
  CHECK(meet(e1, e2) == zero);
  CHECK(join(e1, zero) == e1);
  CHECK_THROWS_AS(leq(e1, Configuration::basis(5, 1, 1)), ConfigError);
  CHECK_THROWS_AS(leq(e1, Configuration::basis(4, 2, 1)), ConfigError);
}

TEST_CASE("basis configurations") {
  const auto b = Configuration::basis(5, 1, 3);
  CHECK(b.support() == std::vector<Site>{3});
  CHECK(b.support_size() == 1);
  CHECK_THROWS_AS(Configuration::basis(5, 1, 3, 0), ConfigError);
  CHECK_THROWS_AS(Configuration::basis(5, 1, 5), ConfigError);
  for (Level a = 1; a <= 3; ++a) CHECK(leq(Configuration::basis(4, 3, 2, 1), Configuration::basis(4, 3, 2, a)));
  Configuration acc(6, 1);
  for (Site i = 0; i < 6; ++i) acc = join(acc, Configuration::basis(6, 1, i));
  CHECK(acc == Configuration::full(6, 1));
}

TEST_CASE("lattice laws, exhaustive on 4 sites") {
  for (Level levels : {Level{1}, Level{2}}) {
    const auto xs = all_configs(4, levels);
    for (const auto& x : xs)
      for (const auto& y : xs) {
        const auto j = join(x, y), m = meet(x, y);
        CHECK(no_stored_zero(j));
        CHECK(no_stored_zero(m));
        CHECK(j == join(y, x));
        CHECK(m == meet(y, x));
        CHECK(meet(x, join(x, y)) == x);
        CHECK(join(x, meet(x, y)) == x);
        CHECK(join(x, x) == x);
        CHECK(meet(x, x) == x);
        CHECK(leq(x, y) == (join(x, y) == y));
        CHECK(leq(x, y) == testing::below(x, y));
      }
    // Associativity on a sample of triples.
    auto rng = testing::test_rng(20 + levels);
    for (int t = 0; t < 2000; ++t) {
      const auto& x = xs[rng.below(xs.size())];
      const auto& y = xs[rng.below(xs.size())];
      const auto& z = xs[rng.below(xs.size())];
      CHECK(join(join(x, y), z) == join(x, join(y, z)));
      CHECK(meet(meet(x, y), z) == meet(x, meet(y, z)));
    }
  }
}

TEST_CASE("sparse entries stay canonical") {
  auto x = Configuration::from_entries(6, 2, {{4, 2}, {1, 0}, {0, 1}});
  CHECK(x.support() == std::vector<Site>{0, 4});
  x.set(4, 0);
  CHECK(x.support() == std::vector<Site>{0});
  CHECK(no_stored_zero(x));
  CHECK_THROWS_AS(Configuration::from_entries(6, 2, {{1, 1}, {1, 2}}), ConfigError);
  CHECK_THROWS_AS(x.set(1, 3), ConfigError);
  CHECK(without(Configuration::full(3, 1), 1) == Configuration::from_entries(3, 1, {{0, 1}, {2, 1}}));
}

TEST_CASE("distance") {
  const std::size_t N = 8;
  const auto x = Configuration::basis(N, 1, 3);
  CHECK(config_distance(x, x).is_zero());
  // γ(1) = 2: a single disagreement there is worth exactly 1/9.
  const auto d = config_distance(Configuration(N, 1), Configuration::basis(N, 1, 1));
  CHECK(d.numerator(N) * 9 == pow3(N));
  CHECK(d.to_double() == doctest::Approx(1.0 / 9.0));

  auto rng = testing::test_rng(30);
  for (int t = 0; t < 3000; ++t) {
    const auto a = testing::random_config(N, 2, rng, rng.uniform());
    auto b = a;
    const auto flips = rng.below(4);
    for (std::uint64_t f = 0; f < flips; ++f) b.set(static_cast<Site>(rng.below(N)), static_cast<Level>(rng.below(3)));
    const auto dd = config_distance(a, b);
    const auto num = distance_numerator(a, b);
    CHECK(dd.numerator(N) == num);
    CHECK(dd == config_distance(b, a));
    for (std::uint32_t n = 0; n <= N; ++n) {
      bool agree = true;
      for (Site i = 0; i < n; ++i) agree = agree && a[i] == b[i];
      const bool small = num < pow3(N - n);
      CHECK(dd.less_than_pow3(n) == small);
      // Either d ≥ 3^{-n}, or agreement on {γ ≤ n} and then d ≤ ½·3^{-n}.
      CHECK(small == agree);
      if (agree) CHECK(2 * num <= pow3(N - n));
    }
  }
  // Ordering of distances matches the numerators.
  for (int t = 0; t < 500; ++t) {
    const auto a = testing::random_config(N, 1, rng), b = testing::random_config(N, 1, rng);
    const auto c = testing::random_config(N, 1, rng);
    CHECK((config_distance(a, b) < config_distance(a, c)) == (distance_numerator(a, b) < distance_numerator(a, c)));
  }
}

TEST_CASE("dense bit form round trips") {
  auto rng = testing::test_rng(31);
  for (std::size_t n : {1u, 63u, 64u, 65u, 200u}) {
    const auto x = testing::random_config(n, 1, rng);
    const auto bits = SiteBits::from_config(x);
    CHECK(bits.to_config() == x);
    CHECK(bits.count() == x.support_size());
    CHECK(bits.none() == x.is_zero());
    CHECK(SiteBits::full(n).count() == n);
    const auto y = testing::random_config(n, 1, rng);
    CHECK(bits.subset_of(SiteBits::from_config(y)) == leq(x, y));
  }
  CHECK_THROWS_AS(SiteBits::from_config(Configuration(3, 2)), ConfigError);
}

}
