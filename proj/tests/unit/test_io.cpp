#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "monodual/io.hpp"
#include "support.hpp"

using namespace monodual;
using nlohmann::json;

namespace {

std::shared_ptr<const Grid> torus(int d, int L) { return std::make_shared<const Grid>(Grid::torus(d, L)); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("configurations") {
  auto rng = testing::test_rng(40);
  for (Level levels : {Level{1}, Level{3}})
    for (int r = 0; r < 50; ++r) {
      const auto x = testing::random_config(12, levels, rng);
      CHECK(config_from_json(config_to_json(x), 12, levels) == x);
    }
  const auto x = config_from_json(json::parse(R"({"support": [[2, 1], [5, 1]]})"), 8, 1);
  CHECK(x[2] == 1);
  CHECK(x[5] == 1);
  CHECK(x[0] == 0);
  CHECK(config_to_json(x) == json::parse(R"({"support": [[2, 1], [5, 1]]})"));
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"support": [[9, 1]]})"), 8, 1), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"support": [[1, 2]]})"), 8, 1), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"support": [[1, -1]]})"), 8, 1), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"occupied": []})"), 8, 1), ConfigError);
}

TEST_CASE("antichains") {
  auto rng = testing::test_rng(41);
  for (int r = 0; r < 50; ++r) {
    const auto Y = testing::random_small_antichain(9, rng);
    CHECK(antichain_from_json(antichain_to_json(Y), 9, 1) == Y);
  }
  // Comparable elements are minimalized on input.
  const auto Y = antichain_from_json(json::parse(R"({"elements": [[[1, 1]], [[1, 1], [2, 1]]]})"), 4, 1);
  CHECK(Y.size() == 1);
  CHECK(antichain_from_json(json::parse(R"({"elements": []})"), 4, 1).empty());
  CHECK_THROWS_AS(antichain_from_json(json::parse(R"({"elements": [[]]})"), 4, 1), ConfigError);
  CHECK_THROWS_AS(antichain_from_json(json::parse(R"([1])"), 4, 1), ConfigError);
}

TEST_CASE("hex doubles are bit-exact") {
  auto rng = testing::test_rng(42);
  for (int r = 0; r < 1000; ++r) {
    const double v = rng.exponential(0.01) * (rng.bernoulli(0.5) ? 1 : -1);
    CHECK(parse_hex_double(hex_double(v)) == v);
  }
  for (double v : {0.0, 1.0, 0.1, std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max(),
                   std::nextafter(1.0, 2.0)})
    CHECK(parse_hex_double(hex_double(v)) == v);
  CHECK(parse_hex_double("0x1p-1") == 0.5);
  CHECK_THROWS_AS(parse_hex_double("abc"), ConfigError);
  CHECK_THROWS_AS(parse_hex_double("1.0junk"), ConfigError);
}

TEST_CASE("event logs round-trip") {
  auto rng = testing::test_rng(43);
  const auto fam = cooperative_family(torus(2, 4), 0.5, 0.3);
  const auto log = sample_event_log(fam, 0.0, 3.0, rng);
  std::stringstream ss;
  write_event_log(ss, log, {"grid=torus(2,4)", "seed=1"});
  const auto text = ss.str();
  CHECK(text.rfind("# grid=torus(2,4)\n# seed=1\n", 0) == 0);
  const auto back = read_event_log(ss, fam, 0.0, 3.0);
  REQUIRE(back.size() == log.size());
  for (std::size_t k = 0; k < log.size(); ++k) {
    CHECK(back.events()[k].time == log.events()[k].time);
    CHECK(back.events()[k].map == log.events()[k].map);
  }
  const auto& e = log.events().front();
  const auto j = event_to_json(log, e);
  CHECK(j.at("t") == hex_double(e.time));
  CHECK(j.at("sites") == json(log.family().map(e.map).window()));

  std::istringstream foreign(R"({"t": "0x1p-1", "kind": "death", "sites": [99]})");
  CHECK_THROWS_AS(read_event_log(foreign, fam, 0.0, 3.0), ConfigError);
  std::istringstream partial(R"({"t": "0x1p-1", "kind": "death"})");
  CHECK_THROWS_AS(read_event_log(partial, fam, 0.0, 3.0), ConfigError);
  std::istringstream late(R"({"t": "0x1p+2", "kind": "death", "sites": [0]})");
  CHECK_THROWS_AS(read_event_log(late, fam, 0.0, 3.0), ConfigError);
}

TEST_CASE("custom maps") {
  const auto m = custom_map_from_json(json::parse(R"({"window": [3, 5], "table": {"10": "11", "11": "11"}})"), 1);
  CHECK(m.kind() == MapKind::Custom);
  CHECK(m.window() == std::vector<Site>{3, 5});
  // Unlisted rows are the identity.
  const std::vector<std::uint32_t> expected = {0b00, 0b01, 0b11, 0b11};
  CHECK(std::equal(m.custom_table().begin(), m.custom_table().end(), expected.begin(), expected.end()));
  CHECK(custom_map_from_json(custom_map_to_json(m), 1) == m);

  auto rng = testing::test_rng(44);
  for (int r = 0; r < 20; ++r) {
    const auto r_map = testing::random_eligible_map({0, 2, 4}, rng);
    CHECK(custom_map_from_json(custom_map_to_json(r_map), 1) == r_map);
  }
  CHECK_THROWS_AS(custom_map_from_json(json::parse(R"({"window": [0, 1], "table": {"1": "1"}})"), 1), ConfigError);
  CHECK_THROWS_AS(custom_map_from_json(json::parse(R"({"window": [0, 1], "table": {"12": "11"}})"), 1), ConfigError);
  CHECK_THROWS_AS(custom_map_from_json(json::parse(R"({"window": [], "table": {}})"), 1), ConfigError);
  CHECK_THROWS_AS(custom_map_to_json(LocalMap::death(0)), ConfigError);

  const auto rated = rated_maps_from_json(
      json::parse(R"([{"window": [0, 1], "table": {"10": "11"}, "rate": 0.5}])"), 1);
  REQUIRE(rated.size() == 1);
  CHECK(rated[0].rate == 0.5);
  CHECK_THROWS_AS(rated_maps_from_json(json::parse(R"([{"window": [0, 1], "table": {}}])"), 1), ConfigError);
}

}
