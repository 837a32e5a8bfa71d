#include <doctest.h>

#include "orbitflow/config.hpp"
#include "orbitflow/errors.hpp"

using namespace orbitflow;

TEST_CASE("config parsing: keys, comments, overrides") {
  RunConfig cfg = RunConfig::from_string(
      "space = su2\n"
      "grid.L = 20     # half width\n"
      "grid.N = 1024\n"
      "\n"
      "# full-line comment\n"
      "time.dt = auto\n");
  CHECK(cfg.get_str("space") == "su2");
  CHECK(cfg.get_double("grid.L", 0) == doctest::Approx(20.0));
  CHECK(cfg.get_int("grid.N", 0) == 1024);
  CHECK(cfg.get_double_or_auto("time.dt", 0.125) == doctest::Approx(0.125));
  CHECK(cfg.get_double_or_auto("time.T", 2.0) == doctest::Approx(2.0));
  CHECK_FALSE(cfg.has("nope"));

  cfg.apply_override("grid.N=512");
  CHECK(cfg.get_int("grid.N", 0) == 512);
  CHECK_THROWS_AS(cfg.apply_override("no-equals-sign"), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS((void)RunConfig::from_string("only a key\n"), ConfigError);
  RunConfig cfg = RunConfig::from_string("x = not_a_number\n");
  CHECK_THROWS_AS((void)cfg.get_double("x", 0.0), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_int("x", 0), ConfigError);
  CHECK_THROWS_AS((void)cfg.require_str("missing"), ConfigError);
  CHECK_THROWS_AS((void)RunConfig::from_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("config hash is stable and content-sensitive") {
  RunConfig a = RunConfig::from_string("x = 1\ny = 2\n");
  RunConfig b = RunConfig::from_string("y = 2\nx = 1\n");  // order-insensitive
  RunConfig c = RunConfig::from_string("x = 1\ny = 3\n");
  CHECK(a.hash_hex() == b.hash_hex());
  CHECK(a.hash_hex() != c.hash_hex());
  CHECK(a.hash_hex().size() == 16);
}

TEST_CASE("double lists") {
  auto v = parse_double_list("1,2.5,-3e-2");
  REQUIRE(v.size() == 3);
  CHECK(v[2] == doctest::Approx(-0.03));
  CHECK_THROWS_AS((void)parse_double_list("1,zzz"), ConfigError);
}
