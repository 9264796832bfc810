#include <doctest.h>

#include <set>

#include "fpaft/config.hpp"
#include "fpaft/error.hpp"
#include "fpaft/rng.hpp"
#include "tempdir.hpp"

using namespace fpaft;

TEST_CASE("substreams are deterministic and distinct") {
  CHECK(substream_seed(42, 7) == substream_seed(42, 7));
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(substream_seed(42, r));
  CHECK(seen.size() == 1000);
  CHECK(substream_seed(42, 0) != substream_seed(43, 0));

  auto a = Rng::substream(9, 3);
  auto b = Rng::substream(9, 3);
  for (int k = 0; k < 100; ++k) CHECK(a.uniform_open() == b.uniform_open());
}

TEST_CASE("uniform_open never returns the endpoints") {
  Rng r(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = r.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("config parsing") {
  const auto c = Config::parse("# comment\n\nname = demo  \nbeta=0.5\nlist = 1, 2,3\nflag = yes\nn = 10\n", "t.cfg");
  CHECK(c.get_string("name") == "demo");
  CHECK(c.get_double("beta") == 0.5);
  CHECK(c.get_doubles("list") == std::vector<double>{1, 2, 3});
  CHECK(c.get_bool("flag", false));
  CHECK(c.get_int("n") == 10);
  CHECK(c.get_uint64("n") == 10u);
  CHECK(c.get_double("missing", 2.5) == 2.5);
  CHECK(c.has("name"));
  CHECK_FALSE(c.has("missing"));
}

TEST_CASE("config errors name the source, line and key") {
  const auto c = Config::parse("a = 1\nb = x\n", "t.cfg");
  try {
    c.get_double("b");
    FAIL("no throw");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("t.cfg:2") != std::string::npos);
    CHECK(msg.find("'b'") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(Config::parse("a = 1\na = 2\n", "d.cfg"), doctest::Contains("duplicate key 'a'"), DataError);
  CHECK_THROWS_WITH_AS(Config::parse("a = 1\nnonsense\n", "d.cfg"), doctest::Contains("d.cfg:2"), DataError);
  CHECK_THROWS_WITH_AS(c.get_string("zzz"), doctest::Contains("missing required key 'zzz'"), DataError);
  CHECK_THROWS_WITH_AS(c.require_known({"a"}), doctest::Contains("unknown key 'b'"), DataError);
  CHECK_THROWS_AS(Config::parse("n = -3\n").get_uint64("n"), DataError);
  CHECK_THROWS_AS(Config::parse("l = 1,,2\n").get_doubles("l"), DataError);
}

TEST_CASE("config files load") {
  testing_support::TempDir dir;
  dir.write("s.cfg", "seed = 5\n");
  CHECK(Config::load(dir / "s.cfg").get_uint64("seed") == 5u);
  CHECK_THROWS_AS(Config::load(dir / "absent.cfg"), DataError);
}
