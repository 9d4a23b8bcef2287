#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dadist/io.hpp"
#include "dadist/rng.hpp"

using namespace dadist;

TEST_CASE("matrix CSV round trip is exact for every algebra") {
  Rng rng(3);
  for (int beta : {1, 2, 4, 8}) {
    const Algebra alg(beta);
    const int m = beta == 8 ? 1 : 2;
    DAMatrix x(alg, 3, m);
    for (double& c : x.components()) c = rng.normal() * 1e3;
    std::stringstream buf;
    write_matrix_csv(buf, x);
    const DAMatrix back = read_matrix_csv(buf);
    CHECK(back.algebra().beta() == beta);
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == m);
    CHECK(back.components() == x.components());
  }
}

TEST_CASE("matrix CSV rejects malformed input") {
  std::stringstream no_header("0,0,1.0\n");
  CHECK_THROWS_AS(read_matrix_csv(no_header), config_error);
  std::stringstream bad_beta("# dadist-matrix beta=3 n=1 m=1\n0,0,1.0\n");
  CHECK_THROWS_AS(read_matrix_csv(bad_beta), config_error);
  std::stringstream missing("# dadist-matrix beta=1 n=2 m=1\n0,0,1.0\n");
  CHECK_THROWS_AS(read_matrix_csv(missing), config_error);
  std::stringstream dup("# dadist-matrix beta=1 n=1 m=1\n0,0,1.0\n0,0,2.0\n");
  CHECK_THROWS_AS(read_matrix_csv(dup), config_error);
  std::stringstream short_row("# dadist-matrix beta=2 n=1 m=1\n0,0,1.0\n");
  CHECK_THROWS_AS(read_matrix_csv(short_row), config_error);
  std::stringstream out_of_range("# dadist-matrix beta=1 n=1 m=1\n1,0,1.0\n");
  CHECK_THROWS_AS(read_matrix_csv(out_of_range), config_error);
}

TEST_CASE("config parsing handles comments, whitespace, and errors") {
  std::stringstream cfg(
      "# comment\n"
      "family = beta2-marginal\n"
      "\n"
      "beta=4\n"
      "kernel=pearson7:q=10,s=2\n");
  const auto map = parse_config(cfg);
  CHECK(map.at("family") == "beta2-marginal");
  CHECK(map.at("beta") == "4");
  CHECK(map.at("kernel") == "pearson7:q=10,s=2");  // value keeps '='

  std::stringstream bare("novalue\n");
  CHECK_THROWS_AS(parse_config(bare), config_error);
  std::stringstream dup("a=1\na=2\n");
  CHECK_THROWS_AS(parse_config(dup), config_error);
}

TEST_CASE("family instances build from config maps") {
  std::map<std::string, std::string> cfg = {
      {"family", "beta2-marginal"}, {"beta", "4"}, {"m", "1"},
      {"a0", "2.0"},                {"a", "3.0"},  {"k", "20"}};
  const FamilyInstance shared = instance_from_config(cfg);
  CHECK(shared.family() == FamilyId::beta2_marginal);
  CHECK(shared.k() == 20);
  CHECK(shared.a()[0] == 2.0);
  CHECK(shared.a()[20] == 3.0);

  std::map<std::string, std::string> explicit_cfg = {
      {"family", "gamma-beta1"}, {"beta", "1"},  {"m", "2"},
      {"a0", "3.0"},             {"a1", "2.5"},  {"a2", "1.5"},
      {"kernel", "kotz:t=2"}};
  const FamilyInstance listed = instance_from_config(explicit_cfg);
  CHECK(listed.k() == 2);
  CHECK(listed.a() == std::vector<double>{3.0, 2.5, 1.5});
  CHECK(listed.kernel()->kind == KernelSpec::Kind::kotz);

  // Overrides take precedence key by key.
  const FamilyInstance tweaked = instance_from_config(explicit_cfg, {{"a2", "0.75"}});
  CHECK(tweaked.a()[2] == 0.75);

  CHECK_THROWS_AS(instance_from_config({{"family", "beta2-marginal"}}), config_error);
  std::map<std::string, std::string> both = cfg;
  both["a1"] = "1.0";
  CHECK_THROWS_AS(instance_from_config(both), config_error);
  std::map<std::string, std::string> no_k = cfg;
  no_k.erase("k");
  CHECK_THROWS_AS(instance_from_config(no_k), config_error);
}
