#include "doctest.h"

#include "pmevo/expgen.hpp"

using namespace pmevo;

TEST_CASE("singleton experiments in ISA order") {
  auto exps = gen_singletons({"a", "b"});
  REQUIRE(exps.size() == 2);
  CHECK(exps[0] == Experiment{{{"a", 1}}});
  CHECK(exps[1] == Experiment{{{"b", 1}}});
  CHECK(gen_singletons({"a"}).size() == 1);
  CHECK(gen_singletons(std::vector<InstructionId>(310, "x")).size() == 310);
  CHECK_THROWS_AS(gen_singletons({}), EmptyIsa);
}

TEST_CASE("pair experiments cover unordered pairs once") {
  auto exps = gen_pairs({"a", "b", "c"});
  REQUIRE(exps.size() == 3);
  CHECK(exps[0] == Experiment{{{"a", 1}, {"b", 1}}});
  CHECK(exps[1] == Experiment{{{"a", 1}, {"c", 1}}});
  CHECK(exps[2] == Experiment{{{"b", 1}, {"c", 1}}});
  CHECK(gen_pairs({"a", "b"}).size() == 1);

  std::vector<InstructionId> big;
  for (int i = 0; i < 310; ++i)
    big.push_back("i" + std::to_string(i));
  CHECK(gen_pairs(big).size() == 47895);
}

TEST_CASE("weighted pairs use the ceiling of the throughput ratio") {
  std::map<InstructionId, double> tp{{"a", 3.0}, {"b", 1.0}};
  auto exps = gen_weighted_pairs({"a", "b"}, tp);
  REQUIRE(exps.size() == 1);
  CHECK(exps[0] == Experiment{{{"a", 1}, {"b", 3}}});

  tp["a"] = 1.5;
  exps = gen_weighted_pairs({"a", "b"}, tp);
  REQUIRE(exps.size() == 1);
  CHECK(exps[0] == Experiment{{{"a", 1}, {"b", 2}}});

  tp["a"] = 1.0;
  CHECK(gen_weighted_pairs({"a", "b"}, tp).empty());

  CHECK_THROWS_AS(gen_weighted_pairs({"a", "b"}, {{"a", 1.0}}),
                  MissingThroughput);
}

TEST_CASE("near-integer ratios are snapped before the ceiling") {
  std::map<InstructionId, double> tp{{"a", 2.9999999997}, {"b", 1.0}};
  auto exps = gen_weighted_pairs({"a", "b"}, tp);
  REQUIRE(exps.size() == 1);
  CHECK(exps[0].counts.at("b") == 3);
}
