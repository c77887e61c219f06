#include "doctest.h"

#include "fixtures.hpp"
#include "pmevo/expgen.hpp"
#include "pmevo/measure.hpp"
#include "pmevo/simulate.hpp"

using namespace pmevo;

TEST_CASE("noiseless measurement equals the model throughput") {
  SimulatedProcessor proc{fixtures::flat_mapping(), 0.0, 1};
  std::vector<Experiment> exps = {
      Experiment{{{"add", 2}, {"mul", 1}, {"store", 1}}},
      Experiment{{{"sub", 3}}}};
  auto meas = measure(proc, exps);
  REQUIRE(meas.entries.size() == 2);
  CHECK(meas.entries[0].cycles == 1.5);
  CHECK(meas.entries[1].cycles ==
        simulate(proc.ground_truth, exps[1]).throughput);
}

TEST_CASE("noisy measurement is deterministic for a fixed seed") {
  SimulatedProcessor proc{fixtures::decomposed_mapping(), 0.02, 42};
  std::vector<InstructionId> isa{"add", "mul", "store", "sub"};
  auto exps = gen_singletons(isa);
  auto pairs = gen_pairs(isa);
  exps.insert(exps.end(), pairs.begin(), pairs.end());

  auto a = measure(proc, exps);
  auto b = measure(proc, exps);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    CHECK(a.entries[i].cycles == b.entries[i].cycles);

  // Noise stays within the 3 sigma clamp.
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    double exact = simulate(proc.ground_truth, exps[i]).throughput;
    CHECK(a.entries[i].cycles >= exact * (1 - 0.06));
    CHECK(a.entries[i].cycles <= exact * (1 + 0.06));
  }
}

TEST_CASE("noise bound is validated") {
  SimulatedProcessor proc{fixtures::flat_mapping(), 0.5, 1};
  CHECK_THROWS_AS(measure(proc, {Experiment{{{"add", 1}}}}), Error);
}

TEST_CASE("measuring an unmapped instruction fails") {
  SimulatedProcessor proc{fixtures::flat_mapping(), 0.0, 1};
  CHECK_THROWS_AS(measure(proc, {Experiment{{{"nope", 1}}}}),
                  UnmappedInstruction);
}
