#include "doctest.h"
#include "properties.hpp"

TEST_CASE("fold is idempotent and order independent") {
  auto r = testing::fold_idempotent_and_confluent(500, 101);
  INFO(r.first);
  CHECK(r.cases == 500);
  CHECK(r.ok());
}

TEST_CASE("is_immersion matches the pairwise oracle") {
  auto r = testing::immersion_matches_oracle(500, 102);
  INFO(r.first);
  CHECK(r.cases == 500);
  CHECK(r.ok());
}

TEST_CASE("keys are invariant under relabeling") {
  std::mt19937_64 rng(103);
  auto target = testing::small_target();
  std::vector<npi::CellMap> sample;
  while (sample.size() < 10) {
    auto m = npi::fold(testing::random_map(rng, target)).folded;
    if (m.domain->face_count() > 0) sample.push_back(m);
  }
  auto r = testing::key_invariance(sample, 100, 104);
  INFO(r.first);
  CHECK(r.cases == 1000);
  CHECK(r.ok());
}
