#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// runner. Each returns the number of failing cases and fills `first` with a
// description of the first failure.

#include <random>
#include <string>

#include "helpers.hpp"
#include "npi/folding.hpp"
#include "npi/forest.hpp"

namespace testing {

struct PropertyResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void fail(std::size_t i, const std::string& what) {
    if (failures++ == 0) first = "case " + std::to_string(i) + ": " + what;
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

// fold(fold(m)) changes nothing, and shuffled fold orders agree by key.
inline PropertyResult fold_idempotent_and_confluent(std::size_t count,
                                                     std::uint64_t seed) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  auto target = small_target();
  for (std::size_t i = 0; i < count; ++i) {
    auto m = random_map(rng, target);
    ++r.cases;
    auto base = npi::fold(m);
    auto key = npi::canonical_key(base.folded);
    auto again = npi::fold(base.folded);
    if (again.edge_fold_count || again.face_merge_count ||
        again.vertex_merge_count) {
      r.fail(i, "second fold changed the map");
      continue;
    }
    if (npi::canonical_key(again.folded) != key) {
      r.fail(i, "second fold changed the key");
      continue;
    }
    for (std::uint64_t s = 0; s < 3; ++s) {
      npi::FoldOptions options;
      options.shuffle_seed = rng();
      auto other = npi::fold(m, options);
      if (npi::canonical_key(other.folded) != key ||
          other.face_merge_count != base.face_merge_count) {
        r.fail(i, "shuffled fold order gave a different result");
        break;
      }
    }
  }
  return r;
}

// is_immersion against the brute-force pairwise check, on raw random maps
// and on randomly relabeled copies (so faces carry varied rotations).
inline PropertyResult immersion_matches_oracle(std::size_t count,
                                               std::uint64_t seed) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  auto target = small_target();
  std::size_t positive = 0;
  for (std::size_t i = 0; i < count; ++i) {
    auto m = random_map(rng, target);
    if (rng() % 2) m = npi::fold(m).folded;
    m = random_relabel(m, rng);
    ++r.cases;
    bool lib = npi::is_immersion(m), slow = oracle::is_immersion(m);
    positive += lib;
    if (lib != slow)
      r.fail(i, std::string("library says ") + (lib ? "true" : "false"));
  }
  if (positive == 0 || positive == count) r.fail(count, "sample is one-sided");
  return r;
}

// Keys survive random renaming, reindexing and face reflection.
inline PropertyResult key_invariance(const std::vector<npi::CellMap>& sample,
                                     std::size_t relabelings,
                                     std::uint64_t seed) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto key = npi::canonical_key(sample[i]);
    for (std::size_t k = 0; k < relabelings; ++k) {
      ++r.cases;
      auto copy = random_relabel(sample[i], rng);
      if (!npi::validate_map(copy).ok()) {
        r.fail(i, "relabeled copy is not a valid map");
        continue;
      }
      if (npi::canonical_key(copy) != key) r.fail(i, "key changed");
    }
  }
  return r;
}

}  // namespace testing
