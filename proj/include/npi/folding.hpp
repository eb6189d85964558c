#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "npi/complex.hpp"

namespace npi {

// Factorization A -> Abar -> B of a combinatorial map, with Abar -> B an
// immersion and A -> Abar surjective on cells.
struct FoldResult {
  CellMap quotient;
  CellMap folded;
  std::size_t face_merge_count = 0;
  std::size_t edge_fold_count = 0;
  std::size_t vertex_merge_count = 0;
};

struct FoldOptions {
  // When set, fold sites are visited in a pseudo-random order drawn from
  // this seed instead of canonical id order. Used to test confluence.
  std::optional<std::uint64_t> shuffle_seed;
};

// Folds the 1-skeleton (identify edges leaving a common vertex with a
// common image) and the faces (identify faces sharing an image corner at a
// common vertex) until the map is an immersion. Quotient cells keep the id
// of the least member of their class in canonical id order.
FoldResult fold(const CellMap& m, const FoldOptions& options = {});

// Unique lift of a codomain edge path starting at `start`, if one exists.
// Requires the 1-skeleton map to be an immersion.
std::optional<std::vector<SignedEdge>> lift_path(
    const CellMap& immersion, CellIndex start,
    std::span<const SignedEdge> path);

}  // namespace npi
