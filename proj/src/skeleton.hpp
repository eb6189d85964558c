#pragma once

// Compact form of an immersion into a fixed target: the 1-skeleton as a
// deterministic transition table over target edge-end labels, and each
// face as (target face, anchor), the anchor being the vertex lying over
// corner 0 of the target face. Because the map is an immersion, a face's
// boundary is the unique lift of the target boundary word from its anchor.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "npi/complex.hpp"

namespace npi::detail {

inline constexpr std::int32_t kNone = -1;

struct Skeleton {
  std::uint32_t labels = 0;             // 2 * target edge count
  std::vector<std::uint32_t> image;     // vertex -> target vertex
  std::vector<std::int32_t> next;       // vertex * labels + label -> vertex
  std::vector<std::pair<CellIndex, CellIndex>> faces;  // (target face, anchor)

  std::size_t vertex_count() const { return image.size(); }
  std::size_t edge_count() const;
  std::int64_t euler() const {
    return static_cast<std::int64_t>(vertex_count()) -
           static_cast<std::int64_t>(edge_count()) +
           static_cast<std::int64_t>(faces.size());
  }

  std::int32_t step(CellIndex v, std::uint32_t label) const {
    return next[v * labels + label];
  }
  CellIndex add_vertex(std::uint32_t target_vertex) {
    image.push_back(target_vertex);
    next.resize(next.size() + labels, kNone);
    return static_cast<CellIndex>(image.size() - 1);
  }
  void add_edge(CellIndex from, std::uint32_t label, CellIndex to) {
    next[from * labels + label] = static_cast<std::int32_t>(to);
    next[to * labels + (label ^ 1u)] = static_cast<std::int32_t>(from);
  }

  // Throws Error(not_immersion) or Error(disconnected).
  static Skeleton from_map(const CellMap& immersion);

  // Least encoding over candidate base vertices, and the base achieving it.
  std::pair<std::string, CellIndex> canonical_encoding(
      const TwoComplex& target) const;

  // Renames cells in the breadth-first order from `base`.
  CellMap relabel(std::shared_ptr<const TwoComplex> target,
                  CellIndex base) const;
  // Keeps vertex numbering: vertex i becomes "v<i>".
  CellMap to_map(std::shared_ptr<const TwoComplex> target) const;
};

}  // namespace npi::detail
