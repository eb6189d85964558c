#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "npi/complex.hpp"

namespace npi {

// Byte string identifying an immersion up to isomorphism over its target.
struct CanonicalKey {
  std::string bytes;

  std::string hex() const;
  // Short stable digest (FNV-1a 64) of the bytes, as 16 hex digits.
  std::string digest() const;
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalForm {
  CanonicalKey key;
  // The same immersion with cells renamed v0.., e0.., f0.. in canonical
  // order; every face is read from its anchor with rotation 0 and
  // orientation +1.
  CellMap relabeled;
};

// Requires an immersion with connected domain. Two immersions into the
// same target get equal keys iff they are isomorphic over the target
// (face isomorphisms may reverse orientation). Throws Error(disconnected)
// or Error(not_immersion).
CanonicalForm canonical_form(const CellMap& immersion);
CanonicalKey canonical_key(const CellMap& immersion);

// Disc of |boundary F| vertices and edges plus one face, mapped onto F.
// Orientation -1 reads the inverse boundary word.
CellMap characteristic_map(std::shared_ptr<const TwoComplex> target,
                           CellIndex face, int orientation);

// Y with a disc glued at y ~ disc vertex u. Requires equal images.
CellMap wedge(const CellMap& piece, CellIndex piece_vertex, const CellMap& disc,
              CellIndex disc_vertex);

struct ForestNode {
  CellMap immersion;  // canonical relabeling
  std::size_t depth = 0;
  std::int64_t euler = 0;
  CanonicalKey key;
  std::optional<CanonicalKey> parent;

  std::size_t face_count() const { return immersion.domain->face_count(); }
};

ForestNode make_node(const CellMap& immersion, std::size_t depth,
                     std::optional<CanonicalKey> parent = std::nullopt);

// Grow-only set of keys with atomic insert-if-absent.
class KeyStore {
 public:
  // True if the key was not present before.
  bool insert(const CanonicalKey& key);
  bool contains(const CanonicalKey& key) const;
  std::size_t size() const;

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::mutex mutex;
    std::unordered_set<std::string> keys;
  };
  Shard& shard_for(const CanonicalKey& key) const;
  mutable Shard shards_[kShards];
};

// Folded characteristic maps, one per isomorphism class, sorted by key.
std::vector<ForestNode> roots(std::shared_ptr<const TwoComplex> target);

// Every wedge of a characteristic disc onto `node`, folded, keeping results
// with exactly one more face. Deduplicated against each other and, when a
// store is given, against it (new keys are inserted). Output sorted by key.
//
// A disc read along the inverse boundary word is isomorphic over the target
// to the ordinary one (reflect the disc), so by default only orientation +1
// discs are wedged; reflected_discs adds the others. reference_fold forces
// the generic wedge-then-fold route instead of direct path lifting.
struct ChildStats {
  std::size_t wedges = 0;
  std::size_t face_merged = 0;
  std::size_t duplicates = 0;
};
struct ChildOptions {
  bool reflected_discs = false;
  bool reference_fold = false;
};
std::vector<ForestNode> children(const ForestNode& node,
                                 std::shared_ptr<const TwoComplex> target,
                                 KeyStore* store = nullptr,
                                 ChildStats* stats = nullptr,
                                 const ChildOptions& options = {});

struct SearchBudget {
  std::size_t max_depth = 8;
  std::size_t max_nodes = 1'000'000;
  double max_seconds = 0;  // 0: unlimited
};

struct SearchTarget {
  std::int64_t min_euler = 2;
  bool require_no_free_edges = false;
  bool stop_on_first = false;

  bool matches(const ForestNode& node) const;
};

struct DepthStats {
  std::size_t depth = 0;
  std::size_t nodes = 0;
  std::int64_t max_euler = 0;
  std::size_t hits = 0;
  bool complete = false;
};

struct SearchHit {
  ForestNode node;
};

enum class StopReason { completed, stop_on_first, node_budget, time_budget,
                        interrupted };

const char* to_string(StopReason r);

struct SearchReport {
  std::vector<DepthStats> depths;
  std::vector<SearchHit> hits;  // sorted by (depth, key)
  std::size_t total_nodes = 0;
  std::size_t wedges_tried = 0;
  std::size_t face_merge_rejects = 0;
  std::size_t dedup_hits = 0;
  double elapsed_seconds = 0;
  StopReason stop = StopReason::completed;

  // Per-depth key sets, filled only when SearchOptions::record_keys.
  std::vector<std::vector<CanonicalKey>> keys_by_depth;

  bool budget_exhausted() const {
    return stop == StopReason::node_budget || stop == StopReason::time_budget ||
           stop == StopReason::interrupted;
  }
};

struct SearchOptions {
  std::size_t workers = 1;
  bool deterministic = true;
  bool record_keys = false;
  std::function<void(const ForestNode&)> on_hit;
  // Called for every accepted child, possibly from several threads at once.
  std::function<void(const ForestNode& parent, const ForestNode& child)>
      on_child;
  std::function<void(const DepthStats&, const SearchReport&)> on_depth;
  const std::atomic<bool>* cancel = nullptr;
};

// Breadth-first traversal of the forest of facial pieces over `target`.
// Throws Error(invalid_argument) if every budget limit is zero.
SearchReport search(std::shared_ptr<const TwoComplex> target,
                    const SearchBudget& budget, const SearchTarget& goal,
                    const SearchOptions& options = {});

}  // namespace npi
