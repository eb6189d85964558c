#include "npi/forest.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <functional>
#include <thread>

#include "npi/folding.hpp"
#include "skeleton.hpp"

namespace npi {

CellMap characteristic_map(std::shared_ptr<const TwoComplex> target,
                           CellIndex face, int orientation) {
  if (face >= target->face_count())
    throw Error(ErrorCode::invalid_argument,
                "characteristic_map: unknown face");
  if (orientation != 1 && orientation != -1)
    throw Error(ErrorCode::invalid_argument,
                "characteristic_map: orientation must be +1 or -1");
  const auto& word = target->face(face).boundary;
  const auto len = static_cast<CellIndex>(word.size());
  auto disc = std::make_shared<TwoComplex>();
  CellMap m;
  std::vector<SignedEdge> boundary;
  for (CellIndex i = 0; i < len; ++i) disc->add_vertex("d" + std::to_string(i));
  for (CellIndex i = 0; i < len; ++i) {
    disc->add_edge("c" + std::to_string(i), i, (i + 1) % len);
    SignedEdge img =
        orientation > 0 ? word[i] : word[len - 1 - i].inverse();
    m.edge_map.push_back(img);
    m.vertex_map.push_back(target->origin(img));
    boundary.push_back({i, false});
  }
  disc->add_face("D", std::move(boundary));
  m.face_map.push_back({face, orientation > 0 ? 0u : len - 1, orientation});
  m.domain = std::move(disc);
  m.codomain = std::move(target);
  return m;
}

CellMap wedge(const CellMap& piece, CellIndex piece_vertex, const CellMap& disc,
              CellIndex disc_vertex) {
  if (piece.vertex_map.at(piece_vertex) != disc.vertex_map.at(disc_vertex))
    throw Error(ErrorCode::invalid_argument,
                "wedge: vertices have different images");
  const TwoComplex& y = *piece.domain;
  const TwoComplex& d = *disc.domain;
  auto out = std::make_shared<TwoComplex>();
  CellMap m = piece;
  for (auto id : y.vertices()) out->add_vertex(std::string(id));
  for (const auto& e : y.edges()) out->add_edge(e.id, e.from, e.to);
  for (const auto& f : y.faces()) out->add_face(f.id, f.boundary);

  std::vector<CellIndex> vmap(d.vertex_count());
  for (CellIndex u = 0; u < d.vertex_count(); ++u) {
    if (u == disc_vertex) {
      vmap[u] = piece_vertex;
      continue;
    }
    vmap[u] = out->add_vertex("x" + d.vertex_id(u));
    m.vertex_map.push_back(disc.vertex_map[u]);
  }
  const auto edge_offset = static_cast<CellIndex>(y.edge_count());
  for (CellIndex e = 0; e < d.edge_count(); ++e) {
    const Edge& edge = d.edge(e);
    out->add_edge("x" + edge.id, vmap[edge.from], vmap[edge.to]);
    m.edge_map.push_back(disc.edge_map[e]);
  }
  for (CellIndex f = 0; f < d.face_count(); ++f) {
    std::vector<SignedEdge> boundary;
    for (auto s : d.face(f).boundary)
      boundary.push_back({s.edge + edge_offset, s.reversed});
    out->add_face("x" + d.face(f).id, std::move(boundary));
    m.face_map.push_back(disc.face_map[f]);
  }
  m.domain = std::move(out);
  return m;
}

ForestNode make_node(const CellMap& immersion, std::size_t depth,
                     std::optional<CanonicalKey> parent) {
  auto form = canonical_form(immersion);
  ForestNode node;
  node.immersion = std::move(form.relabeled);
  node.key = std::move(form.key);
  node.depth = depth;
  node.euler = euler_characteristic(*node.immersion.domain);
  node.parent = std::move(parent);
  return node;
}

KeyStore::Shard& KeyStore::shard_for(const CanonicalKey& key) const {
  return shards_[std::hash<std::string>{}(key.bytes) % kShards];
}

bool KeyStore::insert(const CanonicalKey& key) {
  auto& shard = shard_for(key);
  std::lock_guard lock(shard.mutex);
  return shard.keys.insert(key.bytes).second;
}

bool KeyStore::contains(const CanonicalKey& key) const {
  auto& shard = shard_for(key);
  std::lock_guard lock(shard.mutex);
  return shard.keys.contains(key.bytes);
}

std::size_t KeyStore::size() const {
  std::size_t n = 0;
  for (auto& shard : shards_) {
    std::lock_guard lock(shard.mutex);
    n += shard.keys.size();
  }
  return n;
}

namespace {

using detail::kNone;
using detail::Skeleton;

bool key_less(const ForestNode& a, const ForestNode& b) { return a.key < b.key; }

// Children of a folded piece, before deduplication by key. For an
// orientation +1 disc wedged at (v, u) the fold is computed directly: lift
// the boundary word forwards and backwards from v. If the whole word lifts
// to a closed path the disc becomes a face along it, unless an existing face
// already occupies that corner (a face merge). If the two lifts stay apart,
// the unlifted stretch becomes a new arc. Anything else identifies vertices
// of the piece and goes through the generic fold.
class Expander {
 public:
  Expander(const Skeleton& parent, std::shared_ptr<const TwoComplex> target,
           const ChildOptions& options, ChildStats& stats)
      : p_(parent), target_(std::move(target)), x_(*target_),
        options_(options), stats_(stats) {
    offset_.resize(x_.face_count() + 1, 0);
    for (CellIndex f = 0; f < x_.face_count(); ++f)
      offset_[f + 1] = offset_[f] + x_.face(f).boundary.size();
    corner_.assign(p_.vertex_count() * offset_.back(), 0);
    for (auto [face, anchor] : p_.faces) {
      CellIndex at = anchor;
      const auto& word = x_.face(face).boundary;
      for (std::size_t j = 0; j < word.size(); ++j) {
        corner_[at * offset_.back() + offset_[face] + j] = 1;
        at = static_cast<CellIndex>(p_.step(at, word[j].label()));
      }
    }
  }

  // emit(Skeleton&&) returns false to stop; run then returns false.
  template <typename Emit>
  bool run(Emit&& emit) {
    const auto nv = p_.vertex_count();
    for (CellIndex f = 0; f < x_.face_count(); ++f) {
      const auto& word = x_.face(f).boundary;
      const std::size_t len = word.size();
      for (std::size_t u = 0; u < len; ++u) {
        const auto vimg = x_.origin(word[u]);
        for (CellIndex v = 0; v < nv; ++v) {
          if (p_.image[v] != vimg) continue;
          ++stats_.wedges;
          std::optional<Skeleton> child =
              options_.reference_fold ? generic(f, 1, v, static_cast<CellIndex>(u))
                                      : attach(f, v, u);
          if (child && !emit(std::move(*child))) return false;
        }
      }
      if (!options_.reflected_discs) continue;
      for (CellIndex u = 0; u < len; ++u) {
        const auto& disc = reflected(f);
        for (CellIndex v = 0; v < nv; ++v) {
          if (p_.image[v] != disc.vertex_map[u]) continue;
          ++stats_.wedges;
          auto child = generic(f, -1, v, u);
          if (child && !emit(std::move(*child))) return false;
        }
      }
    }
    return true;
  }

 private:
  std::optional<Skeleton> attach(CellIndex f, CellIndex v, std::size_t u) {
    const auto& word = x_.face(f).boundary;
    const std::size_t len = word.size();
    at_.assign(len, 0);
    at_[u] = v;
    CellIndex fwd = v;
    std::size_t k = 0;
    while (k < len) {
      auto t = p_.step(fwd, word[(u + k) % len].label());
      if (t == kNone) break;
      fwd = static_cast<CellIndex>(t);
      ++k;
      at_[(u + k) % len] = fwd;
    }
    if (k == len) {
      if (fwd != v) return generic(f, 1, v, static_cast<CellIndex>(u));
      if (corner_[v * offset_.back() + offset_[f] + u]) {
        ++stats_.face_merged;
        return std::nullopt;
      }
      if (!seen_.insert({f, 0, at_[0], 0, 0}).second) {
        ++stats_.duplicates;
        return std::nullopt;
      }
      Skeleton child = p_;
      child.faces.push_back({f, at_[0]});
      return child;
    }
    CellIndex back = v;
    std::size_t j = 0;
    while (j < len - k) {
      auto pos = (u + len - 1 - j) % len;
      auto t = p_.step(back, word[pos].inverse().label());
      if (t == kNone) break;
      back = static_cast<CellIndex>(t);
      ++j;
      at_[pos] = back;
    }
    if (j == len - k) return generic(f, 1, v, static_cast<CellIndex>(u));
    const std::size_t m = len - k - j;
    // Both ends of the new arc at one vertex with the same label would fold.
    if (m > 1 && fwd == back &&
        word[(u + k) % len] == word[(u + k + m - 1) % len].inverse())
      return generic(f, 1, v, static_cast<CellIndex>(u));
    auto start = static_cast<CellIndex>((u + len - j) % len);
    if (!seen_.insert({f, 1, start, back, static_cast<CellIndex>(k + j)})
             .second) {
      ++stats_.duplicates;
      return std::nullopt;
    }
    Skeleton child = p_;
    CellIndex prev = fwd;
    for (std::size_t i = 0; i < m; ++i) {
      auto pos = (u + k + i) % len;
      CellIndex to = i + 1 == m
                         ? back
                         : child.add_vertex(x_.terminus(word[pos]));
      child.add_edge(prev, word[pos].label(), to);
      at_[(pos + 1) % len] = to;
      prev = to;
    }
    child.faces.push_back({f, at_[0]});
    return child;
  }

  std::optional<Skeleton> generic(CellIndex f, int orientation, CellIndex v,
                                  CellIndex u) {
    if (!parent_map_) parent_map_ = p_.to_map(target_);
    const CellMap& disc = orientation > 0 ? forward(f) : reflected(f);
    auto result = fold(wedge(*parent_map_, v, disc, u));
    if (result.folded.domain->face_count() != p_.faces.size() + 1) {
      ++stats_.face_merged;
      return std::nullopt;
    }
    return Skeleton::from_map(result.folded);
  }

  const CellMap& forward(CellIndex f) { return disc(forward_, f, 1); }
  const CellMap& reflected(CellIndex f) { return disc(reflected_, f, -1); }
  const CellMap& disc(std::vector<std::optional<CellMap>>& cache, CellIndex f,
                      int orientation) {
    if (cache.empty()) cache.resize(x_.face_count());
    if (!cache[f]) cache[f] = characteristic_map(target_, f, orientation);
    return *cache[f];
  }

  const Skeleton& p_;
  std::shared_ptr<const TwoComplex> target_;
  const TwoComplex& x_;
  ChildOptions options_;
  ChildStats& stats_;
  std::vector<std::size_t> offset_;
  std::vector<char> corner_;
  std::vector<CellIndex> at_;
  std::set<std::array<CellIndex, 5>> seen_;
  std::optional<CellMap> parent_map_;
  std::vector<std::optional<CellMap>> forward_, reflected_;
};

}  // namespace

std::vector<ForestNode> roots(std::shared_ptr<const TwoComplex> target) {
  auto report = validate_complex(*target);
  if (!report.ok())
    throw Error(ErrorCode::invalid_argument,
                "roots: invalid target\n" + report.to_string());
  std::vector<ForestNode> out;
  std::unordered_set<std::string> seen;
  for (CellIndex f = 0; f < target->face_count(); ++f) {
    for (int orientation : {1, -1}) {
      auto folded = fold(characteristic_map(target, f, orientation)).folded;
      auto node = make_node(folded, 0);
      if (seen.insert(node.key.bytes).second) out.push_back(std::move(node));
    }
  }
  std::sort(out.begin(), out.end(), key_less);
  return out;
}

std::vector<ForestNode> children(const ForestNode& node,
                                 std::shared_ptr<const TwoComplex> target,
                                 KeyStore* store, ChildStats* stats,
                                 const ChildOptions& options) {
  std::vector<ForestNode> out;
  std::unordered_set<std::string> local;
  ChildStats local_stats;
  auto parent = Skeleton::from_map(node.immersion);
  Expander expander(parent, target, options, local_stats);
  expander.run([&](Skeleton&& child) {
    auto [bytes, base] = child.canonical_encoding(*target);
    if (!local.insert(bytes).second ||
        (store && !store->insert(CanonicalKey{bytes}))) {
      ++local_stats.duplicates;
      return true;
    }
    ForestNode kid;
    kid.immersion = child.relabel(target, base);
    kid.key.bytes = std::move(bytes);
    kid.depth = node.depth + 1;
    kid.euler = child.euler();
    kid.parent = node.key;
    out.push_back(std::move(kid));
    return true;
  });
  if (stats) {
    stats->wedges += local_stats.wedges;
    stats->face_merged += local_stats.face_merged;
    stats->duplicates += local_stats.duplicates;
  }
  std::sort(out.begin(), out.end(), key_less);
  return out;
}

bool SearchTarget::matches(const ForestNode& node) const {
  if (node.euler < min_euler) return false;
  if (require_no_free_edges && !free_edges(*node.immersion.domain).empty())
    return false;
  return true;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::stop_on_first: return "stop_on_first";
    case StopReason::node_budget: return "node_budget";
    case StopReason::time_budget: return "time_budget";
    case StopReason::interrupted: return "interrupted";
  }
  return "unknown";
}

namespace {

// A frontier entry; full nodes are only built when someone needs one.
struct Piece {
  Skeleton skeleton;
  CanonicalKey key;
  CellIndex base = 0;
  std::int64_t euler = 0;
};

class Search {
 public:
  Search(std::shared_ptr<const TwoComplex> target, const SearchBudget& budget,
         const SearchTarget& goal, const SearchOptions& options)
      : target_(std::move(target)),
        budget_(budget),
        goal_(goal),
        options_(options),
        start_(std::chrono::steady_clock::now()) {
    workers_ = options.deterministic ? 1 : std::max<std::size_t>(1, options.workers);
  }

  SearchReport run() {
    std::vector<Piece> frontier;
    DepthStats stats;
    stats.depth = 0;
    for (auto& node : roots(target_)) {
      if (!admit()) break;
      store_.insert(node.key);
      Piece piece;
      piece.skeleton = Skeleton::from_map(node.immersion);
      piece.key = node.key;
      piece.euler = node.euler;
      consider(piece, 0, stats, nullptr);
      frontier.push_back(std::move(piece));
      if (!running()) break;
    }
    finish_depth(frontier, stats);

    for (std::size_t depth = 0; depth < budget_.max_depth && running() &&
                                !frontier.empty();
         ++depth) {
      DepthStats next_stats;
      next_stats.depth = depth + 1;
      auto next = expand(frontier, depth, next_stats,
                         depth + 1 < budget_.max_depth);
      finish_depth(next, next_stats);
      frontier = std::move(next);
    }

    report_.elapsed_seconds = elapsed();
    report_.stop = stop_;
    std::sort(report_.hits.begin(), report_.hits.end(),
              [](const SearchHit& a, const SearchHit& b) {
                if (a.node.depth != b.node.depth)
                  return a.node.depth < b.node.depth;
                return a.node.key < b.node.key;
              });
    return std::move(report_);
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  bool running() const {
    std::lock_guard lock(mutex_);
    return stop_ == StopReason::completed;
  }

  void halt(StopReason why) {
    std::lock_guard lock(mutex_);
    if (stop_ == StopReason::completed) stop_ = why;
  }

  // Reserves room for one more node under the node budget.
  bool admit() {
    if (budget_.max_nodes > 0 &&
        admitted_.fetch_add(1) >= budget_.max_nodes) {
      halt(StopReason::node_budget);
      return false;
    }
    return true;
  }

  bool check_limits() {
    if (options_.cancel && options_.cancel->load()) {
      halt(StopReason::interrupted);
      return false;
    }
    if (budget_.max_seconds > 0 && elapsed() > budget_.max_seconds) {
      halt(StopReason::time_budget);
      return false;
    }
    return running();
  }

  ForestNode materialize(const Piece& piece, std::size_t depth,
                         const CanonicalKey* parent) const {
    ForestNode node;
    node.immersion = piece.skeleton.relabel(target_, piece.base);
    node.key = piece.key;
    node.depth = depth;
    node.euler = piece.euler;
    if (parent) node.parent = *parent;
    return node;
  }

  // Per-node bookkeeping: depth statistics and the hit predicate.
  void consider(const Piece& piece, std::size_t depth, DepthStats& stats,
                const CanonicalKey* parent) {
    std::lock_guard lock(hit_mutex_);
    if (stats.nodes == 0 || piece.euler > stats.max_euler)
      stats.max_euler = piece.euler;
    ++stats.nodes;
    if (options_.record_keys) recorded_.push_back(piece.key);
    if (piece.euler < goal_.min_euler) return;
    auto node = materialize(piece, depth, parent);
    if (!goal_.matches(node)) return;
    ++stats.hits;
    if (options_.on_hit) options_.on_hit(node);
    report_.hits.push_back({std::move(node)});
    if (goal_.stop_on_first) halt(StopReason::stop_on_first);
  }

  void finish_depth(std::vector<Piece>& pieces, DepthStats& stats) {
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.key < b.key; });
    stats.complete = running();
    report_.total_nodes += stats.nodes;
    report_.depths.push_back(stats);
    if (options_.record_keys) {
      std::sort(recorded_.begin(), recorded_.end());
      report_.keys_by_depth.push_back(std::move(recorded_));
      recorded_.clear();
    }
    report_.elapsed_seconds = elapsed();
    if (options_.on_depth) options_.on_depth(stats, report_);
  }

  // Children of every frontier piece. When keep is false only statistics,
  // hits and keys survive.
  std::vector<Piece> expand(const std::vector<Piece>& frontier,
                            std::size_t depth, DepthStats& next_stats,
                            bool keep) {
    std::atomic<std::size_t> next_index{0};
    std::vector<std::vector<Piece>> produced(workers_);
    std::vector<ChildStats> stats(workers_);

    auto work = [&](std::size_t w) {
      for (;;) {
        std::size_t i = next_index.fetch_add(1);
        if (i >= frontier.size() || !check_limits()) return;
        const Piece& parent = frontier[i];
        std::optional<ForestNode> parent_node;
        if (options_.on_child)
          parent_node = materialize(parent, depth, nullptr);
        Expander expander(parent.skeleton, target_, ChildOptions{}, stats[w]);
        bool go = expander.run([&](Skeleton&& child) {
          auto [bytes, base] = child.canonical_encoding(*target_);
          CanonicalKey key{std::move(bytes)};
          if (!store_.insert(key)) {
            ++stats[w].duplicates;
            return true;
          }
          if (!admit()) return false;
          Piece piece;
          piece.euler = child.euler();
          piece.skeleton = std::move(child);
          piece.key = std::move(key);
          piece.base = base;
          if (options_.on_child)
            options_.on_child(*parent_node,
                              materialize(piece, depth + 1, &parent.key));
          consider(piece, depth + 1, next_stats, &parent.key);
          if (keep) {
            piece.skeleton.image.shrink_to_fit();
            piece.skeleton.next.shrink_to_fit();
            piece.skeleton.faces.shrink_to_fit();
            produced[w].push_back(std::move(piece));
          }
          return running();
        });
        if (!go) return;
      }
    };
    if (workers_ == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers_; ++w) pool.emplace_back(work, w);
    }

    std::vector<Piece> next;
    for (std::size_t w = 0; w < workers_; ++w) {
      report_.wedges_tried += stats[w].wedges;
      report_.face_merge_rejects += stats[w].face_merged;
      report_.dedup_hits += stats[w].duplicates;
      for (auto& piece : produced[w]) next.push_back(std::move(piece));
    }
    return next;
  }

  std::shared_ptr<const TwoComplex> target_;
  SearchBudget budget_;
  SearchTarget goal_;
  SearchOptions options_;
  std::chrono::steady_clock::time_point start_;
  std::size_t workers_ = 1;
  KeyStore store_;
  std::atomic<std::size_t> admitted_{0};
  mutable std::mutex mutex_;
  std::mutex hit_mutex_;
  StopReason stop_ = StopReason::completed;
  SearchReport report_;
  std::vector<CanonicalKey> recorded_;
};

}  // namespace

SearchReport search(std::shared_ptr<const TwoComplex> target,
                    const SearchBudget& budget, const SearchTarget& goal,
                    const SearchOptions& options) {
  if (budget.max_depth == 0 && budget.max_nodes == 0 &&
      budget.max_seconds <= 0)
    throw Error(ErrorCode::invalid_argument,
                "search: every budget limit is zero");
  return Search(std::move(target), budget, goal, options).run();
}

}  // namespace npi
