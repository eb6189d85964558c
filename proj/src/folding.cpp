#include "npi/folding.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <unordered_map>

namespace npi {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), CellIndex{0});
  }

  CellIndex find(CellIndex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns the surviving root, or nullopt if already joined.
  std::optional<CellIndex> unite(CellIndex a, CellIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return std::nullopt;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }

 private:
  std::vector<CellIndex> parent_;
  std::vector<std::uint8_t> rank_;
};

template <typename IdOf>
std::vector<CellIndex> canonical_order(std::size_t n, IdOf id_of) {
  std::vector<CellIndex> order(n);
  std::iota(order.begin(), order.end(), CellIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](CellIndex a, CellIndex b) {
    return canonical_id_less(id_of(a), id_of(b));
  });
  return order;
}

std::size_t mod(std::int64_t x, std::size_t n) {
  auto m = static_cast<std::int64_t>(n);
  return static_cast<std::size_t>(((x % m) + m) % m);
}

class Folder {
 public:
  Folder(const CellMap& m, const FoldOptions& options)
      : map_(m),
        dom_(*m.domain),
        vertices_(dom_.vertex_count()),
        edges_(dom_.edge_count()),
        faces_(dom_.face_count()),
        ends_(dom_.vertex_count()),
        queued_(dom_.vertex_count(), false) {
    if (options.shuffle_seed) rng_.emplace(*options.shuffle_seed);
    for (CellIndex e = 0; e < dom_.edge_count(); ++e) {
      ends_[dom_.edge(e).from].push_back({e, false});
      ends_[dom_.edge(e).to].push_back({e, true});
    }
    vertex_order_ = canonical_order(
        dom_.vertex_count(), [&](CellIndex v) { return dom_.vertex_id(v); });
    face_order_ = canonical_order(
        dom_.face_count(), [&](CellIndex f) { return dom_.face(f).id; });
    for (auto v : vertex_order_) push(v);
  }

  FoldResult run() {
    for (;;) {
      fold_graph();
      if (!fold_faces()) break;
    }
    return emit();
  }

 private:
  void push(CellIndex v) {
    v = vertices_.find(v);
    if (queued_[v]) return;
    queued_[v] = true;
    worklist_.push_back(v);
  }

  CellIndex pop() {
    std::size_t pick = 0;
    if (rng_) {
      std::uniform_int_distribution<std::size_t> dist(0, worklist_.size() - 1);
      pick = dist(*rng_);
      std::swap(worklist_[pick], worklist_.front());
    }
    CellIndex v = worklist_.front();
    worklist_.pop_front();
    queued_[v] = false;
    return v;
  }

  void unite_vertices(CellIndex a, CellIndex b) {
    a = vertices_.find(a);
    b = vertices_.find(b);
    auto root = vertices_.unite(a, b);
    if (!root) return;
    ++vertex_merges_;
    CellIndex other = (*root == a) ? b : a;
    auto& into = ends_[*root];
    auto& from = ends_[other];
    into.insert(into.end(), from.begin(), from.end());
    from.clear();
    from.shrink_to_fit();
    if (queued_[other]) {
      queued_[other] = false;
      std::erase(worklist_, other);
    }
    push(*root);
  }

  // Identifies the edges under two signed edges with equal image, and
  // their endpoints.
  void unite_edges(SignedEdge s, SignedEdge t) {
    if (edges_.unite(s.edge, t.edge)) ++edge_folds_;
    unite_vertices(dom_.origin(s), dom_.origin(t));
    unite_vertices(dom_.terminus(s), dom_.terminus(t));
  }

  void fold_graph() {
    std::unordered_map<std::uint32_t, SignedEdge> seen;
    while (!worklist_.empty()) {
      CellIndex v = pop();
      if (vertices_.find(v) != v) continue;
      seen.clear();
      // Copy: unite_vertices may append to ends_[v].
      std::vector<SignedEdge> ends = ends_[v];
      std::vector<SignedEdge> kept;
      for (SignedEdge s : ends) {
        auto label = map_.map_edge(s).label();
        auto [it, inserted] = seen.emplace(label, s);
        if (inserted) {
          kept.push_back(s);
          continue;
        }
        SignedEdge t = it->second;
        if (edges_.find(s.edge) != edges_.find(t.edge)) ++edge_folds_;
        edges_.unite(s.edge, t.edge);
        unite_vertices(dom_.terminus(s), dom_.terminus(t));
      }
      CellIndex root = vertices_.find(v);
      if (root == v) {
        // Anything appended during this pass belongs to a merged class and
        // has already re-queued v.
        if (ends_[v].size() == ends.size()) ends_[v] = std::move(kept);
      }
    }
  }

  // Merges one pair of faces sharing an image corner. Returns false when
  // no such pair exists.
  bool fold_faces() {
    struct Slot {
      CellIndex face;
    };
    std::unordered_map<std::uint64_t, Slot> corners;
    std::vector<CellIndex> order = face_order_;
    if (rng_) std::shuffle(order.begin(), order.end(), *rng_);
    for (CellIndex f : order) {
      if (faces_.find(f) != f) continue;
      const Face& face = dom_.face(f);
      const FaceImage& img = map_.face_map[f];
      const auto len = face.boundary.size();
      for (std::size_t i = 0; i < len; ++i) {
        CellIndex v = vertices_.find(dom_.origin(face.boundary[i]));
        std::uint64_t key = (static_cast<std::uint64_t>(v) << 40) |
                            (static_cast<std::uint64_t>(img.face) << 20) |
                            image_corner(img, len, i);
        auto [it, inserted] = corners.emplace(key, Slot{f});
        if (inserted || it->second.face == f) continue;
        merge_faces(it->second.face, f);
        return true;
      }
    }
    return false;
  }

  void merge_faces(CellIndex f, CellIndex g) {
    if (faces_.unite(f, g)) ++face_merges_;
    const Face& a = dom_.face(f);
    const Face& b = dom_.face(g);
    const FaceImage& ia = map_.face_map[f];
    const FaceImage& ib = map_.face_map[g];
    for (std::size_t m = 0; m < a.boundary.size(); ++m)
      unite_edges(source_edge_over(a, ia, m), source_edge_over(b, ib, m));
  }

  FoldResult emit() {
    FoldResult result;
    result.edge_fold_count = edge_folds_;
    result.face_merge_count = face_merges_;
    result.vertex_merge_count = vertex_merges_;

    // Class representative: least member in canonical id order.
    auto reps = [](UnionFind& uf, const std::vector<CellIndex>& order,
                   std::size_t n) {
      std::vector<CellIndex> rep_of_root(n, static_cast<CellIndex>(-1));
      for (CellIndex x : order) {
        CellIndex r = uf.find(x);
        if (rep_of_root[r] == static_cast<CellIndex>(-1)) rep_of_root[r] = x;
      }
      std::vector<CellIndex> rep(n);
      for (CellIndex x = 0; x < n; ++x) rep[x] = rep_of_root[uf.find(x)];
      return rep;
    };
    auto edge_order = canonical_order(
        dom_.edge_count(), [&](CellIndex e) { return dom_.edge(e).id; });
    auto vrep = reps(vertices_, vertex_order_, dom_.vertex_count());
    auto erep = reps(edges_, edge_order, dom_.edge_count());
    auto frep = reps(faces_, face_order_, dom_.face_count());

    auto quotient_complex = std::make_shared<TwoComplex>();
    std::vector<CellIndex> vnew(dom_.vertex_count(), 0);
    std::vector<CellIndex> enew(dom_.edge_count(), 0);
    std::vector<CellIndex> fnew(dom_.face_count(), 0);

    CellMap folded;
    for (CellIndex v = 0; v < dom_.vertex_count(); ++v) {
      if (vrep[v] != v) continue;
      vnew[v] = quotient_complex->add_vertex(dom_.vertex_id(v));
      folded.vertex_map.push_back(map_.vertex_map[v]);
    }
    for (CellIndex e = 0; e < dom_.edge_count(); ++e) {
      if (erep[e] != e) continue;
      const Edge& edge = dom_.edge(e);
      enew[e] = quotient_complex->add_edge(edge.id, vnew[vrep[edge.from]],
                                           vnew[vrep[edge.to]]);
      folded.edge_map.push_back(map_.edge_map[e]);
    }
    auto quotient_edge = [&](SignedEdge s) {
      CellIndex r = erep[s.edge];
      bool flip = map_.edge_map[s.edge] != map_.edge_map[r];
      return SignedEdge{enew[r], s.reversed != flip};
    };
    for (CellIndex f = 0; f < dom_.face_count(); ++f) {
      if (frep[f] != f) continue;
      std::vector<SignedEdge> boundary;
      for (auto s : dom_.face(f).boundary) boundary.push_back(quotient_edge(s));
      fnew[f] = quotient_complex->add_face(dom_.face(f).id, std::move(boundary));
      folded.face_map.push_back(map_.face_map[f]);
    }

    std::shared_ptr<const TwoComplex> qc = quotient_complex;
    folded.domain = qc;
    folded.codomain = map_.codomain;

    CellMap& quotient = result.quotient;
    quotient.domain = map_.domain;
    quotient.codomain = qc;
    for (CellIndex v = 0; v < dom_.vertex_count(); ++v)
      quotient.vertex_map.push_back(vnew[vrep[v]]);
    for (CellIndex e = 0; e < dom_.edge_count(); ++e)
      quotient.edge_map.push_back(quotient_edge({e, false}));
    for (CellIndex f = 0; f < dom_.face_count(); ++f) {
      CellIndex r = frep[f];
      const FaceImage& mine = map_.face_map[f];
      const FaceImage& theirs = map_.face_map[r];
      const auto len = dom_.face(f).boundary.size();
      FaceImage q;
      q.face = fnew[r];
      q.orientation = mine.orientation * theirs.orientation;
      q.rotation = static_cast<std::uint32_t>(
          mod(theirs.orientation * (static_cast<std::int64_t>(mine.rotation) -
                                    static_cast<std::int64_t>(theirs.rotation)),
              len));
      quotient.face_map.push_back(q);
    }
    result.folded = std::move(folded);
    return result;
  }

  const CellMap& map_;
  const TwoComplex& dom_;
  UnionFind vertices_;
  UnionFind edges_;
  UnionFind faces_;
  std::vector<std::vector<SignedEdge>> ends_;
  std::vector<bool> queued_;
  std::deque<CellIndex> worklist_;
  std::vector<CellIndex> vertex_order_;
  std::vector<CellIndex> face_order_;
  std::optional<std::mt19937_64> rng_;
  std::size_t edge_folds_ = 0;
  std::size_t face_merges_ = 0;
  std::size_t vertex_merges_ = 0;
};

}  // namespace

FoldResult fold(const CellMap& m, const FoldOptions& options) {
  auto report = validate_map(m);
  if (!report.ok())
    throw Error(ErrorCode::invalid_argument,
                "fold: invalid input map\n" + report.to_string());
  auto domain_report = validate_complex(*m.domain);
  if (!domain_report.ok() && !m.domain->empty())
    throw Error(ErrorCode::invalid_argument,
                "fold: invalid domain\n" + domain_report.to_string());
  return Folder(m, options).run();
}

std::optional<std::vector<SignedEdge>> lift_path(
    const CellMap& immersion, CellIndex start,
    std::span<const SignedEdge> path) {
  const TwoComplex& dom = *immersion.domain;
  const TwoComplex& cod = *immersion.codomain;
  if (start >= dom.vertex_count())
    throw Error(ErrorCode::invalid_argument, "lift_path: unknown start vertex");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].edge >= cod.edge_count())
      throw Error(ErrorCode::invalid_argument, "lift_path: unknown edge");
    if (i > 0 && cod.terminus(path[i - 1]) != cod.origin(path[i]))
      throw Error(ErrorCode::invalid_argument,
                  "lift_path: path is not composable");
  }
  std::vector<SignedEdge> lifted;
  CellIndex at = start;
  for (SignedEdge step : path) {
    std::optional<SignedEdge> found;
    for (SignedEdge s : dom.outgoing(at)) {
      if (immersion.map_edge(s) != step) continue;
      if (found)
        throw Error(ErrorCode::not_immersion,
                    "lift_path: 1-skeleton map is not an immersion at " +
                        dom.vertex_id(at));
      found = s;
    }
    if (!found) return std::nullopt;
    lifted.push_back(*found);
    at = dom.terminus(*found);
  }
  return lifted;
}

}  // namespace npi
