#pragma once

// Slow reference implementations used to cross-check the library. They
// share only the plain data types with the code under test.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "npi/complex.hpp"

namespace oracle {

using npi::CellIndex;
using npi::CellMap;
using npi::SignedEdge;
using npi::TwoComplex;

// A map flattened to integers: edge images are target labels, and each face
// is stored as the source signed edges lying over target boundary positions
// 0..L-1, read forwards along the target word.
struct Raw {
  std::shared_ptr<const TwoComplex> target;
  std::vector<CellIndex> vimg;
  struct E {
    CellIndex from, to;
    std::uint32_t label;
  };
  std::vector<E> edges;
  struct F {
    CellIndex image;
    std::vector<SignedEdge> over;
  };
  std::vector<F> faces;

  CellIndex origin(SignedEdge s) const {
    return s.reversed ? edges[s.edge].to : edges[s.edge].from;
  }
  std::uint32_t label_of(SignedEdge s) const {
    return edges[s.edge].label ^ (s.reversed ? 1u : 0u);
  }
};

inline std::uint32_t corner_of(int rotation, int orientation, std::size_t len,
                               std::size_t i) {
  auto L = static_cast<long>(len);
  long c = orientation > 0 ? (static_cast<long>(i) + rotation) % L
                           : ((rotation - static_cast<long>(i) + 1) % L + L) % L;
  return static_cast<std::uint32_t>(c);
}

inline Raw to_raw(const CellMap& m) {
  Raw r;
  r.target = m.codomain;
  const TwoComplex& d = *m.domain;
  r.vimg = m.vertex_map;
  for (CellIndex e = 0; e < d.edge_count(); ++e)
    r.edges.push_back({d.edge(e).from, d.edge(e).to, m.edge_map[e].label()});
  for (CellIndex f = 0; f < d.face_count(); ++f) {
    const auto& b = d.face(f).boundary;
    const auto& img = m.face_map[f];
    const long L = static_cast<long>(b.size());
    Raw::F face{img.face, std::vector<SignedEdge>(b.size())};
    for (long p = 0; p < L; ++p) {
      if (img.orientation > 0)
        face.over[p] = b[((p - img.rotation) % L + L) % L];
      else
        face.over[p] = b[((img.rotation - p) % L + L) % L].inverse();
    }
    r.faces.push_back(std::move(face));
  }
  return r;
}

inline CellMap from_raw(const Raw& r) {
  auto c = std::make_shared<TwoComplex>();
  CellMap m;
  for (std::size_t v = 0; v < r.vimg.size(); ++v)
    c->add_vertex("v" + std::to_string(v));
  for (std::size_t e = 0; e < r.edges.size(); ++e) {
    c->add_edge("e" + std::to_string(e), r.edges[e].from, r.edges[e].to);
    m.edge_map.push_back(SignedEdge::from_label(r.edges[e].label));
  }
  for (std::size_t f = 0; f < r.faces.size(); ++f) {
    c->add_face("f" + std::to_string(f), r.faces[f].over);
    m.face_map.push_back({r.faces[f].image, 0, 1});
  }
  m.vertex_map = r.vimg;
  m.domain = std::move(c);
  m.codomain = r.target;
  return m;
}

// Link injectivity checked straight from the definition.
inline bool is_immersion(const CellMap& m) {
  Raw r = to_raw(m);
  std::set<std::pair<CellIndex, std::uint32_t>> ends;
  for (CellIndex e = 0; e < r.edges.size(); ++e) {
    if (!ends.insert({r.edges[e].from, r.edges[e].label}).second) return false;
    if (!ends.insert({r.edges[e].to, r.edges[e].label ^ 1u}).second)
      return false;
  }
  std::set<std::tuple<CellIndex, CellIndex, std::size_t>> corners;
  for (const auto& f : r.faces)
    for (std::size_t c = 0; c < f.over.size(); ++c)
      if (!corners.insert({r.origin(f.over[c]), f.image, c}).second)
        return false;
  return true;
}

namespace detail {

inline void merge_vertices(Raw& r, CellIndex keep, CellIndex gone) {
  if (keep == gone) return;
  if (gone < keep) std::swap(keep, gone);
  auto fix = [&](CellIndex& v) {
    if (v == gone) v = keep;
    else if (v > gone) --v;
  };
  for (auto& e : r.edges) {
    fix(e.from);
    fix(e.to);
  }
  r.vimg.erase(r.vimg.begin() + gone);
}

// Identifies signed edge t with s (same label required).
inline void merge_edges(Raw& r, SignedEdge s, SignedEdge t) {
  if (s.edge == t.edge) return;
  CellIndex s_from = r.origin(s), s_to = r.origin(s.inverse());
  CellIndex t_from = r.origin(t), t_to = r.origin(t.inverse());
  bool flip = s.reversed != t.reversed;
  CellIndex gone = t.edge;
  CellIndex keep = s.edge;
  for (auto& f : r.faces)
    for (auto& x : f.over) {
      if (x.edge == gone) x = {keep, x.reversed != flip};
    }
  for (auto& f : r.faces)
    for (auto& x : f.over)
      if (x.edge > gone) --x.edge;
  r.edges.erase(r.edges.begin() + gone);
  // Endpoints: renumber carefully since merging shifts indices.
  std::vector<std::pair<CellIndex, CellIndex>> pairs{{s_from, t_from},
                                                     {s_to, t_to}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [a, b] = pairs[i];
    if (a == b) continue;
    CellIndex lo = std::min(a, b), hi = std::max(a, b);
    merge_vertices(r, lo, hi);
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      for (CellIndex* v : {&pairs[j].first, &pairs[j].second}) {
        if (*v == hi) *v = lo;
        else if (*v > hi) --*v;
      }
  }
}

// One elementary fold; false when the map is already an immersion.
inline bool fold_once(Raw& r, std::size_t& face_merges) {
  std::map<std::pair<CellIndex, std::uint32_t>, SignedEdge> ends;
  for (CellIndex e = 0; e < r.edges.size(); ++e) {
    for (bool rev : {false, true}) {
      SignedEdge s{e, rev};
      auto key = std::pair{r.origin(s), r.label_of(s)};
      auto [it, fresh] = ends.insert({key, s});
      if (!fresh) {
        merge_edges(r, it->second, s);
        return true;
      }
    }
  }
  for (std::size_t g = 0; g < r.faces.size(); ++g) {
    for (std::size_t h = g + 1; h < r.faces.size(); ++h) {
      if (r.faces[g].image != r.faces[h].image) continue;
      bool share = false;
      for (std::size_t c = 0; c < r.faces[g].over.size(); ++c)
        if (r.origin(r.faces[g].over[c]) == r.origin(r.faces[h].over[c]))
          share = true;
      if (!share) continue;
      for (std::size_t c = 0; c < r.faces[g].over.size(); ++c) {
        if (r.faces[g].over[c] != r.faces[h].over[c]) {
          merge_edges(r, r.faces[g].over[c], r.faces[h].over[c]);
          return true;
        }
      }
      r.faces.erase(r.faces.begin() + static_cast<long>(h));
      ++face_merges;
      return true;
    }
  }
  return false;
}

}  // namespace detail

struct FoldOutcome {
  CellMap folded;
  std::size_t face_merges = 0;
};

// Folds one identification at a time, rescanning from scratch.
inline FoldOutcome fold(const CellMap& m) {
  Raw r = to_raw(m);
  FoldOutcome out;
  while (detail::fold_once(r, out.face_merges)) {
  }
  out.folded = from_raw(r);
  return out;
}

// Exhaustive search for a vertex bijection carrying one immersion onto the
// other over the target. Faces compare by their sequences over the target
// word, so a face may be matched with a reflected copy.
inline bool isomorphic(const CellMap& a, const CellMap& b) {
  Raw x = to_raw(a), y = to_raw(b);
  if (x.vimg.size() != y.vimg.size() || x.edges.size() != y.edges.size() ||
      x.faces.size() != y.faces.size())
    return false;
  const std::size_t n = x.vimg.size();
  using EdgeKey = std::tuple<CellIndex, CellIndex, std::uint32_t>;
  // Edges are compared with their direction matching the image edge.
  auto edge_key = [](CellIndex from, CellIndex to, std::uint32_t label) {
    if (label & 1u) return EdgeKey{to, from, label ^ 1u};
    return EdgeKey{from, to, label};
  };
  std::multiset<EdgeKey> y_edges;
  for (auto& e : y.edges) y_edges.insert(edge_key(e.from, e.to, e.label));
  std::multiset<std::vector<std::uint64_t>> y_faces;
  auto face_key = [](const Raw& r, const Raw::F& f,
                     const std::vector<CellIndex>& phi) {
    std::vector<std::uint64_t> k{f.image};
    for (auto s : f.over) {
      auto o = phi[r.origin(s)];
      auto t = phi[r.origin(s.inverse())];
      k.push_back((std::uint64_t{o} << 40) | (std::uint64_t{t} << 20) |
                  r.label_of(s));
    }
    return k;
  };
  std::vector<CellIndex> id(n);
  for (CellIndex i = 0; i < n; ++i) id[i] = i;
  for (auto& f : y.faces) y_faces.insert(face_key(y, f, id));

  std::vector<CellIndex> phi(n);
  std::vector<bool> used(n, false);
  auto complete = [&]() {
    std::multiset<EdgeKey> edges;
    for (auto& e : x.edges)
      edges.insert(edge_key(phi[e.from], phi[e.to], e.label));
    if (edges != y_edges) return false;
    std::multiset<std::vector<std::uint64_t>> faces;
    for (auto& f : x.faces) faces.insert(face_key(x, f, phi));
    return faces == y_faces;
  };
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return complete();
    for (CellIndex j = 0; j < n; ++j) {
      if (used[j] || x.vimg[i] != y.vimg[j]) continue;
      phi[i] = j;
      bool ok = true;
      // partial edge check on already assigned endpoints
      for (auto& e : x.edges) {
        if (e.from > i || e.to > i) continue;
        if (e.from != i && e.to != i) continue;
        if (!y_edges.contains(edge_key(phi[e.from], phi[e.to], e.label))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[j] = true;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace oracle
