#include <algorithm>
#include <cstdio>
#include <tuple>

#include "npi/forest.hpp"
#include "skeleton.hpp"

namespace npi {

namespace detail {

namespace {

void put_varint(std::string& out, std::uint64_t x) {
  while (x >= 0x80) {
    out.push_back(static_cast<char>((x & 0x7f) | 0x80));
    x >>= 7;
  }
  out.push_back(static_cast<char>(x));
}

constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);

// Breadth-first numbering from base, visiting labels in increasing order.
// Unique because the skeleton is deterministic.
void number_from(const Skeleton& s, CellIndex base,
                 std::vector<std::uint32_t>& index,
                 std::vector<CellIndex>& order) {
  index.assign(s.vertex_count(), kUnset);
  order.clear();
  index[base] = 0;
  order.push_back(base);
  for (std::size_t head = 0; head < order.size(); ++head) {
    CellIndex v = order[head];
    for (std::uint32_t l = 0; l < s.labels; ++l) {
      auto t = s.step(v, l);
      if (t == kNone || index[t] != kUnset) continue;
      index[t] = static_cast<std::uint32_t>(order.size());
      order.push_back(static_cast<CellIndex>(t));
    }
  }
}

}  // namespace

std::size_t Skeleton::edge_count() const {
  std::size_t ends = 0;
  for (auto t : next)
    if (t != kNone) ++ends;
  return ends / 2;
}

Skeleton Skeleton::from_map(const CellMap& m) {
  const TwoComplex& dom = *m.domain;
  const TwoComplex& cod = *m.codomain;
  if (!is_connected(dom))
    throw Error(ErrorCode::disconnected,
                "canonical_key: domain is not connected");
  Skeleton s;
  s.labels = static_cast<std::uint32_t>(2 * cod.edge_count());
  for (CellIndex v = 0; v < dom.vertex_count(); ++v)
    s.add_vertex(m.vertex_map[v]);
  for (CellIndex e = 0; e < dom.edge_count(); ++e) {
    const Edge& edge = dom.edge(e);
    auto label = m.edge_map[e].label();
    auto& fwd = s.next[edge.from * s.labels + label];
    auto& back = s.next[edge.to * s.labels + (label ^ 1u)];
    if (fwd != kNone || back != kNone)
      throw Error(ErrorCode::not_immersion,
                  "canonical_key: edges fold at edge " + edge.id);
    fwd = static_cast<std::int32_t>(edge.to);
    back = static_cast<std::int32_t>(edge.from);
  }
  std::vector<std::tuple<CellIndex, CellIndex, CellIndex>> seen;
  for (CellIndex f = 0; f < dom.face_count(); ++f) {
    const auto& b = dom.face(f).boundary;
    const FaceImage& img = m.face_map[f];
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (image_corner(img, b.size(), i) == 0) {
        s.faces.push_back({img.face, dom.origin(b[i])});
        seen.push_back({img.face, dom.origin(b[i]), f});
        break;
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (std::get<0>(seen[i]) == std::get<0>(seen[i - 1]) &&
        std::get<1>(seen[i]) == std::get<1>(seen[i - 1]))
      throw Error(ErrorCode::not_immersion,
                  "canonical_key: faces " + dom.face(std::get<2>(seen[i])).id +
                      " and " + dom.face(std::get<2>(seen[i - 1])).id +
                      " share a corner");
  return s;
}

std::pair<std::string, CellIndex> Skeleton::canonical_encoding(
    const TwoComplex& target) const {
  const auto nv = vertex_count();
  // Bases are restricted to vertices whose local signature is least; the
  // signature is invariant under isomorphism, so the minimum still is.
  std::vector<std::uint32_t> corners(nv, 0);
  for (auto [face, anchor] : faces) {
    CellIndex at = anchor;
    for (SignedEdge step : target.face(face).boundary) {
      ++corners[at];
      at = static_cast<CellIndex>(this->step(at, step.label()));
    }
  }
  auto signature = [&](CellIndex v) {
    std::uint64_t mask = 0;
    for (std::uint32_t l = 0; l < labels; ++l)
      if (step(v, l) != kNone) mask |= std::uint64_t{1} << (l % 64);
    return std::tuple{image[v], corners[v], mask};
  };
  std::vector<CellIndex> bases;
  auto best_sig = signature(0);
  for (CellIndex v = 0; v < nv; ++v) {
    auto sig = signature(v);
    if (sig < best_sig) {
      best_sig = sig;
      bases.clear();
    }
    if (sig == best_sig) bases.push_back(v);
  }

  std::vector<std::uint32_t> index;
  std::vector<CellIndex> order;
  std::vector<std::pair<CellIndex, CellIndex>> renamed;
  std::string best, scratch;
  CellIndex best_base = 0;
  bool have = false;
  for (CellIndex base : bases) {
    number_from(*this, base, index, order);
    scratch.clear();
    put_varint(scratch, nv);
    put_varint(scratch, faces.size());
    for (CellIndex v : order) {
      put_varint(scratch, image[v]);
      for (std::uint32_t l = 0; l < labels; ++l) {
        auto t = step(v, l);
        put_varint(scratch, t == kNone ? 0 : index[t] + 1);
      }
    }
    renamed.clear();
    for (auto [face, anchor] : faces) renamed.push_back({face, index[anchor]});
    std::sort(renamed.begin(), renamed.end());
    for (auto [face, anchor] : renamed) {
      put_varint(scratch, face);
      put_varint(scratch, anchor);
    }
    if (!have || scratch < best) {
      best.swap(scratch);
      best_base = base;
      have = true;
    }
  }
  return {std::move(best), best_base};
}

namespace {

CellMap build_map(const Skeleton& s, std::shared_ptr<const TwoComplex> target,
                  const std::vector<std::uint32_t>& index,
                  const std::vector<CellIndex>& order) {
  const auto labels = s.labels;
  auto out = std::make_shared<TwoComplex>();
  CellMap m;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out->add_vertex("v" + std::to_string(i));
    m.vertex_map.push_back(s.image[order[i]]);
  }
  // (new vertex, label) -> signed edge of the relabeled complex
  std::vector<SignedEdge> lift(order.size() * labels);
  std::vector<bool> made(order.size() * labels, false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::uint32_t l = 0; l < labels; ++l) {
      auto t = s.step(order[i], l);
      if (t == kNone || made[i * labels + l]) continue;
      auto j = index[t];
      SignedEdge img = SignedEdge::from_label(l);
      CellIndex from = static_cast<CellIndex>(i), to = j;
      if (img.reversed) {
        std::swap(from, to);
        img = img.inverse();
      }
      auto e = out->add_edge("e" + std::to_string(out->edge_count()), from, to);
      m.edge_map.push_back(img);
      lift[from * labels + img.label()] = {e, false};
      lift[to * labels + img.inverse().label()] = {e, true};
      made[from * labels + img.label()] = true;
      made[to * labels + img.inverse().label()] = true;
    }
  }
  std::vector<std::pair<CellIndex, CellIndex>> renamed;
  for (auto [face, anchor] : s.faces) renamed.push_back({face, index[anchor]});
  std::sort(renamed.begin(), renamed.end());
  for (std::size_t k = 0; k < renamed.size(); ++k) {
    auto [image_face, anchor] = renamed[k];
    std::vector<SignedEdge> boundary;
    CellIndex at = anchor;
    for (SignedEdge step : target->face(image_face).boundary) {
      SignedEdge e = lift[at * labels + step.label()];
      boundary.push_back(e);
      at = out->terminus(e);
    }
    out->add_face("f" + std::to_string(k), std::move(boundary));
    m.face_map.push_back({image_face, 0, 1});
  }
  m.domain = std::move(out);
  m.codomain = std::move(target);
  return m;
}

}  // namespace

CellMap Skeleton::relabel(std::shared_ptr<const TwoComplex> target,
                          CellIndex base) const {
  std::vector<std::uint32_t> index;
  std::vector<CellIndex> order;
  number_from(*this, base, index, order);
  return build_map(*this, std::move(target), index, order);
}

CellMap Skeleton::to_map(std::shared_ptr<const TwoComplex> target) const {
  std::vector<std::uint32_t> index(vertex_count());
  std::vector<CellIndex> order(vertex_count());
  for (CellIndex v = 0; v < vertex_count(); ++v) index[v] = order[v] = v;
  return build_map(*this, std::move(target), index, order);
}

}  // namespace detail

std::string CanonicalKey::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

std::string CanonicalKey::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CanonicalForm canonical_form(const CellMap& immersion) {
  auto s = detail::Skeleton::from_map(immersion);
  auto [bytes, base] = s.canonical_encoding(*immersion.codomain);
  CanonicalForm form;
  form.key.bytes = std::move(bytes);
  form.relabeled = s.relabel(immersion.codomain, base);
  return form;
}

CanonicalKey canonical_key(const CellMap& immersion) {
  auto s = detail::Skeleton::from_map(immersion);
  return CanonicalKey{s.canonical_encoding(*immersion.codomain).first};
}

}  // namespace npi
