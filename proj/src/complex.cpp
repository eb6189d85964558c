#include "npi/complex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace npi {

namespace {

std::size_t mod(std::int64_t x, std::size_t n) {
  auto m = static_cast<std::int64_t>(n);
  return static_cast<std::size_t>(((x % m) + m) % m);
}

}  // namespace

CellIndex TwoComplex::add_vertex(std::string id) {
  vertices_.push_back(std::move(id));
  return static_cast<CellIndex>(vertices_.size() - 1);
}

CellIndex TwoComplex::add_edge(std::string id, CellIndex from, CellIndex to) {
  edges_.push_back({std::move(id), from, to});
  return static_cast<CellIndex>(edges_.size() - 1);
}

CellIndex TwoComplex::add_face(std::string id,
                               std::vector<SignedEdge> boundary) {
  faces_.push_back({std::move(id), std::move(boundary)});
  return static_cast<CellIndex>(faces_.size() - 1);
}

std::optional<CellIndex> TwoComplex::find_vertex(std::string_view id) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<CellIndex>(it - vertices_.begin());
}

std::optional<CellIndex> TwoComplex::find_edge(std::string_view id) const {
  auto it = std::find_if(edges_.begin(), edges_.end(),
                         [&](const Edge& e) { return e.id == id; });
  if (it == edges_.end()) return std::nullopt;
  return static_cast<CellIndex>(it - edges_.begin());
}

std::optional<CellIndex> TwoComplex::find_face(std::string_view id) const {
  auto it = std::find_if(faces_.begin(), faces_.end(),
                         [&](const Face& f) { return f.id == id; });
  if (it == faces_.end()) return std::nullopt;
  return static_cast<CellIndex>(it - faces_.begin());
}

std::vector<SignedEdge> TwoComplex::outgoing(CellIndex v) const {
  std::vector<SignedEdge> out;
  for (CellIndex e = 0; e < edges_.size(); ++e) {
    if (edges_[e].from == v) out.push_back({e, false});
    if (edges_[e].to == v) out.push_back({e, true});
  }
  return out;
}

bool operator==(const Edge& a, const Edge& b) {
  return a.id == b.id && a.from == b.from && a.to == b.to;
}

bool operator==(const Face& a, const Face& b) {
  return a.id == b.id && a.boundary == b.boundary;
}

bool operator==(const TwoComplex& a, const TwoComplex& b) {
  return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ &&
         a.faces_ == b.faces_;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.message;
    if (!v.cells.empty()) {
      os << " [";
      for (std::size_t i = 0; i < v.cells.size(); ++i)
        os << (i ? ", " : "") << v.cells[i];
      os << "]";
    }
    os << "\n";
  }
  return os.str();
}

bool canonical_id_less(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

ValidationReport validate_complex(const TwoComplex& c) {
  ValidationReport report;
  auto add = [&](std::string msg, std::vector<std::string> cells) {
    report.violations.push_back({std::move(msg), std::move(cells)});
  };
  if (c.empty()) {
    add("empty complex", {});
    return report;
  }

  auto check_unique = [&](std::vector<std::string> ids, const char* kind) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
      if (ids[i] == ids[i - 1])
        add(std::string("duplicate ") + kind + " id", {ids[i]});
  };
  check_unique({c.vertices().begin(), c.vertices().end()}, "vertex");
  {
    std::vector<std::string> ids;
    for (const auto& e : c.edges()) ids.push_back(e.id);
    check_unique(std::move(ids), "edge");
  }
  {
    std::vector<std::string> ids;
    for (const auto& f : c.faces()) ids.push_back(f.id);
    check_unique(std::move(ids), "face");
  }

  const auto nv = c.vertex_count();
  bool edges_ok = true;
  for (const auto& e : c.edges()) {
    if (e.from >= nv || e.to >= nv) {
      add("edge endpoint references a missing vertex", {e.id});
      edges_ok = false;
    }
  }

  for (const auto& f : c.faces()) {
    if (f.boundary.empty()) {
      add("face boundary is empty", {f.id});
      continue;
    }
    bool refs_ok = true;
    for (auto s : f.boundary) {
      if (s.edge >= c.edge_count()) {
        add("face boundary references a missing edge", {f.id});
        refs_ok = false;
        break;
      }
    }
    if (!refs_ok || !edges_ok) continue;
    const auto len = f.boundary.size();
    for (std::size_t i = 0; i < len; ++i) {
      SignedEdge cur = f.boundary[i];
      SignedEdge next = f.boundary[(i + 1) % len];
      if (c.terminus(cur) != c.origin(next)) {
        add("face boundary is not a closed edge path at position " +
                std::to_string((i + 1) % len),
            {f.id, c.edge(cur.edge).id, c.edge(next.edge).id});
      }
    }
  }
  return report;
}

std::int64_t euler_characteristic(const TwoComplex& c) {
  return static_cast<std::int64_t>(c.vertex_count()) -
         static_cast<std::int64_t>(c.edge_count()) +
         static_cast<std::int64_t>(c.face_count());
}

bool is_connected(const TwoComplex& c) {
  const auto n = c.vertex_count();
  if (n == 0) return false;
  std::vector<CellIndex> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](CellIndex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& e : c.edges()) {
    auto a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

std::int64_t graph_rank(const TwoComplex& c) {
  if (!is_connected(c))
    throw Error(ErrorCode::disconnected, "graph_rank: complex is disconnected");
  return static_cast<std::int64_t>(c.edge_count()) -
         static_cast<std::int64_t>(c.vertex_count()) + 1;
}

std::vector<std::size_t> edge_traversal_counts(const TwoComplex& c) {
  std::vector<std::size_t> counts(c.edge_count(), 0);
  for (const auto& f : c.faces())
    for (auto s : f.boundary) ++counts[s.edge];
  return counts;
}

std::vector<CellIndex> free_edges(const TwoComplex& c) {
  std::vector<CellIndex> out;
  auto counts = edge_traversal_counts(c);
  for (CellIndex e = 0; e < counts.size(); ++e)
    if (counts[e] == 1) out.push_back(e);
  return out;
}

std::vector<CellIndex> isolated_edges(const TwoComplex& c) {
  std::vector<CellIndex> out;
  auto counts = edge_traversal_counts(c);
  for (CellIndex e = 0; e < counts.size(); ++e)
    if (counts[e] == 0) out.push_back(e);
  return out;
}

std::string signed_edge_ref(const TwoComplex& c, SignedEdge s) {
  const auto& id = c.edge(s.edge).id;
  return s.reversed ? "-" + id : id;
}

LinkGraph link_graph(const TwoComplex& c, CellIndex v) {
  if (v >= c.vertex_count())
    throw Error(ErrorCode::invalid_argument, "link_graph: unknown vertex");
  LinkGraph link;
  link.vertex = v;
  link.nodes = c.outgoing(v);
  for (CellIndex f = 0; f < c.face_count(); ++f) {
    const auto& b = c.face(f).boundary;
    const auto len = b.size();
    for (std::size_t i = 0; i < len; ++i) {
      if (c.origin(b[i]) != v) continue;
      link.corners.push_back({f, static_cast<std::uint32_t>(i),
                              b[(i + len - 1) % len].inverse(), b[i]});
    }
  }
  return link;
}

// ---------------------------------------------------------------------------

SignedEdge expected_boundary_image(const TwoComplex& codomain,
                                   const FaceImage& image, std::size_t i) {
  const auto& target = codomain.face(image.face).boundary;
  const auto len = target.size();
  const auto r = static_cast<std::int64_t>(image.rotation);
  const auto idx = static_cast<std::int64_t>(i);
  if (image.orientation >= 0) return target[mod(idx + r, len)];
  return target[mod(r - idx, len)].inverse();
}

std::uint32_t image_corner(const FaceImage& image, std::size_t length,
                           std::size_t i) {
  const auto r = static_cast<std::int64_t>(image.rotation);
  const auto idx = static_cast<std::int64_t>(i);
  if (image.orientation >= 0)
    return static_cast<std::uint32_t>(mod(idx + r, length));
  return static_cast<std::uint32_t>(mod(r - idx + 1, length));
}

SignedEdge source_edge_over(const Face& source, const FaceImage& image,
                            std::size_t m) {
  const auto len = source.boundary.size();
  const auto r = static_cast<std::int64_t>(image.rotation);
  const auto pos = static_cast<std::int64_t>(m);
  if (image.orientation >= 0) return source.boundary[mod(pos - r, len)];
  return source.boundary[mod(r - pos, len)].inverse();
}

ValidationReport validate_map(const CellMap& m) {
  ValidationReport report;
  auto add = [&](std::string msg, std::vector<std::string> cells) {
    report.violations.push_back({std::move(msg), std::move(cells)});
  };
  if (!m.domain || !m.codomain) {
    add("map is missing its domain or codomain", {});
    return report;
  }
  const TwoComplex& dom = *m.domain;
  const TwoComplex& cod = *m.codomain;
  if (m.vertex_map.size() != dom.vertex_count() ||
      m.edge_map.size() != dom.edge_count() ||
      m.face_map.size() != dom.face_count()) {
    add("map does not assign every domain cell", {});
    return report;
  }
  for (CellIndex v = 0; v < dom.vertex_count(); ++v)
    if (m.vertex_map[v] >= cod.vertex_count())
      add("vertex image is not a codomain vertex", {dom.vertex_id(v)});
  for (CellIndex e = 0; e < dom.edge_count(); ++e)
    if (m.edge_map[e].edge >= cod.edge_count())
      add("edge image is not a codomain edge", {dom.edge(e).id});
  for (CellIndex f = 0; f < dom.face_count(); ++f)
    if (m.face_map[f].face >= cod.face_count())
      add("face image is not a codomain face", {dom.face(f).id});
  if (!report.ok()) return report;

  for (CellIndex e = 0; e < dom.edge_count(); ++e) {
    const Edge& edge = dom.edge(e);
    SignedEdge img = m.edge_map[e];
    if (edge.from >= dom.vertex_count() || edge.to >= dom.vertex_count())
      continue;
    if (m.vertex_map[edge.from] != cod.origin(img) ||
        m.vertex_map[edge.to] != cod.terminus(img)) {
      add("edge image does not respect endpoints", {edge.id});
    }
  }

  for (CellIndex f = 0; f < dom.face_count(); ++f) {
    const Face& face = dom.face(f);
    const FaceImage& img = m.face_map[f];
    const auto& target = cod.face(img.face).boundary;
    if (img.orientation != 1 && img.orientation != -1) {
      add("face orientation must be +1 or -1", {face.id});
      continue;
    }
    if (face.boundary.size() != target.size()) {
      add("face boundary length differs from its image",
          {face.id, cod.face(img.face).id});
      continue;
    }
    if (img.rotation >= target.size()) {
      add("face rotation out of range", {face.id});
      continue;
    }
    for (std::size_t i = 0; i < face.boundary.size(); ++i) {
      if (face.boundary[i].edge >= dom.edge_count()) continue;
      if (m.map_edge(face.boundary[i]) !=
          expected_boundary_image(cod, img, i)) {
        add("face boundary disagrees with its image at index " +
                std::to_string(i),
            {face.id, std::to_string(i)});
      }
    }
  }
  return report;
}

ImmersionReport check_immersion(const CellMap& m) {
  auto valid = validate_map(m);
  if (!valid.ok())
    throw Error(ErrorCode::invalid_argument,
                "is_immersion: invalid map\n" + valid.to_string());
  const TwoComplex& dom = *m.domain;
  const TwoComplex& cod = *m.codomain;
  ImmersionReport report;

  // Edge-ends: (vertex, image label) must be unique.
  std::unordered_map<std::uint64_t, SignedEdge> ends;
  for (CellIndex e = 0; e < dom.edge_count(); ++e) {
    for (bool rev : {false, true}) {
      SignedEdge s{e, rev};
      CellIndex v = dom.origin(s);
      std::uint64_t key =
          (static_cast<std::uint64_t>(v) << 32) | m.map_edge(s).label();
      auto [it, inserted] = ends.emplace(key, s);
      if (!inserted) {
        report.immersion = false;
        report.violations.push_back(
            {"link nodes collide at vertex " + dom.vertex_id(v),
             {signed_edge_ref(dom, it->second), signed_edge_ref(dom, s)}});
      }
    }
  }

  // Corners: (vertex, image face, image corner) must be unique.
  struct CornerRef {
    CellIndex face;
    std::size_t position;
  };
  std::unordered_map<std::uint64_t, CornerRef> corners;
  for (CellIndex f = 0; f < dom.face_count(); ++f) {
    const auto& b = dom.face(f).boundary;
    const FaceImage& img = m.face_map[f];
    for (std::size_t i = 0; i < b.size(); ++i) {
      CellIndex v = dom.origin(b[i]);
      std::uint64_t key = (static_cast<std::uint64_t>(v) << 40) |
                          (static_cast<std::uint64_t>(img.face) << 20) |
                          image_corner(img, b.size(), i);
      auto [it, inserted] = corners.emplace(key, CornerRef{f, i});
      if (!inserted) {
        report.immersion = false;
        report.violations.push_back(
            {"link corners collide at vertex " + dom.vertex_id(v),
             {dom.face(it->second.face).id + "@" +
                  std::to_string(it->second.position),
              dom.face(f).id + "@" + std::to_string(i)}});
      }
    }
  }
  (void)cod;
  return report;
}

CellMap identity_map(std::shared_ptr<const TwoComplex> c) {
  CellMap m;
  m.domain = c;
  m.codomain = c;
  m.vertex_map.resize(c->vertex_count());
  std::iota(m.vertex_map.begin(), m.vertex_map.end(), 0);
  for (CellIndex e = 0; e < c->edge_count(); ++e)
    m.edge_map.push_back({e, false});
  for (CellIndex f = 0; f < c->face_count(); ++f)
    m.face_map.push_back({f, 0, 1});
  return m;
}

FaceImage compose_face_images(const FaceImage& outer, const FaceImage& inner,
                              std::size_t length) {
  const auto r1 = static_cast<std::int64_t>(inner.rotation);
  const auto r2 = static_cast<std::int64_t>(outer.rotation);
  FaceImage out;
  out.face = outer.face;
  if (outer.orientation >= 0) {
    out.rotation = static_cast<std::uint32_t>(mod(r1 + r2, length));
    out.orientation = inner.orientation;
  } else {
    out.rotation = static_cast<std::uint32_t>(mod(r2 - r1, length));
    out.orientation = -inner.orientation;
  }
  return out;
}

CellMap compose(const CellMap& g, const CellMap& f) {
  if (f.codomain != g.domain && !(f.codomain && g.domain &&
                                  *f.codomain == *g.domain))
    throw Error(ErrorCode::invalid_argument,
                "compose: codomain of the inner map is not the domain of "
                "the outer map");
  CellMap out;
  out.domain = f.domain;
  out.codomain = g.codomain;
  for (auto v : f.vertex_map) out.vertex_map.push_back(g.vertex_map[v]);
  for (auto s : f.edge_map) out.edge_map.push_back(g.map_edge(s));
  for (CellIndex face = 0; face < f.face_map.size(); ++face) {
    const auto& inner = f.face_map[face];
    out.face_map.push_back(compose_face_images(
        g.face_map[inner.face], inner,
        f.domain->face(face).boundary.size()));
  }
  return out;
}

}  // namespace npi
