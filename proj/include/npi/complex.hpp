#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace npi {

using CellIndex = std::uint32_t;

enum class ErrorCode {
  invalid_argument = 1,
  parse_error,
  unsupported_format,
  dangling_reference,
  not_immersion,
  disconnected,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// An edge traversed in one of its two directions. The involution
// `inverse` flips direction and never fixes a signed edge.
struct SignedEdge {
  CellIndex edge = 0;
  bool reversed = false;

  constexpr SignedEdge inverse() const noexcept { return {edge, !reversed}; }
  // Dense label 2*edge + reversed; used as a sort key for edge-ends.
  constexpr std::uint32_t label() const noexcept {
    return 2 * edge + (reversed ? 1u : 0u);
  }
  static constexpr SignedEdge from_label(std::uint32_t l) noexcept {
    return {l / 2, (l & 1u) != 0};
  }
  friend constexpr bool operator==(SignedEdge, SignedEdge) = default;
  friend constexpr auto operator<=>(SignedEdge a, SignedEdge b) {
    return a.label() <=> b.label();
  }
};

struct Edge {
  std::string id;
  CellIndex from = 0;
  CellIndex to = 0;
};

struct Face {
  std::string id;
  std::vector<SignedEdge> boundary;
};

// Finite combinatorial 2-complex. Cells are addressed by dense indices;
// ids are opaque strings carried for serialization. The builder methods
// do not check references, so that malformed input can be represented
// and reported by validate_complex().
class TwoComplex {
 public:
  CellIndex add_vertex(std::string id);
  CellIndex add_edge(std::string id, CellIndex from, CellIndex to);
  CellIndex add_face(std::string id, std::vector<SignedEdge> boundary);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t face_count() const noexcept { return faces_.size(); }
  bool empty() const noexcept {
    return vertices_.empty() && edges_.empty() && faces_.empty();
  }

  const std::string& vertex_id(CellIndex v) const { return vertices_[v]; }
  const Edge& edge(CellIndex e) const { return edges_[e]; }
  const Face& face(CellIndex f) const { return faces_[f]; }

  std::span<const std::string> vertices() const noexcept { return vertices_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Face> faces() const noexcept { return faces_; }

  CellIndex origin(SignedEdge s) const {
    const Edge& e = edges_[s.edge];
    return s.reversed ? e.to : e.from;
  }
  CellIndex terminus(SignedEdge s) const {
    const Edge& e = edges_[s.edge];
    return s.reversed ? e.from : e.to;
  }

  std::optional<CellIndex> find_vertex(std::string_view id) const;
  std::optional<CellIndex> find_edge(std::string_view id) const;
  std::optional<CellIndex> find_face(std::string_view id) const;

  // Signed edges leaving v: e for edges starting at v, inverse(e) for
  // edges ending at v. A loop contributes both.
  std::vector<SignedEdge> outgoing(CellIndex v) const;

  friend bool operator==(const TwoComplex&, const TwoComplex&);

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
};

bool operator==(const Edge& a, const Edge& b);
bool operator==(const Face& a, const Face& b);

struct Violation {
  std::string message;
  std::vector<std::string> cells;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

// Ordering used wherever cells are sorted "by id": shorter ids first, then
// lexicographic, so that v2 sorts before v10.
bool canonical_id_less(std::string_view a, std::string_view b);

ValidationReport validate_complex(const TwoComplex& c);

// |V| - |E| + |F|.
std::int64_t euler_characteristic(const TwoComplex& c);

// 1-skeleton connectivity. The empty complex is not connected.
bool is_connected(const TwoComplex& c);

// First Betti number of the 1-skeleton. Throws Error(disconnected).
std::int64_t graph_rank(const TwoComplex& c);

// Number of times each edge is traversed by face boundaries, both
// directions counted.
std::vector<std::size_t> edge_traversal_counts(const TwoComplex& c);

// Edges traversed exactly once. Sorted by index.
std::vector<CellIndex> free_edges(const TwoComplex& c);

// Edges bounding no face. Sorted by index.
std::vector<CellIndex> isolated_edges(const TwoComplex& c);

std::string signed_edge_ref(const TwoComplex& c, SignedEdge s);

// Corner `position` of a face sits at origin(boundary[position]) and joins
// the edge-ends inverse(boundary[position - 1]) and boundary[position].
struct LinkCorner {
  CellIndex face = 0;
  std::uint32_t position = 0;
  SignedEdge incoming_end;
  SignedEdge outgoing_end;
};

// Whitehead graph at a vertex: nodes are the edge-ends leaving it, and
// there is one corner edge per face-boundary corner at it.
struct LinkGraph {
  CellIndex vertex = 0;
  std::vector<SignedEdge> nodes;
  std::vector<LinkCorner> corners;
};

LinkGraph link_graph(const TwoComplex& c, CellIndex v);

// ---------------------------------------------------------------------------
// Combinatorial maps
// ---------------------------------------------------------------------------

// Image of a face. With orientation +1, boundary position i of the source
// face lands on position (i + rotation) mod L of the image; with -1 it
// lands on inverse(image boundary[(rotation - i) mod L]).
struct FaceImage {
  CellIndex face = 0;
  std::uint32_t rotation = 0;
  int orientation = 1;
  friend bool operator==(const FaceImage&, const FaceImage&) = default;
};

struct CellMap {
  std::shared_ptr<const TwoComplex> domain;
  std::shared_ptr<const TwoComplex> codomain;
  std::vector<CellIndex> vertex_map;
  std::vector<SignedEdge> edge_map;
  std::vector<FaceImage> face_map;

  SignedEdge map_edge(SignedEdge s) const {
    SignedEdge img = edge_map[s.edge];
    return s.reversed ? img.inverse() : img;
  }
};

// Codomain signed edge that boundary position i of `face` must map to.
SignedEdge expected_boundary_image(const TwoComplex& codomain,
                                   const FaceImage& image, std::size_t i);

// Codomain corner index that corner i of a face lands on.
std::uint32_t image_corner(const FaceImage& image, std::size_t length,
                           std::size_t i);

// Position in the source face of the edge lying over codomain boundary
// position m, and whether it is traversed backwards.
SignedEdge source_edge_over(const Face& source, const FaceImage& image,
                            std::size_t m);

ValidationReport validate_map(const CellMap& m);

struct ImmersionReport {
  bool immersion = true;
  std::vector<Violation> violations;
};

// Link injectivity on nodes and corner edges at every domain vertex.
ImmersionReport check_immersion(const CellMap& m);
inline bool is_immersion(const CellMap& m) {
  return check_immersion(m).immersion;
}

CellMap identity_map(std::shared_ptr<const TwoComplex> c);

// g after f; requires f.codomain to be g.domain (same object).
CellMap compose(const CellMap& g, const CellMap& f);

// Composition of face images: first `inner`, then `outer` on a face of
// boundary length `length`.
FaceImage compose_face_images(const FaceImage& outer, const FaceImage& inner,
                              std::size_t length);

}  // namespace npi
