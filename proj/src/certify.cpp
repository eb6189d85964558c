#include "npi/certify.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace npi {

using nlohmann::json;

namespace {

Error schema_error(const std::string& what) {
  return Error(ErrorCode::parse_error, "schema: " + what);
}

template <typename IdOf>
std::vector<CellIndex> sorted_by_id(std::size_t n, IdOf id_of) {
  std::vector<CellIndex> order(n);
  std::iota(order.begin(), order.end(), CellIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](CellIndex a, CellIndex b) {
    return canonical_id_less(id_of(a), id_of(b));
  });
  return order;
}

// Targets keep their index order: canonical keys refer to target cells by
// index, so reordering a target would change every key over it.
json complex_json(const TwoComplex& c, bool sort_cells) {
  auto order = [&](std::size_t n, auto id_of) {
    if (sort_cells) return sorted_by_id(n, id_of);
    std::vector<CellIndex> same(n);
    std::iota(same.begin(), same.end(), CellIndex{0});
    return same;
  };
  json out = json::object();
  json vertices = json::array();
  for (auto v : order(c.vertex_count(),
                      [&](CellIndex i) { return c.vertex_id(i); }))
    vertices.push_back(c.vertex_id(v));
  json edges = json::array();
  for (auto e : order(c.edge_count(),
                      [&](CellIndex i) { return c.edge(i).id; })) {
    const Edge& edge = c.edge(e);
    edges.push_back({{"id", edge.id},
                     {"from", c.vertex_id(edge.from)},
                     {"to", c.vertex_id(edge.to)}});
  }
  json faces = json::array();
  for (auto f : order(c.face_count(),
                      [&](CellIndex i) { return c.face(i).id; })) {
    json boundary = json::array();
    for (auto s : c.face(f).boundary) boundary.push_back(signed_edge_ref(c, s));
    faces.push_back({{"id", c.face(f).id}, {"boundary", std::move(boundary)}});
  }
  out["vertices"] = std::move(vertices);
  out["edges"] = std::move(edges);
  out["faces"] = std::move(faces);
  return out;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw schema_error(where + " is missing \"" + key + "\"");
  return j.at(key);
}

std::string string_field(const json& j, const char* key,
                         const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string())
    throw schema_error(where + "." + key + " must be a string");
  return v.get<std::string>();
}

struct IdIndex {
  std::unordered_map<std::string, CellIndex> vertices, edges, faces;
};

SignedEdge parse_signed_ref(const std::string& ref, const IdIndex& ids,
                            const std::string& where) {
  bool reversed = !ref.empty() && ref.front() == '-';
  std::string id = reversed ? ref.substr(1) : ref;
  auto it = ids.edges.find(id);
  if (it == ids.edges.end())
    throw Error(ErrorCode::dangling_reference,
                where + " references missing edge \"" + id + "\"");
  return {it->second, reversed};
}

TwoComplex complex_from(const json& j, const std::string& where,
                        IdIndex& ids) {
  if (!j.is_object()) throw schema_error(where + " must be an object");
  TwoComplex c;
  const json& vertices = field(j, "vertices", where);
  if (!vertices.is_array())
    throw schema_error(where + ".vertices must be an array");
  for (const auto& v : vertices) {
    if (!v.is_string())
      throw schema_error(where + ".vertices entries must be strings");
    auto id = v.get<std::string>();
    if (!ids.vertices.emplace(id, static_cast<CellIndex>(c.vertex_count()))
             .second)
      throw schema_error(where + " has duplicate vertex \"" + id + "\"");
    c.add_vertex(id);
  }
  const json& edges = field(j, "edges", where);
  if (!edges.is_array()) throw schema_error(where + ".edges must be an array");
  for (const auto& e : edges) {
    auto id = string_field(e, "id", where + ".edges[]");
    if (id.empty() || id.front() == '-')
      throw schema_error(where + " edge id \"" + id +
                         "\" must be nonempty and not start with '-'");
    auto endpoint = [&](const char* key) {
      auto vid = string_field(e, key, where + ".edges[" + id + "]");
      auto it = ids.vertices.find(vid);
      if (it == ids.vertices.end())
        throw Error(ErrorCode::dangling_reference,
                    where + " edge \"" + id + "\" references missing vertex \"" +
                        vid + "\"");
      return it->second;
    };
    CellIndex from = endpoint("from");
    CellIndex to = endpoint("to");
    if (!ids.edges.emplace(id, static_cast<CellIndex>(c.edge_count())).second)
      throw schema_error(where + " has duplicate edge \"" + id + "\"");
    c.add_edge(id, from, to);
  }
  const json& faces = field(j, "faces", where);
  if (!faces.is_array()) throw schema_error(where + ".faces must be an array");
  for (const auto& f : faces) {
    auto id = string_field(f, "id", where + ".faces[]");
    const json& boundary = field(f, "boundary", where + ".faces[" + id + "]");
    if (!boundary.is_array())
      throw schema_error(where + " face \"" + id + "\" boundary must be an array");
    std::vector<SignedEdge> refs;
    for (const auto& r : boundary) {
      if (!r.is_string())
        throw schema_error(where + " face \"" + id +
                           "\" boundary entries must be strings");
      refs.push_back(
          parse_signed_ref(r.get<std::string>(), ids, where + " face \"" + id + "\""));
    }
    if (!ids.faces.emplace(id, static_cast<CellIndex>(c.face_count())).second)
      throw schema_error(where + " has duplicate face \"" + id + "\"");
    c.add_face(id, std::move(refs));
  }
  return c;
}

json parse_document(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error,
                "syntax error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }
}

void check_format(const json& doc) {
  if (!doc.is_object()) throw schema_error("document must be an object");
  if (!doc.contains("format") || !doc["format"].is_string())
    throw Error(ErrorCode::unsupported_format, "document has no format tag");
  auto tag = doc["format"].get<std::string>();
  if (tag != kCertificateFormat)
    throw Error(ErrorCode::unsupported_format,
                "unsupported format \"" + tag + "\" (expected \"" +
                    std::string(kCertificateFormat) + "\")");
}

json claims_json(const Claims& c) {
  return {{"euler", c.euler},
          {"connected", c.connected},
          {"immersion", c.immersion},
          {"free_edge_count", c.free_edge_count},
          {"isolated_edge_count", c.isolated_edge_count}};
}

std::optional<Claims> claims_from(const json& doc) {
  if (!doc.is_object() || !doc.contains("claims")) return std::nullopt;
  const json& c = doc["claims"];
  try {
    Claims out;
    out.euler = c.at("euler").get<std::int64_t>();
    out.connected = c.at("connected").get<bool>();
    out.immersion = c.at("immersion").get<bool>();
    out.free_edge_count = c.at("free_edge_count").get<std::size_t>();
    out.isolated_edge_count = c.at("isolated_edge_count").get<std::size_t>();
    return out;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Claims compute_claims(const CellMap& m) {
  const TwoComplex& y = *m.domain;
  Claims c;
  c.euler = euler_characteristic(y);
  c.connected = is_connected(y);
  c.immersion = is_immersion(m);
  c.free_edge_count = free_edges(y).size();
  c.isolated_edge_count = isolated_edges(y).size();
  return c;
}

std::string complex_to_json(const TwoComplex& c) {
  return complex_json(c, false).dump(2) + "\n";
}

TwoComplex complex_from_json(std::string_view document) {
  json doc = parse_document(document);
  IdIndex ids;
  // Accept either a bare complex or a document with a "target" complex.
  if (doc.is_object() && !doc.contains("vertices") && doc.contains("target"))
    return complex_from(doc["target"], "target", ids);
  return complex_from(doc, "complex", ids);
}

std::string serialize(const CellMap& m) {
  auto report = validate_map(m);
  if (!report.ok())
    throw Error(ErrorCode::invalid_argument,
                "serialize: invalid map\n" + report.to_string());
  const TwoComplex& dom = *m.domain;
  const TwoComplex& cod = *m.codomain;
  json doc;
  doc["format"] = kCertificateFormat;
  doc["target"] = complex_json(cod, false);
  doc["source"] = complex_json(dom, true);
  json vertices = json::object(), edges = json::object(), faces = json::object();
  for (CellIndex v = 0; v < dom.vertex_count(); ++v)
    vertices[dom.vertex_id(v)] = cod.vertex_id(m.vertex_map[v]);
  for (CellIndex e = 0; e < dom.edge_count(); ++e)
    edges[dom.edge(e).id] = signed_edge_ref(cod, m.edge_map[e]);
  for (CellIndex f = 0; f < dom.face_count(); ++f) {
    const FaceImage& img = m.face_map[f];
    faces[dom.face(f).id] = {{"image", cod.face(img.face).id},
                             {"rotation", img.rotation},
                             {"orientation", img.orientation}};
  }
  doc["map"] = {{"vertices", std::move(vertices)},
                {"edges", std::move(edges)},
                {"faces", std::move(faces)}};
  doc["claims"] = claims_json(compute_claims(m));
  return doc.dump(2) + "\n";
}

CellMap deserialize(std::string_view document) {
  json doc = parse_document(document);
  check_format(doc);
  IdIndex target_ids, source_ids;
  auto target = std::make_shared<TwoComplex>(
      complex_from(field(doc, "target", "document"), "target", target_ids));
  auto source = std::make_shared<TwoComplex>(
      complex_from(field(doc, "source", "document"), "source", source_ids));
  const json& map = field(doc, "map", "document");

  CellMap m;
  m.vertex_map.resize(source->vertex_count());
  m.edge_map.resize(source->edge_count());
  m.face_map.resize(source->face_count());

  const json& vmap = field(map, "vertices", "map");
  for (CellIndex v = 0; v < source->vertex_count(); ++v) {
    const auto& id = source->vertex_id(v);
    auto img = string_field(vmap, id.c_str(), "map.vertices");
    auto it = target_ids.vertices.find(img);
    if (it == target_ids.vertices.end())
      throw Error(ErrorCode::dangling_reference,
                  "map.vertices[" + id + "] references missing target vertex \"" +
                      img + "\"");
    m.vertex_map[v] = it->second;
  }
  const json& emap = field(map, "edges", "map");
  for (CellIndex e = 0; e < source->edge_count(); ++e) {
    const auto& id = source->edge(e).id;
    m.edge_map[e] = parse_signed_ref(string_field(emap, id.c_str(), "map.edges"),
                                     target_ids, "map.edges[" + id + "]");
  }
  const json& fmap = field(map, "faces", "map");
  for (CellIndex f = 0; f < source->face_count(); ++f) {
    const auto& id = source->face(f).id;
    const json& entry = field(fmap, id.c_str(), "map.faces");
    auto img = string_field(entry, "image", "map.faces[" + id + "]");
    auto it = target_ids.faces.find(img);
    if (it == target_ids.faces.end())
      throw Error(ErrorCode::dangling_reference,
                  "map.faces[" + id + "] references missing target face \"" +
                      img + "\"");
    const json& rot = field(entry, "rotation", "map.faces[" + id + "]");
    const json& ori = field(entry, "orientation", "map.faces[" + id + "]");
    if (!rot.is_number_integer() || rot.get<std::int64_t>() < 0)
      throw schema_error("map.faces[" + id + "].rotation must be a nonnegative integer");
    if (!ori.is_number_integer())
      throw schema_error("map.faces[" + id + "].orientation must be an integer");
    m.face_map[f] = {it->second, rot.get<std::uint32_t>(), ori.get<int>()};
  }
  m.domain = std::move(source);
  m.codomain = std::move(target);
  return m;
}

std::optional<Claims> read_claims(std::string_view document) {
  try {
    return claims_from(parse_document(document));
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool VerificationReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

std::string VerificationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  os << (passed() ? "overall: PASS" : "overall: FAIL") << "\n";
  return os.str();
}

VerificationReport verify(std::string_view document) {
  VerificationReport report;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  auto first_line = [](const std::string& s) {
    return s.substr(0, s.find('\n'));
  };

  CellMap m;
  try {
    m = deserialize(document);
    add("parse", true);
  } catch (const Error& e) {
    add("parse", false, e.what());
    return report;
  }

  auto target_report = validate_complex(*m.codomain);
  add("target_valid", target_report.ok(), first_line(target_report.to_string()));
  auto source_report = validate_complex(*m.domain);
  add("source_valid", source_report.ok(), first_line(source_report.to_string()));
  auto map_report = validate_map(m);
  add("map_valid", map_report.ok(), first_line(map_report.to_string()));
  if (!target_report.ok() || !source_report.ok() || !map_report.ok())
    return report;

  Claims computed = compute_claims(m);
  report.recomputed = computed;
  add("connected", computed.connected,
      computed.connected ? "" : "source 1-skeleton is disconnected");
  auto immersion = check_immersion(m);
  std::string why;
  if (!immersion.immersion) {
    const auto& v = immersion.violations.front();
    why = v.message;
    for (const auto& c : v.cells) why += " " + c;
  }
  add("immersion", immersion.immersion, why);
  add("euler", true, "recomputed " + std::to_string(computed.euler));
  add("free_edges", true,
      "recomputed " + std::to_string(computed.free_edge_count));
  add("isolated_edges", true,
      "recomputed " + std::to_string(computed.isolated_edge_count));

  json doc = json::parse(document.begin(), document.end());
  if (!doc.contains("claims")) {
    add("claims", true, "absent; recomputed values reported above");
    return report;
  }
  auto claimed = claims_from(doc);
  if (!claimed) {
    add("claims", false, "claims block is malformed");
    return report;
  }
  auto agree = [&](const char* name, auto claimed_value, auto actual) {
    std::ostringstream os;
    os << "claimed " << claimed_value << ", recomputed " << actual;
    add(std::string("claim.") + name, claimed_value == actual, os.str());
  };
  agree("euler", claimed->euler, computed.euler);
  agree("connected", claimed->connected, computed.connected);
  agree("immersion", claimed->immersion, computed.immersion);
  agree("free_edge_count", claimed->free_edge_count, computed.free_edge_count);
  agree("isolated_edge_count", claimed->isolated_edge_count,
        computed.isolated_edge_count);
  return report;
}

std::string hit_file_name(const ForestNode& node) {
  return "d" + std::to_string(node.depth) + "-" + node.key.digest() +
         std::string(kCertificateExtension);
}

std::string index_document(const SearchReport& report, const IndexMeta& meta,
                           const SearchBudget& budget,
                           const SearchTarget& target) {
  json doc;
  doc["format"] = kIndexFormat;
  doc["input"] = meta.input;
  if (!meta.word.empty()) {
    doc["word"] = meta.word;
    doc["n"] = meta.n;
  }
  doc["budget"] = {{"max_depth", budget.max_depth},
                   {"max_nodes", budget.max_nodes},
                   {"max_seconds", budget.max_seconds}};
  doc["target"] = {{"min_euler", target.min_euler},
                   {"require_no_free_edges", target.require_no_free_edges},
                   {"stop_on_first", target.stop_on_first}};
  doc["stop_reason"] = to_string(report.stop);
  doc["complete"] = !report.budget_exhausted();
  json depths = json::array();
  for (const auto& d : report.depths)
    depths.push_back({{"depth", d.depth},
                      {"nodes", d.nodes},
                      {"max_euler", d.max_euler},
                      {"hits", d.hits},
                      {"complete", d.complete}});
  doc["depths"] = std::move(depths);
  json hits = json::array();
  for (const auto& h : report.hits) {
    const auto& node = h.node;
    json entry = {{"file", hit_file_name(node)},
                  {"depth", node.depth},
                  {"euler", node.euler},
                  {"faces", node.face_count()},
                  {"free_edges", free_edges(*node.immersion.domain).size()},
                  {"key", node.key.hex()}};
    if (!meta.word.empty()) {
      entry["word"] = meta.word;
      entry["n"] = meta.n;
    }
    hits.push_back(std::move(entry));
  }
  doc["hits"] = std::move(hits);
  doc["stats"] = {{"total_nodes", report.total_nodes},
                  {"wedges_tried", report.wedges_tried},
                  {"face_merge_rejects", report.face_merge_rejects},
                  {"dedup_hits", report.dedup_hits}};
  return doc.dump(2) + "\n";
}

}  // namespace npi
