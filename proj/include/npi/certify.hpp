#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "npi/complex.hpp"
#include "npi/forest.hpp"

namespace npi {

inline constexpr std::string_view kCertificateFormat = "npi-cert/1";
inline constexpr std::string_view kIndexFormat = "npi-index/1";
inline constexpr std::string_view kCertificateExtension = ".npicert.json";

struct Claims {
  std::int64_t euler = 0;
  bool connected = false;
  bool immersion = false;
  std::size_t free_edge_count = 0;
  std::size_t isolated_edge_count = 0;
  friend bool operator==(const Claims&, const Claims&) = default;
};

// Recomputes every claim from the cells. The map must be valid.
Claims compute_claims(const CellMap& m);

// Deterministic JSON certificate. Source cells appear in canonical id order;
// target cells keep their index order.
// Throws Error(invalid_argument) if the map is invalid.
std::string serialize(const CellMap& m);

// Parses a certificate or map document (the claims block is optional and
// ignored). Throws Error with code parse_error (with byte offset),
// unsupported_format, or dangling_reference.
CellMap deserialize(std::string_view document);

// Claims block of a document, if present and well-formed.
std::optional<Claims> read_claims(std::string_view document);

std::string complex_to_json(const TwoComplex& c);
TwoComplex complex_from_json(std::string_view document);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  std::optional<Claims> recomputed;

  bool passed() const;
  std::string to_string() const;
};

// Never throws; parse failures are reported as a failed "parse" check.
VerificationReport verify(std::string_view document);

// File name used for a search hit: d<depth>-<digest>.npicert.json.
std::string hit_file_name(const ForestNode& node);

struct IndexMeta {
  std::string input;       // e.g. "ms n=1 w=abbaB" or a file path
  std::string word;        // empty unless a Miller-Schupp input
  int n = 0;
};

std::string index_document(const SearchReport& report, const IndexMeta& meta,
                           const SearchBudget& budget,
                           const SearchTarget& target);

}  // namespace npi
