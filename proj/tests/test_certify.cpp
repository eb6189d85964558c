#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "npi/certify.hpp"
#include "npi/folding.hpp"
#include "npi/forest.hpp"

using namespace npi;
using nlohmann::json;

namespace {

const Check* find_check(const VerificationReport& r, const std::string& name) {
  for (auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

ErrorCode code_of(const std::string& doc) {
  try {
    deserialize(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("chi 2 fixture") {
  auto doc = testing::chi2_piece_document();
  auto y = deserialize(doc);
  CHECK(validate_map(y).ok());
  CHECK(y.domain->vertex_count() == 4);
  CHECK(y.domain->edge_count() == 8);
  CHECK(y.domain->face_count() == 6);

  auto report = verify(doc);
  CHECK(report.passed());
  REQUIRE(report.recomputed.has_value());
  CHECK(report.recomputed->euler == 2);
  CHECK(report.recomputed->immersion);
  CHECK(report.recomputed->connected);
  CHECK(report.recomputed->free_edge_count == 0);
  CHECK(report.recomputed->isolated_edge_count == 0);
  CHECK(find_check(report, "claims") != nullptr);
}

TEST_CASE("serialize") {
  auto y = testing::chi2_piece();
  auto doc = serialize(y);
  CHECK(doc == serialize(y));
  CHECK(doc == serialize(deserialize(doc)));
  auto j = json::parse(doc);
  CHECK(j["format"] == "npi-cert/1");
  CHECK(j["source"]["vertices"].size() == 4);
  CHECK(j["source"]["edges"].size() == 8);
  CHECK(j["source"]["faces"].size() == 6);
  CHECK(j["claims"]["euler"] == 2);
  CHECK(j["claims"]["immersion"] == true);
  auto claims = read_claims(doc);
  REQUIRE(claims.has_value());
  CHECK(*claims == compute_claims(y));
  CHECK(verify(doc).passed());

  auto broken = y;
  broken.edge_map[0] = broken.edge_map[0].inverse();
  CHECK_THROWS_AS(serialize(broken), Error);
}

TEST_CASE("round trips preserve canonical keys") {
  auto y = testing::chi2_piece();
  CHECK(canonical_key(deserialize(serialize(y))) == canonical_key(y));

  std::mt19937_64 rng(41);
  auto target = testing::small_target();
  for (int trial = 0; trial < 100; ++trial) {
    auto m = fold(testing::random_map(rng, target)).folded;
    auto doc = serialize(m);
    auto back = deserialize(doc);
    CHECK(canonical_key(back) == canonical_key(m));
    CHECK(verify(doc).passed());
    auto relabeled = testing::random_relabel(m, rng);
    CHECK(canonical_key(deserialize(serialize(relabeled))) == canonical_key(m));
  }
}

TEST_CASE("deserialize errors") {
  auto j = json::parse(testing::chi2_piece_document());

  auto dangling = j;
  dangling["source"]["faces"][0]["boundary"][0] = "e99";
  CHECK(code_of(dangling.dump()) == ErrorCode::dangling_reference);

  auto version = j;
  version["format"] = "npi-cert/999";
  CHECK(code_of(version.dump()) == ErrorCode::unsupported_format);

  try {
    deserialize("{\"format\": \"npi-cert/1\", ");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }

  auto missing = j;
  missing.erase("source");
  CHECK(code_of(missing.dump()) != ErrorCode{});
}

TEST_CASE("verify reports failures") {
  auto j = json::parse(serialize(testing::chi2_piece()));

  auto flipped = j;
  flipped["map"]["edges"]["e3"] = "-b";
  auto r = verify(flipped.dump());
  CHECK_FALSE(r.passed());
  auto map_check = find_check(r, "map_valid");
  REQUIRE(map_check != nullptr);
  CHECK_FALSE(map_check->passed);
  CHECK_FALSE(map_check->detail.empty());

  auto claims = j;
  claims["claims"]["euler"] = 3;
  r = verify(claims.dump());
  CHECK_FALSE(r.passed());
  auto mismatch = find_check(r, "claim.euler");
  REQUIRE(mismatch != nullptr);
  CHECK_FALSE(mismatch->passed);
  CHECK(r.to_string().find("claim.euler") != std::string::npos);

  auto unclaimed = j;
  unclaimed.erase("claims");
  r = verify(unclaimed.dump());
  CHECK(r.passed());
  REQUIRE(r.recomputed.has_value());
  CHECK(r.recomputed->euler == 2);
  CHECK(find_check(r, "immersion") != nullptr);

  r = verify("not json");
  CHECK_FALSE(r.passed());
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].name == "parse");

  // a non-immersion is reported with the colliding cells
  auto x = testing::ms(1, "abbaB");
  auto disc = characteristic_map(x, 0, 1);
  auto two = wedge(disc, 0, disc, 0);
  r = verify(serialize(two));
  CHECK_FALSE(r.passed());
  auto imm = find_check(r, "immersion");
  REQUIRE(imm != nullptr);
  CHECK_FALSE(imm->passed);
  CHECK_FALSE(imm->detail.empty());
}

TEST_CASE("complex documents") {
  auto x = testing::ms(1, "abbaB");
  auto doc = complex_to_json(*x);
  CHECK(complex_from_json(doc) == *x);
  CHECK_THROWS_AS(complex_from_json("[1,2"), Error);
}

TEST_CASE("index documents") {
  auto x = testing::ms(1, "abbaB");
  SearchBudget budget{1, 0, 0};
  SearchTarget goal{1, false, false};
  auto report = search(x, budget, goal);
  auto doc = index_document(report, {"ms n=1 w=abbaB", "abbaB", 1}, budget, goal);
  auto j = json::parse(doc);
  CHECK(j["format"] == "npi-index/1");
  CHECK(j["complete"] == true);
  CHECK(j["depths"].size() == 2);
  CHECK(j["hits"].size() == 27);
  CHECK(j["hits"][0]["word"] == "abbaB");
  CHECK(j["hits"][0]["file"] == hit_file_name(report.hits[0].node));
  CHECK(doc == index_document(search(x, budget, goal), {"ms n=1 w=abbaB", "abbaB", 1},
                              budget, goal));
  auto name = hit_file_name(report.hits[0].node);
  CHECK(name.rfind("d0-", 0) == 0);
  CHECK(name.size() == 3 + 16 + kCertificateExtension.size());
}
