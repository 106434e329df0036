#include <gtest/gtest.h>

#include "schur/json_io.hpp"
#include "schur/random.hpp"

using namespace schur;
using schur::io::Json;

namespace {

void expect_parse_error(const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError) << e.what();
  }
}

}  // namespace

TEST(JsonIo, MatrixRoundTrip) {
  Rng rng = make_rng(1);
  const ComplexMatrix a = random_gaussian(3, 2, rng);
  const Json j = io::to_json(a);
  EXPECT_EQ(j["rows"], 3);
  EXPECT_EQ(j["cols"], 2);
  EXPECT_EQ(j["entries"].size(), 6u);
  EXPECT_EQ(io::matrix_from_json(io::parse(j.dump())), a);
}

TEST(JsonIo, MatrixRejections) {
  expect_parse_error([] { (void)io::matrix_from_json(io::parse(R"({"rows":2,"cols":2,"entries":[[1,0]]})")); });
  expect_parse_error([] { (void)io::matrix_from_json(io::parse(R"({"rows":0,"cols":2,"entries":[]})")); });
  expect_parse_error([] { (void)io::matrix_from_json(io::parse(R"({"rows":1,"cols":1,"entries":[[1]]})")); });
  expect_parse_error([] { (void)io::matrix_from_json(io::parse(R"({"rows":1,"cols":1,"entries":[["a",0]]})")); });
  expect_parse_error([] { (void)io::matrix_from_json(io::parse(R"({"rows":1,"entries":[[1,0]]})")); });
  expect_parse_error([] { (void)io::matrix_from_json(io::parse(R"([1,2])")); });
  expect_parse_error([] { (void)io::parse("{\"rows\": 1,"); });
}

TEST(JsonIo, MapRoundTripAndWrapper) {
  const LinearMatrixMap map = random_map(MapKind::Dense, {2, 3}, 4);
  const Json j = io::to_json(map);
  EXPECT_EQ(io::map_from_json(io::parse(j.dump())), map);
  EXPECT_EQ(io::map_from_json(Json{{"map", j}, {"other", 1}}), map);
}

TEST(JsonIo, MapRejections) {
  expect_parse_error([] {
    (void)io::map_from_json(io::parse(R"({"src":[1,2],"dst":[1,1],"images":[{"rows":1,"cols":1,"entries":[[1,0]]}]})"));
  });
  expect_parse_error([] {
    (void)io::map_from_json(io::parse(
        R"({"src":[1,1],"dst":[1,1],"images":[{"rows":1,"cols":2,"entries":[[1,0],[0,0]]}]})"));
  });
  expect_parse_error([] { (void)io::map_from_json(io::parse(R"({"src":[1],"dst":[1,1],"images":[]})")); });
}

TEST(JsonIo, PermutationsRoundTrip) {
  const Permutation p({3, 1, 2});
  EXPECT_EQ(io::permutation_from_json(io::to_json(p)), p);
  expect_parse_error([] { (void)io::permutation_from_json(Json::array({1, 1})); });

  const EntryPermutation rho({1, 3}, {2, 2}, {EntryIndex{2, 2}, std::nullopt, EntryIndex{1, 1}});
  const Json j = io::to_json(rho);
  EXPECT_TRUE(j["mapping"][1].is_null());
  EXPECT_EQ(io::entry_permutation_from_json(j), rho);
  expect_parse_error([] {
    (void)io::entry_permutation_from_json(io::parse(R"({"src":[1,2],"dst":[1,2],"mapping":[[1,1],[1,1]]})"));
  });
  expect_parse_error([] {
    (void)io::entry_permutation_from_json(io::parse(R"({"src":[1,2],"dst":[1,2],"mapping":[[1,1],[2,1]]})"));
  });
}

TEST(JsonIo, CanonicalForms) {
  const Json conj = io::to_json(CanonicalForm(ConjugationForm{Permutation({2, 1}), Permutation::identity(2), true}));
  EXPECT_EQ(conj["form"], "conjugation");
  EXPECT_EQ(conj["transposed"], true);
  EXPECT_EQ(conj["pi"], Json::array({2, 1}));

  const Json wp = io::to_json(CanonicalForm(
      WeightedPermutationForm{ComplexMatrix::ones(1, 2), EntryPermutation::identity({1, 2}), true}));
  EXPECT_EQ(wp["form"], "weighted_permutation");
  EXPECT_TRUE(wp["unused_destinations"].empty());
}

TEST(JsonIo, SchemeDocuments) {
  const Json doc = io::parse(R"({
    "levels": [1, 2],
    "symbol": {"kind": "lower_triangular"},
    "rho": {"kind": "diagonal_row_swap"},
    "input": {"rows": 2, "cols": 2, "entries": [[1,0],[2,0],[3,0],[4,0]]}
  })");
  const io::SchemeDocument parsed = io::scheme_from_json(doc);
  EXPECT_EQ(parsed.scheme.top(), 2);
  EXPECT_EQ(parsed.scheme.rho(), diagonal_row_swap(2));
  EXPECT_EQ(parsed.scheme.symbol({2, 1}), Complex(1.0));
  EXPECT_EQ(parsed.scheme.symbol({1, 2}), Complex(0.0));

  Json bad = doc;
  bad["levels"] = Json::array({2, 1});
  expect_parse_error([&] { (void)io::scheme_from_json(bad); });
  bad = doc;
  bad["symbol"] = Json{{"kind", "mystery"}};
  expect_parse_error([&] { (void)io::scheme_from_json(bad); });
  bad = doc;
  bad["rho"] = Json{{"kind", "identity"}};
  bad["levels"] = Json::array({1, 3});
  EXPECT_EQ(io::scheme_from_json(bad).scheme.top(), 3);
}

TEST(JsonIo, ProbeReportShape) {
  ProbeReport report;
  report.probe = {2, 1};
  report.levels = {{1, Complex(0.0)}, {2, Complex(1.0, -1.0)}};
  report.limit = Complex(1.0, -1.0);
  report.covering_level = 2;
  report.stabilized_at = 2;
  report.stabilized = true;
  const Json j = io::to_json(report);
  EXPECT_EQ(j["probe"], Json::array({2, 1}));
  EXPECT_EQ(j["levels"][1]["n"], 2);
  EXPECT_EQ(j["levels"][1]["value"], Json::array({1.0, -1.0}));
  EXPECT_EQ(j["stabilized_at"], 2);
}
