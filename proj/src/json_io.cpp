#include "schur/json_io.hpp"

#include <string>

namespace schur::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object with member '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing member '") + key + "'");
  return *it;
}

int positive_int(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    fail(std::string(what) + " must be a positive integer");
  return j.get<int>();
}

GridShape shape_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) fail(std::string(what) + " must be [rows, cols]");
  return {positive_int(j[0], what), positive_int(j[1], what)};
}

Json shape_to_json(GridShape s) { return Json::array({s.rows, s.cols}); }

/// Wraps library construction errors (shape, range, bijectivity) as parse
/// failures of the document that described them.
template <class F>
auto guarded(const char* what, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(std::string(what) + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(EntryIndex idx) { return Json::array({idx.i, idx.j}); }

Json to_json(const ComplexMatrix& a) {
  Json entries = Json::array();
  for (const auto& z : a.entries()) entries.push_back(to_json(z));
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(entries)}};
}

Json to_json(const Permutation& p) { return Json(p.images()); }

Json to_json(const EntryPermutation& rho) {
  Json mapping = Json::array();
  for (const auto& target : rho.mapping()) mapping.push_back(target ? to_json(*target) : Json(nullptr));
  return Json{{"src", shape_to_json(rho.src_shape())},
              {"dst", shape_to_json(rho.dst_shape())},
              {"mapping", std::move(mapping)}};
}

Json to_json(const LinearMatrixMap& map) {
  Json images = Json::array();
  for (const auto& img : map.images()) images.push_back(to_json(img));
  return Json{{"src", shape_to_json(map.src_shape())},
              {"dst", shape_to_json(map.dst_shape())},
              {"images", std::move(images)}};
}

Json to_json(const Witness& w) {
  return Json{{"input", to_json(w.input)},
              {"ratio", w.ratio},
              {"units", Json::array({to_json(w.first), to_json(w.second)})}};
}

Json to_json(const CanonicalForm& form) {
  if (const auto* w = std::get_if<WeightedPermutationForm>(&form)) {
    Json unused = Json::array();
    for (const auto& idx : w->rho.unused_destinations()) unused.push_back(to_json(idx));
    return Json{{"form", "weighted_permutation"},
                {"f", to_json(w->f)},
                {"rho", to_json(w->rho)},
                {"surjective", w->surjective},
                {"unused_destinations", std::move(unused)}};
  }
  if (const auto* c = std::get_if<ConjugationForm>(&form)) {
    return Json{{"form", "conjugation"},
                {"pi", to_json(c->pi)},
                {"sigma", to_json(c->sigma)},
                {"transposed", c->transposed}};
  }
  const auto& n = std::get<NotCanonicalForm>(form);
  return Json{{"form", "not_canonical"}, {"witness", to_json(n.witness)}};
}

Json to_json(const AnalysisReport& report) {
  Json out{{"null_preserving", report.null_preserving},
           {"multiplicative", report.multiplicative},
           {"injective", report.injective},
           {"surjective", report.surjective},
           {"rank", report.rank},
           {"kernel_dimension", report.kernel_dimension},
           {"canonical_form", nullptr},
           {"witness", nullptr},
           {"isometry_max_dev", report.isometry_max_deviation},
           {"operator_norm_lower_bound", report.operator_norm_lower_bound}};
  if (report.canonical_form) {
    out["canonical_form"] = to_json(*report.canonical_form);
    if (const auto* n = std::get_if<NotCanonicalForm>(&*report.canonical_form)) out["witness"] = to_json(n->witness);
  }
  if (!report.canonical_note.empty()) out["canonical_note"] = report.canonical_note;
  return out;
}

Json to_json(const MultiplierNormEstimate& est) {
  return Json{{"lower", est.lower},
              {"upper", est.upper},
              {"iterations", est.iterations},
              {"bisections", est.bisections},
              {"newton_steps", est.newton_steps},
              {"budget_exceeded", est.budget_exceeded},
              {"witnesses", {{"lower", to_json(est.lower_witness)}, {"upper", to_json(est.upper_witness)}}}};
}

Json to_json(const ChainReport& chain) {
  return Json{{"max_entry", chain.max_entry},
              {"lower", chain.lower},
              {"upper", chain.upper},
              {"spectral_norm", chain.spectral},
              {"holds", chain.holds}};
}

Json to_json(const ProbeReport& report) {
  Json levels = Json::array();
  for (const auto& lv : report.levels) levels.push_back(Json{{"n", lv.n}, {"value", to_json(lv.value)}});
  return Json{{"probe", to_json(report.probe)},
              {"levels", std::move(levels)},
              {"limit", to_json(report.limit)},
              {"covering_level", report.covering_level},
              {"stabilized_at", report.stabilized_at ? Json(*report.stabilized_at) : Json(nullptr)},
              {"stabilized", report.stabilized}};
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail("complex numbers must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

EntryIndex index_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail("indices must be [i, j] pairs");
  return {positive_int(j[0], "row index"), positive_int(j[1], "column index")};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const int rows = positive_int(member(j, "rows"), "rows");
  const int cols = positive_int(member(j, "cols"), "cols");
  const Json& entries = member(j, "entries");
  if (!entries.is_array()) fail("entries must be an array");
  if (entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    fail("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " needs " +
         std::to_string(rows * cols) + " entries, got " + std::to_string(entries.size()));
  std::vector<Complex> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(complex_from_json(e));
  return guarded("matrix", [&] { return ComplexMatrix(rows, cols, std::move(values)); });
}

Permutation permutation_from_json(const Json& j) {
  if (!j.is_array()) fail("permutations must be arrays of 1-based images");
  std::vector<int> images;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail("permutation entries must be integers");
    images.push_back(v.get<int>());
  }
  return guarded("permutation", [&] { return Permutation(std::move(images)); });
}

EntryPermutation entry_permutation_from_json(const Json& j) {
  const GridShape src = shape_from_json(member(j, "src"), "src");
  const GridShape dst = shape_from_json(member(j, "dst"), "dst");
  const Json& mapping = member(j, "mapping");
  if (!mapping.is_array()) fail("mapping must be an array");
  std::vector<std::optional<EntryIndex>> targets;
  for (const auto& t : mapping) targets.push_back(t.is_null() ? std::nullopt : std::optional(index_from_json(t)));
  return guarded("entry permutation", [&] { return EntryPermutation(src, dst, std::move(targets)); });
}

LinearMatrixMap map_from_json(const Json& j) {
  if (j.is_object() && j.contains("map") && !j.contains("images")) return map_from_json(j["map"]);
  const GridShape src = shape_from_json(member(j, "src"), "src");
  const GridShape dst = shape_from_json(member(j, "dst"), "dst");
  const Json& images = member(j, "images");
  if (!images.is_array()) fail("images must be an array");
  std::vector<ComplexMatrix> parsed;
  for (const auto& img : images) parsed.push_back(matrix_from_json(img));
  return guarded("map", [&] { return LinearMatrixMap(src, dst, std::move(parsed)); });
}

SchemeDocument scheme_from_json(const Json& j) {
  const Json& levels_json = member(j, "levels");
  if (!levels_json.is_array() || levels_json.empty()) fail("levels must be a non-empty array");
  std::vector<int> levels;
  for (const auto& v : levels_json) levels.push_back(positive_int(v, "level"));
  const int top = levels.back();

  const Json& symbol_json = member(j, "symbol");
  const Json& kind = member(symbol_json, "kind");
  SymbolGenerator symbol;
  if (kind == "ones")
    symbol = ones_symbol();
  else if (kind == "lower_triangular")
    symbol = lower_triangular_symbol();
  else if (kind == "stored")
    symbol = stored_symbol(matrix_from_json(member(symbol_json, "matrix")));
  else
    fail("unknown symbol kind " + kind.dump());

  const Json& rho_json = member(j, "rho");
  auto rho = [&]() -> EntryPermutation {
    if (rho_json.contains("kind")) {
      const Json& rk = rho_json["kind"];
      if (rk == "identity") return EntryPermutation::identity({top, top});
      if (rk == "diagonal_row_swap") return diagonal_row_swap(top);
      fail("unknown rho kind " + rk.dump());
    }
    return entry_permutation_from_json(rho_json);
  }();

  ComplexMatrix input = matrix_from_json(member(j, "input"));
  return guarded("scheme", [&] {
    return SchemeDocument{TruncationScheme(std::move(levels), std::move(symbol), std::move(rho)), std::move(input)};
  });
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace schur::io
