#pragma once

#include <json.hpp>

#include "schur/linmap.hpp"
#include "schur/matrix.hpp"
#include "schur/multiplier_norm.hpp"
#include "schur/structure.hpp"
#include "schur/truncation.hpp"

namespace schur::io {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs and indices are 1-based throughout.
// Every *_from_json throws Error(ParseError) on malformed documents.

Json to_json(Complex z);
Json to_json(EntryIndex idx);
Json to_json(const ComplexMatrix& a);
Json to_json(const Permutation& p);
Json to_json(const EntryPermutation& rho);
Json to_json(const LinearMatrixMap& map);
Json to_json(const Witness& w);
Json to_json(const CanonicalForm& form);
Json to_json(const AnalysisReport& report);
Json to_json(const MultiplierNormEstimate& est);
Json to_json(const ChainReport& chain);
Json to_json(const ProbeReport& report);

Complex complex_from_json(const Json& j);
EntryIndex index_from_json(const Json& j);
/// {"rows": m, "cols": n, "entries": [[re, im], ...]} in row-major order.
ComplexMatrix matrix_from_json(const Json& j);
Permutation permutation_from_json(const Json& j);
/// {"src": [m, n], "dst": [p, q], "mapping": [[i, j] | null, ...]}.
EntryPermutation entry_permutation_from_json(const Json& j);
/// {"src": [m, n], "dst": [p, q], "images": [matrix, ...]}; also accepts an
/// object whose "map" member is such a document.
LinearMatrixMap map_from_json(const Json& j);

struct SchemeDocument {
  TruncationScheme scheme;
  ComplexMatrix input;
};

/// {"levels": [...], "symbol": {"kind": "ones" | "lower_triangular"} |
///  {"kind": "stored", "matrix": matrix}, "rho": entry permutation |
///  {"kind": "identity" | "diagonal_row_swap"}, "input": matrix}.
SchemeDocument scheme_from_json(const Json& j);

/// Parses text, mapping syntax errors to ParseError.
Json parse(const std::string& text);

}  // namespace schur::io
