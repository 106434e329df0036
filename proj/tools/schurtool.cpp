#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "schur/json_io.hpp"
#include "schur/multiplier_norm.hpp"
#include "schur/structure.hpp"
#include "schur/truncation.hpp"

#ifndef SCHURTOOL_VERSION
#define SCHURTOOL_VERSION "0.0.0"
#endif

namespace {

using schur::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitViolation = 3;

/// Raised for command-line values that parse but make no sense.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  double tol = 1e-3;
  int trials = 100;
  bool assert_mode = false;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json envelope(const std::string& command, const Common& common, Json tolerances) {
  return Json{{"tool", "schurtool"},
              {"version", SCHURTOOL_VERSION},
              {"command", command},
              {"seed", common.seed},
              {"tolerances", std::move(tolerances)}};
}

Json structure_tolerances() {
  return Json{{"zero", schur::kZeroTolerance}};
}

void merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

std::vector<schur::EntryIndex> parse_probes(const std::vector<std::string>& specs) {
  std::vector<schur::EntryIndex> out;
  for (const auto& spec : specs) {
    std::istringstream in(spec);
    int i = 0;
    int j = 0;
    char comma = 0;
    if (!(in >> i >> comma >> j) || comma != ',' || !in.eof())
      throw UsageError("probe '" + spec + "' is not of the form i,j");
    out.push_back({i, j});
  }
  return out;
}

int cmd_analyze(const Common& common, const std::string& path) {
  const schur::LinearMatrixMap map = schur::io::map_from_json(schur::io::parse(read_input(path)));
  const schur::AnalysisReport report = schur::analyze_map(map, common.trials, common.seed);
  Json out = envelope("analyze", common, structure_tolerances());
  out["trials"] = common.trials;
  merge(out, schur::io::to_json(report));
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !report.null_preserving ? kExitViolation : kExitOk;
}

int cmd_classify(const Common& common, const std::string& path) {
  const schur::LinearMatrixMap map = schur::io::map_from_json(schur::io::parse(read_input(path)));
  Json out = envelope("classify", common, structure_tolerances());
  bool canonical = false;
  try {
    const schur::CanonicalForm form = schur::classify_contraction(map);
    canonical = !std::holds_alternative<schur::NotCanonicalForm>(form);
    merge(out, schur::io::to_json(form));
  } catch (const schur::Error& e) {
    if (e.code() == schur::ErrorCode::ShapeMismatch) throw;
    out["form"] = nullptr;
    out["reason"] = e.what();
  }
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !canonical ? kExitViolation : kExitOk;
}

int cmd_witness(const Common& common, const std::string& path, int amplify) {
  const schur::LinearMatrixMap map = schur::io::map_from_json(schur::io::parse(read_input(path)));
  Json out = envelope("witness", common, structure_tolerances());
  out["trials"] = common.trials;
  out["witness"] = nullptr;
  if (map.src_shape() == map.dst_shape() && schur::is_schur_multiplicative(map)) {
    try {
      const schur::CanonicalForm form = schur::classify_contraction(map);
      if (const auto* n = std::get_if<schur::NotCanonicalForm>(&form)) out["witness"] = schur::io::to_json(n->witness);
    } catch (const schur::Error&) {
      // Multiplicative maps with non-monomial images carry no pigeonhole witness.
    }
  }
  out["operator_norm_lower_bound"] = schur::operator_norm_lower_bound(map, common.trials, common.seed);
  if (amplify > 0) out["amplification"] = Json{{"k", amplify}, {"ratio", schur::amplification_lower_bound(map, amplify)}};
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !out["witness"].is_null() ? kExitViolation : kExitOk;
}

schur::MultiplierNormOptions norm_options(const Common& common) {
  schur::MultiplierNormOptions options;
  options.tol = common.tol;
  options.seed = common.seed;
  return options;
}

Json norm_tolerances(const Common& common) {
  return Json{{"tol", common.tol}, {"chain_slack", 1e-9}};
}

int cmd_norm(const Common& common, const std::string& path) {
  Json doc = schur::io::parse(read_input(path));
  if (doc.is_object() && doc.contains("psi")) doc = Json(doc["psi"]);
  const schur::SchurSymbol psi(schur::io::matrix_from_json(doc));
  const schur::MultiplierNormEstimate est = schur::multiplier_norm(psi, norm_options(common));
  const double max_entry = psi.matrix().max_abs();
  const double spectral = schur::spectral_norm(psi.matrix());
  constexpr double slack = 1e-9;
  const bool holds = max_entry <= est.lower + slack && est.lower <= est.upper + slack && est.upper <= spectral + slack;

  Json out = envelope("norm", common, norm_tolerances(common));
  out["tol"] = common.tol;
  merge(out, schur::io::to_json(est));
  out["chain"] = Json{{"max_entry", max_entry}, {"spectral_norm", spectral}, {"holds", holds}};
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && (!holds || est.budget_exceeded) ? kExitViolation : kExitOk;
}

int cmd_triangular(const Common& common, const std::vector<int>& levels) {
  Json rows = Json::array();
  bool increasing = true;
  double previous = -1.0;
  for (int n : levels) {
    const schur::MultiplierNormEstimate est =
        schur::multiplier_norm(schur::triangular_truncation_symbol(n), norm_options(common));
    const double mid = 0.5 * (est.lower + est.upper);
    if (previous >= 0.0 && !(mid > previous)) increasing = false;
    previous = mid;
    rows.push_back(Json{{"n", n},
                        {"lower", est.lower},
                        {"upper", est.upper},
                        {"midpoint", mid},
                        {"iterations", est.iterations},
                        {"bisections", est.bisections},
                        {"newton_steps", est.newton_steps},
                        {"budget_exceeded", est.budget_exceeded}});
  }
  Json out = envelope("triangular", common, norm_tolerances(common));
  out["tol"] = common.tol;
  out["levels"] = std::move(rows);
  out["strictly_increasing"] = increasing;
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !increasing ? kExitViolation : kExitOk;
}

int cmd_converge(const Common& common, const std::string& path, const std::vector<std::string>& probe_specs) {
  const schur::io::SchemeDocument doc = schur::io::scheme_from_json(schur::io::parse(read_input(path)));
  std::vector<schur::EntryIndex> probes = parse_probes(probe_specs);
  if (probes.empty()) {
    const int top = doc.scheme.top();
    for (int i = 1; i <= top; ++i)
      for (int j = 1; j <= top; ++j) probes.push_back({i, j});
  }
  const auto reports = schur::pointwise_convergence_check(doc.scheme, doc.input, probes);
  Json list = Json::array();
  bool all_stable = true;
  for (const auto& r : reports) {
    list.push_back(schur::io::to_json(r));
    all_stable = all_stable && r.stabilized;
  }
  Json out = envelope("converge", common, Json{{"stabilization", 1e-15}});
  out["probes"] = std::move(list);
  out["all_stabilized"] = all_stable;
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !all_stable ? kExitViolation : kExitOk;
}

int cmd_probe_growth(const Common& common, const std::vector<int>& levels) {
  const auto samples = schur::rearrangement_growth_probe(levels);
  Json list = Json::array();
  bool increasing = true;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    list.push_back(Json{{"n", samples[k].n}, {"ratio", samples[k].ratio}, {"sqrt_n", std::sqrt(samples[k].n)}});
    if (k > 0 && !(samples[k].ratio > samples[k - 1].ratio)) increasing = false;
  }
  Json out = envelope("probe-growth", common, Json::object());
  out["samples"] = std::move(list);
  out["strictly_increasing"] = increasing;
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !increasing ? kExitViolation : kExitOk;
}

int cmd_example(const Common& common, int n) {
  const schur::LinearMatrixMap map = schur::row_column_deletion_map(n);
  const schur::AnalysisReport report = schur::analyze_map(map, common.trials, common.seed);
  Json out = envelope("example", common, structure_tolerances());
  out["n"] = n;
  out["trials"] = common.trials;
  out["map"] = schur::io::to_json(map);
  out["analysis"] = schur::io::to_json(report);
  std::cout << out.dump(2) << '\n';
  return common.assert_mode && !report.multiplicative ? kExitViolation : kExitOk;
}

void add_common(CLI::App* cmd, Common& common, bool with_tol) {
  cmd->add_option("--seed", common.seed, "random seed");
  cmd->add_option("--trials", common.trials, "random samples for sampled checks")->check(CLI::PositiveNumber);
  if (with_tol) cmd->add_option("--tol", common.tol, "target bracket width")->check(CLI::PositiveNumber);
  cmd->add_flag("--assert", common.assert_mode, "exit 3 when the checked property fails");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schur product preserver analysis and Schur multiplier norms"};
  app.set_version_flag("--version", SCHURTOOL_VERSION);
  app.require_subcommand(1, 1);

  Common common;
  std::string input = "-";
  std::vector<int> levels;
  std::vector<std::string> probes;
  int n = 5;
  int amplify = 0;

  auto* analyze = app.add_subcommand("analyze", "structure report of a linear map");
  analyze->add_option("map", input, "map JSON file, - for stdin");
  add_common(analyze, common, false);

  auto* norm = app.add_subcommand("norm", "certified bracket for a Schur multiplier norm");
  norm->add_option("psi", input, "matrix JSON file, - for stdin");
  add_common(norm, common, true);

  auto* classify = app.add_subcommand("classify", "canonical form of a Schur multiplicative map");
  classify->add_option("map", input, "map JSON file, - for stdin");
  add_common(classify, common, false);

  auto* witness = app.add_subcommand("witness", "non-contraction witnesses of a map");
  witness->add_option("map", input, "map JSON file, - for stdin");
  witness->add_option("--amplify", amplify, "also evaluate the k-fold amplification witness")
      ->check(CLI::NonNegativeNumber);
  add_common(witness, common, false);

  auto* triangular = app.add_subcommand("triangular", "multiplier norms of triangular truncations");
  triangular->add_option("--levels", levels, "comma separated sizes")->delimiter(',')->check(CLI::PositiveNumber);
  add_common(triangular, common, true);

  auto* converge = app.add_subcommand("converge", "pointwise convergence of truncated images");
  converge->add_option("scheme", input, "scheme JSON file, - for stdin");
  converge->add_option("--probes", probes, "probe cells as i,j (default: every cell)");
  add_common(converge, common, false);

  auto* growth = app.add_subcommand("probe-growth", "norm growth of the diagonal to first row swap");
  growth->add_option("--levels", levels, "comma separated sizes")->delimiter(',')->check(CLI::PositiveNumber);
  add_common(growth, common, false);

  auto* example = app.add_subcommand("example", "row and column deletion map with its analysis");
  example->add_option("--n", n, "target size")->check(CLI::PositiveNumber);
  add_common(example, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "schurtool: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*analyze) return cmd_analyze(common, input);
    if (*norm) return cmd_norm(common, input);
    if (*classify) return cmd_classify(common, input);
    if (*witness) return cmd_witness(common, input, amplify);
    if (*triangular) return cmd_triangular(common, levels.empty() ? std::vector<int>{2, 4, 8, 16} : levels);
    if (*converge) return cmd_converge(common, input, probes);
    if (*growth) return cmd_probe_growth(common, levels.empty() ? std::vector<int>{4, 16, 64} : levels);
    if (*example) return cmd_example(common, n);
  } catch (const schur::Error& e) {
    std::cerr << "schurtool: " << e.what() << '\n';
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "schurtool: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
