#include "tpl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tpl/constructions.hpp"
#include "tpl/experiments.hpp"
#include "tpl/random.hpp"
#include "tpl/selftest.hpp"

namespace tpl::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr Index kVectorOutputLimit = 64;  // larger analyses omit per-vector output
constexpr Index kDefaultSamples = 1024;
constexpr Index kDefaultSection = 64;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  std::string s = trim(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("cannot parse '" + text + "' as a number in " + what);
  }
  return v;
}

Index parse_index(const std::string& text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("cannot parse '" + text + "' as an index");
  }
  return static_cast<Index>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool looks_inline(const std::string& s) {
  const std::string t = trim(s);
  return !t.empty() && (t[0] == '[' || t[0] == '{');
}

// ---- serialization ---------------------------------------------------------

json vec(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json cvec(const ComplexVector& v) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

json mat(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

json checks_json(const std::vector<Check>& checks, const std::string& prefix = "") {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", prefix + c.name},
                   {"residual", c.residual},
                   {"threshold", c.threshold},
                   {"pass", c.pass}});
  }
  return out;
}

json dims_json(const IntersectionDims& d) {
  return {{"range_range", d.rr}, {"kernel_kernel", d.nn}, {"range_kernel", d.rn},
          {"kernel_range", d.nr}};
}

json pairs_json(const std::vector<std::pair<double, Index>>& v, const char* key) {
  json out = json::array();
  for (const auto& [x, m] : v) out.push_back({{key, x}, {"multiplicity", m}});
  return out;
}

json eigenpairs_json(const std::vector<EigenPair>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back({{"value", e.value}, {"vector", cvec(e.vector)}});
  return out;
}

json analysis_json(const TwoProjectionAnalysis& a, bool vectors) {
  const SchmidtDecomposition& d = a.schmidt;
  RealVector sines(static_cast<Index>(d.triples.size()));
  for (std::size_t i = 0; i < d.triples.size(); ++i) sines(Index(i)) = d.triples[i].sine;
  json schmidt = {{"values", vec(d.values())}, {"sines", vec(sines)}, {"dim_ones", d.dim_ones}};
  if (vectors) {
    schmidt["psi"] = mat(d.psi_matrix());
    schmidt["xi"] = mat(d.xi_matrix());
  }

  json geometry = {{"available", a.geometry_available}, {"note", a.geometry_note}};
  if (a.geodesic) {
    geometry["theta"] = pairs_json(a.geodesic->theta, "angle");
    geometry["x_spectrum"] = vec(a.geodesic->x_spectrum);
    if (vectors) {
      geometry["V"] = mat(a.geodesic->V);
      geometry["X"] = mat(a.geodesic->X);
    }
  }

  json out = {
      {"dim", a.dim},
      {"rank_P", a.rank_P},
      {"rank_Q", a.rank_Q},
      {"schmidt", schmidt},
      {"intersections", dims_json(a.intersections)},
      {"difference",
       {{"plus_one_multiplicity", a.difference.plus_one_mult},
        {"minus_one_multiplicity", a.difference.minus_one_mult},
        {"zero_multiplicity", a.difference.zero_mult},
        {"paired", pairs_json(a.difference.paired, "lambda")},
        {"eigenvalues", vec(a.difference.direct)},
        {"predicted", vec(a.difference.predicted)}}},
      {"sum", {{"eigenvalues", vec(a.sum.direct)}, {"predicted", vec(a.sum.predicted)}}},
      {"complement_values", vec(a.complement_values)},
      {"dixmier",
       {{"norm_PQ", a.dixmier.norm_PQ},
        {"norm_PcQc", a.dixmier.norm_PcQc},
        {"difference_invertible", a.dixmier.diff_invertible},
        {"sum_invertible", a.dixmier.sum_invertible},
        {"sigma_min_difference", a.dixmier.sigma_min_diff},
        {"sigma_min_sum", a.dixmier.sigma_min_sum}}},
      {"crimmins", {{"is_product", a.crimmins.is_product}, {"residual", a.crimmins.residual}}},
      {"generic_part",
       {{"dim", a.generic_dim},
        {"plus_part_dim", a.plus_part_dim},
        {"minus_part_dim", a.minus_part_dim}}},
      {"geometry", geometry},
      {"distance",
       {{"distance", a.distance.distance},
        {"generic_distance", a.distance.generic_distance},
        {"degenerate", a.distance.degenerate}}},
  };
  if (vectors) {
    out["difference_vectors"] = eigenpairs_json(a.difference_vectors);
    out["exponent_vectors"] = eigenpairs_json(a.exponent_vectors);
  }
  return out;
}

json tolerances_json(const TolerancePolicy& t) {
  return {{"rank_rel", t.rank_rel},
          {"spectral_match", t.spectral_match},
          {"idempotent_tol", t.idempotent_tol},
          {"unit_circle_tol", t.unit_circle_tol}};
}

json request_json(const Request& r) {
  json out = {{"command", r.command}};
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) out[key] = v;
  };
  put("input_p", r.input_p);
  put("input_q", r.input_q);
  if (r.frame) out["frame"] = true;
  put("b", r.b);
  put("gamma", r.gamma);
  if (r.n) out["n"] = r.n;
  put("set_i", r.set_i);
  put("set_j", r.set_j);
  put("symbol_phi", r.symbol_phi);
  put("symbol_psi", r.symbol_psi);
  if (r.section) out["section"] = r.section;
  put("n_list", r.n_list);
  if (r.length) out["length"] = *r.length;
  if (r.step) out["step"] = *r.step;
  return out;
}

// ---- CSV output ------------------------------------------------------------

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const json& j, const std::string& key, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, key.empty() ? k : key + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], key + "[" + std::to_string(i) + "]", os);
  } else {
    os << csv_cell(key) << "," << csv_cell(j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

// ---- inputs ----------------------------------------------------------------

ComplexMatrix load_matrix(const std::string& spec) {
  return looks_inline(spec) ? parse_matrix(spec) : read_matrix(spec);
}

// "random:n:k" draws a rank-k projection (or frame) in dimension n.
bool is_generator(const std::string& s) { return s.rfind("random:", 0) == 0; }

Projection load_subspace(const std::string& spec, bool frame, Rng& rng,
                         const TolerancePolicy& tol) {
  if (is_generator(spec)) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ValidationError("generator must look like random:n:k");
    const Index n = parse_index(parts[1]);
    const Index k = parse_index(parts[2]);
    if (n < 1 || k < 0 || k > n) throw ValidationError("generator needs 0 <= k <= n, n >= 1");
    return random_projection(n, k, rng, tol);
  }
  const ComplexMatrix m = load_matrix(spec);
  if (frame) return projection_from_frame(Frame(m), tol);
  return Projection(m, tol);
}

ComplexVector load_symbol(const std::string& spec, Index n) {
  const bool file = !looks_inline(spec) && std::ifstream(spec).good();
  if (!file && !looks_inline(spec)) return symbol_samples(spec, n);
  const ComplexMatrix m = load_matrix(spec);
  if (m.cols() != 1 && m.rows() != 1) throw ValidationError("symbol samples must be a vector");
  return m.cols() == 1 ? ComplexVector(m.col(0)) : ComplexVector(m.row(0).transpose());
}

Index symbol_length(const std::string& spec) {
  if (looks_inline(spec) || std::ifstream(spec).good()) {
    const ComplexMatrix m = load_matrix(spec);
    return std::max(m.rows(), m.cols());
  }
  return 0;
}

void require(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) throw ValidationError(command + " needs " + flag);
}

bool contiguous(const std::vector<Index>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] != v[i - 1] + 1) return false;
  }
  return true;
}

// ---- commands --------------------------------------------------------------

struct Outcome {
  json results;
  std::vector<Check> checks;
};

Outcome cmd_analyze(const Request& r, std::uint64_t seed) {
  require(r.input_p, "--input-p", "analyze");
  require(r.input_q, "--input-q", "analyze");
  Rng rng(seed);
  const Projection p = load_subspace(r.input_p, r.frame, rng, r.tol);
  const Projection q = load_subspace(r.input_q, r.frame, rng, r.tol);
  require_same_dim(p, q);
  AnalysisOptions options;
  options.guard_geometry = true;
  options.with_vectors = p.dim() <= kVectorOutputLimit;
  const TwoProjectionAnalysis a = analyze_pair(p, q, r.tol, options);
  return {analysis_json(a, options.with_vectors), a.checks};
}

Outcome cmd_idempotent(const Request& r) {
  require(r.b, "--b", "idempotent");
  const ComplexMatrix b = load_matrix(r.b);
  if (b.size() == 0) throw ValidationError("idempotent: B is empty");
  Outcome out;
  const ComplexMatrix e = assemble_idempotent(b);
  const IdempotentProjections ip = idempotent_projections(b, r.tol);
  const ComplexMatrix pinv = moore_penrose_idempotent(b, r.tol);
  const PenroseResiduals pr = penrose_residuals(e, pinv);
  const SevenEquivalencesReport seven = seven_equivalences_report(b, r.tol);
  out.results = {{"B", mat(b)},
                 {"E", mat(e)},
                 {"P_range", mat(ip.P_range.matrix())},
                 {"P_null", mat(ip.P_null.matrix())},
                 {"pseudoinverse", mat(pinv)},
                 {"penrose",
                  {{"EAE_minus_E", pr.eae},
                   {"AEA_minus_A", pr.aea},
                   {"EA_hermitian", pr.ea_hermitian},
                   {"AE_hermitian", pr.ae_hermitian}}},
                 {"values_E", vec(seven.values_E)},
                 {"values_B", vec(seven.values_B)},
                 {"values_PNperp_PR", vec(seven.values_PNperp_PR)},
                 {"values_PN_PR", vec(seven.values_PN_PR)}};
  out.checks.push_back(make_check("null_projection_routes", ip.route_gap, 1e-9));
  out.checks.push_back(make_check("penrose_residuals", pr.max(), 1e-9));
  out.checks.insert(out.checks.end(), seven.certificates.begin(), seven.certificates.end());
  if (b.rows() == b.cols()) {
    const IdempotentDistance d = idempotent_geodesic_distance(b, r.tol);
    out.results["distance"] = {{"distance", d.distance},
                               {"closed_form", d.closed_form},
                               {"geometric", d.geometric},
                               {"degenerate", d.degenerate},
                               {"sigma_min", d.sigma_min}};
    out.checks.insert(out.checks.end(), d.checks.begin(), d.checks.end());
  } else {
    out.results["distance"] = nullptr;
  }
  return out;
}

Outcome cmd_dilate(const Request& r) {
  require(r.gamma, "--gamma", "dilate");
  const ComplexMatrix gamma = load_matrix(r.gamma);
  const HalmosDilation h = halmos_dilate(gamma, r.tol);
  const DilationIntersections di = dilation_intersections(h, r.tol);
  const DilationGeometry g = dilation_geometry(h, r.tol);
  Outcome out;
  out.results = {{"Gamma", mat(gamma)},
                 {"U", mat(h.U)},
                 {"unitarity_residual", h.unitarity_residual},
                 {"corner_residual", h.corner_residual},
                 {"intersections", dims_json(di.direct)},
                 {"intersections_from_gamma", dims_json(di.from_gamma)},
                 {"invertible", g.invertible},
                 {"sigma_min", g.sigma_min},
                 {"distance", g.distance.distance},
                 {"x_spectrum", vec(g.x_spectrum)},
                 {"predicted_spectrum", vec(g.predicted_spectrum)}};
  out.checks.push_back(make_check("unitarity", h.unitarity_residual, 1e-10));
  out.checks.push_back(make_check("corner_UQP", h.corner_residual, 1e-9));
  out.checks.insert(out.checks.end(), g.checks.begin(), g.checks.end());
  return out;
}

Outcome cmd_concentration(const Request& r) {
  if (r.n < 1) throw ValidationError("concentration needs --n");
  require(r.set_i, "--set-i", "concentration");
  require(r.set_j, "--set-j", "concentration");
  ConcentrationSpec spec{r.n, parse_index_set(r.set_i, r.n), parse_index_set(r.set_j, r.n)};
  const ConcentrationReport c = concentration_analysis(spec, r.tol);
  Outcome out;
  out.results = {{"n", spec.n},
                 {"size_I", spec.I.size()},
                 {"size_J", spec.J.size()},
                 {"trace", c.trace},
                 {"expected_trace", c.expected_trace},
                 {"sum_s_squared", c.sum_s_squared},
                 {"spectrum_symmetry", c.spectrum_symmetry},
                 {"analysis", analysis_json(c.analysis, false)}};
  std::vector<Index> is = spec.I;
  std::vector<Index> js = spec.J;
  std::sort(is.begin(), is.end());
  std::sort(js.begin(), js.end());
  if (contiguous(is) && contiguous(js)) {
    const ProlateReport pr = prolate_clustering_report(spec, r.tol);
    out.results["prolate"] = {{"values", vec(pr.values)},
                              {"transition_count", pr.transition_count},
                              {"top_count", pr.top_count},
                              {"min_top_gap", pr.min_top_gap},
                              {"simple", pr.simple}};
  }
  out.checks = c.checks;
  out.checks.insert(out.checks.end(), c.analysis.checks.begin(), c.analysis.checks.end());
  return out;
}

Outcome cmd_hankel(const Request& r) {
  require(r.symbol_phi, "--symbol-phi", "hankel");
  require(r.symbol_psi, "--symbol-psi", "hankel");
  Index n = r.n;
  if (n == 0) n = std::max(symbol_length(r.symbol_phi), symbol_length(r.symbol_psi));
  if (n == 0) n = kDefaultSamples;
  SymbolSpec spec{n, load_symbol(r.symbol_phi, n), load_symbol(r.symbol_psi, n)};
  const Index m = r.section ? r.section : kDefaultSection;
  const HankelReport h = hankel_product_analysis(spec, m, r.tol);
  Outcome out;
  out.results = {{"samples", n},
                 {"section", h.section},
                 {"section_values", vec(h.section_values)},
                 {"value_at_half", h.value_at_half},
                 {"model_available", h.model_available},
                 {"model_values", vec(h.model_values)},
                 {"model_gap", h.model_gap}};
  return out;
}

Outcome cmd_sinc(const Request& r) {
  SincExperimentSpec spec;
  spec.n_list = {1, 2, 4, 8};
  if (!r.n_list.empty()) {
    spec.n_list.clear();
    for (const auto& part : split(r.n_list, ',')) {
      spec.n_list.push_back(static_cast<int>(parse_index(part)));
    }
  }
  if (r.length) spec.length = *r.length;
  if (r.step) spec.step = *r.step;
  const SincReport s = sinc_ratio_experiment(spec);
  json cells = json::array();
  for (const auto& c : s.cells) {
    cells.push_back({{"n", c.n},
                     {"ratio", c.ratio},
                     {"bound", c.bound},
                     {"within_bound", c.within_bound},
                     {"lambda_quadrature", {c.lambda_quadrature.real(), c.lambda_quadrature.imag()}},
                     {"lambda_closed_form",
                      {c.lambda_closed_form.real(), c.lambda_closed_form.imag()}},
                     {"lambda_laplace", {c.lambda_laplace.real(), c.lambda_laplace.imag()}},
                     {"closed_form_gap", c.closed_form_gap},
                     {"laplace_gap", c.laplace_gap},
                     {"refined_bound", c.refined_bound}});
  }
  return {{{"length", spec.length}, {"step", spec.step}, {"cells", cells},
           {"monotone", s.monotone}},
          s.checks};
}

Outcome cmd_selftest(const Request& r, std::uint64_t seed) {
  SelftestOptions o;
  o.seed = seed;
  const std::vector<SuiteResult> suites = run_selftest(o, r.tol);
  Outcome out;
  json list = json::array();
  int passed = 0;
  for (const auto& s : suites) {
    passed += s.pass() ? 1 : 0;
    list.push_back({{"name", s.name},
                    {"cases", s.cases},
                    {"failures", s.failures},
                    {"pass", s.pass()},
                    {"notes", s.notes},
                    {"checks", checks_json(s.checks)}});
    for (const auto& c : s.checks) {
      Check named = c;
      named.name = s.name + "/" + c.name;
      out.checks.push_back(named);
    }
    out.checks.push_back(Check{s.name + "/failed_cases", double(s.failures), 0.0, s.failures == 0});
  }
  out.results = {{"suites", list},
                 {"suites_passed", passed},
                 {"suites_failed", int(suites.size()) - passed}};
  return out;
}

Outcome dispatch(const Request& r, std::uint64_t seed) {
  if (r.command == "analyze") return cmd_analyze(r, seed);
  if (r.command == "idempotent") return cmd_idempotent(r);
  if (r.command == "dilate") return cmd_dilate(r);
  if (r.command == "concentration") return cmd_concentration(r);
  if (r.command == "hankel") return cmd_hankel(r);
  if (r.command == "sinc") return cmd_sinc(r);
  if (r.command == "selftest") return cmd_selftest(r, seed);
  throw ValidationError("unknown command '" + r.command + "'");
}

}  // namespace

Complex parse_complex(const std::string& cell) {
  std::string s = trim(cell);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw ValidationError("empty matrix cell");
  if (s.back() != 'i' && s.back() != 'j') return {parse_double(s, "matrix cell"), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading one.
  std::size_t pos = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      pos = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t, "matrix cell");
  };
  if (pos == std::string::npos) return {0.0, imag_part(body)};
  return {parse_double(body.substr(0, pos), "matrix cell"), imag_part(body.substr(pos))};
}

ComplexMatrix parse_matrix(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ValidationError("matrix input is empty");
  if (t[0] == '{' || t[0] == '[') {
    json j;
    try {
      j = json::parse(t);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("matrix JSON: ") + e.what());
    }
    auto cell = [](const json& v) -> Complex {
      if (v.is_number()) return {v.get<double>(), 0.0};
      if (v.is_string()) return parse_complex(v.get<std::string>());
      throw ValidationError("matrix JSON: entries must be numbers or strings");
    };
    auto rows_of = [](const json& a, const char* what) {
      if (!a.is_array()) throw ValidationError(std::string("matrix JSON: '") + what + "' is not an array");
      return a;
    };
    if (j.is_array()) {
      const Index r = Index(j.size());
      const Index c = r ? Index(rows_of(j[0], "row").size()) : 0;
      ComplexMatrix m(r, c);
      for (Index i = 0; i < r; ++i) {
        const json row = rows_of(j[std::size_t(i)], "row");
        if (Index(row.size()) != c) throw ValidationError("matrix JSON: ragged rows");
        for (Index k = 0; k < c; ++k) m(i, k) = cell(row[std::size_t(k)]);
      }
      return m;
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("re")) {
      throw ValidationError("matrix JSON needs rows, cols and re");
    }
    const Index r = j["rows"].get<Index>();
    const Index c = j["cols"].get<Index>();
    if (r < 0 || c < 0) throw ValidationError("matrix JSON: negative size");
    ComplexMatrix m = ComplexMatrix::Zero(r, c);
    for (const char* part : {"re", "im"}) {
      if (!j.contains(part)) continue;
      const json rows = rows_of(j[part], part);
      if (Index(rows.size()) != r) throw ValidationError(std::string("matrix JSON: '") + part + "' has the wrong number of rows");
      for (Index i = 0; i < r; ++i) {
        const json row = rows_of(rows[std::size_t(i)], part);
        if (Index(row.size()) != c) throw ValidationError(std::string("matrix JSON: '") + part + "' has a ragged row");
        for (Index k = 0; k < c; ++k) {
          if (!row[std::size_t(k)].is_number()) throw ValidationError("matrix JSON: re/im entries must be numbers");
          const double v = row[std::size_t(k)].get<double>();
          if (part[0] == 'r') m(i, k) += v; else m(i, k) += Complex(0.0, v);
        }
      }
    }
    return m;
  }
  std::vector<std::vector<Complex>> rows;
  std::istringstream is(t);
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<Complex> row;
    for (const auto& c : split(line, ',')) row.push_back(parse_complex(c));
    if (!rows.empty() && row.size() != rows[0].size()) throw ValidationError("matrix CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  ComplexMatrix m(Index(rows.size()), rows.empty() ? 0 : Index(rows[0].size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) m(i, k) = rows[std::size_t(i)][std::size_t(k)];
  }
  return m;
}

ComplexMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

std::vector<Index> parse_index_set(const std::string& text, Index n) {
  std::vector<Index> out;
  for (const auto& part : split(text, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_index(part));
      continue;
    }
    const Index lo = parse_index(part.substr(0, colon));
    const Index hi = parse_index(part.substr(colon + 1));
    if (hi < lo) throw ValidationError("index range '" + part + "' has hi < lo");
    for (Index i = lo; i < hi; ++i) out.push_back(i);
  }
  for (Index i : out) {
    if (i < 0 || i >= n) {
      throw ValidationError("index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
    }
  }
  return out;
}

std::uint64_t resolve_seed(const Request& request) {
  if (request.seed) return *request.seed;
  if (const char* env = std::getenv("TPL_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s = trim(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ValidationError(std::string("TPL_SEED is not an unsigned integer: '") + env + "'");
    }
    return v;
  }
  return kDefaultSeed;
}

std::optional<Request> parse(int argc, const char* const* argv, std::ostream& out,
                             std::ostream& err, int& exit_code) {
  Request r;
  CLI::App app{"Spectral and geometric analysis of pairs of orthogonal projections", "tpl"};
  app.add_option("command", r.command, "analyze | idempotent | dilate | concentration | hankel | sinc | selftest")
      ->required()
      ->check(CLI::IsMember({"analyze", "idempotent", "dilate", "concentration", "hankel", "sinc",
                             "selftest"}));
  app.add_option("--input-p", r.input_p, "first subspace: matrix file, inline JSON or random:n:k");
  app.add_option("--input-q", r.input_q, "second subspace");
  app.add_flag("--frame", r.frame, "inputs are orthonormal frames, not projections");
  app.add_option("--b", r.b, "block B of the idempotent [[1, B], [0, 0]]");
  app.add_option("--gamma", r.gamma, "contraction Gamma for the Halmos dilation");
  app.add_option("--n", r.n, "grid size (concentration) or number of symbol samples (hankel)");
  app.add_option("--set-i", r.set_i, "time support, e.g. 0:32 or 0:4,8");
  app.add_option("--set-j", r.set_j, "frequency support");
  app.add_option("--symbol-phi", r.symbol_phi, "sample file or one | char:K | smooth:A | jump:J");
  app.add_option("--symbol-psi", r.symbol_psi, "sample file or named symbol");
  app.add_option("--section", r.section, "Hankel section size m");
  app.add_option("--n-list", r.n_list, "sinc decay parameters, e.g. 1,2,4,8");
  app.add_option("--length", r.length, "sinc interval length L");
  app.add_option("--step", r.step, "sinc grid step h");
  app.add_option("--tol-rank-rel", r.tol.rank_rel);
  app.add_option("--tol-spectral-match", r.tol.spectral_match);
  app.add_option("--tol-idempotent", r.tol.idempotent_tol);
  app.add_option("--tol-unit-circle", r.tol.unit_circle_tol);
  app.add_option("--seed", r.seed, "random seed (falls back to TPL_SEED, then 42)");
  app.add_option("--format", r.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", r.out, "report path (default: standard output)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    exit_code = app.exit(e, out, err);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    exit_code = kExitInput;
    return std::nullopt;
  }
  return r;
}

int run(const Request& request, std::ostream& out, std::ostream& err) {
  json report;
  bool all_ok = true;
  try {
    request.tol.validate();
    const std::uint64_t seed = resolve_seed(request);
    const Outcome o = dispatch(request, seed);
    all_ok = all_pass(o.checks);
    report["request"] = request_json(request);
    report["tolerances"] = tolerances_json(request.tol);
    report["seed"] = seed;
    report["results"] = o.results;
    report["checks"] = checks_json(o.checks);
  } catch (const ValidationError& e) {
    err << "tpl: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalFailure& e) {
    err << "tpl: numerical cross-check failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "tpl: internal error: " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ostringstream text;
  if (request.format == "csv") {
    text << "key,value\n";
    flatten(report, "", text);
  } else {
    text << report.dump(2) << "\n";
  }
  if (request.out.empty()) {
    out << text.str();
  } else {
    std::ofstream file(request.out, std::ios::binary);
    if (!file || !(file << text.str())) {
      err << "tpl: cannot write '" << request.out << "'\n";
      return kExitInput;
    }
  }
  if (!all_ok) {
    for (const auto& c : report["checks"]) {
      if (!c["pass"].get<bool>()) err << "tpl: check failed: " << c["name"].get<std::string>() << "\n";
    }
    return kExitNumerical;
  }
  return kExitOk;
}

int main(int argc, const char* const* argv) {
  int code = kExitOk;
  const std::optional<Request> r = parse(argc, argv, std::cout, std::cerr, code);
  if (!r) return code;
  return run(*r, std::cout, std::cerr);
}

}  // namespace tpl::cli
