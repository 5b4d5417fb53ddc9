#include "tpl/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "tpl/constructions.hpp"
#include "tpl/experiments.hpp"
#include "tpl/random.hpp"

namespace tpl {

namespace {

constexpr std::size_t kMaxNotes = 5;
constexpr std::size_t kMaxNoteLength = 240;

Rng suite_rng(std::uint64_t seed, unsigned salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    salt};
  return Rng(seq);
}

// Worst residual per property, in first-seen order.
class Tracker {
 public:
  void add(const std::string& name, double residual, double threshold) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_[name] = checks_.size();
      checks_.push_back(make_check(name, 0.0, threshold));
      it = index_.find(name);
    }
    Check& c = checks_[it->second];
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    c.residual = std::max(c.residual, residual);
    c.pass = c.residual <= c.threshold;
  }
  void add(const Check& c) { add(c.name, c.residual, c.threshold); }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<Check> checks_;
};

void note(SuiteResult& s, const std::string& label, const std::string& why) {
  if (s.notes.size() >= kMaxNotes) return;
  std::string text = label + ": " + why;
  if (text.size() > kMaxNoteLength) text = text.substr(0, kMaxNoteLength) + "...";
  s.notes.push_back(std::move(text));
}

// Runs one case; `body` returns the names of failed properties (empty on success).
template <typename F>
void run_case(SuiteResult& s, const std::string& label, F&& body) {
  ++s.cases;
  try {
    const std::string failed = body();
    if (!failed.empty()) {
      ++s.failures;
      note(s, label, failed);
    }
  } catch (const std::exception& e) {
    ++s.failures;
    note(s, label, e.what());
  }
}

std::string failed_names(const std::vector<Check>& checks) {
  std::string out;
  for (const auto& c : checks) {
    if (!c.pass) out += (out.empty() ? "" : ", ") + c.name;
  }
  return out;
}

struct CorpusPair {
  Projection P;
  Projection Q;
  std::string label;
};

std::vector<CorpusPair> random_pairs(const SelftestOptions& o, const TolerancePolicy& tol) {
  Rng rng = suite_rng(o.seed, 1);
  std::vector<CorpusPair> out;
  for (int i = 0; i < o.pairs; ++i) {
    const Index n = uniform_index(2, 32, rng);
    const Index a = uniform_index(0, n, rng);
    const Index b = uniform_index(0, n, rng);
    Projection p = random_projection(n, a, rng, tol);
    Projection q = random_projection(n, b, rng, tol);
    std::ostringstream label;
    label << "pair " << i << " (n=" << n << ", ranks " << a << "/" << b << ")";
    out.push_back({std::move(p), std::move(q), label.str()});
  }
  return out;
}

double max_offdiagonal(ComplexMatrix m) {
  const Index k = std::min(m.rows(), m.cols());
  for (Index i = 0; i < k; ++i) m(i, i) = 0.0;
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

ComplexMatrix svd_pseudoinverse(const ComplexMatrix& m, const TolerancePolicy& tol) {
  const SvdResult d = svd(m);
  const double thr = tol.rank_threshold(m.rows(), m.cols(), d.s.size() ? d.s(0) : 0.0);
  ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
  for (Index k = 0; k < d.s.size() && d.s(k) > thr; ++k) {
    out += (1.0 / d.s(k)) * d.V.col(k) * d.U.col(k).adjoint();
  }
  return out;
}

std::vector<Index> random_subset(Index n, Index k, Rng& rng) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

SuiteResult spectral_correspondence_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"spectral_correspondence"};
  Tracker t;
  for (const auto& c : random_pairs(o, tol)) {
    run_case(s, c.label, [&] {
      const DifferenceSpectrum d = difference_spectrum(c.P, c.Q, tol);
      const Check route = make_check("eigenvalues_of_P_minus_Q", d.route_gap, 1e-8);
      const Check pairing = make_check("plus_minus_pairing", d.pairing_gap, 1e-8);
      t.add(route);
      t.add(pairing);
      return failed_names({route, pairing});
    });
  }
  s.checks = t.take();
  return s;
}

SuiteResult biorthogonality_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"biorthogonality"};
  Tracker t;
  for (const auto& c : random_pairs(o, tol)) {
    run_case(s, c.label, [&] {
      const BiorthogonalBases b = biorthogonal_bases(c.P, c.Q, tol);
      const SchmidtDecomposition d = schmidt_decompose(c.P, c.Q, tol);
      const ComplexMatrix cross = b.basis_S.matrix().adjoint() * b.basis_T.matrix();
      const Index k = std::min(cross.rows(), cross.cols());
      RealVector expected = RealVector::Zero(k);
      const RealVector values = d.values();
      expected.head(values.size()) = values;
      double diag = 0.0;
      for (Index i = 0; i < k; ++i) diag = std::max(diag, std::abs(cross(i, i) - expected(i)));
      const Check off = make_check("cross_gram_offdiagonal", max_offdiagonal(cross), 1e-10);
      const Check on = make_check("cross_gram_diagonal", diag, 1e-9);
      t.add(off);
      t.add(on);
      return failed_names({off, on});
    });
  }
  s.checks = t.take();
  return s;
}

SuiteResult sum_correspondence_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"sum_correspondence"};
  Tracker t;
  for (const auto& c : random_pairs(o, tol)) {
    run_case(s, c.label, [&] {
      const Check route =
          make_check("eigenvalues_of_P_plus_Q", sum_spectrum(c.P, c.Q, tol).route_gap, 1e-8);
      t.add(route);
      return failed_names({route});
    });
  }
  s.checks = t.take();
  return s;
}

SuiteResult crimmins_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"crimmins"};
  Tracker t;
  for (const auto& c : random_pairs(o, tol)) {
    run_case(s, c.label, [&] {
      const Check prod = make_check("product_residual",
                                    crimmins_check(c.P.matrix() * c.Q.matrix(), tol).residual,
                                    1e-12);
      t.add(prod);
      return failed_names({prod});
    });
  }
  Rng rng = suite_rng(o.seed, 4);
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.non_products; ++i) {
    const Index n = uniform_index(2, 32, rng);
    ComplexMatrix g = random_gaussian(n, n, rng);
    g /= op_norm(g);
    run_case(s, "non-product " + std::to_string(i), [&]() -> std::string {
      const CrimminsResult r = crimmins_check(g, tol);
      smallest = std::min(smallest, r.residual);
      if (r.is_product || !(r.residual > 1e-3)) return "accepted as a product";
      return "";
    });
  }
  // Rejection needs the residual to stay above the threshold.
  Check reject{"non_product_residual_min", o.non_products ? smallest : 0.0, 1e-3,
               o.non_products == 0 || smallest > 1e-3};
  s.checks = t.take();
  s.checks.push_back(reject);
  return s;
}

SuiteResult geodesic_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"geodesic"};
  Tracker t;
  for (const auto& c : random_pairs(o, tol)) {
    const GenericPartDecomposition g = generic_part(c.P, c.Q, tol);
    if (g.dim() == 0) continue;
    run_case(s, c.label, [&] {
      const GeodesicData data = geodesic_exponent(g, tol);
      for (const auto& check : data.checks) t.add(check);
      return failed_names(data.checks);
    });
  }
  s.checks = t.take();
  return s;
}

SuiteResult idempotent_distance_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"idempotent_distance"};
  Tracker t;
  Rng rng = suite_rng(o.seed, 6);
  for (int i = 0; i < o.d1_cases; ++i) {
    const Index k = uniform_index(1, 16, rng);
    const ComplexMatrix b = random_gaussian(k, k, rng);
    run_case(s, "B " + std::to_string(i) + " (" + std::to_string(k) + "x" + std::to_string(k) + ")",
             [&] {
               const IdempotentDistance d = idempotent_geodesic_distance(b, tol);
               for (const auto& check : d.checks) t.add(check);
               return failed_names(d.checks);
             });
  }
  run_case(s, "B = [2]", [&] {
    const IdempotentDistance d = idempotent_geodesic_distance(ComplexMatrix::Constant(1, 1, 2.0), tol);
    const Check value = make_check("B_equals_2_value", std::abs(d.distance - 0.46364761), 1e-8);
    t.add(value);
    return failed_names({value});
  });
  s.checks = t.take();
  return s;
}

SuiteResult pseudoinverse_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"pseudoinverse"};
  Tracker t;
  Rng rng = suite_rng(o.seed, 7);
  for (int i = 0; i < o.idempotents; ++i) {
    const Index l = uniform_index(1, 8, rng);
    const Index k = uniform_index(1, 8, rng);
    const ComplexMatrix b = random_gaussian(l, k, rng);
    run_case(s, "B " + std::to_string(i) + " (" + std::to_string(l) + "x" + std::to_string(k) + ")",
             [&] {
               const ComplexMatrix e = assemble_idempotent(b);
               const ComplexMatrix a = moore_penrose_idempotent(b, tol);
               std::vector<Check> checks{
                   make_check("penrose_residuals", penrose_residuals(e, a).max(), 1e-9),
                   make_check("svd_oracle", op_norm(a - svd_pseudoinverse(e, tol)), 1e-9)};
               const SevenEquivalencesReport r = seven_equivalences_report(b, tol);
               checks.insert(checks.end(), r.certificates.begin(), r.certificates.end());
               for (const auto& c : checks) t.add(c);
               return failed_names(checks);
             });
  }
  s.checks = t.take();
  return s;
}

SuiteResult halmos_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"halmos"};
  Tracker t;
  Rng rng = suite_rng(o.seed, 8);
  std::uniform_real_distribution<double> radius(0.05, 0.95);
  auto one_case = [&](const ComplexMatrix& gamma) {
    const HalmosDilation h = halmos_dilate(gamma, tol);
    std::vector<Check> checks{make_check("unitarity", h.unitarity_residual, 1e-10),
                              make_check("corner_UQP", h.corner_residual, 1e-9)};
    const DilationGeometry g = dilation_geometry(h, tol);
    checks.insert(checks.end(), g.checks.begin(), g.checks.end());
    for (const auto& c : checks) t.add(c);
    return std::pair{failed_names(checks), g.distance.distance};
  };
  for (int i = 0; i < o.halmos_cases; ++i) {
    const Index k = uniform_index(1, 8, rng);
    ComplexMatrix gamma = random_gaussian(k, k, rng);
    gamma *= radius(rng) / op_norm(gamma);
    run_case(s, "Gamma " + std::to_string(i), [&] { return one_case(gamma).first; });
  }
  run_case(s, "Gamma = [0.5]", [&] {
    auto [failed, distance] = one_case(ComplexMatrix::Constant(1, 1, 0.5));
    const Check value = make_check("Gamma_half_value", std::abs(distance - std::numbers::pi / 3), 1e-8);
    t.add(value);
    return failed.empty() ? failed_names({value}) : failed;
  });
  run_case(s, "Gamma = diag(1, 0.5, 0)", [&] {
    ComplexMatrix gamma = ComplexMatrix::Zero(3, 3);
    gamma(0, 0) = 1.0;
    gamma(1, 1) = 0.5;
    const DilationIntersections d = dilation_intersections(halmos_dilate(gamma, tol), tol);
    const IntersectionDims lemma{1, 1, 1, 1};
    const double mismatch = (d.direct == lemma && d.from_gamma == lemma) ? 0.0 : 1.0;
    const Check dims = make_check("intersection_dims_match", mismatch, 0.0);
    t.add(dims);
    return failed_names({dims});
  });
  s.checks = t.take();
  return s;
}

SuiteResult concentration_trace_suite(const SelftestOptions& o, const TolerancePolicy& tol) {
  SuiteResult s{"concentration_trace"};
  Tracker t;
  Rng rng = suite_rng(o.seed, 9);
  auto one_case = [&](const ConcentrationSpec& spec) {
    const ProjectionPair pq = concentration_projections(spec, tol);
    // trace(P Q P) = trace(P Q) = sum_ik P_ik Q_ki
    const double trace = (pq.P.matrix().array() * pq.Q.matrix().transpose().array()).sum().real();
    const double expected = double(spec.I.size()) * double(spec.J.size()) / double(spec.n);
    const Check c = make_check("trace_identity", std::abs(trace - expected), 1e-10);
    t.add(c);
    return failed_names({c});
  };
  for (int i = 0; i < o.concentration_cases; ++i) {
    ConcentrationSpec spec;
    spec.n = uniform_index(2, 512, rng);
    spec.I = random_subset(spec.n, uniform_index(1, spec.n, rng), rng);
    spec.J = random_subset(spec.n, uniform_index(1, spec.n, rng), rng);
    std::ostringstream label;
    label << "n=" << spec.n << ", |I|=" << spec.I.size() << ", |J|=" << spec.J.size();
    run_case(s, label.str(), [&] { return one_case(spec); });
  }
  run_case(s, "n=8, I=J=0:4", [&] {
    return one_case(ConcentrationSpec{8, index_range(0, 4), index_range(0, 4)});
  });
  s.checks = t.take();
  return s;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& o, const TolerancePolicy& tol) {
  tol.validate();
  return {spectral_correspondence_suite(o, tol), biorthogonality_suite(o, tol),
          sum_correspondence_suite(o, tol),      crimmins_suite(o, tol),
          geodesic_suite(o, tol),                idempotent_distance_suite(o, tol),
          pseudoinverse_suite(o, tol),           halmos_suite(o, tol),
          concentration_trace_suite(o, tol)};
}

}  // namespace tpl
