// One line per acceptance criterion; exits non-zero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "tpl/experiments.hpp"
#include "tpl/selftest.hpp"

using namespace tpl;

namespace {

struct Line {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string worst(const SuiteResult& s) {
  std::ostringstream os;
  os << s.cases << " cases, " << s.failures << " failed";
  for (const auto& c : s.checks) {
    os << "; " << c.name << " " << c.residual << (c.residual <= c.threshold ? " <= " : " > ") << c.threshold
       << (c.pass ? "" : " (fails)");
  }
  if (!s.notes.empty()) os << "; first failure: " << s.notes.front();
  return os.str();
}

Line from_suite(const SuiteResult& s) { return {s.pass(), worst(s)}; }

Line timed(const std::function<SuiteResult()>& run, double budget) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteResult s = run();
  const double t = seconds_since(t0);
  Line l = from_suite(s);
  std::ostringstream os;
  os << l.detail << "; " << t << " s (budget " << budget << " s)";
  return {l.pass && t < budget, os.str()};
}

Line concentration_line(const SelftestOptions& o) {
  Line l = from_suite(concentration_trace_suite(o));
  const ConcentrationReport r = concentration_analysis({8, index_range(0, 4), index_range(0, 4)});
  const double gap = std::abs(r.trace - 2.0);
  std::ostringstream os;
  os << l.detail << "; n=8 I=J=0:4 trace " << r.trace;
  return {l.pass && gap <= 1e-10, os.str()};
}

Line sinc_line() {
  const auto t0 = std::chrono::steady_clock::now();
  SincExperimentSpec spec;
  spec.n_list = {1, 2, 4, 8};
  spec.length = 200.0;
  spec.step = 0.05;
  const SincReport r = sinc_ratio_experiment(spec);
  const double t = seconds_since(t0);
  bool bound_ok = true;
  bool lambda_ok = true;
  std::ostringstream os;
  for (const auto& c : r.cells) {
    bound_ok = bound_ok && c.within_bound;
    lambda_ok = lambda_ok && c.closed_form_gap <= 1e-3;
    os << "n=" << c.n << " ratio " << c.ratio << " bound+0.05 " << c.bound + 0.05
       << " closed-form gap " << c.closed_form_gap << "; ";
  }
  os << "monotone " << (r.monotone ? "yes" : "no") << "; " << t << " s";
  return {bound_ok && lambda_ok && r.monotone && t < 60.0, os.str()};
}

Line hankel_line() {
  constexpr Index n = 1024;
  constexpr Index m = 64;
  const ComplexVector one = symbol_samples("one", n);
  const HankelReport smooth = hankel_product_analysis({n, one, symbol_samples("smooth:1", n)}, m);
  const HankelReport jump = hankel_product_analysis({n, one, symbol_samples("jump:1", n)}, m);
  std::ostringstream os;
  os << "s_" << m / 2 << " smooth " << smooth.value_at_half << " (need < 1e-6), jump "
     << jump.value_at_half << " (need > 0.05)";
  return {smooth.value_at_half < 1e-6 && jump.value_at_half > 0.05, os.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Line determinism_line() {
  const std::string a = "acceptance_selftest_a.json";
  const std::string b = "acceptance_selftest_b.json";
  const std::string base = std::string("\"") + TPL_BINARY + "\" selftest --seed 42 --out ";
  const int ra = std::system((base + a).c_str());
  const int rb = std::system((base + b).c_str());
  const std::string ta = slurp(a);
  const std::string tb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  std::ostringstream os;
  os << "exit codes " << ra << "/" << rb << ", " << ta.size() << " bytes, "
     << (ta == tb ? "identical" : "different");
  return {ra == 0 && rb == 0 && !ta.empty() && ta == tb, os.str()};
}

}  // namespace

int main() {
  SelftestOptions o;
  o.seed = 42;
  const TolerancePolicy tol;

  const std::array<std::pair<const char*, std::function<Line()>>, 12> criteria{{
      {"spectral correspondence of P-Q",
       [&] { return timed([&] { return spectral_correspondence_suite(o, tol); }, 30.0); }},
      {"biorthogonality", [&] { return from_suite(biorthogonality_suite(o, tol)); }},
      {"sum correspondence of P+Q", [&] { return from_suite(sum_correspondence_suite(o, tol)); }},
      {"Crimmins criterion", [&] { return from_suite(crimmins_suite(o, tol)); }},
      {"geodesic suite", [&] { return from_suite(geodesic_suite(o, tol)); }},
      {"idempotent distance arctan(1/sigma_min)",
       [&] { return from_suite(idempotent_distance_suite(o, tol)); }},
      {"Moore-Penrose inverse of idempotents", [&] { return from_suite(pseudoinverse_suite(o, tol)); }},
      {"Halmos dilation", [&] { return from_suite(halmos_suite(o, tol)); }},
      {"concentration trace identity", [&] { return concentration_line(o); }},
      {"sinc ratio bound and lambda closed form", sinc_line},
      {"Hankel section decay, smooth vs jump", hankel_line},
      {"CLI determinism", determinism_line},
  }};

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    failed += l.pass ? 0 : 1;
    std::cout << "AC" << i + 1 << " " << (l.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
              << ": " << l.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
