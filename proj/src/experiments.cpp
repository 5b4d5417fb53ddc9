#include "tpl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace tpl {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kSymmetryTol = 1e-8;
constexpr double kUnimodularTol = 1e-10;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<Index> normalized_set(std::vector<Index> s, Index n, const char* name) {
  std::sort(s.begin(), s.end());
  if (s.empty()) throw ValidationError(std::string(name) + " is empty");
  if (s.front() < 0 || s.back() >= n) {
    throw ValidationError(std::string(name) + " has an index outside [0, n)");
  }
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ValidationError(std::string(name) + " has repeated indices");
  }
  return s;
}

bool contiguous(const std::vector<Index>& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] != s[i - 1] + 1) return false;
  }
  return true;
}

// c_d = (1/n) sum_{j in J} e^{2 pi i j d / n}; the phase j*d is reduced mod n first.
ComplexVector band_symbol(const std::vector<Index>& j_set, Index n) {
  ComplexVector c = ComplexVector::Zero(n);
  for (Index d = 0; d < n; ++d) {
    Complex acc = 0.0;
    for (Index j : j_set) {
      acc += std::polar(1.0, kTwoPi * double((j * d) % n) / double(n));
    }
    c(d) = acc / double(n);
  }
  return c;
}

std::vector<Complex> fft_forward(const ComplexVector& x) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(x.data(), x.data() + x.size());
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

// Multiplication by the sampled symbol g on the N-point trigonometric space,
// in the frequency basis: M(k, l) = ghat((k - l) mod N).
ComplexMatrix multiplication_operator(const ComplexVector& samples) {
  const Index n = samples.size();
  const std::vector<Complex> ghat = fft_forward(samples);
  ComplexMatrix m(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) m(k, l) = ghat[static_cast<std::size_t>(((k - l) % n + n) % n)] / double(n);
  }
  return m;
}

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

}  // namespace

void ConcentrationSpec::validate() const {
  if (n < 1) throw ValidationError("concentration: n must be positive");
  normalized_set(I, n, "I");
  normalized_set(J, n, "J");
}

std::vector<Index> index_range(Index lo, Index hi) {
  if (hi < lo) throw ValidationError("index range with hi < lo");
  std::vector<Index> out;
  for (Index i = lo; i < hi; ++i) out.push_back(i);
  return out;
}

ProjectionPair concentration_projections(const ConcentrationSpec& spec,
                                         const TolerancePolicy& tol) {
  spec.validate();
  const Index n = spec.n;
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Index i : spec.I) p(i, i) = 1.0;
  const ComplexVector c = band_symbol(spec.J, n);
  ComplexMatrix q(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) q(a, b) = c(((a - b) % n + n) % n);
  }
  return {Projection(p, tol), Projection(hermitian_part(q), tol)};
}

ConcentrationReport concentration_analysis(const ConcentrationSpec& spec,
                                           const TolerancePolicy& tol) {
  const ProjectionPair pq = concentration_projections(spec, tol);
  ConcentrationReport out;
  AnalysisOptions options;
  options.guard_geometry = true;
  options.with_vectors = false;
  out.analysis = analyze_pair(pq.P, pq.Q, tol, options);

  const ComplexMatrix& p = pq.P.matrix();
  const ComplexMatrix& q = pq.Q.matrix();
  const ComplexMatrix pqp = p * q * p;
  out.trace = pqp.trace().real();
  out.expected_trace = double(spec.I.size()) * double(spec.J.size()) / double(spec.n);
  for (const auto& t : out.analysis.schmidt.triples) out.sum_s_squared += t.s * t.s;
  out.spectrum_symmetry = out.analysis.difference.pairing_gap;

  const RealVector ev = hermitian_eig(pqp, tol).values;
  const double spill = std::max({0.0, -ev.minCoeff(), ev.maxCoeff() - 1.0});

  auto& c = out.checks;
  c.push_back(make_check("trace_identity", std::abs(out.trace - out.expected_trace), kTraceTol));
  c.push_back(make_check("hilbert_schmidt_norm", std::abs(out.sum_s_squared - out.trace), kTraceTol));
  c.push_back(make_check("difference_spectrum_symmetric", out.spectrum_symmetry, kSymmetryTol));
  c.push_back(make_check("spectrum_in_unit_interval", spill, kTraceTol));
  return out;
}

ProlateReport prolate_clustering_report(const ConcentrationSpec& spec, const TolerancePolicy& tol) {
  spec.validate();
  const std::vector<Index> is = normalized_set(spec.I, spec.n, "I");
  const std::vector<Index> js = normalized_set(spec.J, spec.n, "J");
  if (!contiguous(is) || !contiguous(js)) {
    throw ValidationError("prolate_clustering_report: I and J must be contiguous");
  }
  const ProjectionPair pq = concentration_projections(spec, tol);
  const Index k = static_cast<Index>(is.size());
  ComplexMatrix compressed(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) compressed(a, b) = pq.Q.matrix()(is[a], is[b]);
  }
  RealVector v = hermitian_eig(compressed, tol).values.reverse();

  ProlateReport out;
  out.values = v;
  out.gaps = k > 1 ? RealVector(v.head(k - 1) - v.tail(k - 1)) : RealVector(0);
  for (Index i = 0; i < k; ++i) {
    if (v(i) >= 0.1 && v(i) <= 0.9) ++out.transition_count;
  }
  const double top = 2.0 * double(is.size()) * double(js.size()) / double(spec.n);
  out.top_count = std::min<Index>(k, static_cast<Index>(std::ceil(top - 1e-12)));
  out.simple = true;
  if (out.top_count >= 2) {
    out.min_top_gap = out.gaps.head(out.top_count - 1).minCoeff();
    out.simple = out.min_top_gap > 1e-9;
  }
  return out;
}

void SymbolSpec::validate() const {
  if (!is_power_of_two(n)) throw ValidationError("symbol: n must be a power of two");
  if (phi.size() != n || psi.size() != n) {
    throw ValidationError("symbol: expected " + std::to_string(n) + " samples per symbol");
  }
  for (const ComplexVector* v : {&phi, &psi}) {
    if (!v->allFinite()) throw ValidationError("symbol: non-finite sample");
    const double dev = (v->cwiseAbs().array() - 1.0).abs().maxCoeff();
    if (dev > kUnimodularTol) {
      std::ostringstream os;
      os << "symbol: samples are not unimodular (max ||f| - 1| = " << dev << ")";
      throw ValidationError(os.str());
    }
  }
}

ComplexVector symbol_samples(const std::string& name, Index n) {
  if (n < 1) throw ValidationError("symbol: n must be positive");
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  double param = 0.0;
  if (colon != std::string::npos) {
    try {
      param = std::stod(name.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError("symbol: bad parameter in '" + name + "'");
    }
  } else if (kind != "one") {
    throw ValidationError("symbol: '" + name + "' needs a parameter");
  }
  ComplexVector out(n);
  if (kind == "jump" && !(param > 0.0 && param <= 2.0)) {
    throw ValidationError("symbol: jump size must lie in (0, 2]");
  }
  if (kind == "char" && param != std::round(param)) {
    throw ValidationError("symbol: char needs an integer frequency");
  }
  // e^{iat} on [0, 2pi) jumps by |e^{2 pi i a} - 1| = 2 sin(pi a) at t = 0.
  const double a = kind == "jump" ? std::asin(param / 2.0) / std::numbers::pi : 0.0;
  for (Index k = 0; k < n; ++k) {
    const double t = kTwoPi * double(k) / double(n);
    if (kind == "one") {
      out(k) = 1.0;
    } else if (kind == "char") {
      const auto freq = static_cast<long long>(param);
      const long long phase = ((freq * k) % n + n) % n;
      out(k) = std::polar(1.0, kTwoPi * double(phase) / double(n));
    } else if (kind == "smooth") {
      out(k) = std::polar(1.0, param * std::cos(t));
    } else if (kind == "jump") {
      out(k) = std::polar(1.0, a * t);
    } else {
      throw ValidationError("symbol: unknown generator '" + kind + "'");
    }
  }
  return out;
}

HankelReport hankel_product_analysis(const SymbolSpec& spec, Index m, const TolerancePolicy& tol) {
  spec.validate();
  if (m < 1 || 4 * m > spec.n) {
    throw ValidationError("hankel: section size must satisfy 1 <= m <= n/4");
  }
  const Index n = spec.n;
  const ComplexVector f = spec.phi.conjugate().cwiseProduct(spec.psi);
  const std::vector<Complex> fhat = fft_forward(f);
  // H_{jk} = fhat(-(j + k + 1)).
  ComplexMatrix h(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      h(j, k) = fhat[static_cast<std::size_t>(n - (j + k + 1))] / double(n);
    }
  }
  HankelReport out;
  out.section = m;
  out.section_values = singular_values(h);
  out.value_at_half = out.section_values(m / 2 < m ? m / 2 : m - 1);

  // Cyclic model on frequencies -m..m-1: P = 1 - M_phi P_+ M_phi*, Q = M_psi P_+ M_psi*.
  const Index big = 2 * m;
  if (n % big == 0) {
    const Index stride = n / big;
    ComplexVector phi_d(big);
    ComplexVector psi_d(big);
    for (Index k = 0; k < big; ++k) {
      phi_d(k) = spec.phi(k * stride);
      psi_d(k) = spec.psi(k * stride);
    }
    ComplexMatrix plus = ComplexMatrix::Zero(big, big);
    plus.topLeftCorner(m, m).setIdentity();
    const ComplexMatrix mphi = multiplication_operator(phi_d);
    const ComplexMatrix mpsi = multiplication_operator(psi_d);
    const Projection p(hermitian_part(identity(big) - mphi * plus * mphi.adjoint()), tol);
    const Projection q(hermitian_part(mpsi * plus * mpsi.adjoint()), tol);
    out.model_values = schmidt_decompose(p, q, tol).values();
    out.model_gap = padded_value_gap(out.model_values, out.section_values);
    out.model_available = true;
  }
  return out;
}

void SincExperimentSpec::validate() const {
  if (n_list.empty()) throw ValidationError("sinc: n_list is empty");
  int max_n = 0;
  for (int n : n_list) {
    if (n < 1) throw ValidationError("sinc: decay parameters must be positive");
    max_n = std::max(max_n, n);
  }
  if (!(step > 0.0 && step <= 0.1)) throw ValidationError("sinc: step must lie in (0, 0.1]");
  if (!(length >= 20.0 * max_n)) {
    throw ValidationError("sinc: length must be at least 20 * max(n_list)");
  }
}

SincReport sinc_ratio_experiment(const SincExperimentSpec& spec) {
  spec.validate();
  const double h = spec.step;
  Index intervals = static_cast<Index>(std::llround(spec.length / h));
  if (intervals % 2) ++intervals;  // Simpson needs an even count
  const Index points = intervals + 1;
  Index size = 1;
  while (size < 2 * points) size *= 2;

  // Kernel (h/pi) sinc(d h) for d = -(points-1)..(points-1), stored cyclically.
  std::vector<Complex> kernel(static_cast<std::size_t>(size), 0.0);
  for (Index d = -(points - 1); d <= points - 1; ++d) {
    kernel[static_cast<std::size_t>((d + size) % size)] = h / std::numbers::pi * sinc(double(d) * h);
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> kernel_hat;
  fft.fwd(kernel_hat, kernel);

  SincReport out;
  for (int n : spec.n_list) {
    std::vector<Complex> e(static_cast<std::size_t>(size), 0.0);
    for (Index j = 0; j < points; ++j) {
      const double x = double(j) * h;
      e[static_cast<std::size_t>(j)] = std::exp(-x / n) * std::polar(1.0, x);
    }
    std::vector<Complex> e_hat;
    fft.fwd(e_hat, e);
    for (std::size_t i = 0; i < e_hat.size(); ++i) e_hat[i] *= kernel_hat[i];
    std::vector<Complex> ke;
    fft.inv(ke, e_hat);

    double num = 0.0;
    double den = 0.0;
    for (Index j = 0; j < points; ++j) {
      const auto u = static_cast<std::size_t>(j);
      num += std::norm(ke[u] - e[u]);
      den += std::norm(e[u]);
    }

    // Simpson rule for the integral of sinc(u) e_n(u) over [0, L].
    Complex lambda = 0.0;
    for (Index j = 0; j < points; ++j) {
      const double w = (j == 0 || j == intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      lambda += w * sinc(double(j) * h) * e[static_cast<std::size_t>(j)];
    }
    lambda *= h / 3.0;

    SincCell c;
    c.n = n;
    c.ratio = std::sqrt(num / den);
    c.bound = std::sqrt(4.0 / std::numbers::pi * std::atan(1.0 / n));
    c.within_bound = c.ratio <= c.bound + 0.05;
    c.lambda_quadrature = lambda;
    const double im = 0.25 * std::log(1.0 + 4.0 * double(n) * n);
    c.lambda_closed_form = Complex(std::numbers::pi / 2 - std::atan(1.0 / n), im);
    c.lambda_laplace = Complex(0.5 * std::atan(2.0 * n), im);
    c.closed_form_gap = std::abs(lambda - c.lambda_closed_form);
    c.laplace_gap = std::abs(lambda - c.lambda_laplace);
    c.refined_bound = std::sqrt(std::max(0.0, 1.0 - 2.0 / std::numbers::pi * c.lambda_laplace.real()));
    out.cells.push_back(c);
  }

  double worst_increase = 0.0;
  for (std::size_t i = 1; i < out.cells.size(); ++i) {
    worst_increase = std::max(worst_increase, out.cells[i].ratio - out.cells[i - 1].ratio);
  }
  out.monotone = worst_increase <= 0.0;

  for (const auto& c : out.cells) {
    const std::string tag = "n=" + std::to_string(c.n);
    out.checks.push_back(make_check("ratio_within_bound_" + tag, c.ratio, c.bound + 0.05));
    out.checks.push_back(make_check("lambda_closed_form_" + tag, c.closed_form_gap, 1e-3));
    out.checks.push_back(make_check("lambda_laplace_" + tag, c.laplace_gap, 1e-3));
    out.checks.push_back(make_check("ratio_within_refined_bound_" + tag, c.ratio, c.refined_bound));
  }
  out.checks.push_back(make_check("ratio_monotone", worst_increase, 0.0));
  return out;
}

}  // namespace tpl
