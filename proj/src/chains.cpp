#include "hhv/chains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hhv/certify.hpp"
#include "hhv/means.hpp"
#include "hhv/quadrature.hpp"

namespace hhv {

std::string_view to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::Classical: return "classical";
    case ChainKind::DragomirMond: return "dm";
    case ChainKind::Theorem1: return "t1";
  }
  return "unknown";
}

std::optional<std::size_t> ChainReport::first_violation() const {
  for (std::size_t i = 0; i < margins.size(); ++i)
    if (margins[i] < -tol) return i;
  return std::nullopt;
}

std::optional<double> Theorem2Report::margin_as_printed() const {
  if (!rhs_as_printed) return std::nullopt;
  return *rhs_as_printed - lhs;
}

namespace {

void require_interval(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("need finite a < b");
}

QuadratureOptions quadrature_options(const ChainOptions& options) {
  QuadratureOptions q;
  q.tol = options.quad_tol;
  q.rel_tol = options.quad_rel_tol;
  return q;
}

double positive_value(const Expression& f, double x) {
  const double v = f(x);
  if (!(v > 0.0)) throw NotApplicableError("f(" + format_number(x) + ") = " + format_number(v) + " is not positive");
  return v;
}

// Quantities shared by the dm and theorem-1 chains. Both chains read them from
// here, so at c = 0 the common terms are bit-identical.
struct PositiveBase {
  double midpoint = 0.0;
  double exp_mean_log = 0.0;
  double mean_geometric = 0.0;
  double mean_f = 0.0;
  double log_mean = 0.0;
  double arith_mean = 0.0;
};

PositiveBase positive_base(const Expression& f, double a, double b, const ChainOptions& options) {
  require_interval(a, b);
  const QuadratureOptions q = quadrature_options(options);
  const double fa = positive_value(f, a);
  const double fb = positive_value(f, b);
  PositiveBase base;
  base.midpoint = positive_value(f, 0.5 * (a + b));
  base.exp_mean_log = std::exp(mean_integral([&](double x) { return std::log(positive_value(f, x)); }, a, b, q));
  base.mean_geometric = mean_integral(
      [&](double x) { return geometric_mean(positive_value(f, x), positive_value(f, a + b - x)); }, a, b, q);
  base.mean_f = mean_integral([&](double x) { return positive_value(f, x); }, a, b, q);
  base.log_mean = logarithmic_mean(fa, fb);
  base.arith_mean = arithmetic_mean(fa, fb);
  return base;
}

ChainReport finish(ChainKind kind, const Expression& f, double a, double b, double c, std::vector<ChainTerm> terms,
                   double tol) {
  ChainReport r;
  r.kind = kind;
  r.function_text = f.to_string();
  r.a = a;
  r.b = b;
  r.modulus = c;
  r.tol = tol;
  r.terms = std::move(terms);
  for (std::size_t i = 0; i + 1 < r.terms.size(); ++i) r.margins.push_back(r.terms[i + 1].value - r.terms[i].value);
  r.min_margin = r.margins.empty() ? 0.0 : *std::min_element(r.margins.begin(), r.margins.end());
  r.holds = std::all_of(r.margins.begin(), r.margins.end(), [tol](double m) { return m >= -tol; });
  return r;
}

ChainReport theorem1_from_base(const PositiveBase& base, const Expression& f, double a, double b, double c,
                               double tol) {
  const double h2 = (b - a) * (b - a);
  return finish(ChainKind::Theorem1, f, a, b, c,
                {
                    {"f(m)+c(b-a)^2/12", base.midpoint + c * h2 / 12.0},
                    {"mean G(f(x),f(a+b-x))", base.mean_geometric},
                    {"mean f", base.mean_f},
                    {"L(f(a),f(b))-c(b-a)^2/6", base.log_mean - c * h2 / 6.0},
                    {"A(f(a),f(b))-c(b-a)^2/6", base.arith_mean - c * h2 / 6.0},
                },
                tol);
}

void require_modulus(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("modulus c must be finite and >= 0");
}

}  // namespace

ChainReport classical_hh_terms(const Expression& f, double a, double b, const ChainOptions& options) {
  require_interval(a, b);
  const double fa = f(a);
  const double fb = f(b);
  const double mid = f(0.5 * (a + b));
  const double mean = mean_integral([&](double x) { return f(x); }, a, b, quadrature_options(options));
  return finish(ChainKind::Classical, f, a, b, 0.0,
                {{"f(m)", mid}, {"mean f", mean}, {"(f(a)+f(b))/2", 0.5 * fa + 0.5 * fb}}, options.tol);
}

ChainReport dragomir_mond_chain(const Expression& f, double a, double b, const ChainOptions& options) {
  const PositiveBase base = positive_base(f, a, b, options);
  return finish(ChainKind::DragomirMond, f, a, b, 0.0,
                {
                    {"f(m)", base.midpoint},
                    {"exp(mean ln f)", base.exp_mean_log},
                    {"mean G(f(x),f(a+b-x))", base.mean_geometric},
                    {"mean f", base.mean_f},
                    {"L(f(a),f(b))", base.log_mean},
                    {"A(f(a),f(b))", base.arith_mean},
                },
                options.tol);
}

ChainReport theorem1_chain(const Expression& f, double a, double b, double c, const ChainOptions& options) {
  require_modulus(c);
  return theorem1_from_base(positive_base(f, a, b, options), f, a, b, c, options.tol);
}

double closed_form_J(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw std::domain_error("closed_form_J: u must be finite and positive");
  const double k = std::log(u);
  if (std::fabs(k) < kJSeriesSwitch) {
    // term_n = k^n / (n! (n+2)(n+3)); |k| < 1 gives 1e-22 by n = 20.
    double sum = 0.0;
    double power = 1.0;  // k^n / n!
    for (int n = 0; n < 40; ++n) {
      const double term = power / ((n + 2.0) * (n + 3.0));
      sum += term;
      if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
      power *= k / (n + 1.0);
    }
    return sum;
  }
  return (u * (k - 2.0) + k + 2.0) / (k * k * k);
}

Theorem2Report theorem2_bound(const Expression& f, double a, double b, double c, BoundForm form,
                              const ChainOptions& options) {
  require_interval(a, b);
  require_modulus(c);
  const double fa = positive_value(f, a);
  const double fb = positive_value(f, b);
  const double h2 = (b - a) * (b - a);

  Theorem2Report r;
  r.form = form;
  r.modulus = c;
  r.tol = options.tol;
  r.lhs = mean_integral([&](double x) { return positive_value(f, x) * positive_value(f, a + b - x); }, a, b,
                        quadrature_options(options));
  r.k = log_ratio(fa, fb);
  r.bracket_value = fb * closed_form_J(fa / fb) + fa * closed_form_J(fb / fa);
  r.rhs_corrected = fa * fb + c * c * h2 * h2 / 30.0 - c * h2 * r.bracket_value;
  r.holds_corrected = r.margin_corrected() >= -options.tol;

  const double diff = fb - fa;
  r.printed_applicable = diff > 0.0 && diff != 1.0;
  if (form != BoundForm::Corrected && r.printed_applicable) {
    const double ln_diff = std::log(diff);
    const double subtracted =
        4.0 * c * h2 / (ln_diff * ln_diff) * (arithmetic_mean(fa, fb) + logarithmic_mean(fa, fb));
    r.rhs_as_printed = fa * fb + c * c * h2 * h2 / 30.0 - subtracted;
    r.holds_as_printed = *r.rhs_as_printed - r.lhs >= -options.tol;
  }
  return r;
}

ChainFailsAtZero::ChainFailsAtZero(ChainReport report)
    : std::runtime_error("theorem-1 chain fails already at c = 0"), report_(std::move(report)) {}

double max_feasible_c(const Expression& f, double a, double b, const ChainOptions& options) {
  const PositiveBase base = positive_base(f, a, b, options);
  auto holds = [&](double c) { return theorem1_from_base(base, f, a, b, c, options.tol).holds; };
  if (!holds(0.0)) throw ChainFailsAtZero(theorem1_from_base(base, f, a, b, 0.0, options.tol));

  const ModulusCertificate cert = estimate_modulus(f, a, b);
  double lo = 0.0;
  double hi = std::max(cert.c_star, 0.0) + 1.0;
  for (int i = 0; holds(hi); ++i) {
    if (i == 64) throw std::runtime_error("max_feasible_c: chain holds for every tried c");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace hhv
