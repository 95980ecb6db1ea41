#include "hhv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace hhv {

IntegrandError::IntegrandError(const std::string& message, double abscissa)
    : std::runtime_error("integrand failed at " + format_number(abscissa) + ": " + message),
      abscissa_(abscissa) {}

NonConvergenceError::NonConvergenceError(const QuadratureResult& best)
    : std::runtime_error("quadrature did not converge (estimate " + format_number(best.value) +
                         ", error " + format_number(best.error_estimate) + ")"),
      best_(best) {}

namespace {

// Kronrod abscissae on [0,1) (symmetric), Kronrod weights, Gauss weights for
// the odd-indexed abscissae. Values from QUADPACK dqk15.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool at_rounding;  // error is the rounding floor; splitting cannot lower it
};

double sample(const Integrand& g, double x) {
  double y;
  try {
    y = g(x);
  } catch (const EvaluationError& ex) {
    throw IntegrandError(ex.what(), x);
  }
  if (!std::isfinite(y)) throw IntegrandError("non-finite value", x);
  return y;
}

Panel gauss_kronrod(const Integrand& g, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = sample(g, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::fabs(kronrod);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = sample(g, center - dx);
    const double f2 = sample(g, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  const double truncation = std::fabs((kronrod - gauss) * half);
  const double rounding = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::fabs(half);
  return Panel{a, b, value, std::max(truncation, rounding), depth, truncation <= rounding};
}

}  // namespace

QuadratureResult integrate(const Integrand& g, double a, double b, const QuadratureOptions& options) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("integrate: need finite a < b");
  if (!(options.tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");

  std::vector<Panel> panels{gauss_kronrod(g, a, b, 0)};
  std::size_t evaluations = 15;

  auto totals = [&] {
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    double value = 0.0;
    double error = 0.0;
    for (const Panel& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double running_error = panels.front().error;
  double running_value = panels.front().value;
  bool converged = false;
  for (;;) {
    const double target = std::max(options.tol, options.rel_tol * std::fabs(running_value));
    if (running_error <= target) {
      // Running sums drift; confirm with an ordered resummation.
      auto [value, error] = totals();
      running_value = value;
      running_error = error;
      if (error <= std::max(options.tol, options.rel_tol * std::fabs(value))) {
        converged = true;
        break;
      }
    }
    if (panels.size() >= options.max_panels) break;

    std::size_t worst = panels.size();
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (panels[i].depth >= options.max_depth || panels[i].at_rounding) continue;
      if (worst == panels.size() || panels[i].error > panels[worst].error) worst = i;
    }
    if (worst == panels.size()) break;

    const Panel parent = panels[worst];
    const double mid = 0.5 * (parent.a + parent.b);
    if (!(parent.a < mid && mid < parent.b)) {
      panels[worst].depth = options.max_depth;  // cannot split below machine resolution
      continue;
    }
    const Panel left = gauss_kronrod(g, parent.a, mid, parent.depth + 1);
    const Panel right = gauss_kronrod(g, mid, parent.b, parent.depth + 1);
    evaluations += 30;
    panels[worst] = left;
    panels.push_back(right);
    running_error += left.error + right.error - parent.error;
    running_value += left.value + right.value - parent.value;
  }

  auto [value, error] = totals();
  return QuadratureResult{value, error, evaluations, converged};
}

QuadratureResult integrate(const Integrand& g, double a, double b, double tol) {
  QuadratureOptions options;
  options.tol = tol;
  return integrate(g, a, b, options);
}

double mean_integral(const Integrand& g, double a, double b, const QuadratureOptions& options) {
  const QuadratureResult r = integrate(g, a, b, options);
  if (!r.converged) throw NonConvergenceError(r);
  return r.value / (b - a);
}

double mean_integral(const Expression& f, double a, double b, double tol) {
  QuadratureOptions options;
  options.tol = tol;
  return mean_integral([&f](double x) { return f(x); }, a, b, options);
}

}  // namespace hhv
