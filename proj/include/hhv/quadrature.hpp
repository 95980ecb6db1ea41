#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on a closed interval.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include "hhv/expr.hpp"

namespace hhv {

using Integrand = std::function<double(double)>;

struct QuadratureOptions {
  double tol = 1e-10;        // absolute target for the summed error estimate
  double rel_tol = 0.0;      // optional relative target; the looser of the two applies
  int max_depth = 50;        // bisection depth limit per panel
  std::size_t max_panels = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// The integrand failed (threw or returned a non-finite value) at `abscissa()`.
class IntegrandError : public std::runtime_error {
public:
  IntegrandError(const std::string& message, double abscissa);
  double abscissa() const noexcept { return abscissa_; }

private:
  double abscissa_;
};

/// Raised by the convenience wrappers when the adaptive scheme gives up.
class NonConvergenceError : public std::runtime_error {
public:
  explicit NonConvergenceError(const QuadratureResult& best);
  const QuadratureResult& best() const noexcept { return best_; }

private:
  QuadratureResult best_;
};

/// Globally adaptive bisection: the panel with the largest estimate is split
/// until the summed per-panel estimates meet the target. Per-panel estimate is
/// |K15 - G7|, floored at the rounding level 50 eps * integral of |g|.
/// Panels are summed left to right, so the result is deterministic.
QuadratureResult integrate(const Integrand& g, double a, double b, const QuadratureOptions& options);
QuadratureResult integrate(const Integrand& g, double a, double b, double tol = 1e-10);

/// (1/(b-a)) * integral of f over [a,b]; throws NonConvergenceError if not converged.
double mean_integral(const Expression& f, double a, double b, double tol = 1e-10);
double mean_integral(const Integrand& g, double a, double b, const QuadratureOptions& options);

}  // namespace hhv
