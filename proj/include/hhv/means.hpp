#pragma once

// Arithmetic, geometric and logarithmic means of two positive reals.
// All three throw std::domain_error unless both arguments are finite and > 0.

namespace hhv {

double arithmetic_mean(double p, double q);
double geometric_mean(double p, double q);

/// L(p, q) = (p - q) / (ln p - ln q), with L(p, p) = p.
///
/// For |ln(p/q)| < kLogMeanSeriesSwitch the value is taken from
/// L = G(p, q) * sinh(s) / s, s = ln(p/q) / 2, expanded as a series;
/// this is continuous with the direct formula and free of cancellation.
double logarithmic_mean(double p, double q);

inline constexpr double kLogMeanSeriesSwitch = 1e-4;

/// ln(p/q) accurate to a few ulps, also when p and q are close.
double log_ratio(double p, double q);

}  // namespace hhv
