#include "hhv/means.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace hhv {

namespace {

void require_positive(double p, double q, const char* who) {
  if (!(p > 0.0 && q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::domain_error(std::string(who) + ": arguments must be finite and positive");
}

}  // namespace

double log_ratio(double p, double q) {
  require_positive(p, q, "log_ratio");
  // p - q is exact (Sterbenz) inside [q/2, 2q].
  if (p >= 0.5 * q && p <= 2.0 * q) return std::log1p((p - q) / q);
  return std::log(p / q);
}

double arithmetic_mean(double p, double q) {
  require_positive(p, q, "arithmetic_mean");
  return 0.5 * p + 0.5 * q;
}

double geometric_mean(double p, double q) {
  require_positive(p, q, "geometric_mean");
  if (p == q) return p;
  return std::sqrt(p) * std::sqrt(q);
}

double logarithmic_mean(double p, double q) {
  require_positive(p, q, "logarithmic_mean");
  if (p == q) return p;
  if (p < q) std::swap(p, q);  // bitwise symmetric
  const double k = log_ratio(p, q);
  if (std::fabs(k) < kLogMeanSeriesSwitch) {
    const double s2 = 0.25 * k * k;
    return geometric_mean(p, q) * (1.0 + s2 / 6.0 * (1.0 + s2 / 20.0));
  }
  return (p - q) / k;
}

}  // namespace hhv
