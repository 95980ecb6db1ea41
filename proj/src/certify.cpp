#include "hhv/certify.hpp"

#include "hhv/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace hhv {

Convexity Convexity::strongly_convex(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("strong convexity needs a modulus c > 0");
  return {ConvexityKind::StronglyConvex, c};
}

Convexity Convexity::strongly_log_convex(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("strong log-convexity needs a modulus c > 0");
  return {ConvexityKind::StronglyLogConvex, c};
}

std::string_view to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::CertifiedPositive: return "certified_positive";
    case CertificateStatus::CertifiedZero: return "certified_zero";
    case CertificateStatus::NotLogConvex: return "not_log_convex";
  }
  return "unknown";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Sample {
  double value;
  double log_value;
};

Sample positive_sample(const Expression& f, double x) {
  const double v = f(x);
  if (!(v > 0.0)) throw NotApplicableError("f(" + format_number(x) + ") = " + format_number(v) + " is not positive");
  return {v, std::log(v)};
}

// Rounding-level values of the log gap are flushed to zero; see log_defect.
bool below_noise(double log_gap, double log_magnitude) {
  return std::fabs(log_gap) <= 16.0 * kEps * (1.0 + log_magnitude);
}

// Written through ratios f(x)/f(z), f(y)/f(z) so that scaling f by a power of
// two leaves every rounding step unchanged.
double log_ratio_at(const Sample& fx, const Sample& fy, double fz, double lambda, double mu, double d2) {
  const double gap = lambda * log_ratio(fx.value, fz) + mu * log_ratio(fy.value, fz);
  if (below_noise(gap, std::max(std::fabs(fx.log_value), std::fabs(fy.log_value)))) return 0.0;
  return fz * std::expm1(gap) / (lambda * mu * d2);
}

void check_triple(double x, double y, double lambda) {
  if (!std::isfinite(x) || !std::isfinite(y) || x == y)
    throw std::invalid_argument("defect needs finite x != y");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("defect needs 0 < lambda < 1");
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  Triple at;
  bool found = false;

  void offer(double v, double x, double y, double lambda) {
    if (!found || v < value ||
        (v == value && std::tie(x, y, lambda) < std::tie(at.x, at.y, at.lambda))) {
      value = v;
      at = Triple{x, y, lambda};
      found = true;
    }
  }
};

std::vector<double> uniform_points(double lo, double hi, std::size_t n) {
  std::vector<double> pts(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = lo + static_cast<double>(i) * step;
  pts.back() = hi;
  return pts;
}

// Interior points lo + j (hi-lo)/n, j = 1..n-1.
std::vector<double> interior_points(double lo, double hi, std::size_t n) {
  std::vector<double> pts;
  pts.reserve(n - 1);
  const double step = (hi - lo) / static_cast<double>(n);
  for (std::size_t j = 1; j < n; ++j) {
    const double v = lo + static_cast<double>(j) * step;
    if (v > 0.0 && v < 1.0) pts.push_back(v);
  }
  return pts;
}

std::vector<Sample> sample_all(const Expression& f, const std::vector<double>& xs) {
  std::vector<Sample> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(positive_sample(f, x));
  return out;
}

// Scans xs x ys x lambdas (only pairs with x < y when upper_only), skipping
// triples whose weight lambda (1-lambda) (x-y)^2 is below min_weight.
std::size_t scan(const Expression& f, const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<double>& lambdas, bool upper_only, double min_weight, Best& best) {
  const std::vector<Sample> fxs = sample_all(f, xs);
  const std::vector<Sample> fys = sample_all(f, ys);
  std::size_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const double x = xs[i];
      const double y = ys[k];
      if (x == y || (upper_only && !(x < y))) continue;
      const double d = x - y;
      const double d2 = d * d;
      for (double lambda : lambdas) {
        const double mu = 1.0 - lambda;
        if (lambda * mu * d2 < min_weight) continue;
        const double z = lambda * x + mu * y;
        const double fz = f(z);
        if (!(fz > 0.0))
          throw NotApplicableError("f(" + format_number(z) + ") = " + format_number(fz) + " is not positive");
        best.offer(log_ratio_at(fxs[i], fys[k], fz, lambda, mu, d2), x, y, lambda);
        ++count;
      }
    }
  }
  return count;
}

void require_grid(double a, double b, std::size_t grid_n) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("need finite a < b");
  if (grid_n < 3) throw std::invalid_argument("grid needs at least 3 points per axis");
}

}  // namespace

double log_defect(const Expression& f, double x, double y, double lambda) {
  check_triple(x, y, lambda);
  const double mu = 1.0 - lambda;
  const Sample fx = positive_sample(f, x);
  const Sample fy = positive_sample(f, y);
  const double fz = positive_sample(f, lambda * x + mu * y).value;
  const double d = x - y;
  return log_ratio_at(fx, fy, fz, lambda, mu, d * d);
}

double convex_defect(const Expression& f, double x, double y, double lambda) {
  check_triple(x, y, lambda);
  const double mu = 1.0 - lambda;
  const double fx = f(x);
  const double fy = f(y);
  const double fz = f(lambda * x + mu * y);
  const double chord = lambda * fx + mu * fy;
  const double gap = chord - fz;
  if (std::fabs(gap) <= 16.0 * kEps * std::max({std::fabs(fx), std::fabs(fy), std::fabs(fz)})) return 0.0;
  const double d = x - y;
  return gap / (lambda * mu * (d * d));
}

bool satisfies(const Expression& f, const Convexity& kind, double x, double y, double lambda, double slack) {
  switch (kind.kind) {
    case ConvexityKind::Convex:
      return convex_defect(f, x, y, lambda) >= -slack;
    case ConvexityKind::StronglyConvex:
      return convex_defect(f, x, y, lambda) >= kind.modulus - slack;
    case ConvexityKind::LogConvex:
      return log_defect(f, x, y, lambda) >= -slack;
    case ConvexityKind::StronglyLogConvex:
      return log_defect(f, x, y, lambda) >= kind.modulus - slack;
  }
  return false;
}

ModulusCertificate estimate_modulus(const Expression& f, double a, double b, std::size_t grid_n,
                                    std::size_t refine_rounds) {
  require_grid(a, b, grid_n);

  Best best;
  const std::vector<double> grid = uniform_points(a, b, grid_n);
  std::size_t sampled = scan(f, grid, grid, interior_points(0.0, 1.0, grid_n), true, 0.0, best);

  // Refinement never goes below the smallest weight of the base grid: closer
  // triples resolve nothing but rounding noise in f.
  const double n = static_cast<double>(grid_n);
  const double h = (b - a) / (n - 1.0);
  const double min_weight = (1.0 / n) * (1.0 - 1.0 / n) * h * h * (1.0 - 1e-9);

  // Refinement boxes use half the base resolution per axis.
  const std::size_t m = std::max<std::size_t>(3, (grid_n + 1) / 2);
  for (std::size_t round = 1; round <= refine_rounds; ++round) {
    const double scale = std::ldexp(1.0, -static_cast<int>(round) - 1);
    const double hx = (b - a) * scale;
    const Triple w = best.at;
    const auto xs = uniform_points(std::max(a, w.x - hx), std::min(b, w.x + hx), m);
    const auto ys = uniform_points(std::max(a, w.y - hx), std::min(b, w.y + hx), m);
    const auto lambdas = interior_points(std::max(0.0, w.lambda - scale), std::min(1.0, w.lambda + scale), m);
    sampled += scan(f, xs, ys, lambdas, false, min_weight, best);
  }

  ModulusCertificate cert;
  cert.c_star = best.value;
  cert.witness = best.at;
  cert.grid_size = grid_n;
  cert.refinement_rounds = refine_rounds;
  cert.triples_sampled = sampled;
  if (best.value < 0.0) {
    cert.status = CertificateStatus::NotLogConvex;
  } else if (best.value <= kZeroModulus) {
    cert.status = CertificateStatus::CertifiedZero;
  } else {
    cert.status = CertificateStatus::CertifiedPositive;
  }
  return cert;
}

ModulusCheck check_modulus(const Expression& f, double a, double b, double c, std::size_t grid_n) {
  require_grid(a, b, grid_n);
  if (!(c > 0.0)) throw std::invalid_argument("check_modulus needs c > 0");
  Best best;
  const std::vector<double> grid = uniform_points(a, b, grid_n);
  scan(f, grid, grid, interior_points(0.0, 1.0, grid_n), true, 0.0, best);
  return ModulusCheck{best.value >= c - 1e-12, best.at, best.value};
}

}  // namespace hhv
