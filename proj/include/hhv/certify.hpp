#pragma once

// Grid estimation of the modulus of strong log-convexity.
//
// For a positive f and a triple (x, y, lambda), x != y, 0 < lambda < 1, the
// log defect
//
//     ( f(x)^lambda f(y)^(1-lambda) - f(lambda x + (1-lambda) y) )
//     ------------------------------------------------------------
//                   lambda (1-lambda) (x-y)^2
//
// is the largest c for which the strong log-convexity inequality holds at that
// triple. Its infimum over [a,b] is the maximal modulus c*. A grid minimum is
// an upper estimate of c*, not a proof; the certificate records the grid.

#include <cstddef>
#include <string_view>

#include "hhv/errors.hpp"
#include "hhv/expr.hpp"

namespace hhv {

enum class ConvexityKind { Convex, LogConvex, StronglyConvex, StronglyLogConvex };

/// A convexity notion; the strongly_* kinds carry a modulus c > 0.
struct Convexity {
  ConvexityKind kind = ConvexityKind::Convex;
  double modulus = 0.0;

  static Convexity convex() { return {ConvexityKind::Convex, 0.0}; }
  static Convexity log_convex() { return {ConvexityKind::LogConvex, 0.0}; }
  static Convexity strongly_convex(double c);
  static Convexity strongly_log_convex(double c);
};

/// Checks the defining inequality of `kind` at one triple, up to `slack`.
bool satisfies(const Expression& f, const Convexity& kind, double x, double y, double lambda,
               double slack = 0.0);

struct Triple {
  double x = 0.0;
  double y = 0.0;
  double lambda = 0.5;
};

enum class CertificateStatus { CertifiedPositive, CertifiedZero, NotLogConvex };

std::string_view to_string(CertificateStatus status);

struct ModulusCertificate {
  double c_star = 0.0;          // minimum sampled log defect after refinement
  Triple witness;               // triple attaining c_star
  std::size_t grid_size = 0;    // points per axis
  std::size_t refinement_rounds = 0;
  std::size_t triples_sampled = 0;
  CertificateStatus status = CertificateStatus::CertifiedZero;
};

/// |c_star| at or below this (and no negative defect) reads as zero.
inline constexpr double kZeroModulus = 1e-12;

/// Log defect at one triple. Throws std::invalid_argument for x == y or
/// lambda outside (0,1), NotApplicableError if a value of f is not positive.
///
/// Computed as f(z) expm1(lambda ln(f(x)/f(z)) + (1-lambda) ln(f(y)/f(z))) / (...);
/// a log gap below the rounding level 16 eps (1 + max |ln f(x)|, |ln f(y)|)
/// is reported as exactly 0.
double log_defect(const Expression& f, double x, double y, double lambda);

/// Same ratio with the arithmetic instead of the geometric interpolant; f may
/// take any sign. Rounding-level gaps are reported as 0.
double convex_defect(const Expression& f, double x, double y, double lambda);

/// Minimum log defect over x, y on the uniform (grid_n)-point grid of [a,b]
/// and lambda in {1/grid_n, ..., (grid_n-1)/grid_n}, followed by
/// `refine_rounds` rounds on a box around the witness whose side halves each
/// round, sampled with about grid_n/2 points per axis. Only x < y is scanned on the full grid: the defect is invariant
/// under (x, lambda) <-> (y, 1-lambda). Ties go to the lexicographically
/// smallest (x, y, lambda).
ModulusCertificate estimate_modulus(const Expression& f, double a, double b, std::size_t grid_n = 64,
                                    std::size_t refine_rounds = 3);

struct ModulusCheck {
  bool ok = false;
  Triple worst;         // triple with the smallest defect on the grid
  double defect = 0.0;  // its defect
};

/// ok iff every triple of the base grid has log defect >= c - 1e-12.
ModulusCheck check_modulus(const Expression& f, double a, double b, double c, std::size_t grid_n = 64);

}  // namespace hhv
