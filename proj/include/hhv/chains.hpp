#pragma once

// Hermite-Hadamard type inequality chains, evaluated term by term.
//
//   classical  f(m) <= M[f] <= A(f(a), f(b))
//   dm         f(m) <= exp M[ln f] <= M[G(f, f~)] <= M[f] <= L(f(a), f(b)) <= A(f(a), f(b))
//   t1         f(m) + c h^2/12 <= M[G(f, f~)] <= M[f] <= L - c h^2/6 <= A - c h^2/6
//
// with m = (a+b)/2, h = b - a, f~(x) = f(a+b-x) and M[g] the mean of g on [a,b].
// The product bound compares M[f f~] with
//
//   f(a) f(b) + c^2 h^4/30 - c h^2 [ f(b) J(f(a)/f(b)) + f(a) J(f(b)/f(a)) ],
//   J(u) = integral over (0,1) of t (1-t) u^t dt,
//
// and, separately, with the variant whose subtracted term reads
// 4 c h^2 (A + L) / ln(f(b) - f(a))^2 ("as printed").

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhv/errors.hpp"
#include "hhv/expr.hpp"

namespace hhv {

enum class ChainKind { Classical, DragomirMond, Theorem1 };

std::string_view to_string(ChainKind kind);

struct ChainOptions {
  double tol = 1e-9;         // verdict tolerance on margins
  double quad_tol = 1e-10;   // absolute quadrature target
  double quad_rel_tol = 1e-12;  // relative target, for integrands far from unit scale
};

struct ChainTerm {
  std::string name;
  double value = 0.0;
};

struct ChainReport {
  ChainKind kind = ChainKind::Classical;
  std::string function_text;
  double a = 0.0;
  double b = 0.0;
  double modulus = 0.0;
  std::vector<ChainTerm> terms;
  std::vector<double> margins;  // terms[i+1] - terms[i]
  bool holds = true;
  double min_margin = 0.0;
  double tol = 0.0;

  /// Index i of the first margin below -tol (pair terms[i] -> terms[i+1]).
  std::optional<std::size_t> first_violation() const;
};

ChainReport classical_hh_terms(const Expression& f, double a, double b, const ChainOptions& options = {});
ChainReport dragomir_mond_chain(const Expression& f, double a, double b, const ChainOptions& options = {});
ChainReport theorem1_chain(const Expression& f, double a, double b, double c, const ChainOptions& options = {});

/// J(u) = integral_0^1 t (1-t) u^t dt. With k = ln u:
/// J = (u (k-2) + k + 2) / k^3, or the series sum k^n / (n! (n+2)(n+3)) for |k| < 1.
double closed_form_J(double u);

inline constexpr double kJSeriesSwitch = 1.0;

enum class BoundForm { Corrected, AsPrinted, Both };

struct Theorem2Report {
  double lhs = 0.0;
  double rhs_corrected = 0.0;
  std::optional<double> rhs_as_printed;
  bool holds_corrected = true;
  std::optional<bool> holds_as_printed;
  bool printed_applicable = false;
  double bracket_value = 0.0;  // f(b) J(f(a)/f(b)) + f(a) J(f(b)/f(a))
  double k = 0.0;              // ln(f(a)/f(b))
  double modulus = 0.0;
  double tol = 0.0;
  BoundForm form = BoundForm::Corrected;

  double margin_corrected() const { return rhs_corrected - lhs; }
  std::optional<double> margin_as_printed() const;
};

Theorem2Report theorem2_bound(const Expression& f, double a, double b, double c,
                              BoundForm form = BoundForm::Corrected, const ChainOptions& options = {});

/// The theorem-1 chain already fails at c = 0.
class ChainFailsAtZero : public std::runtime_error {
public:
  explicit ChainFailsAtZero(ChainReport report);
  const ChainReport& report() const noexcept { return report_; }

private:
  ChainReport report_;
};

/// Largest c (to within 1e-9) for which theorem1_chain holds. The search
/// starts on [0, max(c*, 0) + 1] and doubles the upper end while the chain
/// still holds there.
double max_feasible_c(const Expression& f, double a, double b, const ChainOptions& options = {});

}  // namespace hhv
