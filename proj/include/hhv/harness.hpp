#pragma once

// Seeded sweeps over parameterized function families.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhv/certify.hpp"
#include "hhv/chains.hpp"
#include "hhv/expr.hpp"

namespace hhv {

/// SplitMix64. `split(key)` derives an independent stream, so a case's draws
/// depend only on (seed, case index).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  SplitMix64 split(std::uint64_t key) const;

private:
  std::uint64_t state_;
};

enum class Family { ExpQuadratic, LogAffine, ScaledPower, Custom };

std::string_view to_string(Family family);
/// Throws std::invalid_argument for unknown names.
Family family_from_string(std::string_view name);

/// Parameter ranges of the generator.
///   exp_quadratic  f = exp(alpha x^2 + beta x + gamma), alpha in [0,3]
///   log_affine     f = exp(beta x + gamma)
///   scaled_power   f = (x + s)^p, p in [-2,2], s in [0.1, 2] - a
/// with beta in [-2,2], gamma in [-1,1], a < b in [-2,2], b - a >= 0.1.
struct CaseSpec {
  Family family = Family::Custom;
  std::vector<std::pair<std::string, double>> parameters;
  std::string expression;  // used by Custom; generated for the others
  double a = 0.0;
  double b = 1.0;
  std::uint64_t seed = 0;

  Expression function() const;
  std::string function_text() const;
};

CaseSpec make_exp_quadratic(double alpha, double beta, double gamma, double a, double b);
CaseSpec make_log_affine(double beta, double gamma, double a, double b);
CaseSpec make_scaled_power(double shift, double power, double a, double b);
CaseSpec make_custom(std::string expression, double a, double b);

/// Draws a case; resamples until f is finite and positive on a 65-point grid of [a,b].
CaseSpec generate_case(Family family, SplitMix64& rng);

enum class ChainCheck { DragomirMond, Theorem1, Theorem2Corrected, Theorem2AsPrinted };
inline constexpr std::array<ChainCheck, 4> kAllChecks{ChainCheck::DragomirMond, ChainCheck::Theorem1,
                                                      ChainCheck::Theorem2Corrected, ChainCheck::Theorem2AsPrinted};
std::string_view to_string(ChainCheck check);

enum class Verdict { Holds, Violated, NotApplicable };
std::string_view to_string(Verdict verdict);

struct CheckOutcome {
  Verdict verdict = Verdict::NotApplicable;
  double min_margin = 0.0;
  std::string first_term;    // violated pair, when Violated
  std::string second_term;
  double pair_margin = 0.0;
  std::string note;          // reason when NotApplicable
};

struct CaseOutcome {
  std::size_t index = 0;
  CaseSpec spec;
  std::optional<ModulusCertificate> certificate;
  double modulus = 0.0;  // c used for the theorem checks
  std::array<CheckOutcome, 4> checks;  // indexed like kAllChecks

  const CheckOutcome& check(ChainCheck c) const { return checks[static_cast<std::size_t>(c)]; }
};

struct Tally {
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t not_applicable = 0;
};

struct Violation {
  std::size_t case_index = 0;
  CaseSpec spec;
  ChainCheck check = ChainCheck::Theorem1;
  double modulus = 0.0;
  double min_margin = 0.0;
  std::string first_term;
  std::string second_term;
  double pair_margin = 0.0;
};

struct SweepOptions {
  std::size_t n_cases = 100;
  std::vector<Family> families{Family::ExpQuadratic};
  std::uint64_t seed = 1;
  ChainOptions chain;
  std::size_t grid_n = 64;
  std::size_t refine_rounds = 3;
  /// Run the theorem checks at this c for every case instead of c* u.
  std::optional<double> forced_modulus;
  unsigned threads = 1;
};

struct SweepReport {
  std::uint64_t seed = 0;
  std::size_t cases_run = 0;
  std::array<Tally, 4> tallies;  // indexed like kAllChecks
  /// Failures of dm, t1 and corrected t2. As-printed failures are tallied only.
  std::vector<Violation> violations;
  std::vector<CaseOutcome> cases;

  const Tally& tally(ChainCheck c) const { return tallies[static_cast<std::size_t>(c)]; }
};

/// One case: certify, then dm at c = 0 (unless not log-convex) and the theorem
/// checks at c = forced or c* u with u from the case stream in (0, 1].
CaseOutcome run_case(const CaseSpec& spec, std::size_t index, const SweepOptions& options);

/// Case i uses family families[i % n] and stream split(i) of the seed.
SweepReport sweep(const SweepOptions& options);

/// Same aggregation over explicit cases.
SweepReport sweep_cases(const std::vector<CaseSpec>& cases, const SweepOptions& options);

}  // namespace hhv
