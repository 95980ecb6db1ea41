#include "hhv/harness.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace hhv {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SplitMix64 SplitMix64::split(std::uint64_t key) const {
  SplitMix64 mixer(state_ ^ (key * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL));
  mixer.next();
  return SplitMix64(mixer.next());
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::ExpQuadratic: return "exp_quadratic";
    case Family::LogAffine: return "log_affine";
    case Family::ScaledPower: return "scaled_power";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::ExpQuadratic, Family::LogAffine, Family::ScaledPower, Family::Custom})
    if (name == to_string(f)) return f;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string_view to_string(ChainCheck check) {
  switch (check) {
    case ChainCheck::DragomirMond: return "dm";
    case ChainCheck::Theorem1: return "t1";
    case ChainCheck::Theorem2Corrected: return "t2_corrected";
    case ChainCheck::Theorem2AsPrinted: return "t2_printed";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

namespace {

std::string literal(double v) { return "(" + format_number(v) + ")"; }

double parameter(const CaseSpec& spec, std::string_view name) {
  for (const auto& [key, value] : spec.parameters)
    if (key == name) return value;
  throw std::invalid_argument("case has no parameter '" + std::string(name) + "'");
}

bool positive_on_grid(const CaseSpec& spec) {
  try {
    const Expression f = spec.function();
    for (int i = 0; i <= 64; ++i) {
      const double x = spec.a + (spec.b - spec.a) * i / 64.0;
      if (!(f(x) > 0.0)) return false;
    }
    return true;
  } catch (const EvaluationError&) {
    return false;
  }
}

constexpr std::size_t kCheckCount = kAllChecks.size();

std::size_t slot(ChainCheck c) { return static_cast<std::size_t>(c); }

CheckOutcome from_chain(const ChainReport& r) {
  CheckOutcome out;
  out.min_margin = r.min_margin;
  if (auto i = r.first_violation()) {
    out.verdict = Verdict::Violated;
    out.first_term = r.terms[*i].name;
    out.second_term = r.terms[*i + 1].name;
    out.pair_margin = r.margins[*i];
  } else {
    out.verdict = Verdict::Holds;
  }
  return out;
}

CheckOutcome from_bound(double margin, bool holds, const char* rhs_name) {
  CheckOutcome out;
  out.min_margin = margin;
  out.verdict = holds ? Verdict::Holds : Verdict::Violated;
  if (!holds) {
    out.first_term = "lhs";
    out.second_term = rhs_name;
    out.pair_margin = margin;
  }
  return out;
}

CheckOutcome not_applicable(std::string note) {
  CheckOutcome out;
  out.note = std::move(note);
  return out;
}

template <class Fn>
CheckOutcome guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& ex) {
    return not_applicable(ex.what());
  }
}

}  // namespace

Expression CaseSpec::function() const { return Expression::parse(function_text()); }

std::string CaseSpec::function_text() const {
  switch (family) {
    case Family::ExpQuadratic:
      return "exp(" + literal(parameter(*this, "alpha")) + "*x^2+" + literal(parameter(*this, "beta")) + "*x+" +
             literal(parameter(*this, "gamma")) + ")";
    case Family::LogAffine:
      return "exp(" + literal(parameter(*this, "beta")) + "*x+" + literal(parameter(*this, "gamma")) + ")";
    case Family::ScaledPower:
      return "(x+" + literal(parameter(*this, "s")) + ")^" + literal(parameter(*this, "p"));
    case Family::Custom:
      return expression;
  }
  return expression;
}

CaseSpec make_exp_quadratic(double alpha, double beta, double gamma, double a, double b) {
  if (alpha < 0.0) throw std::invalid_argument("exp_quadratic needs alpha >= 0");
  CaseSpec s;
  s.family = Family::ExpQuadratic;
  s.parameters = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}};
  s.a = a;
  s.b = b;
  s.expression = s.function_text();
  return s;
}

CaseSpec make_log_affine(double beta, double gamma, double a, double b) {
  CaseSpec s;
  s.family = Family::LogAffine;
  s.parameters = {{"beta", beta}, {"gamma", gamma}};
  s.a = a;
  s.b = b;
  s.expression = s.function_text();
  return s;
}

CaseSpec make_scaled_power(double shift, double power, double a, double b) {
  if (!(a + shift > 0.0)) throw std::invalid_argument("scaled_power needs x + s > 0 on [a,b]");
  CaseSpec s;
  s.family = Family::ScaledPower;
  s.parameters = {{"s", shift}, {"p", power}};
  s.a = a;
  s.b = b;
  s.expression = s.function_text();
  return s;
}

CaseSpec make_custom(std::string expression, double a, double b) {
  CaseSpec s;
  s.family = Family::Custom;
  s.expression = std::move(expression);
  s.a = a;
  s.b = b;
  return s;
}

CaseSpec generate_case(Family family, SplitMix64& rng) {
  if (family == Family::Custom) throw std::invalid_argument("custom cases cannot be generated");
  for (;;) {
    double a = rng.uniform(-2.0, 2.0);
    double b = rng.uniform(-2.0, 2.0);
    if (b < a) std::swap(a, b);
    if (b - a < 0.1) continue;

    CaseSpec spec;
    switch (family) {
      case Family::ExpQuadratic:
        spec = make_exp_quadratic(rng.uniform(0.0, 3.0), rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0), a, b);
        break;
      case Family::LogAffine:
        spec = make_log_affine(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0), a, b);
        break;
      case Family::ScaledPower: {
        const double shift = rng.uniform(0.1, 2.0) - a;
        spec = make_scaled_power(shift, rng.uniform(-2.0, 2.0), a, b);
        break;
      }
      case Family::Custom:
        break;
    }
    if (positive_on_grid(spec)) return spec;
  }
}

CaseOutcome run_case(const CaseSpec& spec, std::size_t index, const SweepOptions& options) {
  CaseOutcome out;
  out.index = index;
  out.spec = spec;

  Expression f = Expression::parse("1");
  try {
    f = spec.function();
    out.certificate = estimate_modulus(f, spec.a, spec.b, options.grid_n, options.refine_rounds);
  } catch (const std::exception& ex) {
    for (auto& c : out.checks) c = not_applicable(ex.what());
    return out;
  }
  const ModulusCertificate& cert = *out.certificate;

  if (cert.status == CertificateStatus::NotLogConvex) {
    out.checks[slot(ChainCheck::DragomirMond)] = not_applicable("f is not log-convex on the grid");
  } else {
    out.checks[slot(ChainCheck::DragomirMond)] =
        guarded([&] { return from_chain(dragomir_mond_chain(f, spec.a, spec.b, options.chain)); });
  }

  std::optional<double> c = options.forced_modulus;
  if (!c && cert.status == CertificateStatus::CertifiedPositive) {
    SplitMix64 stream = SplitMix64(options.seed).split(index).split(1);
    c = cert.c_star * (1.0 - stream.uniform());
  }
  if (!c) {
    const std::string note = "no positive modulus (" + std::string(to_string(cert.status)) + ")";
    out.checks[slot(ChainCheck::Theorem1)] = not_applicable(note);
    out.checks[slot(ChainCheck::Theorem2Corrected)] = not_applicable(note);
    out.checks[slot(ChainCheck::Theorem2AsPrinted)] = not_applicable(note);
    return out;
  }
  out.modulus = *c;

  out.checks[slot(ChainCheck::Theorem1)] =
      guarded([&] { return from_chain(theorem1_chain(f, spec.a, spec.b, *c, options.chain)); });

  try {
    const Theorem2Report t2 = theorem2_bound(f, spec.a, spec.b, *c, BoundForm::Both, options.chain);
    out.checks[slot(ChainCheck::Theorem2Corrected)] =
        from_bound(t2.margin_corrected(), t2.holds_corrected, "rhs_corrected");
    if (t2.rhs_as_printed) {
      out.checks[slot(ChainCheck::Theorem2AsPrinted)] =
          from_bound(*t2.margin_as_printed(), *t2.holds_as_printed, "rhs_as_printed");
    } else {
      out.checks[slot(ChainCheck::Theorem2AsPrinted)] = not_applicable("f(b) - f(a) <= 0 or equal to 1");
    }
  } catch (const std::exception& ex) {
    out.checks[slot(ChainCheck::Theorem2Corrected)] = not_applicable(ex.what());
    out.checks[slot(ChainCheck::Theorem2AsPrinted)] = not_applicable(ex.what());
  }
  return out;
}

namespace {

SweepReport aggregate(std::vector<CaseOutcome> outcomes, const SweepOptions& options) {
  SweepReport report;
  report.seed = options.seed;
  report.cases_run = outcomes.size();
  for (const CaseOutcome& o : outcomes) {
    for (std::size_t k = 0; k < kCheckCount; ++k) {
      const CheckOutcome& c = o.checks[k];
      Tally& t = report.tallies[k];
      switch (c.verdict) {
        case Verdict::Holds: ++t.holds; break;
        case Verdict::NotApplicable: ++t.not_applicable; break;
        case Verdict::Violated:
          ++t.violated;
          if (kAllChecks[k] == ChainCheck::Theorem2AsPrinted) break;
          report.violations.push_back(Violation{o.index, o.spec, kAllChecks[k],
                                                kAllChecks[k] == ChainCheck::DragomirMond ? 0.0 : o.modulus,
                                                c.min_margin, c.first_term, c.second_term, c.pair_margin});
          break;
      }
    }
  }
  report.cases = std::move(outcomes);
  return report;
}

template <class Job>
std::vector<CaseOutcome> run_indexed(std::size_t n, unsigned threads, Job job) {
  std::vector<CaseOutcome> outcomes(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) outcomes[i] = job(i);
    return outcomes;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) outcomes[i] = job(i);
    });
  }
  for (auto& t : pool) t.join();
  return outcomes;
}

}  // namespace

SweepReport sweep(const SweepOptions& options) {
  if (options.n_cases == 0) throw std::invalid_argument("sweep needs at least one case");
  if (options.families.empty()) throw std::invalid_argument("sweep needs at least one family");
  const SplitMix64 root(options.seed);
  auto outcomes = run_indexed(options.n_cases, options.threads, [&](std::size_t i) {
    SplitMix64 stream = root.split(i).split(0);
    CaseSpec spec = generate_case(options.families[i % options.families.size()], stream);
    spec.seed = root.split(i).next();
    return run_case(spec, i, options);
  });
  return aggregate(std::move(outcomes), options);
}

SweepReport sweep_cases(const std::vector<CaseSpec>& cases, const SweepOptions& options) {
  if (cases.empty()) throw std::invalid_argument("sweep needs at least one case");
  auto outcomes =
      run_indexed(cases.size(), options.threads, [&](std::size_t i) { return run_case(cases[i], i, options); });
  return aggregate(std::move(outcomes), options);
}

}  // namespace hhv
