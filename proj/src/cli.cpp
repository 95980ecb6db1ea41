#include "hhv/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "hhv/certify.hpp"
#include "hhv/chains.hpp"
#include "hhv/harness.hpp"
#include "hhv/quadrature.hpp"
#include "hhv/report.hpp"

namespace hhv {

namespace {

enum class Format { Table, Json, Csv };

struct Common {
  std::string f;
  double a = 0.0;
  double b = 1.0;
  bool json = false;
  bool csv = false;

  Format format() const { return json ? Format::Json : csv ? Format::Csv : Format::Table; }
};

void add_function_options(CLI::App* cmd, Common& common) {
  cmd->add_option("--f", common.f, "function of x, e.g. \"exp(x^2)\"")->required();
  cmd->add_option("--a", common.a, "left end of the interval")->required();
  cmd->add_option("--b", common.b, "right end of the interval")->required();
}

void add_format_flags(CLI::App* cmd, Common& common) {
  auto* json = cmd->add_flag("--json", common.json, "emit the JSON report");
  auto* csv = cmd->add_flag("--csv", common.csv, "emit CSV rows");
  json->excludes(csv);
}

Json envelope(const std::string& command, Json inputs, Json result, Json violations) {
  return Json{{"tool", "hhverify"},
              {"version", kVersion},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)},
              {"violations", std::move(violations)}};
}

// key,value rows for reports without a natural row structure.
void write_flat_csv(std::ostream& out, const Json& value, const std::string& prefix = "") {
  if (prefix.empty()) out << "key,value\n";
  for (const auto& [key, item] : value.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (item.is_object()) {
      write_flat_csv(out, item, name);
    } else {
      const std::string text = item.is_string() ? item.get<std::string>() : dump_canonical(item);
      out << csv_field(name) << ',' << csv_field(text) << '\n';
    }
  }
}

struct Emitter {
  std::ostream& out;
  Format format;

  int emit(const Json& report, const std::function<void(std::ostream&)>& csv,
           const std::function<void(std::ostream&)>& table) const {
    switch (format) {
      case Format::Json: out << dump_canonical(report) << '\n'; break;
      case Format::Csv: csv(out); break;
      case Format::Table: table(out); break;
    }
    return report.at("violations").empty() ? 0 : 1;
  }
};

std::vector<Family> parse_families(const std::string& list) {
  std::vector<Family> families;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Family f = family_from_string(item);
    if (f == Family::Custom) throw std::invalid_argument("family 'custom' cannot be generated");
    families.push_back(f);
  }
  if (families.empty()) throw std::invalid_argument("--families is empty");
  return families;
}

void report_parse_error(std::ostream& err, const ParseError& ex, const std::string& text) {
  err << "error: " << ex.what() << "\n  " << text << "\n  " << std::string(ex.position(), ' ') << "^\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of Hermite-Hadamard type inequalities for (strongly) log-convex functions",
               "hhverify"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // chain
  Common chain_io;
  double chain_c = 0.0;
  double chain_tol = 1e-9;
  std::string which = "t1";
  auto* chain = app.add_subcommand("chain", "evaluate an inequality chain term by term");
  add_function_options(chain, chain_io);
  chain->add_option("--c", chain_c, "modulus c >= 0 (t1 only)");
  chain->add_option("--which", which, "classical | dm | t1")
      ->check(CLI::IsMember({"classical", "dm", "t1"}))
      ->required();
  chain->add_option("--tol", chain_tol, "verdict tolerance on margins");
  add_format_flags(chain, chain_io);

  // certify
  Common cert_io;
  std::size_t grid = 64;
  std::size_t refine = 3;
  auto* certify = app.add_subcommand("certify", "estimate the modulus of strong log-convexity");
  add_function_options(certify, cert_io);
  certify->add_option("--grid", grid, "grid points per axis (>= 3)");
  certify->add_option("--refine", refine, "refinement rounds");
  add_format_flags(certify, cert_io);

  // theorem2
  Common t2_io;
  double t2_c = 0.0;
  double t2_tol = 1e-9;
  std::string form = "corrected";
  auto* theorem2 = app.add_subcommand("theorem2", "check the bound on the mean of f(x) f(a+b-x)");
  add_function_options(theorem2, t2_io);
  theorem2->add_option("--c", t2_c, "modulus c >= 0")->required();
  theorem2->add_option("--form", form, "corrected | printed | both")
      ->check(CLI::IsMember({"corrected", "printed", "both"}));
  theorem2->add_option("--tol", t2_tol, "verdict tolerance");
  add_format_flags(theorem2, t2_io);

  // sweep
  Common sweep_io;
  std::string families = "exp_quadratic";
  std::size_t cases = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  double sweep_tol = 1e-9;
  unsigned threads = 1;
  std::optional<double> forced_c;
  std::size_t sweep_grid = 64;
  std::size_t sweep_refine = 3;
  auto* sweep_cmd = app.add_subcommand("sweep", "run seeded random cases through all checks");
  sweep_cmd->add_option("--families", families, "comma-separated: exp_quadratic, log_affine, scaled_power")
      ->required();
  sweep_cmd->add_option("--cases", cases, "number of cases")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "seed")->required();
  sweep_cmd->add_option("--out", out_path, "write the report here instead of standard output");
  sweep_cmd->add_option("--tol", sweep_tol, "verdict tolerance");
  sweep_cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--c", forced_c, "run theorem checks at this c instead of c* u");
  sweep_cmd->add_option("--grid", sweep_grid, "certificate grid points per axis");
  sweep_cmd->add_option("--refine", sweep_refine, "certificate refinement rounds");
  add_format_flags(sweep_cmd, sweep_io);

  // integrate
  Common int_io;
  double int_tol = 1e-10;
  auto* integrate_cmd = app.add_subcommand("integrate", "adaptive quadrature of f over [a,b]");
  add_function_options(integrate_cmd, int_io);
  integrate_cmd->add_option("--tol", int_tol, "absolute error target");
  add_format_flags(integrate_cmd, int_io);

  // maxc
  Common maxc_io;
  auto* maxc = app.add_subcommand("maxc", "largest c for which the theorem-1 chain holds");
  add_function_options(maxc, maxc_io);
  add_format_flags(maxc, maxc_io);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  }

  std::string function_text;
  try {
    if (chain->parsed()) {
      function_text = chain_io.f;
      const Expression f = Expression::parse(chain_io.f);
      ChainOptions options;
      options.tol = chain_tol;
      ChainReport r;
      if (which == "classical") {
        r = classical_hh_terms(f, chain_io.a, chain_io.b, options);
      } else if (which == "dm") {
        r = dragomir_mond_chain(f, chain_io.a, chain_io.b, options);
      } else {
        r = theorem1_chain(f, chain_io.a, chain_io.b, chain_c, options);
      }
      const Json inputs{{"f", chain_io.f}, {"a", chain_io.a}, {"b", chain_io.b},
                        {"c", chain_c},    {"which", which},    {"tol", chain_tol}};
      return Emitter{out, chain_io.format()}.emit(
          envelope("chain", inputs, to_json(r), violations_json(r)), [&](std::ostream& o) { write_csv(o, r); },
          [&](std::ostream& o) { write_table(o, r); });
    }

    if (certify->parsed()) {
      function_text = cert_io.f;
      const Expression f = Expression::parse(cert_io.f);
      const ModulusCertificate cert = estimate_modulus(f, cert_io.a, cert_io.b, grid, refine);
      const Json report = envelope("certify",
                                   Json{{"f", cert_io.f}, {"a", cert_io.a}, {"b", cert_io.b}, {"grid", grid},
                                        {"refine", refine}},
                                   to_json(cert), violations_json(cert));
      return Emitter{out, cert_io.format()}.emit(
          report, [&](std::ostream& o) { write_flat_csv(o, report.at("result")); },
          [&](std::ostream& o) { write_table(o, cert); });
    }

    if (theorem2->parsed()) {
      function_text = t2_io.f;
      const Expression f = Expression::parse(t2_io.f);
      ChainOptions options;
      options.tol = t2_tol;
      const BoundForm bound_form =
          form == "printed" ? BoundForm::AsPrinted : form == "both" ? BoundForm::Both : BoundForm::Corrected;
      const Theorem2Report r = theorem2_bound(f, t2_io.a, t2_io.b, t2_c, bound_form, options);
      const Json report = envelope("theorem2",
                                   Json{{"f", t2_io.f}, {"a", t2_io.a}, {"b", t2_io.b}, {"c", t2_c},
                                        {"form", form}, {"tol", t2_tol}},
                                   to_json(r), violations_json(r));
      return Emitter{out, t2_io.format()}.emit(
          report, [&](std::ostream& o) { write_flat_csv(o, report.at("result")); },
          [&](std::ostream& o) { write_table(o, r); });
    }

    if (sweep_cmd->parsed()) {
      SweepOptions options;
      options.n_cases = cases;
      options.families = parse_families(families);
      options.seed = seed;
      options.chain.tol = sweep_tol;
      options.threads = threads;
      options.forced_modulus = forced_c;
      options.grid_n = sweep_grid;
      options.refine_rounds = sweep_refine;
      if (forced_c && !(*forced_c >= 0.0)) throw std::invalid_argument("--c must be >= 0");
      const SweepReport r = sweep(options);
      Json inputs{{"families", families}, {"cases", cases},     {"seed", seed},
                  {"tol", sweep_tol},     {"grid", sweep_grid}, {"refine", sweep_refine}};
      inputs["c"] = forced_c ? Json(*forced_c) : Json(nullptr);
      const Json report = envelope("sweep", inputs, to_json(r), violations_json(r));

      std::ofstream file;
      std::ostream* sink = &out;
      if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
        sink = &file;
      }
      const int code = Emitter{*sink, sweep_io.format()}.emit(
          report, [&](std::ostream& o) { write_csv(o, r); }, [&](std::ostream& o) { write_table(o, r); });
      if (!out_path.empty())
        out << "wrote " << out_path << ": " << r.cases_run << " cases, " << r.violations.size() << " violations\n";
      return code;
    }

    if (integrate_cmd->parsed()) {
      function_text = int_io.f;
      const Expression f = Expression::parse(int_io.f);
      const QuadratureResult q = integrate([&](double x) { return f(x); }, int_io.a, int_io.b, int_tol);
      const Json report = envelope("integrate", Json{{"f", int_io.f}, {"a", int_io.a}, {"b", int_io.b}, {"tol", int_tol}},
                                   to_json(q), Json::array());
      return Emitter{out, int_io.format()}.emit(
          report, [&](std::ostream& o) { write_flat_csv(o, report.at("result")); },
          [&](std::ostream& o) { write_table(o, q); });
    }

    if (maxc->parsed()) {
      function_text = maxc_io.f;
      const Expression f = Expression::parse(maxc_io.f);
      const double c = max_feasible_c(f, maxc_io.a, maxc_io.b);
      const Json report = envelope("maxc", Json{{"f", maxc_io.f}, {"a", maxc_io.a}, {"b", maxc_io.b}},
                                   Json{{"max_c", c}, {"resolution", 1e-9}}, Json::array());
      return Emitter{out, maxc_io.format()}.emit(
          report, [&](std::ostream& o) { write_flat_csv(o, report.at("result")); },
          [&](std::ostream& o) { o << "largest c with the theorem-1 chain holding: " << format_number(c) << '\n'; });
    }
  } catch (const ParseError& ex) {
    report_parse_error(err, ex, function_text);
    return 2;
  } catch (const ChainFailsAtZero& ex) {
    err << "error: " << ex.what();
    if (auto i = ex.report().first_violation())
      err << " (" << ex.report().terms[*i].name << " -> " << ex.report().terms[*i + 1].name << " margin "
          << format_number(ex.report().margins[*i]) << "); f is not log-convex on [a,b]";
    err << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace hhv
