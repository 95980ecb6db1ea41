#include "hhv/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

namespace hhv {

namespace {

void dump_into(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_into(item, out);
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        dump_into(item, out);
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_number(d) : "null";
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json triple_json(const Triple& t) { return Json{{"x", t.x}, {"y", t.y}, {"lambda", t.lambda}}; }

std::string_view form_name(BoundForm form) {
  switch (form) {
    case BoundForm::Corrected: return "corrected";
    case BoundForm::AsPrinted: return "printed";
    case BoundForm::Both: return "both";
  }
  return "corrected";
}

std::string num(double v) { return format_number(v); }

}  // namespace

std::string dump_canonical(const Json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

Json to_json(const ChainReport& r) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    terms.push_back(Json{{"index", i},
                         {"name", r.terms[i].name},
                         {"value", number(r.terms[i].value)},
                         {"margin_to_next", i < r.margins.size() ? number(r.margins[i]) : Json(nullptr)}});
  }
  return Json{{"chain", to_string(r.kind)}, {"function", r.function_text},
              {"a", r.a},                   {"b", r.b},
              {"c", r.modulus},             {"tol", r.tol},
              {"terms", terms},             {"holds", r.holds},
              {"min_margin", number(r.min_margin)}};
}

Json to_json(const ModulusCertificate& cert) {
  return Json{{"status", to_string(cert.status)},
              {"c_star", number(cert.c_star)},
              {"witness", triple_json(cert.witness)},
              {"grid_size", cert.grid_size},
              {"refinement_rounds", cert.refinement_rounds},
              {"triples_sampled", cert.triples_sampled}};
}

Json to_json(const Theorem2Report& r) {
  return Json{{"form", form_name(r.form)},
              {"c", r.modulus},
              {"tol", r.tol},
              {"lhs", number(r.lhs)},
              {"rhs_corrected", number(r.rhs_corrected)},
              {"margin_corrected", number(r.margin_corrected())},
              {"holds_corrected", r.holds_corrected},
              {"printed_applicable", r.printed_applicable},
              {"rhs_as_printed", optional_number(r.rhs_as_printed)},
              {"margin_as_printed", optional_number(r.margin_as_printed())},
              {"holds_as_printed", r.holds_as_printed ? Json(*r.holds_as_printed) : Json(nullptr)},
              {"bracket", number(r.bracket_value)},
              {"k", number(r.k)}};
}

Json to_json(const QuadratureResult& r) {
  return Json{{"value", number(r.value)},
              {"error_estimate", number(r.error_estimate)},
              {"evaluations", r.evaluations},
              {"converged", r.converged}};
}

Json to_json(const CaseSpec& spec) {
  Json params = Json::object();
  for (const auto& [key, value] : spec.parameters) params[key] = value;
  return Json{{"family", to_string(spec.family)},
              {"parameters", params},
              {"function", spec.function_text()},
              {"a", spec.a},
              {"b", spec.b},
              {"seed", spec.seed}};
}

Json violations_json(const ChainReport& r) {
  Json out = Json::array();
  for (std::size_t i = 0; i < r.margins.size(); ++i) {
    if (r.margins[i] >= -r.tol) continue;
    out.push_back(Json{{"check", to_string(r.kind)},
                       {"from", r.terms[i].name},
                       {"to", r.terms[i + 1].name},
                       {"margin", number(r.margins[i])}});
  }
  return out;
}

Json violations_json(const Theorem2Report& r) {
  Json out = Json::array();
  if (r.form != BoundForm::AsPrinted && !r.holds_corrected)
    out.push_back(Json{{"check", "t2_corrected"}, {"margin", number(r.margin_corrected())}});
  if (r.holds_as_printed && !*r.holds_as_printed)
    out.push_back(Json{{"check", "t2_printed"}, {"margin", number(*r.margin_as_printed())}});
  return out;
}

Json violations_json(const ModulusCertificate& cert) {
  Json out = Json::array();
  if (cert.status == CertificateStatus::NotLogConvex)
    out.push_back(Json{{"check", "log_convexity"}, {"witness", triple_json(cert.witness)}, {"defect", number(cert.c_star)}});
  return out;
}

Json violations_json(const SweepReport& r) {
  Json out = Json::array();
  for (const Violation& v : r.violations) {
    out.push_back(Json{{"case_index", v.case_index},
                       {"case", to_json(v.spec)},
                       {"check", to_string(v.check)},
                       {"c", v.modulus},
                       {"min_margin", number(v.min_margin)},
                       {"from", v.first_term},
                       {"to", v.second_term},
                       {"pair_margin", number(v.pair_margin)}});
  }
  return out;
}

Json to_json(const SweepReport& r) {
  Json tallies = Json::object();
  for (ChainCheck c : kAllChecks) {
    const Tally& t = r.tally(c);
    tallies[std::string(to_string(c))] =
        Json{{"holds", t.holds}, {"violated", t.violated}, {"not_applicable", t.not_applicable}};
  }
  Json cases = Json::array();
  for (const CaseOutcome& o : r.cases) {
    Json checks = Json::object();
    for (ChainCheck c : kAllChecks) {
      const CheckOutcome& co = o.check(c);
      Json entry{{"verdict", to_string(co.verdict)}};
      if (co.verdict != Verdict::NotApplicable) entry["min_margin"] = number(co.min_margin);
      if (!co.note.empty()) entry["note"] = co.note;
      checks[std::string(to_string(c))] = entry;
    }
    cases.push_back(Json{{"case_index", o.index},
                         {"case", to_json(o.spec)},
                         {"certificate", o.certificate ? to_json(*o.certificate) : Json(nullptr)},
                         {"c", o.modulus},
                         {"checks", checks}});
  }
  return Json{{"seed", r.seed}, {"cases_run", r.cases_run}, {"tallies", tallies}, {"cases", cases}};
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const ChainReport& r) {
  out << "term_index,term_name,value,margin_to_next\n";
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    out << i << ',' << csv_field(r.terms[i].name) << ',' << num(r.terms[i].value) << ',';
    if (i < r.margins.size()) out << num(r.margins[i]);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const SweepReport& r) {
  out << "case_index,family,a,b,c,chain_kind,holds,min_margin\n";
  for (const CaseOutcome& o : r.cases) {
    for (ChainCheck c : kAllChecks) {
      const CheckOutcome& co = o.check(c);
      const bool uses_c = c != ChainCheck::DragomirMond;
      out << o.index << ',' << to_string(o.spec.family) << ',' << num(o.spec.a) << ',' << num(o.spec.b) << ','
          << num(uses_c ? o.modulus : 0.0) << ',' << to_string(c) << ',';
      switch (co.verdict) {
        case Verdict::Holds: out << "true," << num(co.min_margin); break;
        case Verdict::Violated: out << "false," << num(co.min_margin); break;
        case Verdict::NotApplicable: out << "na,"; break;
      }
      out << '\n';
    }
  }
}

void write_table(std::ostream& out, const ChainReport& r) {
  out << to_string(r.kind) << " chain for f(x) = " << r.function_text << " on [" << num(r.a) << ", " << num(r.b)
      << "], c = " << num(r.modulus) << "\n\n";
  out << std::left << std::setw(4) << "#" << std::setw(28) << "term" << std::setw(26) << "value"
      << "margin to next\n";
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    out << std::left << std::setw(4) << i << std::setw(28) << r.terms[i].name << std::setw(26) << num(r.terms[i].value);
    if (i < r.margins.size()) out << num(r.margins[i]) << (r.margins[i] < -r.tol ? "  VIOLATED" : "");
    out << '\n';
  }
  out << "\nverdict: " << (r.holds ? "holds" : "violated") << " (min margin " << num(r.min_margin) << ", tol "
      << num(r.tol) << ")\n";
}

void write_table(std::ostream& out, const ModulusCertificate& c) {
  out << "status:            " << to_string(c.status) << '\n'
      << "c*:                " << num(c.c_star) << '\n'
      << "witness:           x = " << num(c.witness.x) << ", y = " << num(c.witness.y)
      << ", lambda = " << num(c.witness.lambda) << '\n'
      << "grid size:         " << c.grid_size << '\n'
      << "refinement rounds: " << c.refinement_rounds << '\n'
      << "triples sampled:   " << c.triples_sampled << '\n';
}

void write_table(std::ostream& out, const Theorem2Report& r) {
  out << "lhs (mean of f(x) f(a+b-x)): " << num(r.lhs) << '\n'
      << "rhs corrected:               " << num(r.rhs_corrected) << "  margin " << num(r.margin_corrected())
      << (r.holds_corrected ? "  holds" : "  VIOLATED") << '\n';
  if (r.form != BoundForm::Corrected) {
    if (r.rhs_as_printed) {
      out << "rhs as printed:              " << num(*r.rhs_as_printed) << "  margin " << num(*r.margin_as_printed())
          << (*r.holds_as_printed ? "  holds" : "  VIOLATED") << '\n';
    } else {
      out << "rhs as printed:              not applicable (needs f(b) - f(a) > 0 and != 1)\n";
    }
  }
  out << "bracket:                     " << num(r.bracket_value) << '\n'
      << "k = ln(f(a)/f(b)):           " << num(r.k) << '\n';
}

void write_table(std::ostream& out, const QuadratureResult& r) {
  out << "value:          " << num(r.value) << '\n'
      << "error estimate: " << num(r.error_estimate) << '\n'
      << "evaluations:    " << r.evaluations << '\n'
      << "converged:      " << (r.converged ? "yes" : "no") << '\n';
}

void write_table(std::ostream& out, const SweepReport& r) {
  out << "seed " << r.seed << ", " << r.cases_run << " cases\n\n";
  out << std::left << std::setw(16) << "check" << std::setw(10) << "holds" << std::setw(10) << "violated"
      << "not applicable\n";
  for (ChainCheck c : kAllChecks) {
    const Tally& t = r.tally(c);
    out << std::left << std::setw(16) << to_string(c) << std::setw(10) << t.holds << std::setw(10) << t.violated
        << t.not_applicable << '\n';
  }
  out << "\n(t2_printed failures are tallied only)\n";
  if (r.violations.empty()) {
    out << "no violations\n";
    return;
  }
  out << "\nviolations:\n";
  for (const Violation& v : r.violations) {
    out << "  case " << v.case_index << " " << to_string(v.check) << " f(x) = " << v.spec.function_text() << " on ["
        << num(v.spec.a) << ", " << num(v.spec.b) << "], c = " << num(v.modulus) << ": " << v.first_term << " -> "
        << v.second_term << " margin " << num(v.pair_margin) << '\n';
  }
}

}  // namespace hhv
