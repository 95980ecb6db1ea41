#pragma once

// Serialization of reports: canonical JSON, CSV rows and plain-text tables.

#include <ostream>
#include <string>

#include <json.hpp>

#include "hhv/certify.hpp"
#include "hhv/chains.hpp"
#include "hhv/harness.hpp"
#include "hhv/quadrature.hpp"

namespace hhv {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

/// Compact JSON in insertion order. Floating-point numbers are written with
/// 17 significant digits (non-finite ones as null), so parse + dump is
/// byte-stable.
std::string dump_canonical(const Json& value);

Json to_json(const ChainReport& report);
Json to_json(const ModulusCertificate& cert);
Json to_json(const Theorem2Report& report);
Json to_json(const QuadratureResult& result);
Json to_json(const CaseSpec& spec);
Json to_json(const SweepReport& report);

/// Violation entries as they appear in the "violations" array of a report.
Json violations_json(const ChainReport& report);
Json violations_json(const Theorem2Report& report);
Json violations_json(const ModulusCertificate& cert);
Json violations_json(const SweepReport& report);

/// RFC 4180 quoting when needed.
std::string csv_field(const std::string& text);

void write_csv(std::ostream& out, const ChainReport& report);
void write_csv(std::ostream& out, const SweepReport& report);

void write_table(std::ostream& out, const ChainReport& report);
void write_table(std::ostream& out, const ModulusCertificate& cert);
void write_table(std::ostream& out, const Theorem2Report& report);
void write_table(std::ostream& out, const QuadratureResult& result);
void write_table(std::ostream& out, const SweepReport& report);

}  // namespace hhv
