#pragma once

#include <json.hpp>

#include "sscope/ci_curve.hpp"
#include "sscope/gonality.hpp"
#include "sscope/psolve.hpp"
#include "sscope/strata.hpp"

namespace sscope {

using Json = nlohmann::ordered_json;

struct JsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary forms: {"degree": d, "field": "rational"|"complex", "coeffs": [...]}
// with rationals as "p/q" strings and complex numbers as [re, im].
Json form_to_json(const BinaryForm<CD>& f);
Json form_to_json(const BinaryForm<Rat>& f);

struct ParsedCurve {
  enum class Kind { Rational, CI } kind;
  RationalCurveMap rational;  // valid when kind == Rational
  CICurve ci;                 // valid when kind == CI
};
ParsedCurve parse_curve_json(const Json& j);

Json curve_to_json(const RationalCurveMap& c);
Json curve_to_json(const CICurve& c);

Json point_to_json(const PointP1<CD>& p);
Json divisor_to_json(const DivisorP1<CD>& d);
Json record_to_json(const SecantRecord& r);
Json diagnostics_to_json(const SolveDiagnostics& d);
Json dimension_report_to_json(const DimensionReport& r);
std::string dimension_reports_csv(const std::vector<DimensionReport>& rows);
Json gonality_report_to_json(const GonalityReport& r);
Json hypothesis_report_to_json(const HypothesisReport& r);

/// FNV-1a hash of the canonical serialization, as a fixed-width hex string.
std::string input_hash(const Json& j);

/// Common report header: tool, version, input hash, seed, tolerances.
Json report_envelope(const std::string& command, const std::string& inhash,
                     std::uint64_t seed);

}  // namespace sscope
