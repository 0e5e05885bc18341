#pragma once

// JSON forms of the library types. Every top-level document carries a
// "schema" field such as "stripbound.product_config/1".

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stripbound/blaschke.hpp"
#include "stripbound/certify.hpp"
#include "stripbound/core.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/operator.hpp"
#include "stripbound/quadrature.hpp"

namespace stripbound::io {

using nlohmann::json;

inline constexpr const char* kSchemaZeroSet = "stripbound.zero_set/1";
inline constexpr const char* kSchemaProductConfig = "stripbound.product_config/1";
inline constexpr const char* kSchemaFiniteRank = "stripbound.finite_rank_spec/1";
inline constexpr const char* kSchemaEval = "stripbound.eval/1";
inline constexpr const char* kSchemaStripReport = "stripbound.strip_report/1";
inline constexpr const char* kSchemaDyadicReport = "stripbound.dyadic_report/1";
inline constexpr const char* kSchemaNevanlinnaReport = "stripbound.nevanlinna_report/1";
inline constexpr const char* kSchemaOperatorReport = "stripbound.operator_certificate/1";
inline constexpr const char* kSchemaSolve = "stripbound.operator_solve/1";
inline constexpr const char* kSchemaCarleman = "stripbound.carleman/1";
inline constexpr const char* kSchemaManifest = "stripbound.manifest/1";

/// Counts up to 2^53 are written as integers, larger ones as doubles.
json count_to_json(double k);

/// NaN and infinities become the strings "nan", "inf", "-inf".
json real_to_json(double v);
json complex_to_json(Complex z);  // [re, im]
Complex complex_from_json(const json& j, const char* what);

json to_json(const ZeroSet& zs);
/// Accepts a bare array of {"re", "im", "mult"} or a document with "zeros".
ZeroSet zero_set_from_json(const json& j);

json to_json(const GrowthEnvelope& g);
GrowthEnvelope growth_from_json(const json& j);
json to_json(const SeparationParams& p);
SeparationParams separation_from_json(const json& j);
json to_json(const QuadratureSpec& q);

json to_json(const blaschke::ProductConfig& cfg);
blaschke::ProductConfig product_config_from_json(const json& j);

json to_json(const op::FiniteRankSpec& spec);
op::FiniteRankSpec finite_rank_spec_from_json(const json& j);

json to_json(const Estimate& e);
json to_json(const certify::RatioProfile& p);
json to_json(const certify::DyadicReport& r);
json to_json(const certify::Prop26Bound& b);
json to_json(const factorization::CarlemanTerms& t);
json to_json(const op::InverseCertificate& c);
json to_json(const op::CertificateReport& r);

/// Throws InvalidInput if the file cannot be read or parsed.
json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; stable key order.
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace stripbound::io
