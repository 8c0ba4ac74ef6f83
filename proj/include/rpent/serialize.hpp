#pragma once

// JSON encodings shared by reports and fixtures.
//
//   complex matrix  {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}
//   real matrix     [[row 0], [row 1], ...]
//   real vector     [v0, v1, ...]
//
// Doubles are written with 17 significant digits, so a decode/encode cycle
// reproduces the bits.

#include <json.hpp>

#include "rpent/cft.hpp"
#include "rpent/fermion.hpp"
#include "rpent/positivity.hpp"
#include "rpent/spectral.hpp"

namespace rpent {

using Json = nlohmann::ordered_json;

Json to_json(const CMatrix& m);
Json to_json(const RMatrix& m);
Json to_json(const RVector& v);
CMatrix complex_matrix_from_json(const Json& j);
RMatrix real_matrix_from_json(const Json& j);
RVector real_vector_from_json(const Json& j);

Json to_json(const SubsystemSplit& s);
SubsystemSplit split_from_json(const Json& j);
Json to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Json to_json(const GramRecord& g);
Json to_json(const PsdVerdict& v);
Json to_json(const DivisibilityRecord& r);
Json to_json(const SearchConfig& c);
SearchConfig search_config_from_json(const Json& j);
Json to_json(const Violation& v);
Violation violation_from_json(const Json& j);
Json to_json(const SearchReport& r);
Json to_json(const SweepConfig& c);
Json to_json(const SweepReport& r);

Json to_json(const spectral::SpectralDensity& g);
Json to_json(const spectral::FitResult& r);
Json to_json(const spectral::DerivativeReport& r);

Json to_json(const cft::DerivativeInequalityReport& r);
Json to_json(const cft::MidpointInequalityReport& r);

// 64-bit FNV-1a of a string, as 16 hex digits. Used for fixture filenames.
std::string content_hash(const std::string& text);

}  // namespace rpent
