#pragma once

#include "cstar/function_space.hpp"
#include "cstar/matrix.hpp"
#include "cstar/tolerance.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cstar::cli {

using ordered_json = nlohmann::ordered_json;

/// Serializes with fixed field order (insertion order) and fixed float
/// formatting (17 significant digits), so identical documents are
/// byte-identical.
std::string dump_deterministic(const ordered_json& value);

/// FNV-1a 64-bit digest of the raw input bytes, as a hex string.
std::string inputs_digest(const std::string& raw);

ordered_json complex_to_json(const Complex& z);
ordered_json vector_to_json(const std::vector<Complex>& v);
ordered_json matrix_to_json(const ComplexMatrix& m);
ordered_json function_to_json(const DiscreteDomainFunction& f);

/// Parsers throw InvalidArgument with a diagnostic naming the offending
/// field; they validate shapes and finiteness.
Complex complex_from_json(const ordered_json& j, const std::string& field);
std::vector<Complex> vector_from_json(const ordered_json& j, const std::string& field);
ComplexMatrix matrix_from_json(const ordered_json& j, const std::string& field);
DiscreteDomainFunction function_from_json(const ordered_json& j, const std::string& field);

double number_from_json(const ordered_json& j, const std::string& field);

/// Applies the optional "tolerances" object of a problem file on top of the
/// defaults. Unknown keys are rejected.
ToleranceConfig tolerances_from_json(const ordered_json& problem);

ordered_json tolerances_to_json(const ToleranceConfig& tol);

} // namespace cstar::cli
