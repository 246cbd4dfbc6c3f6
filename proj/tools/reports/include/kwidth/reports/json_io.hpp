#pragma once

#include <json.hpp>

#include "kwidth/kwidth.hpp"

namespace kwidth::reports {

using Json = nlohmann::ordered_json;

Json to_json(const ThetaRoot& root);
Json to_json(const WidthReport& report);
Json to_json(const ConditionCheck& check);
Json to_json(const ThresholdVerdict& verdict);
Json to_json(const CyVerdict& verdict);
Json to_json(const DetResult& det);
Json to_json(const NodeVectors& nodes);  // rationals as [num, den] pairs
Json to_json(const CvdWitness& witness);
Json to_json(const Lemma3Check& check);

/// Reads {"x": [[num, den], ...], "y": [...]}; throws Validation.
NodeVectors node_vectors_from_json(const Json& j);

std::string_view to_string(RootBranch branch);
std::string_view to_string(DerivativePath path);
/// "auto", "direct", "lemma1", "lemma2"; throws Validation otherwise.
DerivativePath parse_path(std::string_view text);

/// {"error": {"kind": ..., "message": ...}}
Json error_json(ErrorKind kind, std::string_view message);

/// 2 for argument errors, 3 for NotFound, 4 for numerical failures.
int exit_code(ErrorKind kind);

}  // namespace kwidth::reports
