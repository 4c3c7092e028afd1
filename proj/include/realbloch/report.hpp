#pragma once

#include <string>

#include "json.hpp"
#include "realbloch/invariants.hpp"
#include "realbloch/ktheory.hpp"
#include "realbloch/models.hpp"

namespace rb {

nlohmann::json to_json(const InvariantReport& report);
nlohmann::json to_json(const RegularValueResult& result);
nlohmann::json to_json(const SymmetryReport& report);
nlohmann::json to_json(const AiConsistencyReport& report);
nlohmann::json to_json(const CollapsePullbackReport& report);
nlohmann::json to_json(const KRTorusAuditRow& row);

// FNV-1a of a byte string; used to fingerprint model config files.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace rb
