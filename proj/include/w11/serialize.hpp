#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "w11/complex11.hpp"
#include "w11/ledger.hpp"
#include "w11/ratlin.hpp"

namespace w11 {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

Json to_json(const ratlin::EliminationStats& s);
Json to_json(const complex11::SummandInfo& s);
Json to_json(const complex11::BlockOrderReport& r);
/// Matrices are referenced by path; the caller decides where they live.
Json to_json(const complex11::InjectivityReport& r);
Json to_json(const VanishingStatus& s);
Json ledger_to_json(const VanishingLedger& ledger);
VanishingLedger ledger_from_json(const Json& j);

/// 64-bit FNV-1a of the compact dump (object keys are sorted).
std::uint64_t fnv1a64(const std::string& bytes);
std::string content_hash(const Json& j);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace w11
