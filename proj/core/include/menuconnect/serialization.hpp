#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "menuconnect/connectivity.hpp"
#include "menuconnect/distributions.hpp"
#include "menuconnect/evaluation.hpp"
#include "menuconnect/menu.hpp"

namespace menuconnect {

// Menus: {"kind":"rochet"|"ama","m":...,"n":...,"options":[{"allocation":...,
// "price"|"boost":...}]}. Doubles round-trip exactly.
nlohmann::json to_json(const RochetMenu& menu);
nlohmann::json to_json(const AmaMenu& menu);
RochetMenu rochet_menu_from_json(const nlohmann::json& j);
AmaMenu ama_menu_from_json(const nlohmann::json& j);

// "rochet" or "ama".
std::string menu_kind_of(const nlohmann::json& j);

// Paths: {"kind":...,"breakpoints":[menu,...]}.
nlohmann::json to_json(const RochetPath& path);
nlohmann::json to_json(const AmaPath& path);
RochetPath rochet_path_from_json(const nlohmann::json& j);
AmaPath ama_path_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReductionSet& set);
ReductionSet reduction_set_from_json(const nlohmann::json& j, int option_count);

// Density specs: {"kind":...,"pieces":[{"upto":...,"density":...}],
// "density_bound":...,"rescale":...,"buyers":[...]}.
nlohmann::json to_json(const DensitySpec& spec);
DensitySpec density_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PathReport& report);
nlohmann::json to_json(const ReducibilityReport& report);
nlohmann::json to_json(const GapReport& report);
nlohmann::json to_json(const McResult& result);

// File helpers; loaders validate menu invariants and throw SpecError with
// the offending field on malformed input.
void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

// FNV-1a over the serialized text, used to fingerprint run configs.
std::string fnv1a_hex(const std::string& text);

}  // namespace menuconnect
