#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace spincluster::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCheckFailed = 3;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Reports go to `out` unless --out is given; diagnostics go
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::vector<std::string> subcommands();
std::vector<std::string> presets();

/// Configuration document of a preset, before defaults are applied.
nlohmann::json preset_config(const std::string& name);

/// Merges defaults into a user document and rejects unknown keys or values
/// of the wrong type. Throws spincluster::DomainError.
nlohmann::json normalize_config(const nlohmann::json& user);

/// JSON Schema for the report of a JSON-emitting subcommand
/// (q-spectrum, check-yangian, commutant, spectrum, moments).
nlohmann::json output_schema(const std::string& subcommand);

/// Returns an empty string when `doc` satisfies `schema`, else the first
/// violation. Supports type, required, properties, additionalProperties,
/// items, minItems and enum.
std::string validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema);

}  // namespace spincluster::cli
