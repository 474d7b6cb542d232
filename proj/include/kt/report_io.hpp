#pragma once

// Serialisation of HodgeReport: versioned JSON (exact numbers as strings,
// counts and indices as integers), CSV rows and a plain-text table.

#include "kt/hodge.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace kt::io {

inline constexpr int kSchemaVersion = 1;

/// "sqrt_rho" or "t".
std::string metric_key(const StructureParams& p);
/// The metric value in the flag grammar.
std::string metric_string(const StructureParams& p);

nlohmann::json params_to_json(const StructureParams& p);
StructureParams params_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const HodgeReport& r);
/// Throws std::invalid_argument on schema violations.
HodgeReport report_from_json(const nlohmann::json& j);

/// d, sqrt_rho_or_t, a, nmax, h_prime, h_double_prime, h01, n_lattice_points, n_certificates, error
std::string csv_header();
std::string csv_row(const StructureParams& p, const HodgeReport* report, const std::string& error);
/// Splits one CSV line, honouring double quotes.
std::vector<std::string> csv_split(const std::string& line);

std::string report_table(const HodgeReport& r);

}  // namespace kt::io
