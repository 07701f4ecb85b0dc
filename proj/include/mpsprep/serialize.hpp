#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "mpsprep/compile.hpp"
#include "mpsprep/mps.hpp"

namespace mpsprep {

// MPS document: {version, n_sites, phys_dim, canonical_form, tensors:
// [{shape: [left, 2, right], values: flat, right index fastest}]}.
nlohmann::json mps_to_json(const MPS& state);
MPS mps_from_json(const nlohmann::json& doc);

// Circuit document: {version, n_qubits, layers: [{gates: [16 row-major
// doubles each], head: [4 doubles]}], metadata}; metadata is carried through
// untouched so pipeline context (order, interval, ...) survives round trips.
nlohmann::json circuit_to_json(const Circuit& circuit,
                               const nlohmann::json& metadata = nlohmann::json::object());
Circuit circuit_from_json(const nlohmann::json& doc, nlohmann::json* metadata = nullptr);

nlohmann::json compiled_to_json(const CompiledCircuit& compiled);
CompiledCircuit compiled_from_json(const nlohmann::json& doc);

std::string format_g17(double v);  // %.17g — exact double round trip

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace mpsprep
