#pragma once

// LocalCircuit <-> JSON.
//
//   {
//     "schema_version": 1,
//     "m": int, "copies": int,
//     "base_block_state": [[re, im], ...],
//     "stages": [
//       {"level": int, "block_size": int, "support": [lo, hi], "gamma": float,
//        "alpha": int or null (null: full generator),
//        "unitary": [[re, im], ...]   row-major, dim x dim}
//     ]
//   }

#include "chainglue/gluing.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace chainglue {

inline constexpr int kCircuitSchemaVersion = 1;

nlohmann::json circuit_to_json(const LocalCircuit& circuit);
/// Validates schema version, dimensions, supports and unitarity (1e-9).
LocalCircuit circuit_from_json(const nlohmann::json& doc);

void save_circuit(const LocalCircuit& circuit, const std::filesystem::path& path);
LocalCircuit load_circuit(const std::filesystem::path& path);

}  // namespace chainglue
