// Copyright 2026 The kdq developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON wire formats for every domain type, the named built-in states and
 * bases, and the run manifest embedded in every CLI output.
 *
 * Matrices, states and bases serialize as {"dim": d, "re": [[..]], "im": [[..]]};
 * a basis matrix holds its kets as columns. Parsers reject NaN and Inf.
 */

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "kdq/coherence.hpp"
#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/optimizer.hpp"
#include "kdq/response.hpp"

namespace kdq {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j);

Json state_to_json(const DensityMatrix &state);
DensityMatrix state_from_json(const Json &j);

Json basis_to_json(const OrthonormalBasis &basis);
OrthonormalBasis basis_from_json(const Json &j);

Json povm_to_json(const Povm &povm);
Povm povm_from_json(const Json &j);

Json kd_table_to_json(const KdTable &table);
KdTable kd_table_from_json(const Json &j);

Json report_to_json(const OptimizationReport &report);
Json coherence_result_to_json(const CoherenceResult &result);

Json observable_to_json(const Observable &obs);
Observable observable_from_json(const Json &j);

Json setup_to_json(const ResponseSetup &setup);
ResponseSetup setup_from_json(const Json &j);

/// Built-in states: plus, bell, ghz3, maximally-mixed[:d]. Throws ParseError
/// for unknown names.
DensityMatrix named_state(const std::string &name);
bool is_named_state(const std::string &name);

/// Built-in bases: computational[:d], fourier[:d], pauli-x, pauli-y, pauli-z.
OrthonormalBasis named_basis(const std::string &name);
bool is_named_basis(const std::string &name);

/// Load from a file path, falling back to a built-in name.
DensityMatrix load_state(const std::string &path_or_name);
OrthonormalBasis load_basis(const std::string &path_or_name);
Povm load_povm(const std::string &path);
ResponseSetup load_setup(const std::string &path);

std::string read_file(const std::string &path);
Json parse_json_text(const std::string &text);

/// FNV-1a 64-bit digest, hex encoded; identifies CLI inputs in manifests.
std::string fnv1a_hex(const std::string &bytes);

inline constexpr const char *kToolVersion = "kdq 1.0.0";

/// Provenance block embedded in every CLI output JSON so any published
/// number can be replayed: command, input digests, seed, config echo.
struct RunManifest {
    std::string command;
    Json input_digests = Json::object();
    std::uint64_t seed = 0;
    Json config = Json::object();

    void add_input(const std::string &role, const std::string &path_or_name);
    Json to_json() const;
};

} // namespace kdq
