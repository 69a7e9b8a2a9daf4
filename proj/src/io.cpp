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

#include "kdq/io.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace kdq {

namespace {

double finite_number(const Json &j, const char *where) {
    if (!j.is_number()) {
        throw ParseError(std::string(where) + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ParseError(std::string(where) + ": NaN/Inf rejected");
    }
    return v;
}

Eigen::MatrixXd real_part_from_json(const Json &j, int rows, int cols, const char *key) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows) {
        throw ParseError(std::string(key) + " must be an array of " + std::to_string(rows) +
                         " rows");
    }
    Eigen::MatrixXd out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const Json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            throw ParseError(std::string(key) + " row " + std::to_string(r) + " must hold " +
                             std::to_string(cols) + " numbers");
        }
        for (int c = 0; c < cols; ++c) {
            out(r, c) = finite_number(row[static_cast<std::size_t>(c)], key);
        }
    }
    return out;
}

Json real_part_to_json(const Eigen::MatrixXd &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int dim_from_json(const Json &j) {
    if (!j.contains("dim") || !j["dim"].is_number_integer()) {
        throw ParseError("missing integer field \"dim\"");
    }
    const long long d = j["dim"].get<long long>();
    if (d < 1 || d > kMaxDim) {
        throw ParseError("\"dim\" must lie in 1.." + std::to_string(kMaxDim));
    }
    return static_cast<int>(d);
}

/// Splits "name:dim" into (name, dim); dim defaults to fallback.
std::pair<std::string, int> split_dim_suffix(const std::string &name, int fallback) {
    const auto pos = name.find(':');
    if (pos == std::string::npos) {
        return {name, fallback};
    }
    const std::string base = name.substr(0, pos);
    try {
        const int d = std::stoi(name.substr(pos + 1));
        return {base, d};
    } catch (const std::exception &) {
        throw ParseError("bad dimension suffix in \"" + name + "\"");
    }
}

OrthonormalBasis pauli_eigenbasis(char axis) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix kets(2, 2);
    switch (axis) {
    case 'x':
        kets << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
        break;
    case 'y':
        kets << Complex(inv_sqrt2, 0), Complex(inv_sqrt2, 0), Complex(0, inv_sqrt2),
            Complex(0, -inv_sqrt2);
        break;
    default:
        kets = ComplexMatrix::Identity(2, 2);
        break;
    }
    return OrthonormalBasis(kets);
}

} // namespace

Json matrix_to_json(const ComplexMatrix &m) {
    Json j;
    j["dim"] = m.rows();
    j["re"] = real_part_to_json(m.real());
    j["im"] = real_part_to_json(m.imag());
    return j;
}

ComplexMatrix matrix_from_json(const Json &j) {
    const int d = dim_from_json(j);
    if (!j.contains("re") || !j.contains("im")) {
        throw ParseError("matrix JSON needs \"re\" and \"im\" fields");
    }
    const Eigen::MatrixXd re = real_part_from_json(j["re"], d, d, "re");
    const Eigen::MatrixXd im = real_part_from_json(j["im"], d, d, "im");
    return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

Json state_to_json(const DensityMatrix &state) { return matrix_to_json(state.matrix()); }

DensityMatrix state_from_json(const Json &j) { return DensityMatrix(matrix_from_json(j)); }

Json basis_to_json(const OrthonormalBasis &basis) { return matrix_to_json(basis.kets()); }

OrthonormalBasis basis_from_json(const Json &j) { return OrthonormalBasis(matrix_from_json(j)); }

Json povm_to_json(const Povm &povm) {
    Json j;
    j["dim"] = povm.dim();
    Json elems = Json::array();
    for (const auto &m : povm.elements()) {
        elems.push_back(matrix_to_json(m));
    }
    j["elements"] = std::move(elems);
    return j;
}

Povm povm_from_json(const Json &j) {
    if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty()) {
        throw ParseError("POVM JSON needs a nonempty \"elements\" array");
    }
    std::vector<ComplexMatrix> elements;
    for (const Json &e : j["elements"]) {
        elements.push_back(matrix_from_json(e));
    }
    return Povm(std::move(elements));
}

Json kd_table_to_json(const KdTable &table) {
    Json j;
    j["dim"] = table.dim();
    j["basis_a"] = basis_to_json(table.basis_a());
    j["basis_b"] = basis_to_json(table.basis_b());
    j["re"] = real_part_to_json(table.entries().real());
    j["im"] = real_part_to_json(table.entries().imag());
    return j;
}

KdTable kd_table_from_json(const Json &j) {
    const int d = dim_from_json(j);
    if (!j.contains("basis_a") || !j.contains("basis_b")) {
        throw ParseError("KD table JSON needs \"basis_a\" and \"basis_b\"");
    }
    OrthonormalBasis basis_a = basis_from_json(j["basis_a"]);
    OrthonormalBasis basis_b = basis_from_json(j["basis_b"]);
    const Eigen::MatrixXd re = real_part_from_json(j["re"], d, d, "re");
    const Eigen::MatrixXd im = real_part_from_json(j["im"], d, d, "im");
    return KdTable(std::move(basis_a), std::move(basis_b),
                   re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>());
}

Json report_to_json(const OptimizationReport &report) {
    Json j;
    j["best_value"] = report.best_value;
    j["best_params"] = report.best_params;
    j["restarts_run"] = report.restarts_run;
    j["converged_restarts"] = report.converged_restarts;
    j["objective_evals"] = report.objective_evals;
    j["spread"] = report.spread;
    return j;
}

Json coherence_result_to_json(const CoherenceResult &result) {
    Json j;
    j["value"] = result.value;
    j["argmax_basis"] = basis_to_json(result.argmax_basis);
    j["report"] = report_to_json(result.report);
    if (result.total_shots > 0) {
        j["total_shots"] = result.total_shots;
    }
    return j;
}

Json observable_to_json(const Observable &obs) {
    Json j;
    j["eigenbasis"] = basis_to_json(obs.eigenbasis());
    j["eigenvalues"] = std::vector<double>(obs.eigenvalues().data(),
                                           obs.eigenvalues().data() + obs.eigenvalues().size());
    return j;
}

Observable observable_from_json(const Json &j) {
    if (!j.contains("eigenbasis") || !j.contains("eigenvalues") || !j["eigenvalues"].is_array()) {
        throw ParseError("observable JSON needs \"eigenbasis\" and \"eigenvalues\"");
    }
    OrthonormalBasis basis = basis_from_json(j["eigenbasis"]);
    RealVector vals(static_cast<Eigen::Index>(j["eigenvalues"].size()));
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        vals(k) = finite_number(j["eigenvalues"][static_cast<std::size_t>(k)], "eigenvalues");
    }
    return Observable(std::move(basis), std::move(vals));
}

Json setup_to_json(const ResponseSetup &setup) {
    Json j;
    j["h0"] = observable_to_json(setup.h0);
    j["a_obs"] = observable_to_json(setup.a_obs);
    j["b_obs"] = observable_to_json(setup.b_obs);
    j["state0"] = state_to_json(setup.state0);
    return j;
}

ResponseSetup setup_from_json(const Json &j) {
    for (const char *key : {"h0", "a_obs", "b_obs", "state0"}) {
        if (!j.contains(key)) {
            throw ParseError(std::string("response setup JSON needs \"") + key + "\"");
        }
    }
    return ResponseSetup(observable_from_json(j["h0"]), observable_from_json(j["a_obs"]),
                         observable_from_json(j["b_obs"]), state_from_json(j["state0"]));
}

bool is_named_state(const std::string &name) {
    const auto [base, d] = split_dim_suffix(name, 2);
    (void)d;
    return base == "plus" || base == "bell" || base == "ghz3" || base == "maximally-mixed";
}

DensityMatrix named_state(const std::string &name) {
    const auto [base, d] = split_dim_suffix(name, 2);
    if (base == "plus") {
        ComplexVector psi(2);
        psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        return DensityMatrix(psi * psi.adjoint());
    }
    if (base == "bell") {
        ComplexVector psi = ComplexVector::Zero(4);
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(3) = 1.0 / std::sqrt(2.0);
        return DensityMatrix(psi * psi.adjoint());
    }
    if (base == "ghz3") {
        ComplexVector psi = ComplexVector::Zero(8);
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(7) = 1.0 / std::sqrt(2.0);
        return DensityMatrix(psi * psi.adjoint());
    }
    if (base == "maximally-mixed") {
        check_dim_supported(d);
        return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
    }
    throw ParseError("unknown state name \"" + name + "\"");
}

bool is_named_basis(const std::string &name) {
    const auto [base, d] = split_dim_suffix(name, 2);
    (void)d;
    return base == "computational" || base == "fourier" || base == "pauli-x" || base == "pauli-y" ||
           base == "pauli-z";
}

OrthonormalBasis named_basis(const std::string &name) {
    const auto [base, d] = split_dim_suffix(name, 2);
    if (base == "computational") {
        return computational_basis(d);
    }
    if (base == "fourier") {
        return fourier_basis(d);
    }
    if (base == "pauli-x") {
        return pauli_eigenbasis('x');
    }
    if (base == "pauli-y") {
        return pauli_eigenbasis('y');
    }
    if (base == "pauli-z") {
        return pauli_eigenbasis('z');
    }
    throw ParseError("unknown basis name \"" + name + "\"");
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file \"" + path + "\"");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json parse_json_text(const std::string &text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw ParseError("malformed JSON");
    }
    return j;
}

DensityMatrix load_state(const std::string &path_or_name) {
    if (!std::filesystem::exists(path_or_name) && is_named_state(path_or_name)) {
        return named_state(path_or_name);
    }
    return state_from_json(parse_json_text(read_file(path_or_name)));
}

OrthonormalBasis load_basis(const std::string &path_or_name) {
    if (!std::filesystem::exists(path_or_name) && is_named_basis(path_or_name)) {
        return named_basis(path_or_name);
    }
    return basis_from_json(parse_json_text(read_file(path_or_name)));
}

Povm load_povm(const std::string &path) { return povm_from_json(parse_json_text(read_file(path))); }

ResponseSetup load_setup(const std::string &path) {
    return setup_from_json(parse_json_text(read_file(path)));
}

std::string fnv1a_hex(const std::string &bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

void RunManifest::add_input(const std::string &role, const std::string &path_or_name) {
    if (std::filesystem::exists(path_or_name)) {
        input_digests[role] = "fnv1a:" + fnv1a_hex(read_file(path_or_name));
    } else {
        input_digests[role] = "name:" + path_or_name;
    }
}

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = input_digests;
    j["seed"] = seed;
    j["config"] = config;
    j["version"] = kToolVersion;
    return j;
}

} // namespace kdq
