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
 * kdq command-line tool.
 *
 * Subcommands: coherence, kd-table, simulate, response, check-properties,
 * random-state. Machine-readable JSON (with an embedded run manifest) goes
 * to stdout; human-readable tables go to stderr. Exit codes: 0 success,
 * 1 property failure, 2 input validation, 3 optimizer failure.
 */

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdq/coherence.hpp"
#include "kdq/io.hpp"
#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/measurement.hpp"
#include "kdq/optimizer.hpp"
#include "kdq/properties.hpp"
#include "kdq/response.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitOptimizer = 3;

struct CommonOpts {
    std::uint64_t seed = 1;
    int restarts = 32;
    bool quiet = false;
    bool verbose = false;
};

kdq::OptimizerConfig make_opt_config(const CommonOpts &common) {
    kdq::OptimizerConfig cfg;
    cfg.restarts = common.restarts;
    cfg.seed = common.seed;
    return cfg;
}

void emit(const kdq::Json &out, const CommonOpts &common, const std::string &human) {
    std::cout << out.dump(2) << std::endl;
    if (!common.quiet && !human.empty()) {
        std::cerr << human;
    }
}

int run_coherence(const std::string &state_arg, const std::string &basis_arg,
                  const std::string &povm_path, bool qubit_analytic, const CommonOpts &common) {
    const kdq::DensityMatrix state = kdq::load_state(state_arg);

    kdq::RunManifest manifest;
    manifest.command = "coherence";
    manifest.seed = common.seed;
    manifest.config = {{"restarts", common.restarts}, {"qubit_analytic", qubit_analytic}};
    manifest.add_input("state", state_arg);

    kdq::Json out;
    std::ostringstream human;
    human << std::setprecision(12);

    if (!povm_path.empty()) {
        const kdq::Povm povm = kdq::load_povm(povm_path);
        manifest.add_input("povm", povm_path);
        const kdq::CoherenceResult result =
            kdq::kd_coherence_povm(state, povm, make_opt_config(common));
        out = kdq::coherence_result_to_json(result);
        human << "kd_coherence (POVM) = " << result.value << "\n";
    } else {
        const kdq::OrthonormalBasis basis = kdq::load_basis(basis_arg);
        manifest.add_input("basis", basis_arg);
        if (qubit_analytic) {
            const kdq::QubitAnalyticResult result = kdq::kd_coherence_qubit_analytic(state, basis);
            out["value"] = result.value;
            out["argmax_basis"] = kdq::basis_to_json(result.argmax_basis);
            out["method"] = "qubit-analytic";
        } else {
            const kdq::CoherenceResult result = kdq::kd_coherence(state, basis, make_opt_config(common));
            out = kdq::coherence_result_to_json(result);
        }
        const double l1 = kdq::l1_coherence(state, basis);
        const double sd = kdq::stddev_bound(state, basis);
        out["l1_coherence"] = l1;
        out["stddev_bound"] = sd;
        human << "kd_coherence = " << out["value"].get<double>() << "\n"
              << "l1_coherence = " << l1 << "\n"
              << "stddev_bound = " << sd << "\n";
    }
    out["manifest"] = manifest.to_json();
    emit(out, common, human.str());
    return kExitOk;
}

int run_kd_table(const std::string &state_arg, const std::string &basis_a_arg,
                 const std::string &basis_b_arg, bool with_nonclassicality, bool with_reconstruct,
                 const CommonOpts &common) {
    const kdq::DensityMatrix state = kdq::load_state(state_arg);
    const kdq::OrthonormalBasis basis_a = kdq::load_basis(basis_a_arg);
    const kdq::OrthonormalBasis basis_b = kdq::load_basis(basis_b_arg);

    kdq::RunManifest manifest;
    manifest.command = "kd-table";
    manifest.seed = common.seed;
    manifest.config = {{"nonclassicality", with_nonclassicality}, {"reconstruct", with_reconstruct}};
    manifest.add_input("state", state_arg);
    manifest.add_input("basis_a", basis_a_arg);
    manifest.add_input("basis_b", basis_b_arg);

    const kdq::KdTable table = kdq::kd_table(state, basis_a, basis_b);
    kdq::Json out = kdq::kd_table_to_json(table);
    std::ostringstream human;
    human << std::setprecision(12);
    human << "imag_l1 = " << kdq::imag_l1(table) << "\n";

    if (with_nonclassicality) {
        const double n = kdq::nonclassicality(table);
        out["nonclassicality"] = n;
        human << "nonclassicality = " << n << "\n";
    }
    if (with_reconstruct) {
        const kdq::DensityMatrix rebuilt = kdq::reconstruct_state(table);
        const double err = (rebuilt.matrix() - state.matrix()).cwiseAbs().maxCoeff();
        out["reconstruction_max_error"] = err;
        human << "reconstruction max entry error = " << err << "\n";
    }
    out["manifest"] = manifest.to_json();
    emit(out, common, human.str());
    return kExitOk;
}

int run_simulate(const std::string &scheme_name, const std::string &state_arg,
                 const std::string &basis_a_arg, const std::string &basis_b_arg, long long shots,
                 bool exact, double sigma, const CommonOpts &common) {
    const kdq::DensityMatrix state = kdq::load_state(state_arg);
    const kdq::OrthonormalBasis basis_a = kdq::load_basis(basis_a_arg);
    const kdq::OrthonormalBasis basis_b = kdq::load_basis(basis_b_arg);
    const kdq::Scheme scheme =
        (scheme_name == "johansen") ? kdq::Scheme::johansen : kdq::Scheme::weak;

    kdq::ShotConfig shot_cfg;
    shot_cfg.shots = shots;
    shot_cfg.seed = common.seed;
    shot_cfg.pointer_noise_sigma = sigma;
    if (!exact) {
        shot_cfg.validate();
    }

    kdq::RunManifest manifest;
    manifest.command = "simulate";
    manifest.seed = common.seed;
    manifest.config = {{"scheme", scheme_name},
                       {"shots", shots},
                       {"exact", exact},
                       {"pointer_noise_sigma", sigma}};
    manifest.add_input("state", state_arg);
    manifest.add_input("basis_a", basis_a_arg);
    manifest.add_input("basis_b", basis_b_arg);

    const Eigen::MatrixXd table =
        (scheme == kdq::Scheme::johansen)
            ? kdq::johansen_im_kd(state, basis_a, basis_b, exact, shot_cfg)
            : kdq::weak_im_kd(state, basis_a, basis_b, exact, shot_cfg);
    const double estimate = table.cwiseAbs().sum();

    // Conservative per-entry 3-sigma band: two binomials for the successive
    // scheme, pointer spread vs multinomial for the weak scheme.
    const double root_shots = std::sqrt(static_cast<double>(shots));
    const double entry_sigma = (scheme == kdq::Scheme::johansen)
                                   ? std::sqrt(2.0) * 0.5 / root_shots
                                   : std::max(sigma / root_shots, 0.5 / root_shots);

    kdq::Json out;
    out["scheme"] = scheme_name;
    out["exact"] = exact;
    out["im_table"] = kdq::Json::array();
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        kdq::Json row = kdq::Json::array();
        for (Eigen::Index c = 0; c < table.cols(); ++c) {
            row.push_back(table(r, c));
        }
        out["im_table"].push_back(row);
    }
    out["imag_l1_estimate"] = estimate;
    if (!exact) {
        out["entry_3sigma_envelope"] = 3.0 * entry_sigma;
        out["shots"] = shots;
    }
    out["manifest"] = manifest.to_json();

    std::ostringstream human;
    human << std::setprecision(12) << "imag_l1 estimate = " << estimate << "\n";
    if (!exact) {
        human << "per-entry 3-sigma envelope = " << 3.0 * entry_sigma << "\n";
    }
    emit(out, common, human.str());
    return kExitOk;
}

int run_response(const std::string &setup_path, double t, double t_prime, const CommonOpts &common) {
    const kdq::ResponseSetup setup = kdq::load_setup(setup_path);

    kdq::RunManifest manifest;
    manifest.command = "response";
    manifest.seed = common.seed;
    manifest.config = {{"t", t}, {"tprime", t_prime}, {"restarts", common.restarts}};
    manifest.add_input("setup", setup_path);

    const kdq::ResponseBound bound = kdq::response_bound(setup, t_prime, t, make_opt_config(common));
    const double phi = kdq::response_function(setup, t_prime, t);
    const double phi_kd = kdq::response_function_kd(setup, t_prime, t);

    kdq::Json out;
    out["phi"] = phi;
    out["phi_kd_form"] = phi_kd;
    out["bound"] = bound.rhs;
    out["lhs"] = bound.lhs;
    out["coherence"] = kdq::coherence_result_to_json(bound.coherence);
    out["manifest"] = manifest.to_json();

    std::ostringstream human;
    human << std::setprecision(12) << "phi = " << phi << "\n|phi| = " << bound.lhs
          << " <= bound = " << bound.rhs << "\n";
    emit(out, common, human.str());
    return kExitOk;
}

int run_check_properties(const std::string &dims_csv, int instances, const std::string &report_path,
                         bool inject_faulty_dephase, int threads, const CommonOpts &common) {
    kdq::PropertyOptions options;
    options.instances = instances;
    options.seed = common.seed;
    options.threads = threads;
    options.dims.clear();
    {
        std::stringstream ss(dims_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                options.dims.push_back(std::stoi(item));
            }
        }
    }
    if (options.dims.empty()) {
        throw kdq::ValidationError("BadDims", "no dimensions given");
    }
    for (int d : options.dims) {
        kdq::check_dim_supported(d);
    }
    if (inject_faulty_dephase) {
        // Negative control: an identity "dephasing" must break the
        // decoherence-monotonicity check.
        options.dephase_override = [](const kdq::DensityMatrix &state,
                                      const kdq::OrthonormalBasis &) { return state; };
    }

    const std::vector<kdq::PropertyOutcome> outcomes = kdq::run_property_suite(options);
    const bool ok = kdq::all_passed(outcomes);

    kdq::RunManifest manifest;
    manifest.command = "check-properties";
    manifest.seed = common.seed;
    manifest.config = {{"dims", dims_csv},
                       {"instances", instances},
                       {"faulty_dephase", inject_faulty_dephase}};

    kdq::Json rows = kdq::Json::array();
    std::ostringstream human;
    human << std::left;
    for (const auto &o : outcomes) {
        rows.push_back({{"property", o.property},
                        {"dim", o.dim},
                        {"instances", o.instances},
                        {"max_violation", o.max_violation},
                        {"tolerance", o.tolerance},
                        {"passed", o.passed}});
        human << (o.passed ? "[PASS] " : "[FAIL] ") << std::setw(28) << o.property << " d=" << o.dim
              << "  max violation " << std::scientific << std::setprecision(3) << o.max_violation
              << " (tol " << o.tolerance << ")\n"
              << std::defaultfloat;
    }
    kdq::Json out;
    out["properties"] = rows;
    out["all_passed"] = ok;
    out["manifest"] = manifest.to_json();

    if (!report_path.empty()) {
        std::ofstream report(report_path);
        if (!report) {
            throw kdq::ParseError("cannot write report file \"" + report_path + "\"");
        }
        report << out.dump(2) << std::endl;
    }
    emit(out, common, human.str());
    return ok ? kExitOk : kExitPropertyFailure;
}

int run_random_state(int dim, bool pure, bool mixed, const CommonOpts &common) {
    if (pure == mixed) {
        throw kdq::ValidationError("BadFlags", "choose exactly one of --pure / --mixed");
    }
    const kdq::DensityMatrix state = pure ? kdq::random_pure_state(dim, common.seed)
                                          : kdq::random_mixed_state(dim, common.seed);
    kdq::RunManifest manifest;
    manifest.command = "random-state";
    manifest.seed = common.seed;
    manifest.config = {{"dim", dim}, {"kind", pure ? "pure" : "mixed"}};

    kdq::Json out = kdq::state_to_json(state);
    out["manifest"] = manifest.to_json();
    emit(out, common, "");
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Kirkwood-Dirac quasiprobability and coherence toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--seed", common.seed, "Seed for every stochastic step")->capture_default_str();
    app.add_flag("--quiet", common.quiet, "Suppress the human-readable summary on stderr");
    app.add_flag("--verbose", common.verbose, "Keep the summary (default)");

    // coherence
    std::string state_arg, basis_arg = "computational", povm_path;
    bool qubit_analytic = false;
    bool use_computational = false;
    auto *coherence = app.add_subcommand("coherence", "KD coherence of a state vs a basis");
    coherence->add_option("state", state_arg, "State JSON file or built-in name")->required();
    coherence->add_option("--basis", basis_arg, "Incoherent basis file or built-in name");
    coherence->add_flag("--computational", use_computational,
                        "Use the computational basis (with the state's dimension)");
    coherence->add_option("--restarts", common.restarts, "Optimizer restarts")
        ->capture_default_str();
    coherence->add_option("--povm", povm_path, "POVM JSON file replacing the projective basis");
    coherence->add_flag("--qubit-analytic", qubit_analytic, "Use the d=2 closed form");

    // kd-table
    std::string table_state, table_basis_a, table_basis_b;
    bool with_nonclassicality = false, with_reconstruct = false;
    auto *kd_table_cmd = app.add_subcommand("kd-table", "KD quasiprobability table over two bases");
    kd_table_cmd->add_option("state", table_state)->required();
    kd_table_cmd->add_option("basis_a", table_basis_a)->required();
    kd_table_cmd->add_option("basis_b", table_basis_b)->required();
    kd_table_cmd->add_flag("--nonclassicality", with_nonclassicality,
                           "Also report sum|Pr_KD| - 1");
    kd_table_cmd->add_flag("--reconstruct", with_reconstruct,
                           "Round-trip the table back to the state and report the error");

    // simulate
    std::string sim_scheme, sim_state, sim_basis_a, sim_basis_b;
    long long sim_shots = 100000;
    bool sim_exact = false;
    double sim_sigma = 1.0;
    auto *simulate = app.add_subcommand("simulate", "Measurement-scheme reconstruction of Im Pr_KD");
    simulate->add_option("scheme", sim_scheme, "johansen or weak")
        ->required()
        ->check(CLI::IsMember({"johansen", "weak"}));
    simulate->add_option("state", sim_state)->required();
    simulate->add_option("basis_a", sim_basis_a)->required();
    simulate->add_option("basis_b", sim_basis_b)->required();
    simulate->add_option("--shots", sim_shots, "Shots per expectation value")->capture_default_str();
    simulate->add_flag("--exact", sim_exact, "Noise-free evaluation");
    simulate->add_option("--pointer-sigma", sim_sigma, "Weak-scheme pointer spread")
        ->capture_default_str();

    // response
    std::string setup_path;
    double resp_t = 0.0, resp_tprime = 0.0;
    auto *response = app.add_subcommand("response", "Linear response function and coherence bound");
    response->add_option("setup", setup_path, "ResponseSetup JSON file")->required();
    response->add_option("--t", resp_t, "Probe time")->capture_default_str();
    response->add_option("--tprime", resp_tprime, "Perturbation time")->capture_default_str();
    response->add_option("--restarts", common.restarts, "Optimizer restarts")
        ->capture_default_str();

    // check-properties
    std::string dims_csv = "2,3,4", report_path;
    int instances = 100;
    int threads = 0;
    bool inject_faulty_dephase = false;
    auto *check = app.add_subcommand("check-properties", "Batch property verification");
    check->add_option("--dims", dims_csv, "Comma-separated dimensions")->capture_default_str();
    check->add_option("--instances", instances, "Instances per property per dimension")
        ->capture_default_str();
    check->add_option("--report", report_path, "Write the JSON report to this file");
    check->add_option("--threads", threads, "Worker threads (0 = hardware)")->capture_default_str();
    check->add_flag("--inject-faulty-dephase", inject_faulty_dephase,
                    "Negative control: break dephasing and expect a failure")
        ->group(""); // hidden
    check->add_option("--restarts", common.restarts, "Optimizer restarts")->capture_default_str();

    // random-state
    int rand_dim = 2;
    bool rand_pure = false, rand_mixed = false;
    auto *random_state = app.add_subcommand("random-state", "Seeded Haar/Ginibre state generator");
    random_state->add_option("--dim", rand_dim, "Dimension")->capture_default_str();
    random_state->add_flag("--pure", rand_pure, "Haar-random pure state");
    random_state->add_flag("--mixed", rand_mixed, "Ginibre-random mixed state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (coherence->parsed()) {
            if (use_computational) {
                const kdq::DensityMatrix probe = kdq::load_state(state_arg);
                basis_arg = "computational:" + std::to_string(probe.dim());
            }
            return run_coherence(state_arg, basis_arg, povm_path, qubit_analytic, common);
        }
        if (kd_table_cmd->parsed()) {
            return run_kd_table(table_state, table_basis_a, table_basis_b, with_nonclassicality,
                                with_reconstruct, common);
        }
        if (simulate->parsed()) {
            return run_simulate(sim_scheme, sim_state, sim_basis_a, sim_basis_b, sim_shots,
                                sim_exact, sim_sigma, common);
        }
        if (response->parsed()) {
            return run_response(setup_path, resp_t, resp_tprime, common);
        }
        if (check->parsed()) {
            return run_check_properties(dims_csv, instances, report_path, inject_faulty_dephase,
                                        threads, common);
        }
        if (random_state->parsed()) {
            return run_random_state(rand_dim, rand_pure, rand_mixed, common);
        }
    } catch (const kdq::OptimizerFailure &e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitOptimizer;
    } catch (const kdq::Error &e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitValidation;
    }
    return kExitValidation;
}
