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

#include "kdq/properties.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>
#include <utility>

#include "kdq/kd.hpp"

namespace kdq {

namespace {

constexpr double kEqualityTol = 2e-6;
constexpr double kInequalityTol = 1e-6;

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t property, int dim, int instance) {
    const std::uint64_t key = property * 0x100000001ULL +
                              static_cast<std::uint64_t>(dim) * 0x10001ULL +
                              static_cast<std::uint64_t>(instance);
    return Rng::substream(master, key).next_u64();
}

OrthonormalBasis random_basis(int d, std::uint64_t seed) {
    return OrthonormalBasis(random_unitary(d, seed));
}

DensityMatrix random_state(int d, std::uint64_t seed, bool pure) {
    return pure ? random_pure_state(d, seed) : random_mixed_state(d, seed);
}

DensityMatrix mix(double p, const DensityMatrix &x, const DensityMatrix &y) {
    return DensityMatrix(p * x.matrix() + (1.0 - p) * y.matrix());
}

double coherence_value(const DensityMatrix &state, const OrthonormalBasis &basis,
                       const OptimizerConfig &cfg, std::uint64_t seed) {
    OptimizerConfig c = cfg;
    c.seed = seed;
    return kd_coherence(state, basis, c).value;
}

struct Check {
    std::string property;
    double tolerance;
    // violation for instance i at dimension d with a derived seed
    std::function<double(int d, int i, std::uint64_t seed, const PropertyOptions &)> violation;
    // which dimensions the check applies to (empty = all configured)
    std::function<bool(int d)> applies = nullptr;
};

double check_faithful_zero(int d, int /*i*/, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    RealVector probs(d);
    double total = 0.0;
    for (int k = 0; k < d; ++k) {
        probs(k) = rng.next_double() + 1e-3;
        total += probs(k);
    }
    probs /= total;
    ComplexMatrix rho = basis.kets() * probs.asDiagonal() * basis.kets().adjoint();
    rho = Complex(0.5, 0.0) * (rho + ComplexMatrix(rho.adjoint()));
    return coherence_value(DensityMatrix(rho), basis, opt.opt, rng.next_u64());
}

double check_faithful_nonzero(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    if (max_commutator_norm(state, basis) <= kAnalyticZeroTol) {
        return 0.0; // a random draw this degenerate is out of scope here
    }
    const double value = coherence_value(state, basis, opt.opt, rng.next_u64());
    return value > kOptZeroTol ? 0.0 : 1.0;
}

double check_convexity(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    const int components = 2 + (i % 3);
    std::vector<DensityMatrix> parts;
    std::vector<double> weights(static_cast<std::size_t>(components));
    double total = 0.0;
    for (int k = 0; k < components; ++k) {
        parts.push_back(random_state(d, rng.next_u64(), (i + k) % 2 == 0));
        weights[static_cast<std::size_t>(k)] = rng.next_double() + 1e-3;
        total += weights[static_cast<std::size_t>(k)];
    }
    ComplexMatrix mixture = ComplexMatrix::Zero(d, d);
    double rhs = 0.0;
    for (int k = 0; k < components; ++k) {
        const double w = weights[static_cast<std::size_t>(k)] / total;
        mixture += w * parts[static_cast<std::size_t>(k)].matrix();
        rhs += w * coherence_value(parts[static_cast<std::size_t>(k)], basis, opt.opt,
                                   rng.next_u64());
    }
    const double lhs = coherence_value(DensityMatrix(mixture), basis, opt.opt, rng.next_u64());
    return std::max(0.0, lhs - rhs);
}

double check_unitary_covariance(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    const ComplexMatrix u = random_unitary(d, rng.next_u64());
    const DensityMatrix rotated(u * state.matrix() * u.adjoint());
    const OrthonormalBasis rotated_basis(u * basis.kets());
    const double before = coherence_value(state, basis, opt.opt, rng.next_u64());
    const double after = coherence_value(rotated, rotated_basis, opt.opt, rng.next_u64());
    return std::abs(before - after);
}

double check_translation_invariance(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    std::vector<double> phases(static_cast<std::size_t>(d));
    for (double &p : phases) {
        p = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
    }
    const ComplexMatrix u = translation_unitary(basis, phases);
    const DensityMatrix rotated(u * state.matrix() * u.adjoint());
    const double before = coherence_value(state, basis, opt.opt, rng.next_u64());
    const double after = coherence_value(rotated, basis, opt.opt, rng.next_u64());
    return std::abs(before - after);
}

double check_permutation_invariance(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        perm[static_cast<std::size_t>(k)] = k;
    }
    for (int k = d - 1; k > 0; --k) {
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k + 1)));
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
    }
    std::vector<double> phases(static_cast<std::size_t>(d));
    for (double &p : phases) {
        p = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
    }
    const ComplexMatrix u = permutation_unitary(basis, perm, phases);
    const DensityMatrix rotated(u * state.matrix() * u.adjoint());
    const double before = coherence_value(state, basis, opt.opt, rng.next_u64());
    const double after = coherence_value(rotated, basis, opt.opt, rng.next_u64());
    return std::abs(before - after);
}

double check_partial_trace(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const int d2 = 2;
    const OrthonormalBasis basis1 = random_basis(d, rng.next_u64());
    const bool product_instance = (i % 2 == 0);

    DensityMatrix rho12 = product_instance
                              ? DensityMatrix(tensor_product(
                                    random_state(d, rng.next_u64(), i % 4 == 0).matrix(),
                                    random_state(d2, rng.next_u64(), false).matrix()))
                              : random_mixed_state(d * d2, rng.next_u64());

    // Work in the product frame basis1 (x) I2, where the marginal POVM is
    // {E_aa (x) I2}; the value is frame covariant and the rotation keeps the
    // product constraint aligned with the incoherent structure.
    const ComplexMatrix id2 = ComplexMatrix::Identity(d2, d2);
    const ComplexMatrix frame = tensor_product(basis1.kets(), id2);
    ComplexMatrix rho_rot = frame.adjoint() * rho12.matrix() * frame;
    rho_rot = Complex(0.5, 0.0) * (rho_rot + ComplexMatrix(rho_rot.adjoint()));
    std::vector<ComplexMatrix> elements;
    elements.reserve(static_cast<std::size_t>(d));
    const OrthonormalBasis comp1 = computational_basis(d);
    for (int a = 0; a < d; ++a) {
        elements.push_back(tensor_product(comp1.projector(a), id2));
    }
    const Povm marginal_povm(std::move(elements));

    OptimizerConfig composite_cfg = opt.opt;
    composite_cfg.factor_dims = {d, d2};
    composite_cfg.seed = rng.next_u64();
    const double composite =
        kd_coherence_povm(DensityMatrix(rho_rot), marginal_povm, composite_cfg).value;

    const DensityMatrix rho1 = partial_trace(rho12, d, d2, 1);
    const double reduced = coherence_value(rho1, basis1, opt.opt, rng.next_u64());

    return product_instance ? std::abs(composite - reduced) : std::max(0.0, reduced - composite);
}

double check_decoherence(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    const DensityMatrix dephased =
        opt.dephase_override ? opt.dephase_override(state, basis) : dephase(state, basis);
    const double base = coherence_value(state, basis, opt.opt, rng.next_u64());
    double worst = 0.0;
    for (const double p : {0.0, 0.25, 0.5}) {
        const double value = coherence_value(mix(p, state, dephased), basis, opt.opt,
                                             rng.next_u64());
        worst = std::max(worst, std::abs(value - p * base));
    }
    return worst;
}

double check_sandwich_upper(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());
    const double value = coherence_value(state, basis, opt.opt, rng.next_u64());
    const double cap = std::min(l1_coherence(state, basis), stddev_bound(state, basis));
    return std::max(0.0, value - cap);
}

double check_qubit_l1_equality(int /*d*/, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(2, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(2, rng.next_u64());
    const double value = coherence_value(state, basis, opt.opt, rng.next_u64());
    return std::abs(value - l1_coherence(state, basis));
}

double check_qubit_pure_stddev_equality(int /*d*/, int /*i*/, std::uint64_t seed,
                                        const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_pure_state(2, rng.next_u64());
    const OrthonormalBasis basis = random_basis(2, rng.next_u64());
    const double value = coherence_value(state, basis, opt.opt, rng.next_u64());
    return std::abs(value - stddev_bound(state, basis));
}

double check_coarse_graining(int d, int i, std::uint64_t seed, const PropertyOptions &opt) {
    Rng rng(seed);
    const DensityMatrix state = random_state(d, rng.next_u64(), i % 2 == 0);
    const OrthonormalBasis basis = random_basis(d, rng.next_u64());

    std::vector<int> order(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        order[static_cast<std::size_t>(k)] = k;
    }
    for (int k = d - 1; k > 0; --k) {
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k + 1)));
        std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(j)]);
    }
    std::vector<std::vector<int>> partition;
    if (d == 2) {
        partition = {{order[0], order[1]}}; // full merge
    } else {
        const int cut = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - 1)));
        partition.emplace_back(order.begin(), order.begin() + cut);
        partition.emplace_back(order.begin() + cut, order.end());
    }
    const Povm coarse = coarse_grain(basis, partition);

    const double fine = coherence_value(state, basis, opt.opt, rng.next_u64());
    OptimizerConfig povm_cfg = opt.opt;
    povm_cfg.seed = rng.next_u64();
    const double merged = kd_coherence_povm(state, coarse, povm_cfg).value;
    return std::max(0.0, merged - fine);
}

} // namespace

OptimizerConfig PropertyOptions::suite_optimizer_config() {
    OptimizerConfig cfg;
    cfg.restarts = 12;
    cfg.max_iters = 1400;
    cfg.xtol = 1e-10;
    cfg.ftol = 1e-12;
    return cfg;
}

void parallel_for(int count, int threads, const std::function<void(int)> &fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                const int i = next.fetch_add(1);
                if (i >= count) {
                    break;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                    failed.store(true);
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

std::vector<PropertyOutcome> run_property_suite(const PropertyOptions &options) {
    const std::vector<Check> checks = {
        {"faithful-zero", kInequalityTol, check_faithful_zero},
        {"faithful-nonzero", 0.0, check_faithful_nonzero},
        {"convexity", kInequalityTol, check_convexity},
        {"unitary-covariance", kEqualityTol, check_unitary_covariance},
        {"translation-invariance", kEqualityTol, check_translation_invariance},
        {"permutation-invariance", kEqualityTol, check_permutation_invariance},
        {"partial-trace", kEqualityTol, check_partial_trace},
        {"decoherence", kEqualityTol, check_decoherence},
        {"sandwich-upper", kInequalityTol, check_sandwich_upper},
        {"qubit-l1-equality", kEqualityTol, check_qubit_l1_equality,
         [](int d) { return d == 2; }},
        {"qubit-pure-stddev-equality", kEqualityTol, check_qubit_pure_stddev_equality,
         [](int d) { return d == 2; }},
        {"coarse-graining", kInequalityTol, check_coarse_graining},
    };

    std::vector<PropertyOutcome> outcomes;
    std::uint64_t property_tag = 0;
    for (const Check &check : checks) {
        ++property_tag;
        for (int d : options.dims) {
            if (check.applies && !check.applies(d)) {
                continue;
            }
            std::vector<double> violations(static_cast<std::size_t>(options.instances), 0.0);
            parallel_for(options.instances, options.threads, [&](int i) {
                const std::uint64_t seed = sub_seed(options.seed, property_tag, d, i);
                violations[static_cast<std::size_t>(i)] = check.violation(d, i, seed, options);
            });
            const double worst = violations.empty()
                                     ? 0.0
                                     : *std::max_element(violations.begin(), violations.end());
            outcomes.push_back(PropertyOutcome{check.property, d, options.instances, worst,
                                               check.tolerance, worst <= check.tolerance});
        }
    }
    return outcomes;
}

bool all_passed(const std::vector<PropertyOutcome> &outcomes) {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [](const PropertyOutcome &o) { return o.passed; });
}

} // namespace kdq
