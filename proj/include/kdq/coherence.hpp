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
 * Coherence quantifiers over an incoherent reference basis: the l1-norm
 * measure, the optimized imaginary-KD measure with its qubit closed form,
 * the standard-deviation upper bound, dephasing, the POVM generalization
 * with coarse-graining, and the single-pair witness that skips the
 * maximization.
 *
 * This module owns objectives and closed forms only; all search strategy
 * lives in the optimizer.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/optimizer.hpp"

namespace kdq {

/// "Vanishing" after optimization means below this.
inline constexpr double kOptZeroTol = 1e-6;
/// "Vanishing" for analytic quantities.
inline constexpr double kAnalyticZeroTol = 1e-9;

struct CoherenceResult {
    double value = 0.0;
    OrthonormalBasis argmax_basis;
    OptimizationReport report;
    /// Total simulated shots behind the value; zero for exact computations.
    long long total_shots = 0;
};

/// C_l1 = sum_{a != a'} |<a|rho|a'>|.
double l1_coherence(const DensityMatrix &state, const OrthonormalBasis &basis);

/// sum_a sqrt(p_a - p_a^2) with p_a = <a|rho|a>: the total quantum
/// uncertainty of the basis in the state, an upper bound on kd_coherence.
double stddev_bound(const DensityMatrix &state, const OrthonormalBasis &basis);

/// sum_a Pi_a rho Pi_a: removes off-diagonal terms in `basis`.
DensityMatrix dephase(const DensityMatrix &state, const OrthonormalBasis &basis);

/// Objective factories; the returned functions are pure and safe to
/// evaluate concurrently.
std::function<double(const OrthonormalBasis &)> imag_l1_objective(const DensityMatrix &state,
                                                                  const OrthonormalBasis &basis);
std::function<double(const OrthonormalBasis &)> imag_l1_objective_povm(const DensityMatrix &state,
                                                                       const Povm &povm);

/// Max over second bases of imag_l1: the KD coherence of `state` relative to
/// `basis`. The reported value is the objective at argmax_basis, so it is a
/// certified lower bound on the true maximum.
CoherenceResult kd_coherence(const DensityMatrix &state, const OrthonormalBasis &basis,
                             const OptimizerConfig &cfg);

struct QubitAnalyticResult {
    double value;
    OrthonormalBasis argmax_basis;
};

/// Closed form for d = 2: value is 2|<n+|rho|n->|, the maximizer is
/// (|n+> +- e^{i beta}|n->)/sqrt(2) with beta = pi/2 - arg<n+|rho|n->.
QubitAnalyticResult kd_coherence_qubit_analytic(const DensityMatrix &state,
                                                const OrthonormalBasis &basis);

/// KD coherence with POVM elements M_x replacing the projectors:
/// max over {|b>} of sum_{x,b} |Im <b|M_x rho|b>|. Vanishes iff
/// [M_x, rho] = 0 for all x.
CoherenceResult kd_coherence_povm(const DensityMatrix &state, const Povm &povm,
                                  const OptimizerConfig &cfg);

/// Projective POVM M_A = sum_{a in A} Pi_a over a disjoint partition of the
/// basis indices. Coherence is nonincreasing under this map.
Povm coarse_grain(const OrthonormalBasis &basis, const std::vector<std::vector<int>> &partition);

struct WitnessResult {
    double witness;
    bool detected;
};

/// Single-pair certificate: a nonvanishing imag_l1 at any fixed second basis
/// already implies nonvanishing KD and l1 coherence for both bases, without
/// the maximization. May miss coherence (e.g. an all-real table).
WitnessResult coherence_witness(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                                const OrthonormalBasis &basis_b);

} // namespace kdq
