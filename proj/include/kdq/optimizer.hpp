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
 * Deterministic multi-start maximization of basis objectives over the
 * manifold of orthonormal bases. A basis is charted as the columns of
 * exp(iH) with H assembled from d^2 real parameters; the chart is smooth
 * and surjective onto the unitary group, and its redundancy is harmless
 * for maximization. Product-constrained composite searches concatenate
 * per-factor charts. Search is a derivative-free Nelder-Mead simplex
 * (the objectives carry absolute-value kinks, so no gradients), with a
 * shrinking-simplex polish loop for terminal accuracy.
 *
 * Also provides the brute-force oracles used to cross-check optimizer
 * output: an exhaustive (alpha, beta) scan for qubits and a Haar
 * random-search lower bound for d >= 3.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"

namespace kdq {

struct OptimizerConfig {
    int restarts = 32;
    int max_iters = 2000; // Nelder-Mead iterations per restart, polish included
    double xtol = 1e-10;
    double ftol = 1e-12;
    std::uint64_t seed = 0;
    /// When set, the second basis is constrained to a tensor product of
    /// per-factor bases and the chart becomes the concatenation of the
    /// factor charts. The dims must multiply to the problem dimension.
    std::vector<int> factor_dims;

    void validate(int problem_dim) const;
};

/// Angles (alpha, beta) of the qubit second-basis family
///   |b+> = cos(alpha/2)|0> + sin(alpha/2) e^{i beta}|1>
///   |b-> = sin(alpha/2)|0> - cos(alpha/2) e^{i beta}|1>
/// which sweeps every orthonormal basis of C^2 (up to phases).
struct QubitBasisParams {
    double alpha; // [0, pi]
    double beta;  // [0, 2 pi)

    QubitBasisParams(double a, double b);
    OrthonormalBasis basis() const;
};

struct OptimizationReport {
    double best_value = 0.0;
    std::vector<double> best_params;
    int restarts_run = 0;
    int converged_restarts = 0;
    long long objective_evals = 0;
    double spread = 0.0; // max - min over restart optima
};

/// Number of chart parameters: d^2, or the sum of squared factor dims.
int chart_param_count(int d, const std::vector<int> &factor_dims);

/// U = exp(iH), H Hermitian from d^2 reals: d diagonal entries followed by
/// (re, im) pairs for the strict upper triangle in row-major order.
ComplexMatrix unitary_from_params(const std::vector<double> &params, int d);

/// Inverse chart: parameters whose unitary_from_params reproduces `u` up to
/// eigenphase branch choices. Used for structured restart points.
std::vector<double> params_from_unitary(const ComplexMatrix &u);

/// Basis for a chart point, honoring an optional product constraint.
OrthonormalBasis basis_from_params(const std::vector<double> &params, int d,
                                   const std::vector<int> &factor_dims);

/// Multi-start maximization of `objective` over orthonormal bases of C^d.
/// Restart 0 starts at the computational basis, restart 1 at the Fourier
/// basis, the rest at uniform chart points in [-pi, pi]^n drawn from
/// seed-keyed substreams. Deterministic for a fixed config; ties between
/// restart optima resolve to the lowest restart index.
OptimizationReport maximize(const std::function<double(const OrthonormalBasis &)> &objective, int d,
                            const OptimizerConfig &cfg);

/// Exhaustive scan of imag_l1 over the (alpha, beta) grid; converges to the
/// coherence value from below as resolution grows. Independent of the
/// exp(iH) chart and of the simplex search.
double grid_oracle_qubit(const DensityMatrix &state, const OrthonormalBasis &basis, int resolution);

/// Max of imag_l1 over `samples` Haar-random second bases: a certified
/// lower bound on the coherence for any dimension.
double grid_oracle_general(const DensityMatrix &state, const OrthonormalBasis &basis, int samples,
                           std::uint64_t seed);

} // namespace kdq
