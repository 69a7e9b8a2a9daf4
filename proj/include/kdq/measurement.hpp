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
 * Operational reconstructions of the imaginary KD part, simulated exactly
 * and with shot noise:
 *
 *  - the successive-projective scheme: measure the expectation of the
 *    rotated projector e^{i Pi_a pi/2} Pi_b e^{-i Pi_a pi/2} in the state
 *    before and after a nonselective binary measurement of Pi_a, and take
 *    half the difference;
 *  - weak measurement of Pi_a followed by postselection on |b>, reading
 *    the imaginary part of the weak value off the pointer momentum and
 *    multiplying by the postselection probability.
 *
 * The weak pointer is modeled as a direct Gaussian readout of Im of the
 * weak value with configurable spread, not a full von Neumann coupling.
 * Sampled estimators are plug-in products without bias correction.
 */

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "kdq/coherence.hpp"
#include "kdq/kd.hpp"
#include "kdq/linalg.hpp"
#include "kdq/optimizer.hpp"

namespace kdq {

struct ShotConfig {
    long long shots = 1;              // per expectation value
    std::uint64_t seed = 0;
    double pointer_noise_sigma = 1.0; // weak-scheme readout spread

    void validate() const;
};

struct WeakValueRecord {
    int a_index;
    int b_index; // -1 when the postselection ket was given directly
    Complex weak_value;
    double postselect_prob; // in [0, 1]
    /// Im != 0 or Re outside the projector spectrum [0, 1].
    bool anomalous;
};

enum class Scheme { johansen, weak };

/// State after the nonselective binary measurement {Pi_a, I - Pi_a}:
/// Pi_a rho Pi_a + (I - Pi_a) rho (I - Pi_a). Commutes with Pi_a.
DensityMatrix measured_state(const DensityMatrix &state, int a_index, const OrthonormalBasis &basis);

/// e^{i Pi_a pi/2} Pi_b e^{-i Pi_a pi/2}, using e^{i Pi pi/2} = I + (i-1) Pi.
ComplexMatrix rotated_projector(int b_index, int a_index, const OrthonormalBasis &basis_a,
                                const OrthonormalBasis &basis_b);

/// Im KD table from the successive-projective scheme. Exact mode evaluates
/// (1/2) Tr{(rho - rho_a) Pi^{pi/2}_{b|a}}, which equals Im Pr_KD(a,b)
/// entrywise; sampled mode estimates the two expectations from `shots`
/// Bernoulli draws each (success probabilities clipped to [0,1]).
Eigen::MatrixXd johansen_im_kd(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                               const OrthonormalBasis &basis_b, bool exact, const ShotConfig &cfg);

/// Weak value <b|Pi_a rho|b> / <b|rho|b> with its postselection probability.
/// Throws ZeroPostselection when <b|rho|b> <= 1e-12.
WeakValueRecord weak_value(const DensityMatrix &state, int a_index, const OrthonormalBasis &basis_a,
                           const ComplexVector &b_ket, int b_index = -1);

/// Im KD table from weak measurement with postselection:
/// Im{Pi^w_a(b)} Pr(b). Entries with vanishing postselection probability
/// fall back to the direct value Im<b|Pi_a rho|b> (zero for PSD states)
/// instead of raising. Sampled mode draws one multinomial over the strong
/// basis_b measurement for Pr(b) and a Gaussian pointer-momentum mean per
/// entry for Im{Pi^w}.
Eigen::MatrixXd weak_im_kd(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                           const OrthonormalBasis &basis_b, bool exact, const ShotConfig &cfg);

/// KD coherence estimated end-to-end through a measurement scheme: the
/// optimizer maximizes the scheme's sampled (or exact) table sum. Converges
/// to kd_coherence as shots grow; the max over noisy evaluations is biased
/// upward at small shot counts, which is reported, not corrected.
/// total_shots on the result records the simulated budget.
CoherenceResult estimate_kd_coherence(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                                      Scheme scheme, bool exact, const ShotConfig &shot_cfg,
                                      const OptimizerConfig &opt_cfg);

} // namespace kdq
