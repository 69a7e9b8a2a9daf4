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
 * Linear response function of a perturbation A probed by B under H0, in
 * both its commutator form and its KD-quasiprobability form, and the
 * coherence upper bound on its magnitude. Time evolution is the exact
 * dense exponential of H0 (hbar = 1); the time-convolution against a
 * driving profile is out of scope, values are computed at given times.
 */

#pragma once

#include "kdq/coherence.hpp"
#include "kdq/linalg.hpp"
#include "kdq/optimizer.hpp"

namespace kdq {

/// Hermitian observable given spectrally: eigenbasis plus real eigenvalues.
class Observable {
  public:
    Observable(OrthonormalBasis eigenbasis, RealVector eigenvalues);

    int dim() const { return eigenbasis_.dim(); }
    const OrthonormalBasis &eigenbasis() const { return eigenbasis_; }
    const RealVector &eigenvalues() const { return eigenvalues_; }
    /// sum_k a_k |k><k|.
    ComplexMatrix matrix() const;
    double max_abs_eigenvalue() const { return eigenvalues_.cwiseAbs().maxCoeff(); }

  private:
    OrthonormalBasis eigenbasis_;
    RealVector eigenvalues_;
};

/// Unperturbed Hamiltonian H0, perturbation A, probe B, initial state.
struct ResponseSetup {
    Observable h0;
    Observable a_obs;
    Observable b_obs;
    DensityMatrix state0;

    ResponseSetup(Observable h0_in, Observable a_in, Observable b_in, DensityMatrix state0_in);
};

/// Eigenbasis of obs evolved to the Heisenberg picture at time t:
/// kets e^{i H0 t}|k>.
OrthonormalBasis heisenberg_basis(const Observable &obs, const Observable &h0, double t);

/// Phi_AB(t', t) = i Tr{[A(t'), B(t)] rho(0)} (commutator form; real).
double response_function(const ResponseSetup &setup, double t_prime, double t);

/// The same response as 2 sum_{a,b} a b Im Pr_KD(a(t'), b(t) | rho(0)).
double response_function_kd(const ResponseSetup &setup, double t_prime, double t);

struct ResponseBound {
    double lhs; // |Phi_AB(t', t)| for the given B
    double rhs; // 2 |a|_max |b|_max C_KD[rho(0); {Pi_a(t')}]
    CoherenceResult coherence;
};

/// Verifies the per-B inequality |Phi| <= 2 |a|_* |b|_* C_KD. The lhs is a
/// certified lower bound on the max over probes with B's spectrum; the max
/// itself is not searched.
ResponseBound response_bound(const ResponseSetup &setup, double t_prime, double t,
                             const OptimizerConfig &cfg);

} // namespace kdq
