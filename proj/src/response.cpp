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

#include "kdq/response.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "kdq/kd.hpp"

namespace kdq {

Observable::Observable(OrthonormalBasis eigenbasis, RealVector eigenvalues)
    : eigenbasis_(std::move(eigenbasis)), eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.size() != eigenbasis_.dim()) {
        throw DimensionMismatch("need exactly dim eigenvalues, got " +
                                std::to_string(eigenvalues_.size()));
    }
    const double herm = hermiticity_residual(matrix());
    if (herm > kHermTol) {
        throw NotHermitian("reconstructed observable hermiticity residual " +
                           std::to_string(herm));
    }
}

ComplexMatrix Observable::matrix() const {
    return eigenbasis_.kets() * eigenvalues_.asDiagonal() * eigenbasis_.kets().adjoint();
}

ResponseSetup::ResponseSetup(Observable h0_in, Observable a_in, Observable b_in,
                             DensityMatrix state0_in)
    : h0(std::move(h0_in)), a_obs(std::move(a_in)), b_obs(std::move(b_in)),
      state0(std::move(state0_in)) {
    const int d = h0.dim();
    if (a_obs.dim() != d || b_obs.dim() != d || state0.dim() != d) {
        throw DimensionMismatch("H0, A, B and the state must share one dimension");
    }
}

namespace {

ComplexMatrix evolution_unitary(const Observable &h0, double t) {
    // exp(i H0 t) through the spectral data already carried by h0.
    RealVector phases = h0.eigenvalues() * t;
    ComplexVector diag(phases.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        diag(k) = Complex(std::cos(phases(k)), std::sin(phases(k)));
    }
    return h0.eigenbasis().kets() * diag.asDiagonal() * h0.eigenbasis().kets().adjoint();
}

} // namespace

OrthonormalBasis heisenberg_basis(const Observable &obs, const Observable &h0, double t) {
    if (obs.dim() != h0.dim()) {
        throw DimensionMismatch("observable and Hamiltonian must share one dimension");
    }
    return OrthonormalBasis(evolution_unitary(h0, t) * obs.eigenbasis().kets());
}

double response_function(const ResponseSetup &setup, double t_prime, double t) {
    const ComplexMatrix u_tp = evolution_unitary(setup.h0, t_prime);
    const ComplexMatrix u_t = evolution_unitary(setup.h0, t);
    const ComplexMatrix a_t = u_tp * setup.a_obs.matrix() * u_tp.adjoint();
    const ComplexMatrix b_t = u_t * setup.b_obs.matrix() * u_t.adjoint();
    const Complex tr = ((a_t * b_t - b_t * a_t) * setup.state0.matrix()).trace();
    return (Complex(0.0, 1.0) * tr).real();
}

double response_function_kd(const ResponseSetup &setup, double t_prime, double t) {
    const OrthonormalBasis basis_a = heisenberg_basis(setup.a_obs, setup.h0, t_prime);
    const OrthonormalBasis basis_b = heisenberg_basis(setup.b_obs, setup.h0, t);
    const KdTable table = kd_table(setup.state0, basis_a, basis_b);
    const int d = table.dim();
    double phi = 0.0;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            phi += setup.a_obs.eigenvalues()(a) * setup.b_obs.eigenvalues()(b) *
                   table.entry(a, b).imag();
        }
    }
    return 2.0 * phi;
}

ResponseBound response_bound(const ResponseSetup &setup, double t_prime, double t,
                             const OptimizerConfig &cfg) {
    const double lhs = std::abs(response_function(setup, t_prime, t));
    const OrthonormalBasis basis_a = heisenberg_basis(setup.a_obs, setup.h0, t_prime);
    CoherenceResult coherence = kd_coherence(setup.state0, basis_a, cfg);
    const double rhs = 2.0 * setup.a_obs.max_abs_eigenvalue() * setup.b_obs.max_abs_eigenvalue() *
                       coherence.value;
    return ResponseBound{lhs, rhs, std::move(coherence)};
}

} // namespace kdq
