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

#include "kdq/kd.hpp"

#include <cmath>
#include <string>

namespace kdq {

namespace {

constexpr double kOverlapFloor = 1e-12;

void check_same_dim(int da, int db, int dc) {
    if (da != db || da != dc) {
        throw DimensionMismatch("state and bases must share one dimension, got " +
                                std::to_string(da) + ", " + std::to_string(db) + ", " +
                                std::to_string(dc));
    }
}

} // namespace

KdTable::KdTable(OrthonormalBasis basis_a, OrthonormalBasis basis_b, ComplexMatrix entries)
    : basis_a_(std::move(basis_a)), basis_b_(std::move(basis_b)), entries_(std::move(entries)) {
    if (basis_a_.dim() != basis_b_.dim() || entries_.rows() != basis_a_.dim() ||
        entries_.cols() != basis_a_.dim()) {
        throw DimensionMismatch("table entries and bases must share one dimension");
    }
}

KdTable kd_table(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                 const OrthonormalBasis &basis_b) {
    check_same_dim(state.dim(), basis_a.dim(), basis_b.dim());
    // entry(a,b) = <b|a> <a|rho|b> = conj(S_ab) T_ab with S = A^dag B,
    // T = A^dag rho B.
    const ComplexMatrix s = basis_a.kets().adjoint() * basis_b.kets();
    const ComplexMatrix t = basis_a.kets().adjoint() * state.matrix() * basis_b.kets();
    return KdTable(basis_a, basis_b, s.conjugate().cwiseProduct(t));
}

double imag_l1(const KdTable &table) { return table.entries().imag().cwiseAbs().sum(); }

Eigen::MatrixXd commutator_imag(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                                const OrthonormalBasis &basis_b) {
    check_same_dim(state.dim(), basis_a.dim(), basis_b.dim());
    const int d = state.dim();
    Eigen::MatrixXd out(d, d);
    const Complex half_over_i(0.0, -0.5); // 1/(2i)
    for (int a = 0; a < d; ++a) {
        const ComplexMatrix pi_a = basis_a.projector(a);
        const ComplexMatrix comm = pi_a * state.matrix() - state.matrix() * pi_a;
        for (int b = 0; b < d; ++b) {
            const Complex v = basis_b.ket(b).adjoint() * comm * basis_b.ket(b);
            out(a, b) = (half_over_i * v).real();
        }
    }
    return out;
}

DensityMatrix reconstruct_state(const KdTable &table) {
    const int d = table.dim();
    const ComplexMatrix s = table.basis_a().kets().adjoint() * table.basis_b().kets();
    ComplexMatrix coeff(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const Complex overlap_ba = std::conj(s(a, b)); // <b|a>
            if (std::abs(overlap_ba) <= kOverlapFloor) {
                throw SingularOverlap("overlap <b=" + std::to_string(b) + "|a=" + std::to_string(a) +
                                      "> has modulus " + std::to_string(std::abs(overlap_ba)) +
                                      " <= 1e-12; reconstruction is informationally incomplete");
            }
            coeff(a, b) = table.entry(a, b) / overlap_ba;
        }
    }
    ComplexMatrix rho = table.basis_a().kets() * coeff * table.basis_b().kets().adjoint();
    rho = Complex(0.5, 0.0) * (rho + ComplexMatrix(rho.adjoint()));
    return DensityMatrix(rho);
}

double nonclassicality(const KdTable &table) { return table.entries().cwiseAbs().sum() - 1.0; }

double max_commutator_norm(const DensityMatrix &state, const OrthonormalBasis &basis) {
    if (state.dim() != basis.dim()) {
        throw DimensionMismatch("state and basis must share one dimension");
    }
    double worst = 0.0;
    for (int a = 0; a < basis.dim(); ++a) {
        const ComplexMatrix pi_a = basis.projector(a);
        const ComplexMatrix comm = pi_a * state.matrix() - state.matrix() * pi_a;
        worst = std::max(worst, comm.norm());
    }
    return worst;
}

} // namespace kdq
