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

#include "kdq/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace kdq {

namespace {

void check_pair(int da, int db) {
    if (da != db) {
        throw DimensionMismatch("state and basis dims differ: " + std::to_string(da) + " vs " +
                                std::to_string(db));
    }
}

} // namespace

double l1_coherence(const DensityMatrix &state, const OrthonormalBasis &basis) {
    check_pair(state.dim(), basis.dim());
    const ComplexMatrix in_basis = basis.kets().adjoint() * state.matrix() * basis.kets();
    return in_basis.cwiseAbs().sum() - in_basis.diagonal().cwiseAbs().sum();
}

double stddev_bound(const DensityMatrix &state, const OrthonormalBasis &basis) {
    check_pair(state.dim(), basis.dim());
    double total = 0.0;
    for (int a = 0; a < basis.dim(); ++a) {
        const double p = std::clamp(
            (basis.ket(a).adjoint() * state.matrix() * basis.ket(a))(0, 0).real(), 0.0, 1.0);
        total += std::sqrt(std::max(0.0, p - p * p));
    }
    return total;
}

DensityMatrix dephase(const DensityMatrix &state, const OrthonormalBasis &basis) {
    check_pair(state.dim(), basis.dim());
    const ComplexMatrix in_basis = basis.kets().adjoint() * state.matrix() * basis.kets();
    ComplexVector diag = in_basis.diagonal();
    for (Eigen::Index a = 0; a < diag.size(); ++a) {
        diag(a) = Complex(diag(a).real(), 0.0);
    }
    return DensityMatrix(basis.kets() * diag.asDiagonal() * basis.kets().adjoint());
}

std::function<double(const OrthonormalBasis &)> imag_l1_objective(const DensityMatrix &state,
                                                                  const OrthonormalBasis &basis) {
    check_pair(state.dim(), basis.dim());
    const ComplexMatrix a_dag = basis.kets().adjoint();
    const ComplexMatrix a_dag_rho = a_dag * state.matrix();
    return [a_dag, a_dag_rho](const OrthonormalBasis &second) -> double {
        // entry(a,b) = conj((A^dag B)_ab) (A^dag rho B)_ab
        const ComplexMatrix s = a_dag * second.kets();
        const ComplexMatrix t = a_dag_rho * second.kets();
        return s.conjugate().cwiseProduct(t).imag().cwiseAbs().sum();
    };
}

std::function<double(const OrthonormalBasis &)> imag_l1_objective_povm(const DensityMatrix &state,
                                                                       const Povm &povm) {
    check_pair(state.dim(), povm.dim());
    std::vector<ComplexMatrix> m_rho;
    m_rho.reserve(static_cast<std::size_t>(povm.size()));
    for (const ComplexMatrix &m : povm.elements()) {
        m_rho.push_back(m * state.matrix());
    }
    return [m_rho](const OrthonormalBasis &second) -> double {
        double total = 0.0;
        for (const ComplexMatrix &mr : m_rho) {
            const ComplexMatrix t = mr * second.kets();
            for (Eigen::Index b = 0; b < t.cols(); ++b) {
                total += std::abs((second.kets().col(b).dot(t.col(b))).imag());
            }
        }
        return total;
    };
}

CoherenceResult kd_coherence(const DensityMatrix &state, const OrthonormalBasis &basis,
                             const OptimizerConfig &cfg) {
    check_pair(state.dim(), basis.dim());
    const int d = state.dim();
    // The objective sees the second basis only through A^dag B, so search in
    // the frame where the incoherent basis is computational: the Fourier
    // restart is then mutually unbiased with it, which is where maximizers
    // concentrate. The chart point maps back as B = A U. (With factor_dims
    // this keeps products aligned with the incoherent basis frame.)
    ComplexMatrix in_frame = basis.kets().adjoint() * state.matrix() * basis.kets();
    in_frame = Complex(0.5, 0.0) * (in_frame + ComplexMatrix(in_frame.adjoint()));
    const DensityMatrix rotated(in_frame);
    const auto objective = imag_l1_objective(rotated, computational_basis(d));
    OptimizationReport report = maximize(objective, d, cfg);
    OrthonormalBasis argmax(basis.kets() *
                            basis_from_params(report.best_params, d, cfg.factor_dims).kets());
    const double value = report.best_value;
    return CoherenceResult{value, std::move(argmax), std::move(report), 0};
}

QubitAnalyticResult kd_coherence_qubit_analytic(const DensityMatrix &state,
                                                const OrthonormalBasis &basis) {
    if (state.dim() != 2 || basis.dim() != 2) {
        throw WrongDimension("qubit closed form requires dimension 2");
    }
    // In the frame where the incoherent basis is computational the value is
    // 2|rho'_01| and the maximizer sits at alpha = pi/2, beta = pi/2 - arg(rho'_01).
    const Complex rho01 = (basis.ket(0).adjoint() * state.matrix() * basis.ket(1))(0, 0);
    const double value = 2.0 * std::abs(rho01);
    const double beta = std::numbers::pi / 2.0 - std::arg(rho01);
    const Complex phase(std::cos(beta), std::sin(beta));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix second_frame(2, 2);
    second_frame(0, 0) = inv_sqrt2;
    second_frame(1, 0) = inv_sqrt2 * phase;
    second_frame(0, 1) = inv_sqrt2;
    second_frame(1, 1) = -inv_sqrt2 * phase;
    return QubitAnalyticResult{value, OrthonormalBasis(basis.kets() * second_frame)};
}

CoherenceResult kd_coherence_povm(const DensityMatrix &state, const Povm &povm,
                                  const OptimizerConfig &cfg) {
    check_pair(state.dim(), povm.dim());
    const int d = state.dim();

    // Same frame trick as kd_coherence: diagonalize the labeled element sum
    // (for commuting projective POVMs this is their common eigenbasis) and
    // search relative to it. Skipped under a product constraint, where an
    // unstructured rotation would break the factorization the caller asked
    // for; such callers pass data already in a product frame.
    ComplexMatrix frame = ComplexMatrix::Identity(d, d);
    if (cfg.factor_dims.empty()) {
        ComplexMatrix labeled = ComplexMatrix::Zero(d, d);
        for (int x = 0; x < povm.size(); ++x) {
            labeled += static_cast<double>(x + 1) * povm.element(x);
        }
        labeled = Complex(0.5, 0.0) * (labeled + ComplexMatrix(labeled.adjoint()));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(labeled);
        frame = es.eigenvectors();
    }

    ComplexMatrix rho_rotated = frame.adjoint() * state.matrix() * frame;
    rho_rotated = Complex(0.5, 0.0) * (rho_rotated + ComplexMatrix(rho_rotated.adjoint()));
    std::vector<ComplexMatrix> elements_rotated;
    elements_rotated.reserve(static_cast<std::size_t>(povm.size()));
    for (const ComplexMatrix &m : povm.elements()) {
        ComplexMatrix e = frame.adjoint() * m * frame;
        elements_rotated.push_back(Complex(0.5, 0.0) * (e + ComplexMatrix(e.adjoint())));
    }

    const auto objective =
        imag_l1_objective_povm(DensityMatrix(rho_rotated), Povm(std::move(elements_rotated)));
    OptimizationReport report = maximize(objective, d, cfg);
    OrthonormalBasis argmax(frame * basis_from_params(report.best_params, d, cfg.factor_dims).kets());
    const double value = report.best_value;
    return CoherenceResult{value, std::move(argmax), std::move(report), 0};
}

Povm coarse_grain(const OrthonormalBasis &basis, const std::vector<std::vector<int>> &partition) {
    const int d = basis.dim();
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (const auto &block : partition) {
        if (block.empty()) {
            throw InvalidPartition("partition blocks must be nonempty");
        }
        for (int a : block) {
            if (a < 0 || a >= d || seen[static_cast<std::size_t>(a)]) {
                throw InvalidPartition("blocks must disjointly cover 0.." + std::to_string(d - 1) +
                                       "; index " + std::to_string(a) + " is out of range or repeated");
            }
            seen[static_cast<std::size_t>(a)] = true;
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool v) { return v; })) {
        throw InvalidPartition("partition does not cover every basis index");
    }
    std::vector<ComplexMatrix> elements;
    elements.reserve(partition.size());
    for (const auto &block : partition) {
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        for (int a : block) {
            m += basis.projector(a);
        }
        elements.push_back(std::move(m));
    }
    return Povm(std::move(elements));
}

WitnessResult coherence_witness(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                                const OrthonormalBasis &basis_b) {
    const double w = imag_l1(kd_table(state, basis_a, basis_b));
    return WitnessResult{w, w > kAnalyticZeroTol};
}

} // namespace kdq
