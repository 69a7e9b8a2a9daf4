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
 * Complex linear algebra domain types with validated constructors, plus the
 * random-state / unitary generators and structured unitaries used throughout
 * the library. All types are immutable after construction; all free
 * functions are pure.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kdq/errors.hpp"
#include "kdq/rng.hpp"

namespace kdq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense algebra only; larger inputs are rejected with DimensionTooLarge.
inline constexpr int kMaxDim = 64;

/// Validation tolerances. Eigenvalues inside the PSD slack are accepted
/// as-is, never clipped or modified.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdSlack = 1e-9;
inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kPovmSumTol = 1e-9;

void check_dim_supported(Eigen::Index d);

/// d x d complex Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
  public:
    /// Validates hermiticity (1e-10), unit trace (1e-10) and positive
    /// semidefiniteness (smallest eigenvalue >= -1e-9).
    explicit DensityMatrix(const ComplexMatrix &m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const ComplexMatrix &matrix() const { return mat_; }

    double purity() const { return (mat_ * mat_).trace().real(); }

  private:
    ComplexMatrix mat_;
};

/// Ordered set of d orthonormal kets, stored as the columns of a d x d
/// matrix. Projectors are regenerated from kets on demand, never stored.
class OrthonormalBasis {
  public:
    /// Validates pairwise orthonormality and completeness at 1e-10.
    explicit OrthonormalBasis(const ComplexMatrix &kets);

    int dim() const { return static_cast<int>(kets_.rows()); }
    /// Columns are kets.
    const ComplexMatrix &kets() const { return kets_; }
    ComplexVector ket(int i) const { return kets_.col(i); }
    /// Rank-one projector |i><i|.
    ComplexMatrix projector(int i) const { return kets_.col(i) * kets_.col(i).adjoint(); }

    /// Trusted path for kets known unitary by construction (e.g. columns of
    /// exp(iH)). Skips validation; callers outside optimizer hot loops
    /// should use the validating constructor.
    static OrthonormalBasis from_unitary_unchecked(ComplexMatrix kets);

  private:
    struct unchecked_t {};
    OrthonormalBasis(ComplexMatrix kets, unchecked_t) : kets_(std::move(kets)) {}
    ComplexMatrix kets_;
};

/// Complete set of POVM elements: PSD operators summing to the identity.
class Povm {
  public:
    explicit Povm(std::vector<ComplexMatrix> elements);

    int dim() const { return static_cast<int>(elements_.front().rows()); }
    int size() const { return static_cast<int>(elements_.size()); }
    const ComplexMatrix &element(int x) const { return elements_[static_cast<std::size_t>(x)]; }
    const std::vector<ComplexMatrix> &elements() const { return elements_; }

  private:
    std::vector<ComplexMatrix> elements_;
};

/// Bloch angles of a pure qubit ket cos(theta/2)|0> + sin(theta/2)e^{i eta}|1>.
struct QubitPureParams {
    double theta; // polar, [0, pi]
    double eta;   // azimuthal, [0, 2*pi)

    QubitPureParams(double t, double e);
    ComplexVector ket() const;
    DensityMatrix state() const;
};

DensityMatrix make_density_matrix(const ComplexMatrix &m);

OrthonormalBasis computational_basis(int d);

/// Basis with <a|b> = exp(i 2 pi a b / d) / sqrt(d) against the
/// computational basis; mutually unbiased with it for every d.
OrthonormalBasis fourier_basis(int d);

/// Rank-one projector of a Haar-distributed ket. Deterministic per seed.
DensityMatrix random_pure_state(int d, std::uint64_t seed);

/// G G^dag / Tr(G G^dag) for a complex Ginibre matrix G. Full rank with
/// probability one. Deterministic per seed.
DensityMatrix random_mixed_state(int d, std::uint64_t seed);

/// Haar unitary via QR of a Ginibre matrix with phase-corrected R diagonal.
ComplexMatrix random_unitary(int d, std::uint64_t seed);

/// U = sum_a exp(i phases[a]) |a><a|: diagonal in `basis`, commutes with
/// every observable sharing that eigenbasis.
ComplexMatrix translation_unitary(const OrthonormalBasis &basis, const std::vector<double> &phases);

/// U = sum_a exp(i phases[a]) |perm[a]><a|.
ComplexMatrix permutation_unitary(const OrthonormalBasis &basis, const std::vector<int> &perm,
                                  const std::vector<double> &phases);

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Trace out one factor of a bipartite state; keep = 1 retains the first
/// (d1-dimensional) factor, keep = 2 the second.
DensityMatrix partial_trace(const DensityMatrix &rho12, int d1, int d2, int keep);

/// exp(iH) for Hermitian H, exact via spectral decomposition (closed form
/// for d <= 2).
ComplexMatrix matrix_exp_i_hermitian(const ComplexMatrix &h);

/// Hermitian H with exp(iH) = U and eigenphases in (-pi, pi], via complex
/// Schur decomposition (U must be unitary).
ComplexMatrix hermitian_log_unitary(const ComplexMatrix &u);

double unitarity_residual(const ComplexMatrix &u);
double hermiticity_residual(const ComplexMatrix &m);

} // namespace kdq
