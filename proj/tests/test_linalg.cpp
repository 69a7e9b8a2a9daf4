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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "kdq/linalg.hpp"

using kdq::Complex;
using kdq::ComplexMatrix;
using kdq::ComplexVector;

namespace {

// Independent oracle: eigenvalues of a real symmetric 2x2 via
// (T +- sqrt(T^2 - 4D)) / 2.
std::pair<double, double> sym2x2_eigenvalues(double a, double b, double c) {
    const double tr = a + c;
    const double det = a * c - b * b;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("maximally mixed and pure projector states validate") {
    CHECK_NOTHROW(kdq::DensityMatrix(ComplexMatrix::Identity(2, 2) * 0.5));
    ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK_NOTHROW(kdq::DensityMatrix{pure});
}

TEST_CASE("indefinite symmetric matrix is rejected as NotPSD") {
    ComplexMatrix m(2, 2);
    m << 0.6, 0.5, 0.5, 0.4;
    const auto [hi, lo] = sym2x2_eigenvalues(0.6, 0.5, 0.4);
    CHECK(hi == doctest::Approx(1.00990195135928).epsilon(1e-12));
    CHECK(lo == doctest::Approx(-0.00990195135928).epsilon(1e-12));
    CHECK(lo < -1e-9);
    CHECK_THROWS_AS(kdq::make_density_matrix(m), kdq::NotPSD);
}

TEST_CASE("constructor names the violated invariant") {
    ComplexMatrix skew(2, 2);
    skew << 0.5, Complex(0.1, 0.2), Complex(0.1, 0.2), 0.5;
    CHECK_THROWS_AS(kdq::DensityMatrix{skew}, kdq::NotHermitian);

    CHECK_THROWS_AS(kdq::DensityMatrix(ComplexMatrix::Identity(2, 2)), kdq::TraceNotOne);
    CHECK_THROWS_AS(kdq::DensityMatrix(ComplexMatrix::Zero(2, 3)), kdq::DimensionMismatch);
}

TEST_CASE("dimension cap") {
    CHECK_THROWS_AS(kdq::computational_basis(65), kdq::DimensionTooLarge);
    CHECK_NOTHROW(kdq::computational_basis(64));
}

TEST_CASE("computational basis") {
    const auto b2 = kdq::computational_basis(2);
    CHECK(b2.kets().isApprox(ComplexMatrix::Identity(2, 2)));
    const auto b3 = kdq::computational_basis(3);
    CHECK(b3.kets().isApprox(ComplexMatrix::Identity(3, 3)));
    const auto b1 = kdq::computational_basis(1);
    CHECK(b1.ket(0)(0) == Complex(1.0, 0.0));
}

TEST_CASE("fourier basis matches the exponential formula") {
    const auto f2 = kdq::fourier_basis(2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2.kets()(0, 0) - Complex(s, 0)) < 1e-15);
    CHECK(std::abs(f2.kets()(1, 1) - Complex(-s, 0)) < 1e-12);

    const auto f3 = kdq::fourier_basis(3);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            CHECK(std::abs(f3.kets()(a, b)) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
        }
    }

    const auto f4 = kdq::fourier_basis(4);
    CHECK(std::abs(f4.kets()(1, 1) - Complex(0.0, 0.5)) < 1e-14);
}

TEST_CASE("fourier and computational bases are mutually unbiased") {
    for (int d : {2, 3, 4, 5, 8}) {
        const auto f = kdq::fourier_basis(d);
        const auto c = kdq::computational_basis(d);
        const ComplexMatrix overlaps = c.kets().adjoint() * f.kets();
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                CHECK(std::abs(std::abs(overlaps(a, b)) - 1.0 / std::sqrt(double(d))) < 1e-12);
            }
        }
    }
}

TEST_CASE("random pure states are rank-one projectors") {
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
        const auto rho = kdq::random_pure_state(4, seed);
        CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-12);
        CHECK(std::abs(rho.purity() - 1.0) < 1e-10);
    }
    const auto a = kdq::random_pure_state(3, 99);
    const auto b = kdq::random_pure_state(3, 99);
    CHECK(a.matrix() == b.matrix()); // bit-identical

    const auto d1 = kdq::random_pure_state(1, 5);
    CHECK(std::abs(d1.matrix()(0, 0) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("random mixed states are full-rank and reproducible") {
    for (std::uint64_t seed : {3ULL, 11ULL}) {
        const auto rho = kdq::random_mixed_state(4, seed);
        CHECK(rho.purity() < 1.0);
    }
    const auto a = kdq::random_mixed_state(5, 123);
    const auto b = kdq::random_mixed_state(5, 123);
    CHECK(a.matrix() == b.matrix());
}

TEST_CASE("random unitaries are unitary and reproducible") {
    for (int d : {1, 2, 3, 6}) {
        const ComplexMatrix u = kdq::random_unitary(d, 17);
        CHECK(kdq::unitarity_residual(u) < 1e-10);
    }
    CHECK(std::abs(std::abs(kdq::random_unitary(1, 2)(0, 0)) - 1.0) < 1e-12);
    CHECK(kdq::random_unitary(4, 31) == kdq::random_unitary(4, 31));
}

TEST_CASE("unitary conjugation preserves density-matrix invariants") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rho = kdq::random_mixed_state(3, seed);
        const ComplexMatrix u = kdq::random_unitary(3, seed + 1000);
        ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
        CHECK_NOTHROW(kdq::DensityMatrix{rotated});
    }
}

TEST_CASE("translation unitary is diagonal in its basis") {
    const auto basis = kdq::computational_basis(2);
    CHECK(kdq::translation_unitary(basis, {0.0, 0.0}).isApprox(ComplexMatrix::Identity(2, 2)));

    const ComplexMatrix u = kdq::translation_unitary(basis, {0.0, std::numbers::pi});
    ComplexMatrix expected(2, 2);
    expected << 1, 0, 0, -1;
    CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-14);

    // commutes with A = sum_a a Pi_a
    const auto rnd = kdq::OrthonormalBasis(kdq::random_unitary(3, 8));
    const ComplexMatrix ua = kdq::translation_unitary(rnd, {0.3, 1.1, 2.9});
    ComplexMatrix a_op = ComplexMatrix::Zero(3, 3);
    for (int k = 0; k < 3; ++k) {
        a_op += double(k) * rnd.projector(k);
    }
    CHECK((ua * a_op - a_op * ua).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("permutation unitary maps projectors as built") {
    const auto basis = kdq::computational_basis(2);
    CHECK(kdq::permutation_unitary(basis, {0, 1}, {0.0, 0.0})
              .isApprox(ComplexMatrix::Identity(2, 2)));

    const ComplexMatrix x = kdq::permutation_unitary(basis, {1, 0}, {0.0, 0.0});
    ComplexMatrix pauli_x(2, 2);
    pauli_x << 0, 1, 1, 0;
    CHECK((x - pauli_x).cwiseAbs().maxCoeff() < 1e-14);

    const auto rnd = kdq::OrthonormalBasis(kdq::random_unitary(4, 21));
    const std::vector<int> perm{2, 0, 3, 1};
    const ComplexMatrix up = kdq::permutation_unitary(rnd, perm, {0.1, 0.2, 0.3, 0.4});
    for (int a = 0; a < 4; ++a) {
        const ComplexMatrix lhs = up * rnd.projector(a) * up.adjoint();
        CHECK((lhs - rnd.projector(perm[size_t(a)])).cwiseAbs().maxCoeff() < 1e-10);
    }

    CHECK_THROWS_AS(kdq::permutation_unitary(basis, {0, 0}, {0.0, 0.0}), kdq::InvalidPermutation);
    CHECK_THROWS_AS(kdq::permutation_unitary(basis, {0, 2}, {0.0, 0.0}), kdq::InvalidPermutation);
}

TEST_CASE("tensor product and partial trace") {
    CHECK(kdq::tensor_product(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2))
              .isApprox(ComplexMatrix::Identity(4, 4)));

    const auto rho1 = kdq::random_mixed_state(2, 1);
    const auto rho2 = kdq::random_mixed_state(3, 2);
    const kdq::DensityMatrix joint(kdq::tensor_product(rho1.matrix(), rho2.matrix()));
    CHECK((kdq::partial_trace(joint, 2, 3, 1).matrix() - rho1.matrix()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((kdq::partial_trace(joint, 2, 3, 2).matrix() - rho2.matrix()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(std::abs(kdq::partial_trace(joint, 2, 3, 1).matrix().trace().real() - 1.0) < 1e-12);

    // Bell state reduces to the maximally mixed state.
    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const kdq::DensityMatrix bell_state(bell * bell.adjoint());
    CHECK((kdq::partial_trace(bell_state, 2, 2, 1).matrix() - ComplexMatrix::Identity(2, 2) * 0.5)
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    CHECK_THROWS_AS(kdq::partial_trace(bell_state, 3, 2, 1), kdq::DimensionMismatch);
}

TEST_CASE("qubit pure params build the Bloch ket") {
    const kdq::QubitPureParams p(std::numbers::pi / 2.0, 0.0);
    const ComplexVector psi = p.ket();
    CHECK(std::abs(psi(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    CHECK(std::abs(psi(1) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    CHECK_THROWS(kdq::QubitPureParams(-0.1, 0.0));
    CHECK_THROWS(kdq::QubitPureParams(0.1, 7.0));
}

TEST_CASE("qubit matrix exponential matches the spectral route") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        kdq::Rng rng(seed);
        ComplexMatrix h(2, 2);
        h(0, 0) = rng.next_uniform(-2, 2);
        h(1, 1) = rng.next_uniform(-2, 2);
        const Complex off(rng.next_uniform(-2, 2), rng.next_uniform(-2, 2));
        h(0, 1) = off;
        h(1, 0) = std::conj(off);
        const ComplexMatrix fast = kdq::matrix_exp_i_hermitian(h);
        // Spectral oracle on the same Hermitian matrix.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
        ComplexVector phases(2);
        for (int k = 0; k < 2; ++k) {
            phases(k) = std::polar(1.0, es.eigenvalues()(k));
        }
        const ComplexMatrix slow =
            es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("hermitian log inverts the exponential") {
    for (int d : {2, 3, 4}) {
        const ComplexMatrix u = kdq::random_unitary(d, 7 + std::uint64_t(d));
        const ComplexMatrix h = kdq::hermitian_log_unitary(u);
        CHECK(kdq::hermiticity_residual(h) < 1e-12);
        CHECK((kdq::matrix_exp_i_hermitian(h) - u).cwiseAbs().maxCoeff() < 1e-10);
    }
    // Degenerate spectrum: the Fourier matrix has repeated eigenvalues.
    const ComplexMatrix f = kdq::fourier_basis(4).kets();
    const ComplexMatrix hf = kdq::hermitian_log_unitary(f);
    CHECK((kdq::matrix_exp_i_hermitian(hf) - f).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("basis constructor rejects non-orthonormal kets") {
    ComplexMatrix kets(2, 2);
    kets << 1, 1, 0, 0.1;
    CHECK_THROWS_AS(kdq::OrthonormalBasis{kets}, kdq::NotOrthonormal);
}

TEST_CASE("povm validation") {
    std::vector<ComplexMatrix> good{ComplexMatrix::Identity(2, 2) * 0.5,
                                    ComplexMatrix::Identity(2, 2) * 0.5};
    CHECK_NOTHROW(kdq::Povm{good});

    std::vector<ComplexMatrix> not_closing{ComplexMatrix::Identity(2, 2) * 0.5,
                                           ComplexMatrix::Identity(2, 2) * 0.4};
    CHECK_THROWS_AS(kdq::Povm{not_closing}, kdq::NotPovm);

    ComplexMatrix indefinite(2, 2);
    indefinite << 1.5, 0, 0, -0.5;
    std::vector<ComplexMatrix> negative{indefinite, ComplexMatrix::Identity(2, 2) - indefinite};
    CHECK_THROWS_AS(kdq::Povm{negative}, kdq::NotPovm);
}

} // TEST_SUITE
