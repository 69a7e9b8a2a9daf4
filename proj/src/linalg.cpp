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

#include "kdq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kdq {

namespace {

std::string fmt_residual(const char *what, double residual, double tol) {
    std::ostringstream os;
    os << what << " residual " << residual << " exceeds tolerance " << tol;
    return os.str();
}

} // namespace

void check_dim_supported(Eigen::Index d) {
    if (d < 1) {
        throw DimensionMismatch("dimension must be positive, got " + std::to_string(d));
    }
    if (d > kMaxDim) {
        throw DimensionTooLarge("dimension " + std::to_string(d) + " exceeds supported maximum " +
                                std::to_string(kMaxDim));
    }
}

double hermiticity_residual(const ComplexMatrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const ComplexMatrix &u) {
    ComplexMatrix g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(const ComplexMatrix &m) : mat_(m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("density matrix must be square, got " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()));
    }
    check_dim_supported(m.rows());
    const double herm = hermiticity_residual(m);
    if (herm > kHermTol) {
        throw NotHermitian(fmt_residual("max |rho_ij - conj(rho_ji)|", herm, kHermTol));
    }
    const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
    if (tr_err > kTraceTol) {
        throw TraceNotOne(fmt_residual("|Tr(rho) - 1|", tr_err, kTraceTol));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min < -kPsdSlack) {
        std::ostringstream os;
        os << "smallest eigenvalue " << lambda_min << " below PSD slack -" << kPsdSlack;
        throw NotPSD(os.str());
    }
}

OrthonormalBasis::OrthonormalBasis(const ComplexMatrix &kets) : kets_(kets) {
    if (kets.rows() != kets.cols()) {
        throw DimensionMismatch("basis must hold exactly dim kets of length dim, got " +
                                std::to_string(kets.rows()) + "x" + std::to_string(kets.cols()));
    }
    check_dim_supported(kets.rows());
    // <i|j> = delta_ij entrywise also implies completeness for a square ket
    // matrix, but both residuals are cheap and reported separately.
    ComplexMatrix gram = kets.adjoint() * kets;
    gram.diagonal().array() -= 1.0;
    const double ortho = gram.cwiseAbs().maxCoeff();
    if (ortho > kOrthoTol) {
        throw NotOrthonormal(fmt_residual("max |<i|j> - delta_ij|", ortho, kOrthoTol));
    }
    ComplexMatrix comp = kets * kets.adjoint();
    comp.diagonal().array() -= 1.0;
    const double completeness = comp.cwiseAbs().maxCoeff();
    if (completeness > kOrthoTol) {
        throw NotOrthonormal(fmt_residual("completeness |sum_a |a><a| - I|", completeness, kOrthoTol));
    }
}

OrthonormalBasis OrthonormalBasis::from_unitary_unchecked(ComplexMatrix kets) {
    return OrthonormalBasis(std::move(kets), unchecked_t{});
}

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) {
        throw NotPovm("POVM must contain at least one element");
    }
    const Eigen::Index d = elements_.front().rows();
    check_dim_supported(d);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto &m : elements_) {
        if (m.rows() != d || m.cols() != d) {
            throw DimensionMismatch("POVM elements must share one square dimension");
        }
        const double herm = hermiticity_residual(m);
        if (herm > kHermTol) {
            throw NotPovm(fmt_residual("POVM element hermiticity", herm, kHermTol));
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
        const double lambda_min = es.eigenvalues().minCoeff();
        if (lambda_min < -kPsdSlack) {
            std::ostringstream os;
            os << "POVM element smallest eigenvalue " << lambda_min << " below PSD slack -"
               << kPsdSlack;
            throw NotPovm(os.str());
        }
        sum += m;
    }
    sum.diagonal().array() -= 1.0;
    const double closure = sum.cwiseAbs().maxCoeff();
    if (closure > kPovmSumTol) {
        throw NotPovm(fmt_residual("|sum_x M_x - I|", closure, kPovmSumTol));
    }
}

QubitPureParams::QubitPureParams(double t, double e) : theta(t), eta(e) {
    if (!(t >= 0.0 && t <= std::numbers::pi)) {
        throw ValidationError("BadAngle", "theta must lie in [0, pi], got " + std::to_string(t));
    }
    if (!(e >= 0.0 && e < 2.0 * std::numbers::pi)) {
        throw ValidationError("BadAngle", "eta must lie in [0, 2*pi), got " + std::to_string(e));
    }
}

ComplexVector QubitPureParams::ket() const {
    ComplexVector psi(2);
    psi(0) = std::cos(theta / 2.0);
    psi(1) = std::sin(theta / 2.0) * Complex(std::cos(eta), std::sin(eta));
    return psi;
}

DensityMatrix QubitPureParams::state() const {
    const ComplexVector psi = ket();
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix make_density_matrix(const ComplexMatrix &m) { return DensityMatrix(m); }

OrthonormalBasis computational_basis(int d) {
    check_dim_supported(d);
    return OrthonormalBasis(ComplexMatrix::Identity(d, d));
}

OrthonormalBasis fourier_basis(int d) {
    check_dim_supported(d);
    ComplexMatrix kets(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(a) *
                               static_cast<double>(b) / static_cast<double>(d);
            kets(a, b) = scale * Complex(std::cos(phi), std::sin(phi));
        }
    }
    return OrthonormalBasis(kets);
}

namespace {

ComplexMatrix ginibre(int d, Rng &rng) {
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
        }
    }
    return g;
}

} // namespace

DensityMatrix random_pure_state(int d, std::uint64_t seed) {
    check_dim_supported(d);
    Rng rng = Rng::substream(seed, 0x7075726531ULL);
    ComplexVector psi(d);
    for (int i = 0; i < d; ++i) {
        psi(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
    }
    psi /= psi.norm();
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix random_mixed_state(int d, std::uint64_t seed) {
    check_dim_supported(d);
    Rng rng = Rng::substream(seed, 0x6D69786564ULL);
    const ComplexMatrix g = ginibre(d, rng);
    ComplexMatrix w = g * g.adjoint();
    w /= w.trace().real();
    // Symmetrize away the last few ulps so validation sees an exactly
    // Hermitian matrix regardless of the product's rounding.
    w = Complex(0.5, 0.0) * (w + ComplexMatrix(w.adjoint()));
    return DensityMatrix(w);
}

ComplexMatrix random_unitary(int d, std::uint64_t seed) {
    check_dim_supported(d);
    Rng rng = Rng::substream(seed, 0x756E697461727932ULL);
    const ComplexMatrix g = ginibre(d, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
    }
    return q;
}

ComplexMatrix translation_unitary(const OrthonormalBasis &basis, const std::vector<double> &phases) {
    const int d = basis.dim();
    if (static_cast<int>(phases.size()) != d) {
        throw DimensionMismatch("need exactly dim phases, got " + std::to_string(phases.size()));
    }
    ComplexVector diag(d);
    for (int a = 0; a < d; ++a) {
        diag(a) = Complex(std::cos(phases[static_cast<std::size_t>(a)]),
                          std::sin(phases[static_cast<std::size_t>(a)]));
    }
    return basis.kets() * diag.asDiagonal() * basis.kets().adjoint();
}

ComplexMatrix permutation_unitary(const OrthonormalBasis &basis, const std::vector<int> &perm,
                                  const std::vector<double> &phases) {
    const int d = basis.dim();
    if (static_cast<int>(perm.size()) != d || static_cast<int>(phases.size()) != d) {
        throw DimensionMismatch("perm and phases must both have length dim");
    }
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (int v : perm) {
        if (v < 0 || v >= d || seen[static_cast<std::size_t>(v)]) {
            throw InvalidPermutation("perm must be a bijection of 0.." + std::to_string(d - 1));
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        const double th = phases[static_cast<std::size_t>(a)];
        p(perm[static_cast<std::size_t>(a)], a) = Complex(std::cos(th), std::sin(th));
    }
    return basis.kets() * p * basis.kets().adjoint();
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho12, int d1, int d2, int keep) {
    if (d1 < 1 || d2 < 1 || d1 * d2 != rho12.dim()) {
        throw DimensionMismatch("factor dims " + std::to_string(d1) + "x" + std::to_string(d2) +
                                " do not multiply to " + std::to_string(rho12.dim()));
    }
    if (keep != 1 && keep != 2) {
        throw DimensionMismatch("keep must be 1 or 2, got " + std::to_string(keep));
    }
    const ComplexMatrix &m = rho12.matrix();
    const int dk = (keep == 1) ? d1 : d2;
    const int dt = (keep == 1) ? d2 : d1;
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (int i = 0; i < dk; ++i) {
        for (int j = 0; j < dk; ++j) {
            Complex s = 0.0;
            for (int t = 0; t < dt; ++t) {
                const int row = (keep == 1) ? i * d2 + t : t * d2 + i;
                const int col = (keep == 1) ? j * d2 + t : t * d2 + j;
                s += m(row, col);
            }
            out(i, j) = s;
        }
    }
    return DensityMatrix(out);
}

ComplexMatrix matrix_exp_i_hermitian(const ComplexMatrix &h) {
    const Eigen::Index d = h.rows();
    if (d == 1) {
        const double phi = h(0, 0).real();
        ComplexMatrix u(1, 1);
        u(0, 0) = Complex(std::cos(phi), std::sin(phi));
        return u;
    }
    if (d == 2) {
        // H = c I + v.sigma  =>  exp(iH) = e^{ic} (cos|v| I + i sin|v| vhat.sigma)
        const double c = 0.5 * (h(0, 0).real() + h(1, 1).real());
        const double vz = 0.5 * (h(0, 0).real() - h(1, 1).real());
        const double vx = h(0, 1).real();
        const double vy = -h(0, 1).imag();
        const double vn = std::sqrt(vx * vx + vy * vy + vz * vz);
        const double cs = std::cos(vn);
        const double sn = (vn > 1e-300) ? std::sin(vn) / vn : 1.0;
        const Complex phase(std::cos(c), std::sin(c));
        ComplexMatrix u(2, 2);
        u(0, 0) = phase * Complex(cs, sn * vz);
        u(1, 1) = phase * Complex(cs, -sn * vz);
        u(0, 1) = phase * (Complex(0.0, 1.0) * Complex(vx, -vy) * sn);
        u(1, 0) = phase * (Complex(0.0, 1.0) * Complex(vx, vy) * sn);
        return u;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const RealVector &lam = es.eigenvalues();
    ComplexVector phases(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        phases(k) = Complex(std::cos(lam(k)), std::sin(lam(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix hermitian_log_unitary(const ComplexMatrix &u) {
    const double res = unitarity_residual(u);
    if (res > 1e-8) {
        throw ValidationError("NotUnitary",
                              "matrix log requires a unitary input, residual " + std::to_string(res));
    }
    // A unitary is normal, so its Schur form is diagonal and the Schur
    // vectors are an orthonormal eigenbasis even under degeneracy.
    Eigen::ComplexSchur<ComplexMatrix> schur(u);
    const ComplexMatrix &q = schur.matrixU();
    const ComplexMatrix &t = schur.matrixT();
    RealVector theta(u.rows());
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
        theta(k) = std::arg(t(k, k));
    }
    ComplexMatrix h = q * theta.asDiagonal() * q.adjoint();
    return Complex(0.5, 0.0) * (h + ComplexMatrix(h.adjoint()));
}

} // namespace kdq
